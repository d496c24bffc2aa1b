//! Realised fitness landscapes and the transforms that preserve accessibility.

mod dump;
mod spec;

pub use dump::{read_text, write_text};
pub use spec::{EtaSpec, ModelSpec};

use crate::error::{invalid, Error, Result};
use crate::hypercube::{full_mask, vertex_count, DEFAULT_MAX_DIMENSION, NODE_BITS};
use crate::par::{fill_indexed, ExecMode};
use crate::rng::{VertexStream, STREAM_FITNESS, STREAM_THINNING};

/// Fitness of a removed vertex. Sorts below every real fitness, but counters
/// test for it explicitly.
pub const ABSENT: f64 = f64::NEG_INFINITY;

const CHUNK: usize = 1 << 12;

#[inline]
pub fn is_absent(x: f64) -> bool {
    x == ABSENT
}

/// Options for landscape generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenOptions {
    pub max_dimension: u32,
    pub mode: ExecMode,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_dimension: DEFAULT_MAX_DIMENSION,
            mode: ExecMode::Sequential,
        }
    }
}

/// A fitness assignment on every vertex of `Q_n`, indexed by node mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    n: u32,
    fitness: Vec<f64>,
    spec: ModelSpec,
    seed: u64,
}

impl Landscape {
    /// Wrap an explicit fitness vector. Used for hand-built landscapes.
    pub fn from_fitness(n: u32, fitness: Vec<f64>, spec: ModelSpec, seed: u64) -> Result<Self> {
        check_dimension(n, NODE_BITS)?;
        if fitness.len() != vertex_count(n) {
            return invalid(format!(
                "expected {} fitness values for n = {n}, got {}",
                vertex_count(n),
                fitness.len()
            ));
        }
        if fitness.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
            return invalid("fitness values must be finite or absent");
        }
        Ok(Landscape { n, fitness, spec, seed })
    }

    /// Landscape with fitness equal to the layer of each vertex.
    pub fn layered(n: u32) -> Result<Self> {
        check_dimension(n, DEFAULT_MAX_DIMENSION)?;
        let fitness = (0..vertex_count(n) as u64).map(|v| v.count_ones() as f64).collect();
        Ok(Landscape {
            n,
            fitness,
            spec: ModelSpec::Percolation { epsilon: 1.0 },
            seed: 0,
        })
    }

    /// Replace one vertex's fitness.
    pub fn with_fitness(mut self, v: u64, value: f64) -> Self {
        self.fitness[v as usize] = value;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    #[inline]
    pub fn at(&self, v: u64) -> f64 {
        self.fitness[v as usize]
    }

    pub fn bottom(&self) -> f64 {
        self.fitness[0]
    }

    pub fn top(&self) -> f64 {
        self.fitness[full_mask(self.n) as usize]
    }

    pub fn top_index(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn absent_count(&self) -> usize {
        self.fitness.iter().filter(|x| is_absent(**x)).count()
    }
}

fn check_dimension(n: u32, cap: u32) -> Result<()> {
    if n < 1 {
        return invalid("dimension must be at least 1");
    }
    if n > cap.min(NODE_BITS) {
        return Err(Error::ResourceLimit(format!(
            "dimension {n} exceeds the cap of {}",
            cap.min(NODE_BITS)
        )));
    }
    Ok(())
}

/// Draw a landscape with default options.
pub fn generate(spec: ModelSpec, n: u32, seed: u64) -> Result<Landscape> {
    generate_with(spec, n, seed, GenOptions::default())
}

pub fn generate_with(spec: ModelSpec, n: u32, seed: u64, opts: GenOptions) -> Result<Landscape> {
    spec.validate()?;
    check_dimension(n, opts.max_dimension)?;
    Ok(generate_unchecked(spec, n, seed, opts.mode))
}

/// RMF landscape that also admits `theta = 0` (pure noise).
///
/// The noise at each vertex depends only on `(seed, vertex)`, so calls that
/// differ only in `theta` are coupled draws.
pub fn generate_rmf(theta: f64, eta: EtaSpec, n: u32, seed: u64, opts: GenOptions) -> Result<Landscape> {
    if !(theta.is_finite() && theta >= 0.0) {
        return invalid(format!("drift theta {theta} must be non-negative"));
    }
    eta.validate()?;
    check_dimension(n, opts.max_dimension)?;
    Ok(generate_unchecked(ModelSpec::Rmf { theta, eta }, n, seed, opts.mode))
}

fn generate_unchecked(spec: ModelSpec, n: u32, seed: u64, mode: ExecMode) -> Landscape {
    let mut fitness = vec![0.0; vertex_count(n)];
    fill_indexed(mode, &mut fitness, 0, CHUNK, |start, slot| {
        let mut stream = VertexStream::new(seed, STREAM_FITNESS);
        stream.seek(start as u64);
        for (i, f) in slot.iter_mut().enumerate() {
            let v = (start + i) as u64;
            let (u1, u2) = stream.next_pair();
            *f = match spec {
                ModelSpec::Hoc | ModelSpec::AlphaHoc { .. } => u1,
                ModelSpec::Rmf { theta, eta } => theta * v.count_ones() as f64 + eta.sample(u1, u2),
                ModelSpec::Percolation { epsilon } => {
                    if u1 < epsilon {
                        v.count_ones() as f64
                    } else {
                        ABSENT
                    }
                }
            };
        }
    });
    let top = full_mask(n) as usize;
    match spec {
        ModelSpec::Hoc => fitness[top] = 1.0,
        ModelSpec::AlphaHoc { alpha } => {
            fitness[top] = 1.0;
            fitness[0] = alpha;
        }
        ModelSpec::Rmf { .. } => {}
        ModelSpec::Percolation { .. } => {
            fitness[0] = 0.0;
            fitness[top] = n as f64;
        }
    }
    Landscape { n, fitness, spec, seed }
}

/// Cyclic shift of `[0, 1]` by `b`: `f + b` below `1 - b`, `f - 1 + b` above.
///
/// If `f(v1) = 1 - b`, a path is accessible under the result exactly when it
/// is accessible under `land`.
pub fn shift_transform(land: &Landscape, b: f64) -> Result<Landscape> {
    if !(0.0..=1.0).contains(&b) {
        return invalid(format!("shift {b} outside [0, 1]"));
    }
    if !land.spec.is_hoc_family() {
        return invalid("shift transform applies to house-of-cards landscapes");
    }
    if land.fitness.iter().any(|&f| !is_absent(f) && !(0.0..=1.0).contains(&f)) {
        return invalid("shift transform requires fitness values in [0, 1]");
    }
    let cut = 1.0 - b;
    let fitness = land
        .fitness
        .iter()
        .map(|&f| {
            if is_absent(f) {
                f
            } else if f <= cut {
                f + b
            } else {
                f - 1.0 + b
            }
        })
        .collect();
    Ok(Landscape {
        fitness,
        ..land.clone()
    })
}

/// Remove each interior vertex independently with probability `delta`.
pub fn thin(land: &Landscape, delta: f64, seed: u64) -> Result<Landscape> {
    thin_with(land, delta, seed, ExecMode::Sequential)
}

pub fn thin_with(land: &Landscape, delta: f64, seed: u64, mode: ExecMode) -> Result<Landscape> {
    if !(0.0..=1.0).contains(&delta) {
        return invalid(format!("removal probability {delta} outside [0, 1]"));
    }
    let top = land.top_index() as usize;
    let mut fitness = land.fitness.clone();
    fill_indexed(mode, &mut fitness, 0, CHUNK, |start, slot| {
        let mut stream = VertexStream::new(seed, STREAM_THINNING);
        stream.seek(start as u64);
        for (i, f) in slot.iter_mut().enumerate() {
            let (u, _) = stream.next_pair();
            let v = start + i;
            if v != 0 && v != top && u < delta {
                *f = ABSENT;
            }
        }
    });
    Ok(Landscape {
        fitness,
        ..land.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ETA01: EtaSpec = EtaSpec::Uniform { lo: 0.0, hi: 1.0 };

    #[test]
    fn alpha_hoc_pins_endpoints() {
        for (n, seed) in [(1, 3), (4, 9), (11, 1234)] {
            let land = generate(ModelSpec::AlphaHoc { alpha: 0.3 }, n, seed).unwrap();
            assert_eq!(land.bottom(), 0.3);
            assert_eq!(land.top(), 1.0);
            assert!(land.fitness().iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }

    #[test]
    fn hoc_pins_top_only() {
        let land = generate(ModelSpec::Hoc, 6, 5).unwrap();
        assert_eq!(land.top(), 1.0);
        assert_ne!(land.bottom(), 0.0);
    }

    #[test]
    fn zero_drift_is_pure_noise() {
        let eta = EtaSpec::Normal { mean: 2.0, sd: 0.5 };
        let flat = generate_rmf(0.0, eta, 8, 77, GenOptions::default()).unwrap();
        let mut stream = VertexStream::new(77, STREAM_FITNESS);
        for v in [0u64, 1, 100, 255] {
            let (u1, u2) = stream.pair_at(v);
            assert_eq!(flat.at(v), eta.sample(u1, u2));
        }
        let tilted = generate_rmf(0.4, eta, 8, 77, GenOptions::default()).unwrap();
        for v in 0..256u64 {
            assert_eq!(tilted.at(v), 0.4 * v.count_ones() as f64 + flat.at(v));
        }
        assert!(generate(ModelSpec::Rmf { theta: 0.0, eta }, 8, 77).is_err());
    }

    #[test]
    fn full_percolation_keeps_everything() {
        let land = generate(ModelSpec::Percolation { epsilon: 1.0 }, 10, 4).unwrap();
        assert_eq!(land.absent_count(), 0);
        let empty = generate(ModelSpec::Percolation { epsilon: 0.0 }, 6, 4).unwrap();
        assert_eq!(empty.absent_count(), 62);
        assert_eq!(empty.bottom(), 0.0);
        assert_eq!(empty.top(), 6.0);
    }

    #[test]
    fn generation_is_deterministic_and_mode_independent() {
        let spec = ModelSpec::Rmf { theta: 0.2, eta: ETA01 };
        let a = generate(spec, 14, 99).unwrap();
        let b = generate(spec, 14, 99).unwrap();
        let par = GenOptions {
            mode: ExecMode::Parallel,
            ..GenOptions::default()
        };
        let c = generate_with(spec, 14, 99, par).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_ne!(a, generate(spec, 14, 100).unwrap());
    }

    #[test]
    fn dimension_limits() {
        assert!(matches!(generate(ModelSpec::Hoc, 0, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(generate(ModelSpec::Hoc, 29, 1), Err(Error::ResourceLimit(_))));
        let tight = GenOptions {
            max_dimension: 4,
            ..GenOptions::default()
        };
        assert!(matches!(
            generate_with(ModelSpec::Hoc, 5, 1, tight),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn shift_examples() {
        let land = generate(ModelSpec::AlphaHoc { alpha: 0.2 }, 5, 1).unwrap();
        assert_eq!(shift_transform(&land, 0.0).unwrap(), land);

        let b = 0.3;
        let land = land.with_fitness(31, 1.0 - b).with_fitness(3, 0.9);
        let g = shift_transform(&land, b).unwrap();
        assert_eq!(g.bottom(), 0.2 + b);
        assert_eq!(g.top(), 1.0);
        assert!((g.at(3) - 0.2).abs() < 1e-15);
        assert!(shift_transform(&land, 1.5).is_err());
        let perc = generate(ModelSpec::Percolation { epsilon: 0.5 }, 4, 1).unwrap();
        assert!(shift_transform(&perc, 0.1).is_err());
    }

    #[test]
    fn thin_examples() {
        let land = generate(ModelSpec::CHOC, 8, 2).unwrap();
        assert_eq!(thin(&land, 0.0, 5).unwrap(), land);
        let gone = thin(&land, 1.0, 5).unwrap();
        assert_eq!(gone.absent_count(), 254);
        assert_eq!(gone.bottom(), land.bottom());
        assert_eq!(gone.top(), land.top());
        assert!(thin(&land, -0.1, 5).is_err());
        assert_eq!(
            thin(&land, 0.4, 9).unwrap(),
            thin_with(&land, 0.4, 9, ExecMode::Parallel).unwrap()
        );
    }

    #[test]
    fn thinning_removes_half_on_average() {
        let n = 10;
        let interior = (vertex_count(n) - 2) as f64;
        let land = generate(ModelSpec::CHOC, n, 0).unwrap();
        let trials = 10_000u64;
        let fractions: Vec<f64> = (0..trials)
            .map(|t| thin(&land, 0.5, t).unwrap().absent_count() as f64 / interior)
            .collect();
        let mean = fractions.iter().sum::<f64>() / trials as f64;
        // each fraction has variance 1/(4 * interior)
        let se = (0.25 / interior / trials as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean}, se {se}");
    }
}
