//! Reproducible Monte Carlo estimators.
//!
//! Replicate `r` of a run with base seed `s` draws its landscape from
//! `mix64(s, r)` and nothing else, so results do not depend on how replicates
//! are scheduled. Per-replicate outputs are collected in index order and
//! reduced with compensated sums.

mod checks;
pub mod stats;
mod sweep;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hypercube::DEFAULT_MAX_DIMENSION;
use crate::landscape::{generate_with, GenOptions, Landscape, ModelSpec};
use crate::par::{map_indexed, ExecMode};
use crate::pathcount::{count_accessible_with, exists_accessible};
use crate::rng::mix64;

pub use checks::{
    bound_trend, s1_trend, second_moment_sanity, thinning_equivalence, variance_ratio_trend, SanityReport,
    ThinningReport, TrendPoint, TrendReport,
};
pub use stats::{mean_se, wilson, z_value, MeanSe, NeumaierSum};
pub use sweep::{
    choc_curve, dip_witness, rmf_theta_coupling, sweep_alpha, AlphaSweep, Crossing, DipWitness, RmfCoupling, SweepRow,
};

/// Default dimension cap for per-replicate exact counting.
pub const MC_MAX_DIMENSION: u32 = 24;

/// Settings shared by every estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub replicates: u64,
    pub seed: u64,
    pub confidence: f64,
    pub mode: ExecMode,
    pub max_dimension: u32,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            replicates: 10_000,
            seed: 0,
            confidence: 0.95,
            mode: ExecMode::Parallel,
            max_dimension: MC_MAX_DIMENSION,
        }
    }
}

impl McConfig {
    pub fn new(replicates: u64, seed: u64) -> Self {
        McConfig {
            replicates,
            seed,
            ..Default::default()
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        McConfig { seed, ..self }
    }

    pub fn with_mode(self, mode: ExecMode) -> Self {
        McConfig { mode, ..self }
    }

    pub fn with_confidence(self, confidence: f64) -> Self {
        McConfig { confidence, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return invalid("at least one replicate is required");
        }
        z_value(self.confidence)?;
        if self.max_dimension > DEFAULT_MAX_DIMENSION {
            return invalid(format!(
                "replicate dimension cap {} exceeds {DEFAULT_MAX_DIMENSION}",
                self.max_dimension
            ));
        }
        Ok(())
    }

    fn check_n(&self, n: u32) -> Result<()> {
        if n < 1 {
            return invalid("dimension must be at least 1");
        }
        if n > self.max_dimension {
            return Err(Error::ResourceLimit(format!(
                "dimension {n} exceeds the per-replicate cap of {}",
                self.max_dimension
            )));
        }
        Ok(())
    }

    fn gen_options(&self) -> GenOptions {
        // parallelism lives at the replicate level
        GenOptions {
            max_dimension: self.max_dimension,
            mode: ExecMode::Sequential,
        }
    }
}

/// Seed of the sub-run labelled `tag`, e.g. one grid point of a sweep.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed, (1 << 63) | tag)
}

/// A point estimate with its interval and provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub replicates: u64,
    pub seed: u64,
    pub spec: ModelSpec,
    pub n: u32,
}

impl EstimateResult {
    /// Proportion estimate with a Wilson interval.
    pub fn proportion(successes: u64, cfg: &McConfig, spec: ModelSpec, n: u32) -> Result<Self> {
        let r = cfg.replicates as f64;
        let p = successes as f64 / r;
        let (ci_low, ci_high) = wilson(successes, cfg.replicates, cfg.confidence)?;
        Ok(EstimateResult {
            estimate: p,
            std_error: (p * (1.0 - p) / r).sqrt(),
            ci_low,
            ci_high,
            confidence: cfg.confidence,
            replicates: cfg.replicates,
            seed: cfg.seed,
            spec,
            n,
        })
    }

    /// Mean of non-negative samples with a normal-approximation interval.
    pub fn mean(samples: &[f64], cfg: &McConfig, spec: ModelSpec, n: u32) -> Result<Self> {
        let m = mean_se(samples);
        let half = z_value(cfg.confidence)? * m.se;
        Ok(EstimateResult {
            estimate: m.mean,
            std_error: m.se,
            ci_low: (m.mean - half).max(0.0),
            ci_high: m.mean + half,
            confidence: cfg.confidence,
            replicates: cfg.replicates,
            seed: cfg.seed,
            spec,
            n,
        })
    }

    /// Number of successes behind a proportion estimate.
    pub fn successes(&self) -> u64 {
        (self.estimate * self.replicates as f64).round() as u64
    }

    /// |estimate - target| in units of the reported standard error.
    pub fn z_distance(&self, target: f64) -> f64 {
        let d = (self.estimate - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Run `f` on the landscape of every replicate, in replicate order.
pub(crate) fn per_replicate<T, F>(spec: ModelSpec, n: u32, cfg: &McConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Landscape) -> Result<T> + Sync + Send,
{
    cfg.validate()?;
    spec.validate()?;
    cfg.check_n(n)?;
    let opts = cfg.gen_options();
    map_indexed(cfg.mode, cfg.replicates as usize, |r| {
        let land = generate_with(spec, n, mix64(cfg.seed, r as u64), opts)?;
        f(&land)
    })
    .into_iter()
    .collect()
}

/// Fraction of landscapes with at least one accessible path.
pub fn estimate_p(spec: ModelSpec, n: u32, cfg: &McConfig) -> Result<EstimateResult> {
    let hits = per_replicate(spec, n, cfg, exists_accessible)?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    EstimateResult::proportion(successes, cfg, spec, n)
}

/// Per-replicate path counts `X` as floating point.
pub fn sample_counts(spec: ModelSpec, n: u32, cfg: &McConfig) -> Result<Vec<f64>> {
    per_replicate(spec, n, cfg, |land| {
        Ok(count_accessible_with(land, ExecMode::Sequential)?.to_f64())
    })
}

/// Sample means of `X` and `X^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEstimates {
    pub first: EstimateResult,
    pub second: EstimateResult,
}

pub fn estimate_moments(spec: ModelSpec, n: u32, cfg: &McConfig) -> Result<MomentEstimates> {
    let xs = sample_counts(spec, n, cfg)?;
    let squares: Vec<f64> = xs.iter().map(|x| x * x).collect();
    Ok(MomentEstimates {
        first: EstimateResult::mean(&xs, cfg, spec, n)?,
        second: EstimateResult::mean(&squares, cfg, spec, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoc_two_dimensional() {
        let cfg = McConfig::new(20_000, 3);
        let est = estimate_p(ModelSpec::Hoc, 2, &cfg).unwrap();
        assert!(est.z_distance(2.0 / 3.0) < 4.0, "{est:?}");
        assert!(est.ci_low <= est.estimate && est.estimate <= est.ci_high);
    }

    #[test]
    fn wilson_coverage_on_closed_forms() {
        // true value inside the 95% interval in at least 93% of 200 meta-trials
        for (spec, truth) in [(ModelSpec::Hoc, 2.0 / 3.0), (ModelSpec::AlphaHoc { alpha: 0.5 }, 0.75)] {
            let covered = (0..200u64)
                .filter(|&t| {
                    let cfg = McConfig::new(200, sub_seed(99, t));
                    let est = estimate_p(spec, 2, &cfg).unwrap();
                    est.ci_low <= truth && truth <= est.ci_high
                })
                .count();
            assert!(covered >= 186, "{spec:?}: {covered}/200");
        }
    }

    #[test]
    fn modes_agree_exactly() {
        let spec = ModelSpec::AlphaHoc { alpha: 0.1 };
        let seq = McConfig::new(300, 5).with_mode(ExecMode::Sequential);
        let par = seq.with_mode(ExecMode::Parallel);
        assert_eq!(
            estimate_moments(spec, 7, &seq).unwrap(),
            estimate_moments(spec, 7, &par).unwrap()
        );
        assert_eq!(estimate_p(spec, 7, &seq).unwrap(), estimate_p(spec, 7, &par).unwrap());
    }

    #[test]
    fn rmf_with_large_drift_always_accessible() {
        let spec = ModelSpec::Rmf {
            theta: 1.0,
            eta: crate::EtaSpec::Uniform { lo: 0.0, hi: 1.0 },
        };
        let est = estimate_p(spec, 8, &McConfig::new(500, 1)).unwrap();
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn cap_and_argument_errors() {
        let cfg = McConfig::new(10, 0);
        assert!(matches!(
            estimate_p(ModelSpec::Hoc, 25, &cfg),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            estimate_p(ModelSpec::Hoc, 4, &McConfig::new(0, 0)),
            Err(Error::InvalidArgument(_))
        ));
        let moments = estimate_moments(ModelSpec::Hoc, 4, &cfg).unwrap();
        assert!(moments.first.estimate >= 0.0 && moments.second.estimate >= moments.first.estimate);
    }
}
