//! Parameter sweeps on coupled draws.

use serde::Serialize;

use super::stats::{wilson, NeumaierSum};
use super::{estimate_p, sub_seed, EstimateResult, McConfig};
use crate::error::{invalid, Result};
use crate::landscape::{generate_rmf, generate_with, EtaSpec, ModelSpec};
use crate::par::map_indexed;
use crate::pathcount::{count_accessible_with, critical_bottom_fitness};
use crate::rng::mix64;
use crate::ExecMode;

/// One table row: a grid point and its estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub parameter: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub replicates: u64,
    pub seed: u64,
    /// Mean path count at this point, where the sweep computes it.
    pub mean_paths: Option<f64>,
}

impl SweepRow {
    pub fn from_estimate(parameter: f64, est: &EstimateResult) -> Self {
        SweepRow {
            n: est.n,
            parameter,
            estimate: est.estimate,
            std_error: est.std_error,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            confidence: est.confidence,
            replicates: est.replicates,
            seed: est.seed,
            mean_paths: None,
        }
    }
}

fn sorted_grid(values: &[f64], what: &str, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if values.is_empty() {
        return invalid(format!("empty {what} grid"));
    }
    if values.iter().any(|v| !(lo..=hi).contains(v)) {
        return invalid(format!("{what} grid values must lie in [{lo}, {hi}]"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

fn sorted_dims(n_list: &[u32]) -> Result<Vec<u32>> {
    if n_list.is_empty() {
        return invalid("empty dimension grid");
    }
    let mut v = n_list.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Where `P(n, alpha)` drops through 1/2 on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub n: u32,
    /// Linear interpolation between the bracketing grid points; `None` if the
    /// estimate never crosses 1/2 on the grid.
    pub alpha_hat: Option<f64>,
    /// `alpha_hat / (ln n / n)`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaSweep {
    pub rows: Vec<SweepRow>,
    pub crossings: Vec<Crossing>,
}

/// Coupled alpha-HoC sweep.
///
/// Each replicate draws one house-of-cards landscape and computes the largest
/// bottom fitness that still admits a path; existence at every `alpha` is
/// read off that value, so the estimate is exactly non-increasing in `alpha`.
pub fn sweep_alpha(n_list: &[u32], alpha_list: &[f64], cfg: &McConfig) -> Result<AlphaSweep> {
    cfg.validate()?;
    let alphas = sorted_grid(alpha_list, "alpha", 0.0, 1.0)?;
    let dims = sorted_dims(n_list)?;
    let mut rows = Vec::with_capacity(dims.len() * alphas.len());
    let mut crossings = Vec::with_capacity(dims.len());
    for &n in &dims {
        cfg.check_n(n)?;
        let grid_cfg = cfg.with_seed(sub_seed(cfg.seed, n as u64));
        let opts = cfg.gen_options();
        let critical: Vec<Option<f64>> = map_indexed(cfg.mode, cfg.replicates as usize, |r| {
            let land = generate_with(ModelSpec::Hoc, n, mix64(grid_cfg.seed, r as u64), opts)?;
            critical_bottom_fitness(&land)
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let mut points = Vec::with_capacity(alphas.len());
        for &alpha in &alphas {
            let hits = critical.iter().filter(|c| c.is_some_and(|a| a > alpha)).count() as u64;
            let spec = ModelSpec::AlphaHoc { alpha };
            let est = EstimateResult::proportion(hits, &grid_cfg, spec, n)?;
            points.push((alpha, est.estimate));
            rows.push(SweepRow::from_estimate(alpha, &est));
        }
        let alpha_hat = half_crossing(&points);
        let scale = (n as f64).ln() / n as f64;
        crossings.push(Crossing {
            n,
            alpha_hat,
            ratio: alpha_hat.filter(|_| scale > 0.0).map(|a| a / scale),
        });
    }
    Ok(AlphaSweep { rows, crossings })
}

fn half_crossing(points: &[(f64, f64)]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((a0, p0), (a1, p1)) = (w[0], w[1]);
        if p0 >= 0.5 && p1 < 0.5 {
            Some(a0 + (p0 - 0.5) / (p0 - p1) * (a1 - a0))
        } else {
            None
        }
    })
}

/// `P(n, 0)` in the CHoC model over a dimension grid; grid points use
/// independent seeds.
pub fn choc_curve(n_list: &[u32], cfg: &McConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    sorted_dims(n_list)?
        .into_iter()
        .map(|n| {
            let est = estimate_p(ModelSpec::CHOC, n, &cfg.with_seed(sub_seed(cfg.seed, n as u64)))?;
            Ok(SweepRow::from_estimate(0.0, &est))
        })
        .collect()
}

/// Three grid points whose simultaneous intervals show a dip followed by a rise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipWitness {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    /// Confidence of each single interval after the Bonferroni split.
    pub per_point_confidence: f64,
}

/// Look for `n1 < n2 < n3` with `P(n1) > P(n2) < P(n3)` at joint confidence
/// `joint`: each of the `m` rows gets a Wilson interval at level
/// `1 - (1 - joint) / m` and the middle interval must lie strictly below both
/// outer ones. Returns the witness with the widest separation margin.
pub fn dip_witness(rows: &[SweepRow], joint: f64) -> Result<Option<DipWitness>> {
    if !(joint > 0.0 && joint < 1.0) {
        return invalid(format!("joint confidence {joint} outside (0, 1)"));
    }
    if rows.is_empty() {
        return Ok(None);
    }
    let level = 1.0 - (1.0 - joint) / rows.len() as f64;
    let intervals: Vec<(u32, f64, f64)> = rows
        .iter()
        .map(|r| {
            let successes = (r.estimate * r.replicates as f64).round() as u64;
            wilson(successes, r.replicates, level).map(|(lo, hi)| (r.n, lo, hi))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, DipWitness)> = None;
    for (j, &(n2, _, hi2)) in intervals.iter().enumerate() {
        let left = intervals[..j]
            .iter()
            .filter(|i| i.1 > hi2)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let right = intervals[j + 1..]
            .iter()
            .filter(|i| i.1 > hi2)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        if let (Some(l), Some(r)) = (left, right) {
            let margin = (l.1 - hi2).min(r.1 - hi2);
            let w = DipWitness {
                n1: l.0,
                n2,
                n3: r.0,
                per_point_confidence: level,
            };
            if best.as_ref().is_none_or(|(m, _)| margin > *m) {
                best = Some((margin, w));
            }
        }
    }
    Ok(best.map(|(_, w)| w))
}

/// Coupled drift sweep in RMF.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmfCoupling {
    pub rows: Vec<SweepRow>,
    /// Replicates whose path count never decreased along the drift grid.
    pub monotone_replicates: u64,
    pub replicates: u64,
}

impl RmfCoupling {
    pub fn all_monotone(&self) -> bool {
        self.monotone_replicates == self.replicates
    }
}

/// One noise draw per replicate, shared across every drift in `theta_list`.
pub fn rmf_theta_coupling(n: u32, theta_list: &[f64], eta: EtaSpec, cfg: &McConfig) -> Result<RmfCoupling> {
    cfg.validate()?;
    cfg.check_n(n)?;
    eta.validate()?;
    if theta_list.is_empty() {
        return invalid("empty theta grid");
    }
    if theta_list.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return invalid("theta grid values must be finite and non-negative");
    }
    if theta_list.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("theta grid must be strictly ascending");
    }
    let opts = cfg.gen_options();
    let counts: Vec<Vec<f64>> = map_indexed(cfg.mode, cfg.replicates as usize, |r| {
        let seed = mix64(cfg.seed, r as u64);
        theta_list
            .iter()
            .map(|&theta| {
                let land = generate_rmf(theta, eta, n, seed, opts)?;
                Ok(count_accessible_with(&land, ExecMode::Sequential)?.to_f64())
            })
            .collect::<Result<Vec<f64>>>()
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let monotone = counts.iter().filter(|xs| xs.windows(2).all(|w| w[0] <= w[1])).count() as u64;
    let r = cfg.replicates as f64;
    let mut rows = Vec::with_capacity(theta_list.len());
    for (j, &theta) in theta_list.iter().enumerate() {
        let hits = counts.iter().filter(|xs| xs[j] > 0.0).count() as u64;
        let spec = ModelSpec::Rmf { theta, eta };
        let est = EstimateResult::proportion(hits, cfg, spec, n)?;
        let mut row = SweepRow::from_estimate(theta, &est);
        row.mean_paths = Some(counts.iter().map(|xs| xs[j]).collect::<NeumaierSum>().value() / r);
        rows.push(row);
    }
    Ok(RmfCoupling {
        rows,
        monotone_replicates: monotone,
        replicates: cfg.replicates,
    })
}
