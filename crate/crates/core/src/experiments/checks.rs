//! Inequality checks and trend reports over dimension grids.

use serde::Serialize;

use super::stats::{delta_se, mean_covariance};
use super::{estimate_p, per_replicate, sub_seed, EstimateResult, McConfig};
use crate::combinatorics::{bound_diagnostics_to, s1_s2_split, t_table, BoundReport};
use crate::error::{invalid, Result};
use crate::landscape::{thin, ModelSpec};
use crate::pathcount::{count_accessible_with, exists_accessible};
use crate::ExecMode;

/// Sample-moment check of `P(X > 0) >= E[X]^2 / E[X^2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SanityReport {
    pub spec: ModelSpec,
    pub n: u32,
    pub replicates: u64,
    pub seed: u64,
    pub p_hat: f64,
    pub mean_x: f64,
    pub mean_x2: f64,
    /// `mean_x^2 / mean_x2`.
    pub lower_bound: f64,
    /// Delta-method standard error of `p_hat - lower_bound`.
    pub combined_se: f64,
    pub holds: bool,
    /// Every sampled count was zero, so both sides vanish.
    pub vacuous: bool,
    /// `Var(X) / mean_x^2`, `None` when vacuous.
    pub variance_ratio: Option<f64>,
    pub variance_ratio_se: Option<f64>,
}

pub fn second_moment_sanity(spec: ModelSpec, n: u32, cfg: &McConfig) -> Result<SanityReport> {
    let xs = per_replicate(spec, n, cfg, |land| {
        Ok(count_accessible_with(land, ExecMode::Sequential)?.to_f64())
    })?;
    let rows: Vec<[f64; 3]> = xs.iter().map(|&x| [f64::from(u8::from(x > 0.0)), x, x * x]).collect();
    let ([p, m1, m2], cov) = mean_covariance(&rows);
    let base = SanityReport {
        spec,
        n,
        replicates: cfg.replicates,
        seed: cfg.seed,
        p_hat: p,
        mean_x: m1,
        mean_x2: m2,
        lower_bound: 0.0,
        combined_se: 0.0,
        holds: true,
        vacuous: true,
        variance_ratio: None,
        variance_ratio_se: None,
    };
    if m2 == 0.0 {
        return Ok(base);
    }
    let lower = m1 * m1 / m2;
    let se = delta_se(&[1.0, -2.0 * m1 / m2, m1 * m1 / (m2 * m2)], &cov);
    let (ratio, ratio_se) = variance_ratio(m1, m2, &cov);
    Ok(SanityReport {
        lower_bound: lower,
        combined_se: se,
        holds: p >= lower - 3.0 * se,
        vacuous: false,
        variance_ratio: Some(ratio),
        variance_ratio_se: Some(ratio_se),
        ..base
    })
}

// Var/mean^2 = m2/m1^2 - 1 and its delta-method SE; cov indexes (1{X>0}, X, X^2).
fn variance_ratio(m1: f64, m2: f64, cov: &[[f64; 3]; 3]) -> (f64, f64) {
    let grad = [0.0, -2.0 * m2 / (m1 * m1 * m1), 1.0 / (m1 * m1)];
    (m2 / (m1 * m1) - 1.0, delta_se(&grad, cov))
}

/// Thinned alpha-HoC against alpha'-HoC with `alpha' = 1 - (1 - alpha)(1 - delta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinningReport {
    pub n: u32,
    pub alpha: f64,
    pub delta: f64,
    pub alpha_prime: f64,
    pub thinned: EstimateResult,
    pub direct: EstimateResult,
    /// The two intervals at the configured confidence intersect.
    pub overlap: bool,
}

const THINNING_TAG: u64 = 1 << 40;

pub fn thinning_equivalence(n: u32, alpha: f64, delta: f64, cfg: &McConfig) -> Result<ThinningReport> {
    if !(0.0..=1.0).contains(&delta) {
        return invalid(format!("removal probability {delta} outside [0, 1]"));
    }
    let spec = ModelSpec::AlphaHoc { alpha };
    let hits = per_replicate(spec, n, cfg, |land| {
        // removal draws come from their own stream of the replicate seed
        exists_accessible(&thin(land, delta, land.seed())?)
    })?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    let thinned = EstimateResult::proportion(successes, cfg, spec, n)?;
    let alpha_prime = 1.0 - (1.0 - alpha) * (1.0 - delta);
    let direct = estimate_p(
        ModelSpec::AlphaHoc { alpha: alpha_prime },
        n,
        &cfg.with_seed(sub_seed(cfg.seed, THINNING_TAG)),
    )?;
    let overlap = thinned.ci_low <= direct.ci_high && direct.ci_low <= thinned.ci_high;
    Ok(ThinningReport {
        n,
        alpha,
        delta,
        alpha_prime,
        thinned,
        direct,
        overlap,
    })
}

/// One grid point of a trend report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendPoint {
    pub n: u32,
    pub parameter: f64,
    pub value: f64,
    /// Standard error for Monte Carlo values; `None` for exact ones.
    pub std_error: Option<f64>,
}

/// A quantity tabulated over a dimension grid against its limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendReport {
    pub label: String,
    pub target: f64,
    pub points: Vec<TrendPoint>,
    /// Grid steps at which the distance to `target` grew by more than two
    /// combined standard errors (by anything at all, for exact values).
    pub violations: Vec<(u32, u32)>,
}

impl TrendReport {
    fn new(label: impl Into<String>, target: f64, points: Vec<TrendPoint>) -> Self {
        let violations = points
            .windows(2)
            .filter(|w| {
                let d0 = (w[0].value - target).abs();
                let d1 = (w[1].value - target).abs();
                let slack = match (w[0].std_error, w[1].std_error) {
                    (Some(a), Some(b)) => 2.0 * (a * a + b * b).sqrt(),
                    _ => 0.0,
                };
                !(d1 <= d0 + slack)
            })
            .map(|w| (w[0].n, w[1].n))
            .collect();
        TrendReport {
            label: label.into(),
            target,
            points,
            violations,
        }
    }

    /// Distance to the target never grows along the grid, up to noise.
    pub fn approaches_target(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `S_1 / (4 n^2 (1 - alpha)^(2n))` with `alpha = alpha_of(n)`; exact values.
pub fn s1_trend(n_grid: &[u32], alpha_of: impl Fn(u32) -> f64, delta: f64) -> Result<TrendReport> {
    let n_max = n_grid.iter().copied().max().unwrap_or(0);
    if n_max < 1 {
        return invalid("empty dimension grid");
    }
    let tnk = t_table(n_max)?;
    let points = n_grid
        .iter()
        .map(|&n| {
            let alpha = alpha_of(n);
            let split = s1_s2_split(n, alpha, delta, &tnk)?;
            let nf = n as f64;
            let scale = 4.0 * nf * nf * (1.0 - alpha).powi(2 * n as i32);
            Ok(TrendPoint {
                n,
                parameter: alpha,
                value: split.s1.to_f64() / scale,
                std_error: None,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TrendReport::new(
        format!("S1 / 4n^2(1-alpha)^2n, delta = {delta}"),
        1.0,
        points,
    ))
}

/// Monte Carlo `Var(X) / E[X]^2` in alpha-HoC with `alpha = alpha_of(n)`.
/// Grid points use independent seeds.
pub fn variance_ratio_trend(n_grid: &[u32], alpha_of: impl Fn(u32) -> f64, cfg: &McConfig) -> Result<TrendReport> {
    let points = n_grid
        .iter()
        .map(|&n| {
            let alpha = alpha_of(n);
            let grid_cfg = cfg.with_seed(sub_seed(cfg.seed, n as u64));
            let report = second_moment_sanity(ModelSpec::AlphaHoc { alpha }, n, &grid_cfg)?;
            Ok(TrendPoint {
                n,
                parameter: alpha,
                value: report.variance_ratio.unwrap_or(f64::NAN),
                std_error: report.variance_ratio_se,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TrendReport::new("Var(X) / E[X]^2", 3.0, points))
}

/// Fitted bound constants on the nested tables `T(1..=m, .)` for each `m` in the grid.
pub fn bound_trend(n_grid: &[u32]) -> Result<Vec<BoundReport>> {
    let n_max = n_grid.iter().copied().max().unwrap_or(0);
    let tnk = t_table(n_max.max(2))?;
    n_grid.iter().map(|&m| bound_diagnostics_to(&tnk, m)).collect()
}
