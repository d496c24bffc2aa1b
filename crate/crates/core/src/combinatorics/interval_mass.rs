//! Minimal probability mass of a fixed-length interval inside a bounded support.

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{invalid, Result};
use crate::landscape::EtaSpec;

/// Left endpoints sampled before refinement.
pub const GRID_POINTS: usize = 10_000;

/// A distribution with a CDF and the closure of its support.
pub trait Density {
    fn support(&self) -> (f64, f64);
    fn cdf(&self, x: f64) -> f64;
}

impl Density for EtaSpec {
    fn support(&self) -> (f64, f64) {
        EtaSpec::support(self)
    }

    fn cdf(&self, x: f64) -> f64 {
        match *self {
            EtaSpec::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            EtaSpec::Normal { mean, sd } => 0.5 * erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2)),
            EtaSpec::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
        }
    }
}

/// Piecewise-linear density through tabulated `(x, pdf)` points, normalised.
#[derive(Debug, Clone)]
pub struct TabulatedDensity {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // cumulative mass at each knot
    mass: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return invalid("a tabulated density needs at least two points");
        }
        if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return invalid("tabulated abscissae must be strictly increasing");
        }
        if points
            .iter()
            .any(|p| !p.0.is_finite() || !(p.1 >= 0.0) || !p.1.is_finite())
        {
            return invalid("tabulated density values must be finite and non-negative");
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let mut ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        let mut mass = vec![0.0; xs.len()];
        for i in 1..xs.len() {
            mass[i] = mass[i - 1] + 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
        }
        let total = *mass.last().unwrap();
        if !(total > 0.0) {
            return invalid("tabulated density has zero mass");
        }
        ys.iter_mut().for_each(|y| *y /= total);
        mass.iter_mut().for_each(|m| *m /= total);
        Ok(TabulatedDensity { xs, ys, mass })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        let i = self.xs.partition_point(|&k| k <= x).clamp(1, self.xs.len() - 1);
        let t = (x - self.xs[i - 1]) / (self.xs[i] - self.xs[i - 1]);
        self.ys[i - 1] + t * (self.ys[i] - self.ys[i - 1])
    }
}

impl Density for TabulatedDensity {
    fn support(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let i = self.xs.partition_point(|&k| k <= x);
        let (x0, y0) = (self.xs[i - 1], self.ys[i - 1]);
        let slope = (self.ys[i] - y0) / (self.xs[i] - x0);
        let d = x - x0;
        self.mass[i - 1] + y0 * d + 0.5 * slope * d * d
    }
}

/// Result of the interval-mass minimisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalMass {
    /// Minimal mass over closed intervals of length `theta / 2`.
    pub value: f64,
    /// Left endpoint attaining it.
    pub left: f64,
    /// Spacing of the left-endpoint grid before refinement.
    pub resolution: f64,
}

/// Minimal mass over length-`theta/2` intervals in the support closure.
///
/// Scans [`GRID_POINTS`] evenly spaced left endpoints, then refines around
/// the best one by golden-section search on the two neighbouring cells.
pub fn c_eta_theta<D: Density + ?Sized>(eta: &D, theta: f64) -> Result<IntervalMass> {
    c_eta_theta_with_grid(eta, theta, GRID_POINTS)
}

pub fn c_eta_theta_with_grid<D: Density + ?Sized>(eta: &D, theta: f64, grid: usize) -> Result<IntervalMass> {
    let (lo, hi) = eta.support();
    if !(lo.is_finite() && hi.is_finite()) {
        return invalid("interval mass needs a bounded support");
    }
    if !(theta > 0.0 && theta.is_finite()) {
        return invalid(format!("theta = {theta} must be positive"));
    }
    let width = theta / 2.0;
    if !(width < hi - lo) {
        return invalid(format!(
            "interval length {width} does not fit strictly inside the support"
        ));
    }
    let grid = grid.max(2);
    let span = hi - lo - width;
    let step = span / (grid - 1) as f64;
    let mass = |a: f64| eta.cdf(a + width) - eta.cdf(a);
    let at = |i: usize| if i == grid - 1 { lo + span } else { lo + step * i as f64 };

    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..grid {
        let m = mass(at(i));
        if m < best {
            best = m;
            best_i = i;
        }
    }
    let mut left = at(best_i);

    // golden-section refinement on [a_{i-1}, a_{i+1}]
    let (mut a, mut b) = (at(best_i.saturating_sub(1)), at((best_i + 1).min(grid - 1)));
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        if mass(c) <= mass(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    let refined = mass(mid);
    if refined < best {
        best = refined;
        left = mid;
    }
    Ok(IntervalMass {
        value: best,
        left,
        resolution: step,
    })
}
