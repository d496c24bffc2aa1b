//! Interval estimates and compensated accumulation.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};

/// Two-sided standard normal quantile for `confidence`.
pub fn z_value(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return invalid(format!("confidence {confidence} outside (0, 1)"));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(0.5 + confidence / 2.0))
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return invalid(format!("{successes} successes out of {trials} trials"));
    }
    let z = z_value(confidence)?;
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let centre = (p + z2 / (2.0 * t)) / denom;
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    // guard against rounding pushing p outside its own interval
    let lo = if successes == 0 { 0.0 } else { (centre - half).min(p) };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).max(p)
    };
    Ok((lo.max(0.0), hi.min(1.0)))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

pub fn mean_se(xs: &[f64]) -> MeanSe {
    if xs.is_empty() {
        return MeanSe {
            mean: f64::NAN,
            se: f64::NAN,
        };
    }
    let r = xs.len() as f64;
    let mean = xs.iter().copied().collect::<NeumaierSum>().value() / r;
    if xs.len() == 1 {
        return MeanSe { mean, se: 0.0 };
    }
    let ss = xs
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<NeumaierSum>()
        .value();
    MeanSe {
        mean,
        se: (ss / (r - 1.0) / r).sqrt(),
    }
}

/// Sample covariance matrix of the columns of `rows`, divided by the row count.
///
/// This is the covariance of the column means, as used by the delta method.
pub(crate) fn mean_covariance<const K: usize>(rows: &[[f64; K]]) -> ([f64; K], [[f64; K]; K]) {
    let r = rows.len() as f64;
    let mut means = [0.0; K];
    for (j, m) in means.iter_mut().enumerate() {
        *m = rows.iter().map(|row| row[j]).collect::<NeumaierSum>().value() / r;
    }
    let mut cov = [[0.0; K]; K];
    if rows.len() > 1 {
        for a in 0..K {
            for b in a..K {
                let s = rows
                    .iter()
                    .map(|row| (row[a] - means[a]) * (row[b] - means[b]))
                    .collect::<NeumaierSum>()
                    .value();
                cov[a][b] = s / (r - 1.0) / r;
                cov[b][a] = cov[a][b];
            }
        }
    }
    (means, cov)
}

/// `sqrt(g' C g)` for a gradient `g` and covariance `C`.
pub(crate) fn delta_se<const K: usize>(grad: &[f64; K], cov: &[[f64; K]; K]) -> f64 {
    let mut v = 0.0;
    for a in 0..K {
        for b in 0..K {
            v += grad[a] * cov[a][b] * grad[b];
        }
    }
    v.max(0.0).sqrt()
}
