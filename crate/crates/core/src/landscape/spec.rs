use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Noise distribution of the rough Mount Fuji model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "kebab-case")]
pub enum EtaSpec {
    Uniform { lo: f64, hi: f64 },
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
}

impl EtaSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EtaSpec::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            EtaSpec::Normal { mean, sd } => mean.is_finite() && sd.is_finite() && sd > 0.0,
            EtaSpec::Exponential { rate } => rate.is_finite() && rate > 0.0,
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("invalid noise distribution {self}"))
        }
    }

    /// Transform one uniform pair from `[0, 1)` into a draw.
    ///
    /// Every variant consumes the same fixed budget, so a vertex's draw
    /// depends only on its own pair.
    #[inline]
    pub fn sample(&self, u1: f64, u2: f64) -> f64 {
        match *self {
            EtaSpec::Uniform { lo, hi } => lo + (hi - lo) * u1,
            EtaSpec::Normal { mean, sd } => {
                // Box-Muller, 1 - u1 lies in (0, 1]
                let radius = (-2.0 * (1.0 - u1).ln()).sqrt();
                mean + sd * radius * (std::f64::consts::TAU * u2).cos()
            }
            EtaSpec::Exponential { rate } => -(1.0 - u1).ln() / rate,
        }
    }

    /// Closure of the support; infinite ends for unbounded variants.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            EtaSpec::Uniform { lo, hi } => (lo, hi),
            EtaSpec::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            EtaSpec::Exponential { .. } => (0.0, f64::INFINITY),
        }
    }
}

impl fmt::Display for EtaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EtaSpec::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            EtaSpec::Normal { mean, sd } => write!(f, "normal:{mean}:{sd}"),
            EtaSpec::Exponential { rate } => write!(f, "exponential:{rate}"),
        }
    }
}

impl FromStr for EtaSpec {
    type Err = Error;

    /// Parses `uniform:LO:HI`, `normal:MEAN:SD` or `exponential:RATE`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
        let nums = parts
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad number {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let eta = match (kind.as_str(), nums.as_slice()) {
            ("uniform", [lo, hi]) => EtaSpec::Uniform { lo: *lo, hi: *hi },
            ("normal", [mean, sd]) => EtaSpec::Normal { mean: *mean, sd: *sd },
            ("exponential", [rate]) => EtaSpec::Exponential { rate: *rate },
            _ => return invalid(format!("unrecognised noise distribution {s:?}")),
        };
        eta.validate()?;
        Ok(eta)
    }
}

/// Which fitness model a landscape is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelSpec {
    /// House of cards: all vertices but the top are i.i.d. uniform.
    Hoc,
    /// House of cards with the bottom vertex pinned to `alpha`; `alpha = 0` is CHoC.
    AlphaHoc { alpha: f64 },
    /// Rough Mount Fuji: `theta * layer + eta`.
    Rmf { theta: f64, eta: EtaSpec },
    /// Site percolation: interior vertices kept with probability `epsilon`.
    Percolation { epsilon: f64 },
}

impl ModelSpec {
    pub const CHOC: ModelSpec = ModelSpec::AlphaHoc { alpha: 0.0 };

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Hoc => Ok(()),
            ModelSpec::AlphaHoc { alpha } if (0.0..=1.0).contains(&alpha) => Ok(()),
            ModelSpec::AlphaHoc { alpha } => invalid(format!("alpha {alpha} outside [0, 1]")),
            ModelSpec::Rmf { theta, eta } => {
                if !(theta.is_finite() && theta > 0.0) {
                    return invalid(format!("drift theta {theta} must be positive"));
                }
                eta.validate()
            }
            ModelSpec::Percolation { epsilon } if (0.0..=1.0).contains(&epsilon) => Ok(()),
            ModelSpec::Percolation { epsilon } => invalid(format!("epsilon {epsilon} outside [0, 1]")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Hoc => "hoc",
            ModelSpec::AlphaHoc { .. } => "alpha-hoc",
            ModelSpec::Rmf { .. } => "rmf",
            ModelSpec::Percolation { .. } => "percolation",
        }
    }

    /// The scalar parameter swept in tables (alpha, theta or epsilon).
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            ModelSpec::Hoc => None,
            ModelSpec::AlphaHoc { alpha } => Some(alpha),
            ModelSpec::Rmf { theta, .. } => Some(theta),
            ModelSpec::Percolation { epsilon } => Some(epsilon),
        }
    }

    pub fn is_hoc_family(&self) -> bool {
        matches!(self, ModelSpec::Hoc | ModelSpec::AlphaHoc { .. })
    }

    /// Space-separated `key=value` parameters, empty for HoC.
    pub fn params(&self) -> String {
        match *self {
            ModelSpec::Hoc => String::new(),
            ModelSpec::AlphaHoc { alpha } => format!("alpha={alpha}"),
            ModelSpec::Rmf { theta, eta } => format!("theta={theta} eta={eta}"),
            ModelSpec::Percolation { epsilon } => format!("epsilon={epsilon}"),
        }
    }

    /// Inverse of `name()` + `params()`.
    pub fn from_parts<'a>(name: &str, params: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut alpha = None;
        let mut theta = None;
        let mut eta = None;
        let mut epsilon = None;
        for (k, v) in params {
            let num = || {
                v.parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad value {v:?} for {k}")))
            };
            match k {
                "alpha" => alpha = Some(num()?),
                "theta" => theta = Some(num()?),
                "epsilon" => epsilon = Some(num()?),
                "eta" => eta = Some(v.parse::<EtaSpec>()?),
                _ => return invalid(format!("unknown model parameter {k:?}")),
            }
        }
        let missing = |p: &str| Error::InvalidArgument(format!("model {name} requires {p}"));
        let spec = match name {
            "hoc" => ModelSpec::Hoc,
            "choc" => ModelSpec::CHOC,
            "alpha-hoc" => ModelSpec::AlphaHoc {
                alpha: alpha.ok_or_else(|| missing("alpha"))?,
            },
            "rmf" => ModelSpec::Rmf {
                theta: theta.ok_or_else(|| missing("theta"))?,
                eta: eta.ok_or_else(|| missing("eta"))?,
            },
            "percolation" => ModelSpec::Percolation {
                epsilon: epsilon.ok_or_else(|| missing("epsilon"))?,
            },
            _ => return invalid(format!("unknown model {name:?}")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{} {}", self.name(), params)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_parse_roundtrip() {
        for s in ["uniform:0:1", "normal:0:1", "exponential:2.5"] {
            let eta: EtaSpec = s.parse().unwrap();
            assert_eq!(eta.to_string(), s);
        }
        assert!("uniform:1:0".parse::<EtaSpec>().is_err());
        assert!("normal:0:0".parse::<EtaSpec>().is_err());
        assert!("exponential:-1".parse::<EtaSpec>().is_err());
        assert!("cauchy:0:1".parse::<EtaSpec>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(ModelSpec::AlphaHoc { alpha: 1.2 }.validate().is_err());
        assert!(ModelSpec::Percolation { epsilon: -0.1 }.validate().is_err());
        let eta = EtaSpec::Uniform { lo: 0.0, hi: 1.0 };
        assert!(ModelSpec::Rmf { theta: 0.0, eta }.validate().is_err());
        assert!(ModelSpec::Rmf { theta: 0.3, eta }.validate().is_ok());
        assert!(ModelSpec::CHOC.validate().is_ok());
    }

    #[test]
    fn parts_roundtrip() {
        let specs = [
            ModelSpec::Hoc,
            ModelSpec::AlphaHoc { alpha: 0.3 },
            ModelSpec::Rmf {
                theta: 0.25,
                eta: EtaSpec::Normal { mean: 0.0, sd: 1.0 },
            },
            ModelSpec::Percolation { epsilon: 0.5 },
        ];
        for spec in specs {
            let params = spec.params();
            let kv = params.split_whitespace().map(|p| p.split_once('=').unwrap());
            assert_eq!(ModelSpec::from_parts(spec.name(), kv).unwrap(), spec);
        }
        assert!(ModelSpec::from_parts("rmf", [("theta", "1")]).is_err());
    }

    #[test]
    fn samplers_respect_support() {
        let grid = [0.0, 1e-9, 0.25, 0.5, 0.999_999];
        for &u1 in &grid {
            for &u2 in &grid {
                let x = EtaSpec::Uniform { lo: -1.0, hi: 2.0 }.sample(u1, u2);
                assert!((-1.0..2.0).contains(&x));
                let e = EtaSpec::Exponential { rate: 3.0 }.sample(u1, u2);
                assert!(e >= 0.0 && e.is_finite());
                assert!(EtaSpec::Normal { mean: 0.0, sd: 1.0 }.sample(u1, u2).is_finite());
            }
        }
    }
}
