use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Count,
    Tnk,
    Moments,
    Estimate,
    SweepAlpha,
    ChocCurve,
    RmfCoupling,
    Diagnostics,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Count => "count",
            Command::Tnk => "tnk",
            Command::Moments => "moments",
            Command::Estimate => "estimate",
            Command::SweepAlpha => "sweep-alpha",
            Command::ChocCurve => "choc-curve",
            Command::RmfCoupling => "rmf-coupling",
            Command::Diagnostics => "diagnostics",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// What `estimate` reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Probability that an accessible path exists
    #[default]
    P,
    /// Sample means of X and X^2
    Moments,
    /// P(X > 0) against mean(X)^2 / mean(X^2)
    Sanity,
}

/// Run settings; every field may come from flags or from `--json-config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand, when given in the JSON config instead of on the command line
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Landscape model: hoc, choc, alpha-hoc, rmf, percolation
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Noise law: uniform:LO:HI, normal:MEAN:SD or exponential:RATE
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Hypercube dimension
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Dimension grid, e.g. "8,12,16" or "2..20"
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    /// Alpha grid, e.g. "0,0.1,0.2" or "0:0.3:0.01"
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_list: Option<String>,
    /// Ascending drift grid, same syntax as --alpha-list
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_list: Option<String>,
    /// Split point of the second-moment sum (terms with k <= (1 - delta) n go to S1)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    /// Largest dimension counted per replicate
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_dimension: Option<u32>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Output file; standard output if absent
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

pub const DEFAULT_REPLICATES: u64 = 10_000;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;
pub const DEFAULT_DELTA: f64 = 0.5;

macro_rules! prefer {
    ($flags:expr, $file:expr; $($f:ident),*) => {
        RunConfig { $($f: $flags.$f.or($file.$f)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Flags win over the file.
    pub fn merged(self, file: RunConfig) -> RunConfig {
        prefer!(self, file; command, model, alpha, theta, eta, epsilon, n, n_list, n_max, alpha_list,
            theta_list, delta, quantity, replicates, seed, confidence, max_dimension, format, output)
    }

    /// Fill the documented defaults so the echoed config is complete.
    pub fn with_defaults(mut self) -> RunConfig {
        self.format.get_or_insert(Format::Csv);
        match self.command {
            Some(Command::Estimate | Command::SweepAlpha | Command::ChocCurve | Command::RmfCoupling) => {
                self.replicates.get_or_insert(DEFAULT_REPLICATES);
                self.seed.get_or_insert(0);
                self.confidence.get_or_insert(DEFAULT_CONFIDENCE);
                if self.command == Some(Command::Estimate) {
                    self.quantity.get_or_insert(Quantity::P);
                }
            }
            Some(Command::Count) => {
                self.seed.get_or_insert(0);
            }
            Some(Command::Moments) => {
                self.delta.get_or_insert(DEFAULT_DELTA);
            }
            _ => {}
        }
        self
    }

    pub fn require<T: Copy>(&self, value: Option<T>, flag: &str) -> Result<T, CliError> {
        value.ok_or_else(|| CliError::Config(format!("{} needs --{flag}", self.command_name())))
    }

    pub fn command_name(&self) -> &'static str {
        self.command.map(Command::name).unwrap_or("run")
    }

    /// `--n-list`, falling back to a single `--n`.
    pub fn dims(&self) -> Result<Vec<u32>, CliError> {
        match (&self.n_list, self.n) {
            (Some(list), _) => parse_dims(list),
            (None, Some(n)) => Ok(vec![n]),
            (None, None) => Err(CliError::Config(format!(
                "{} needs --n or --n-list",
                self.command_name()
            ))),
        }
    }
}

/// "8,12,16", "2..20" (inclusive) or a mix of both.
pub fn parse_dims(text: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Config(format!("bad dimension list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// "0,0.1,0.2" or "START:STOP:STEP" (inclusive of STOP up to rounding).
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("bad parameter grid {text:?}"));
    let num = |s: &str| f64::from_str(s.trim()).map_err(|_| bad());
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step.is_nan() || step <= 0.0 || stop < start || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        if count > 1_000_000 {
            return Err(bad());
        }
        // index-based so the grid does not accumulate rounding error
        return Ok((0..=count).map(|i| start + step * i as f64).collect());
    }
    text.split(',').map(num).collect()
}
