//! Run configuration: command-line flags over a flat JSON file over defaults.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use fgm_linexp::BleFgmParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_LAMBDAS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// `(α₁, β₁, α₂, β₂)` of the first and third figure.
pub const FIG1_RATES: [f64; 4] = [0.5, 1.5, 0.7, 2.0];
/// `(α₁, β₁, α₂, β₂)` of the second figure.
pub const FIG2_RATES: [f64; 4] = [0.05, 0.15, 0.07, 0.2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// Evenly spaced axis `min:max:count`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub const fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::usage(format!(
                "{name}: count must be >= 2, got {}",
                self.count
            )));
        }
        if !(self.min >= 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(CliError::usage(format!(
                "{name}: need 0 <= min < max < inf, got {}:{}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    /// Nodes `min + i (max - min)/(count - 1)`, with the last one pinned to `max`.
    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + i as f64 * step
                }
            })
            .collect()
    }
}

impl FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected min:max:count, got {s:?}"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("{:?}: {e}", parts[2]))?;
        Ok(Self::new(num(parts[0])?, num(parts[1])?, count))
    }
}

impl<'de> Deserialize<'de> for AxisSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Fields { min: f64, max: f64, count: usize },
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Fields { min, max, count } => Ok(Self::new(min, max, count)),
        }
    }
}

/// Window `x_max:y_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSpec(pub f64, pub f64);

impl FromStr for WindowSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected x_max:y_max, got {s:?}"))?;
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        Ok(Self(num(a)?, num(b)?))
    }
}

impl<'de> Deserialize<'de> for WindowSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pair([f64; 2]),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Pair([a, b]) => Ok(Self(a, b)),
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonFlags {
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub beta1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Single dependence parameter; overrides the list.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Comma-separated dependence parameters, one output block each.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub lambda_list: Option<Vec<f64>>,
    /// Axis `min:max:count`.
    #[arg(long)]
    pub grid_x: Option<AxisSpec>,
    #[arg(long)]
    pub grid_y: Option<AxisSpec>,
    /// Simulation window `x_max:y_max`; defaults to the grid maxima.
    #[arg(long)]
    pub window: Option<WindowSpec>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat JSON file with any of the fields above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of the `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha1: Option<f64>,
    pub beta1: Option<f64>,
    pub alpha2: Option<f64>,
    pub beta2: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda_list: Option<Vec<f64>>,
    pub grid_x: Option<AxisSpec>,
    pub grid_y: Option<AxisSpec>,
    pub window: Option<WindowSpec>,
    pub seed: Option<u64>,
    pub replications: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Per-command fallbacks for values neither flags nor file provide.
#[derive(Debug, Clone)]
pub struct Defaults {
    pub rates: [f64; 4],
    pub grid_x: AxisSpec,
    pub grid_y: AxisSpec,
    pub format: Format,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            rates: FIG1_RATES,
            grid_x: AxisSpec::new(0.0, 4.0, 41),
            grid_y: AxisSpec::new(0.0, 4.0, 41),
            format: Format::Csv,
        }
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: BleFgmParams,
    pub lambda_list: Vec<f64>,
    pub grid_x: AxisSpec,
    pub grid_y: AxisSpec,
    pub window: WindowSpec,
    pub seed: u64,
    pub replications: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// The single `λ` used by commands that do not sweep.
    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    /// Parameters with the dependence parameter replaced.
    pub fn at_lambda(&self, lambda: f64) -> BleFgmParams {
        self.params
            .with_lambda(lambda)
            .expect("lambda list validated")
    }
}

const DEFAULT_SINGLE_LAMBDA: f64 = 0.5;

pub fn resolve(flags: &CommonFlags, defaults: &Defaults) -> Result<RunConfig, CliError> {
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let pick =
        |flag: Option<f64>, fileval: Option<f64>, dflt: f64| flag.or(fileval).unwrap_or(dflt);
    let [a1, b1, a2, b2] = defaults.rates;
    let alpha1 = pick(flags.alpha1, file.alpha1, a1);
    let beta1 = pick(flags.beta1, file.beta1, b1);
    let alpha2 = pick(flags.alpha2, file.alpha2, a2);
    let beta2 = pick(flags.beta2, file.beta2, b2);

    let single = flags.lambda.or(file.lambda);
    let list = flags.lambda_list.clone().or(file.lambda_list);
    let lambda_list = match (single, list) {
        (Some(l), _) => vec![l],
        (None, Some(list)) => list,
        (None, None) => DEFAULT_LAMBDAS.to_vec(),
    };
    if lambda_list.is_empty() {
        return Err(CliError::usage("lambda list is empty"));
    }
    if let Some(bad) = lambda_list.iter().find(|l| l.is_nan() || l.abs() > 1.0) {
        return Err(CliError::usage(format!(
            "every lambda must satisfy |lambda| <= 1, got {bad}"
        )));
    }
    let lambda = single.unwrap_or(if lambda_list.len() == 1 {
        lambda_list[0]
    } else {
        DEFAULT_SINGLE_LAMBDA
    });
    let params = BleFgmParams::from_rates(alpha1, beta1, alpha2, beta2, lambda)
        .map_err(CliError::from_core_usage)?;

    let grid_x = flags.grid_x.or(file.grid_x).unwrap_or(defaults.grid_x);
    let grid_y = flags.grid_y.or(file.grid_y).unwrap_or(defaults.grid_y);
    grid_x.validate("grid-x")?;
    grid_y.validate("grid-y")?;

    let window = flags
        .window
        .or(file.window)
        .unwrap_or(WindowSpec(grid_x.max, grid_y.max));
    let ok = |v: f64| v.is_finite() && v > 0.0;
    if !(ok(window.0) && ok(window.1)) {
        return Err(CliError::usage(format!(
            "window sides must be positive, got {}:{}",
            window.0, window.1
        )));
    }
    let replications = flags.replications.or(file.replications).unwrap_or(10_000);
    if replications < 1 {
        return Err(CliError::usage("replications must be >= 1"));
    }
    Ok(RunConfig {
        params,
        lambda_list,
        grid_x,
        grid_y,
        window,
        seed: flags.seed.or(file.seed).unwrap_or(1),
        replications,
        output_path: flags.out.clone().or(file.output_path),
        format: flags.format.or(file.format).unwrap_or(defaults.format),
    })
}
