//! `eval`, `extremes`, `mttf`, `simulate` and `figures`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use fgm_linexp::extremes::{extreme_curve, reversed_hazard_max, ExtremeKind};
use fgm_linexp::failure_process::{
    cumulative_intensity, renewal_traces, MinimalRepairSampler, Policy, ProcessTrace, Window,
};
use fgm_linexp::moments::{
    mttf_exact, mttf_quadrature, mttf_series_corrected, mttf_series_printed,
};
use fgm_linexp::numerics::{QuadratureSpec, SeriesResult, SummationMode, DEFAULT_SERIES_CAP};
use fgm_linexp::BleFgmParams;
use serde::Serialize;

use crate::config::{
    resolve, AxisSpec, CommonFlags, Defaults, Format, RunConfig, FIG1_RATES, FIG2_RATES,
};
use crate::output::{emit, json_string, num, Csv};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Cdf,
    Pdf,
    Survival,
    Hazard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    MinimalRepair,
    Replacement,
}

fn quantity_at(p: &BleFgmParams, q: Quantity, x: f64, y: f64) -> fgm_linexp::Result<f64> {
    match q {
        Quantity::Cdf => p.joint_cdf(x, y),
        Quantity::Pdf => p.joint_pdf(x, y),
        Quantity::Survival => p.joint_survival(x, y),
        Quantity::Hazard => p.bivariate_hazard(x, y),
    }
}

#[derive(Serialize)]
struct GridRow {
    x: f64,
    y: f64,
    lambda: f64,
    value: f64,
}

#[derive(Serialize)]
struct GridReport {
    quantity: Quantity,
    rows: Vec<GridRow>,
}

fn grid_rows(cfg: &RunConfig, q: Quantity) -> Result<Vec<GridRow>, CliError> {
    let (xs, ys) = (cfg.grid_x.points(), cfg.grid_y.points());
    let mut rows = Vec::with_capacity(cfg.lambda_list.len() * xs.len() * ys.len());
    for &lambda in &cfg.lambda_list {
        let p = cfg.at_lambda(lambda);
        for &x in &xs {
            for &y in &ys {
                let value = quantity_at(&p, q, x, y)?;
                rows.push(GridRow {
                    x,
                    y,
                    lambda,
                    value,
                });
            }
        }
    }
    Ok(rows)
}

/// Row-major `x,y,lambda,value` blocks, one per `λ`.
pub fn eval_text(cfg: &RunConfig, q: Quantity) -> Result<String, CliError> {
    let rows = grid_rows(cfg, q)?;
    Ok(match cfg.format {
        Format::Csv => {
            let mut csv = Csv::new(&["x", "y", "lambda", "value"]);
            for r in &rows {
                csv.row(&[num(r.x), num(r.y), num(r.lambda), num(r.value)]);
            }
            csv.into_string()
        }
        Format::Json => json_string(&GridReport { quantity: q, rows }),
    })
}

pub fn eval(flags: &CommonFlags, q: Quantity, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = resolve(flags, &Defaults::default())?;
    let text = eval_text(&cfg, q)?;
    emit(cfg.output_path.as_deref(), &text, stdout)
}

#[derive(Serialize)]
struct ExtremeRow {
    t: f64,
    lambda: f64,
    cdf_max: f64,
    rev_hazard_max: Option<f64>,
    survival_min: f64,
    hazard_min: f64,
}

/// `t,lambda,cdf_max,rev_hazard_max,survival_min,hazard_min` over `grid_x`.
///
/// The reversed hazard of the maximum diverges at `t = 0` and is written `inf`.
pub fn extremes_text(cfg: &RunConfig) -> Result<String, CliError> {
    let ts = cfg.grid_x.points();
    let mut rows = Vec::new();
    for &lambda in &cfg.lambda_list {
        let p = cfg.at_lambda(lambda);
        let cdf = extreme_curve(&p, ExtremeKind::CdfMax, &ts)?;
        let surv = extreme_curve(&p, ExtremeKind::SurvivalMin, &ts)?;
        let haz = extreme_curve(&p, ExtremeKind::HazardMin, &ts)?;
        for (i, &t) in ts.iter().enumerate() {
            let rh = if t == 0.0 {
                f64::INFINITY
            } else {
                reversed_hazard_max(&p, t)?
            };
            rows.push(ExtremeRow {
                t,
                lambda,
                cdf_max: cdf.values[i],
                rev_hazard_max: Some(rh).filter(|v| v.is_finite()),
                survival_min: surv.values[i],
                hazard_min: haz.values[i],
            });
        }
    }
    Ok(match cfg.format {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "t",
                "lambda",
                "cdf_max",
                "rev_hazard_max",
                "survival_min",
                "hazard_min",
            ]);
            for r in &rows {
                csv.row(&[
                    num(r.t),
                    num(r.lambda),
                    num(r.cdf_max),
                    num(r.rev_hazard_max.unwrap_or(f64::INFINITY)),
                    num(r.survival_min),
                    num(r.hazard_min),
                ]);
            }
            csv.into_string()
        }
        Format::Json => json_string(&rows),
    })
}

pub fn extremes(flags: &CommonFlags, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = resolve(flags, &Defaults::default())?;
    let text = extremes_text(&cfg)?;
    emit(cfg.output_path.as_deref(), &text, stdout)
}

#[derive(Debug, Serialize)]
pub struct SeriesField {
    pub value: f64,
    pub terms: usize,
    pub first_omitted: f64,
    pub diverged: bool,
}

impl From<SeriesResult> for SeriesField {
    fn from(s: SeriesResult) -> Self {
        Self {
            value: s.value,
            terms: s.terms_used,
            first_omitted: s.first_omitted_magnitude,
            diverged: s.diverged,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MttfJson {
    pub params: BleFgmParams,
    pub exact: f64,
    pub quadrature: Option<f64>,
    pub quadrature_error: Option<f64>,
    pub series_printed: SeriesField,
    pub series_corrected: Option<SeriesField>,
}

pub fn mttf(flags: &CommonFlags, stdout: &mut dyn Write) -> Result<(), CliError> {
    let defaults = Defaults {
        format: Format::Json,
        ..Defaults::default()
    };
    let cfg = resolve(flags, &defaults)?;
    let p = cfg.params;
    let mode = SummationMode::OptimalTruncation;
    let quad = mttf_quadrature(&p, &QuadratureSpec::default());
    let report = MttfJson {
        params: p,
        exact: mttf_exact(&p),
        quadrature: quad.as_ref().ok().map(|q| q.value),
        quadrature_error: quad.as_ref().ok().map(|q| q.error),
        series_printed: mttf_series_printed(&p, DEFAULT_SERIES_CAP, mode).into(),
        series_corrected: mttf_series_corrected(&p, DEFAULT_SERIES_CAP, mode)
            .ok()
            .map(Into::into),
    };
    emit(cfg.output_path.as_deref(), &json_string(&report), stdout)?;
    quad.map(|_| ()).map_err(CliError::from)
}

#[derive(Debug, Serialize)]
pub struct SimulationSummary {
    pub policy: &'static str,
    pub params: BleFgmParams,
    pub window: Window,
    pub seed: u64,
    pub replications: usize,
    pub mean_count: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cumulative_intensity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cumulative_intensity_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_zero_empirical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_zero_expected: Option<f64>,
}

fn summarize_counts(traces: &[ProcessTrace]) -> (f64, f64) {
    let n = traces.len() as f64;
    let mean = traces.iter().map(|t| t.events.len() as f64).sum::<f64>() / n;
    let var = traces
        .iter()
        .map(|t| (t.events.len() as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Event CSV and summary for the configured policy.
pub fn simulate_outputs(
    cfg: &RunConfig,
    policy: Policy,
) -> Result<(String, SimulationSummary), CliError> {
    let p = cfg.params;
    let window = Window::new(cfg.window.0, cfg.window.1)?;
    let traces = match policy {
        Policy::MinimalRepair => {
            MinimalRepairSampler::new(&p, window)?.traces(cfg.seed, cfg.replications)?
        }
        Policy::Replacement => renewal_traces(&p, window, cfg.seed, cfg.replications),
    };
    let mut csv = Csv::new(&["replicate", "event_index", "x", "y"]);
    for t in &traces {
        for (k, &(x, y)) in t.events.iter().enumerate() {
            csv.row(&[t.replicate.to_string(), k.to_string(), num(x), num(y)]);
        }
    }
    let (mean_count, std_error) = summarize_counts(&traces);
    let mut summary = SimulationSummary {
        policy: policy.name(),
        params: p,
        window,
        seed: cfg.seed,
        replications: cfg.replications,
        mean_count,
        std_error,
        cumulative_intensity: None,
        cumulative_intensity_error: None,
        p_zero_empirical: None,
        p_zero_expected: None,
    };
    match policy {
        Policy::MinimalRepair => {
            let q =
                cumulative_intensity(&p, window.x_max, window.y_max, &QuadratureSpec::default())?;
            summary.cumulative_intensity = Some(q.value);
            summary.cumulative_intensity_error = Some(q.error);
        }
        Policy::Replacement => {
            let empty = traces.iter().filter(|t| t.events.is_empty()).count();
            summary.p_zero_empirical = Some(empty as f64 / traces.len() as f64);
            summary.p_zero_expected = Some(1.0 - p.joint_cdf(window.x_max, window.y_max)?);
        }
    }
    Ok((csv.into_string(), summary))
}

fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

pub fn simulate(
    flags: &CommonFlags,
    policy: PolicyArg,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = resolve(
        flags,
        &Defaults {
            grid_x: AxisSpec::new(0.0, 1.0, 2),
            grid_y: AxisSpec::new(0.0, 1.0, 2),
            ..Defaults::default()
        },
    )?;
    let policy = match policy {
        PolicyArg::MinimalRepair => Policy::MinimalRepair,
        PolicyArg::Replacement => Policy::Replacement,
    };
    let (events, summary) = simulate_outputs(&cfg, policy)?;
    let summary = json_string(&summary);
    match cfg.output_path.as_deref() {
        Some(out) => {
            emit(Some(out), &events, stdout)?;
            emit(Some(&summary_path(out)), &summary, stdout)?;
            emit(None, &summary, stdout)
        }
        None => {
            emit(None, &events, stdout)?;
            emit(None, &summary, stdout)
        }
    }
}

/// Figure data: joint cdf and survival grids and the extremes curves, at the
/// two published parameter sets with the default `λ` list.
pub fn figures(dir: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
    let flags = CommonFlags::default();
    let square = |hi| Defaults {
        grid_x: AxisSpec::new(0.0, hi, 41),
        grid_y: AxisSpec::new(0.0, hi, 41),
        ..Defaults::default()
    };
    let fig1 = resolve(
        &flags,
        &Defaults {
            rates: FIG1_RATES,
            ..square(4.0)
        },
    )?;
    let fig2 = resolve(
        &flags,
        &Defaults {
            rates: FIG2_RATES,
            ..square(10.0)
        },
    )?;
    let fig3 = resolve(
        &flags,
        &Defaults {
            rates: FIG1_RATES,
            ..square(4.0)
        },
    )?;
    let files = [
        ("fig1_cdf.csv", eval_text(&fig1, Quantity::Cdf)?),
        ("fig2_survival.csv", eval_text(&fig2, Quantity::Survival)?),
        ("fig3_extremes.csv", extremes_text(&fig3)?),
    ];
    for (name, text) in &files {
        let path = dir.join(name);
        emit(Some(&path), text, stdout)?;
        writeln!(stdout, "{}", path.display()).map_err(|e| CliError::io(e.to_string()))?;
    }
    Ok(())
}
