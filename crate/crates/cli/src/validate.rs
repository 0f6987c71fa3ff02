//! The oracle suite behind `validate`: each closed form against an
//! independent numerical route.

use std::fmt::Write as _;
use std::io::Write;

use fgm_linexp::dependence::{
    classify_tp2, clayton_oakes_theta, hazard_gradient, local_dependence, survival_partials,
};
use fgm_linexp::extremes::{cdf_max, hazard_min, reversed_hazard_max, survival_min};
use fgm_linexp::failure_process::{
    cumulative_intensity, cumulative_intensity_series_printed, laplace_pdf, laplace_pdf_quadrature,
    laplace_pdf_series_printed, renewal_transform, SeriesCaps,
};
use fgm_linexp::moments::{
    mttf_exact, mttf_quadrature, mttf_series_corrected, mttf_series_printed,
};
use fgm_linexp::numerics::{
    default_step, finite_diff, finite_diff_mixed, integrate_quadrant, integrate_rect,
    QuadratureSpec, StencilDomain, SummationMode, DEFAULT_SERIES_CAP,
};
use fgm_linexp::BleFgmParams;
use serde::Serialize;

use crate::config::{resolve, CommonFlags, Defaults};
use crate::output::{emit, json_string};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    DocumentedDiscrepancy,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::DocumentedDiscrepancy => "documented_discrepancy",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check_id: &'static str,
    /// The relation under test.
    pub paper_eq: &'static str,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub params: BleFgmParams,
    pub checks: Vec<CheckRecord>,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<34} {:<24} {:>12} {:>10}\n",
            "check", "status", "measured", "tolerance"
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<34} {:<24} {:>12.3e} {:>10.1e} {}",
                c.check_id,
                c.status.name(),
                c.measured,
                c.tolerance,
                c.detail
            );
        }
        s
    }
}

/// Derivative checks use this absolute tolerance.
pub const FD_TOL: f64 = 1e-5;
/// Step for mixed second differences.
pub const MIXED_STEP: f64 = 1e-4;
pub const CHECK_POINTS: usize = 50;

/// Radical inverse of `i` in `base`.
pub fn halton(i: usize, base: usize) -> f64 {
    let (mut f, mut r, mut n) = (1.0, 0.0, i);
    while n > 0 {
        f /= base as f64;
        r += f * (n % base) as f64;
        n /= base;
    }
    r
}

/// Quasi-random points in `[0.05, 3]²` and times in `[0.05, 4]`.
pub fn check_points() -> Vec<(f64, f64, f64)> {
    (1..=CHECK_POINTS)
        .map(|i| {
            (
                0.05 + 2.95 * halton(i, 2),
                0.05 + 2.95 * halton(i, 3),
                0.05 + 3.95 * halton(i, 5),
            )
        })
        .collect()
}

fn threshold(measured: f64, tolerance: f64) -> Status {
    if measured <= tolerance {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn record(
    check_id: &'static str,
    paper_eq: &'static str,
    measured: f64,
    tolerance: f64,
) -> CheckRecord {
    CheckRecord {
        check_id,
        paper_eq,
        status: threshold(measured, tolerance),
        measured,
        tolerance,
        detail: String::new(),
    }
}

fn failed(
    check_id: &'static str,
    paper_eq: &'static str,
    e: impl std::fmt::Display,
) -> CheckRecord {
    CheckRecord {
        check_id,
        paper_eq,
        status: Status::Fail,
        measured: f64::NAN,
        tolerance: f64::NAN,
        detail: e.to_string(),
    }
}

type Outcome = fgm_linexp::Result<(f64, f64)>;

fn wrap(
    check_id: &'static str,
    paper_eq: &'static str,
    f: impl FnOnce() -> Outcome,
) -> CheckRecord {
    match f() {
        Ok((m, t)) => record(check_id, paper_eq, m, t),
        Err(e) => failed(check_id, paper_eq, e),
    }
}

fn max_deviation(f: impl Fn(f64, f64, f64) -> fgm_linexp::Result<f64>) -> fgm_linexp::Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y, t) in check_points() {
        worst = worst.max(f(x, y, t)?);
    }
    Ok(worst)
}

pub fn derivative_checks(p: &BleFgmParams) -> Vec<CheckRecord> {
    let open = StencilDomain::Unbounded;
    vec![
        wrap("rev_hazard_max_fd", "rh_T2 = d/dt ln F(t,t)", || {
            let m = max_deviation(|_, _, t| {
                let fd = finite_diff(|s| cdf_max(p, s).unwrap().ln(), t, default_step(t), open)?;
                Ok((fd - reversed_hazard_max(p, t)?).abs())
            })?;
            Ok((m, FD_TOL))
        }),
        wrap("hazard_min_fd", "h_T1 = -d/dt ln Fbar(t,t)", || {
            let m = max_deviation(|_, _, t| {
                let fd = finite_diff(
                    |s| -survival_min(p, s).unwrap().ln(),
                    t,
                    default_step(t),
                    open,
                )?;
                Ok((fd - hazard_min(p, t)?).abs())
            })?;
            Ok((m, FD_TOL))
        }),
        wrap("local_dependence_fd", "gamma = d2/dxdy ln f(x,y)", || {
            let m = max_deviation(|x, y, _| {
                let fd = finite_diff_mixed(
                    |a, b| p.joint_pdf(a, b).unwrap().ln(),
                    x,
                    y,
                    MIXED_STEP,
                    open,
                    open,
                )?;
                Ok((fd - local_dependence(p, x, y)?).abs())
            })?;
            Ok((m, FD_TOL))
        }),
        wrap(
            "hazard_gradient_fd",
            "(h1, h2) = -grad ln Fbar(x,y)",
            || {
                let m = max_deviation(|x, y, _| {
                    let (h1, h2) = hazard_gradient(p, x, y)?;
                    let d1 = finite_diff(
                        |s| -p.joint_survival(s, y).unwrap().ln(),
                        x,
                        default_step(x),
                        open,
                    )?;
                    let d2 = finite_diff(
                        |s| -p.joint_survival(x, s).unwrap().ln(),
                        y,
                        default_step(y),
                        open,
                    )?;
                    Ok((h1 - d1).abs().max((h2 - d2).abs()))
                })?;
                Ok((m, FD_TOL))
            },
        ),
        wrap(
            "theta_partials_fd",
            "Fbar_1 = dFbar/dx, Fbar_2 = dFbar/dy",
            || {
                let m = max_deviation(|x, y, _| {
                    let (s1, s2) = survival_partials(p, x, y)?;
                    let d1 = finite_diff(
                        |s| p.joint_survival(s, y).unwrap(),
                        x,
                        default_step(x),
                        open,
                    )?;
                    let d2 = finite_diff(
                        |s| p.joint_survival(x, s).unwrap(),
                        y,
                        default_step(y),
                        open,
                    )?;
                    Ok((s1 - d1).abs().max((s2 - d2).abs()))
                })?;
                Ok((m, FD_TOL))
            },
        ),
    ]
}

/// Reference point inside the corrected series' validity range.
const CORRECTED_REFERENCE: [f64; 4] = [2.0, 0.2, 2.0, 0.2];

pub fn build_report(p: &BleFgmParams) -> ValidationReport {
    let spec = QuadratureSpec::default();
    let lam = p.lambda;
    let mut checks = Vec::new();

    checks.push(wrap("normalization", "iint f = 1", || {
        let q = integrate_quadrant(|x, y| p.joint_pdf(x, y).unwrap(), &spec)?;
        Ok(((q.value - 1.0).abs(), 1e-6))
    }));
    checks.push(wrap(
        "grade_correlation",
        "12 iint (C(u,v) - uv) = lambda/3",
        || {
            let c = |u: f64, v: f64| u * v * lam * (1.0 - u) * (1.0 - v);
            let q = integrate_rect(c, (0.0, 1.0), (0.0, 1.0), &spec)?;
            Ok(((12.0 * q.value - p.grade_correlation()).abs(), 1e-10))
        },
    ));
    checks.extend(derivative_checks(p));
    checks.push(wrap("theta_origin", "theta(0,0) = 1 + lambda", || {
        Ok((
            (clayton_oakes_theta(p, 0.0, 0.0)? - (1.0 + lam)).abs(),
            1e-12,
        ))
    }));

    let exact = mttf_exact(p);
    checks.push(match mttf_quadrature(p, &spec) {
        Ok(q) => {
            let diff = (exact - q.value).abs();
            let mut r = record(
                "mttf_exact_vs_quadrature",
                "I_X I_Y + lambda K_X K_Y = iint Fbar",
                diff,
                q.error,
            );
            if q.error > 1e-6 * exact {
                r.status = Status::Fail;
                r.detail = format!("quadrature error {:.2e} above 1e-6 relative", q.error);
            }
            r
        }
        Err(e) => failed(
            "mttf_exact_vs_quadrature",
            "I_X I_Y + lambda K_X K_Y = iint Fbar",
            e,
        ),
    });

    let mode = SummationMode::OptimalTruncation;
    checks.push(
        match BleFgmParams::from_rates(p.mx.alpha, 0.0, p.my.alpha, 0.0, lam) {
            Ok(q) => {
                let s = mttf_series_printed(&q, DEFAULT_SERIES_CAP, mode);
                let e = mttf_exact(&q);
                CheckRecord {
                    check_id: "mttf_series_printed_beta0",
                    paper_eq: "printed MTTF double series with alpha^(2m) denominators, beta = 0",
                    status: if s.value == 1.0 {
                        Status::DocumentedDiscrepancy
                    } else {
                        Status::Fail
                    },
                    measured: s.value,
                    tolerance: 0.0,
                    detail: format!("printed series = {}, exact = {e}", s.value),
                }
            }
            Err(_) => CheckRecord {
                check_id: "mttf_series_printed_beta0",
                paper_eq: "printed MTTF double series with alpha^(2m) denominators, beta = 0",
                status: Status::DocumentedDiscrepancy,
                measured: f64::NAN,
                tolerance: 0.0,
                detail: "beta = 0 undefined for alpha = 0".into(),
            },
        },
    );
    {
        let s = mttf_series_printed(p, DEFAULT_SERIES_CAP, mode);
        checks.push(CheckRecord {
            check_id: "mttf_series_printed",
            paper_eq: "printed MTTF double series with alpha^(2m) denominators",
            status: Status::DocumentedDiscrepancy,
            measured: (s.value - exact).abs(),
            tolerance: s.first_omitted_magnitude,
            detail: format!("terms {}, diverged {}", s.terms_used, s.diverged),
        });
    }
    {
        let in_range = p.mx.alpha > 0.0
            && p.my.alpha > 0.0
            && p.mx.beta <= p.mx.alpha * p.mx.alpha
            && p.my.beta <= p.my.alpha * p.my.alpha;
        let [a1, b1, a2, b2] = CORRECTED_REFERENCE;
        let q = if in_range {
            *p
        } else {
            BleFgmParams::from_rates(a1, b1, a2, b2, lam).expect("reference")
        };
        let mut r = wrap(
            "mttf_series_corrected",
            "sum i_m i_n [1 + lambda c_m c_n], alpha^(2m+1)",
            || {
                let s = mttf_series_corrected(&q, DEFAULT_SERIES_CAP, mode)?;
                let e = mttf_exact(&q);
                Ok(((s.value - e).abs(), s.first_omitted_magnitude + 1e-13 * e))
            },
        );
        if !in_range {
            r.detail =
                "beta/alpha^2 > 1 at the given params; evaluated at alpha = 2, beta = 0.2".into();
        }
        checks.push(r);
    }

    checks.push({
        let c = classify_tp2(p);
        let ok = c.determinant_check.consistent_with(c.classification, 1e-12);
        CheckRecord {
            check_id: "tp2_sweep",
            paper_eq: "f(x,y) f(u,v) - f(x,v) f(u,y) has the sign of gamma",
            status: if ok { Status::Pass } else { Status::Fail },
            measured: if lam >= 0.0 {
                c.determinant_check.min
            } else {
                c.determinant_check.max
            },
            tolerance: 1e-12,
            detail: c.classification.name().to_string(),
        }
    });
    checks.push(wrap(
        "hazard_gradient_monotonicity",
        "h1(x, y) monotone in y against sign of lambda",
        || {
            let mut worst: f64 = 0.0;
            for i in 0..10 {
                let x = 0.3 * i as f64;
                let mut prev = hazard_gradient(p, x, 0.0)?.0;
                for j in 1..10 {
                    let cur = hazard_gradient(p, x, 0.3 * j as f64)?.0;
                    let breach = if lam > 0.0 {
                        cur - prev
                    } else if lam < 0.0 {
                        prev - cur
                    } else {
                        (cur - prev).abs()
                    };
                    worst = worst.max(breach);
                    prev = cur;
                }
            }
            Ok((worst, 1e-12))
        },
    ));

    checks.push(
        match (
            cumulative_intensity_series_printed(
                p,
                0.2,
                0.2,
                SeriesCaps::uniform(6),
                SummationMode::ToCap,
            ),
            cumulative_intensity(p, 0.2, 0.2, &spec),
        ) {
            (Ok(s), Ok(q)) => {
                let rel = (s.value / q.value - 1.0).abs();
                CheckRecord {
                    check_id: "cumulative_intensity_series",
                    paper_eq: "five-fold binomial series for Lambda at (0.2, 0.2)",
                    status: if rel <= 0.05 {
                        Status::Pass
                    } else {
                        Status::DocumentedDiscrepancy
                    },
                    measured: rel,
                    tolerance: 0.05,
                    detail: format!("series {}, quadrature {}", s.value, q.value),
                }
            }
            (Err(e), _) | (_, Err(e)) => failed(
                "cumulative_intensity_series",
                "five-fold binomial series for Lambda",
                e,
            ),
        },
    );

    let (s1, s2) = (1.0, 2.0);
    checks.push(wrap(
        "laplace_exact_vs_quadrature",
        "f* = A1 A2 + lambda B1 B2 = iint e^(-s.x) f",
        || {
            let tight = QuadratureSpec::new(1e-12, 1e-11, 1 << 15)?;
            let q = laplace_pdf_quadrature(p, s1, s2, &tight)?;
            Ok(((laplace_pdf(p, s1, s2)? - q.value).abs(), 1e-8))
        },
    ));
    checks.push(match laplace_pdf(p, s1, s2) {
        Ok(e) => {
            let s = laplace_pdf_series_printed(p, s1, s2, DEFAULT_SERIES_CAP, mode);
            CheckRecord {
                check_id: "laplace_series_printed",
                paper_eq: "printed double series for f* with (s+alpha)^(2m) denominators",
                status: Status::DocumentedDiscrepancy,
                measured: (s.value - e).abs(),
                tolerance: s.first_omitted_magnitude,
                detail: format!("series {}, exact {e}", s.value),
            }
        }
        Err(e) => failed("laplace_series_printed", "printed double series for f*", e),
    });
    checks.push(wrap(
        "renewal_transform_identity",
        "s1 s2 M* (1 - f*) = f*",
        || {
            let m = renewal_transform(p, s1, s2)?;
            let f = laplace_pdf(p, s1, s2)?;
            Ok(((s1 * s2 * m * (1.0 - f) - f).abs(), 1e-12))
        },
    ));

    ValidationReport { params: *p, checks }
}

pub fn run(
    flags: &CommonFlags,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = resolve(flags, &Defaults::default())?;
    let report = build_report(&cfg.params);
    let json = json_string(&report);
    let table = report.table();
    match cfg.output_path.as_deref() {
        Some(path) => {
            emit(Some(path), &json, stdout)?;
            emit(None, &table, stdout)?;
        }
        None => {
            emit(None, &json, stdout)?;
            stderr
                .write_all(table.as_bytes())
                .map_err(|e| CliError::io(e.to_string()))?;
        }
    }
    match report.failures() {
        0 => Ok(()),
        n => Err(CliError::validation(format!("{n} check(s) failed"))),
    }
}
