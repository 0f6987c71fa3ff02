//! Lifetimes of a series system, `T₁ = min(X, Y)`, and a parallel system,
//! `T₂ = max(X, Y)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::joint::BleFgmParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremeKind {
    CdfMax,
    RevHazardMax,
    SurvivalMin,
    HazardMin,
}

impl ExtremeKind {
    pub const ALL: [ExtremeKind; 4] = [
        Self::CdfMax,
        Self::RevHazardMax,
        Self::SurvivalMin,
        Self::HazardMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::CdfMax => "cdf_max",
            Self::RevHazardMax => "rev_hazard_max",
            Self::SurvivalMin => "survival_min",
            Self::HazardMin => "hazard_min",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeCurve {
    pub kind: ExtremeKind,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        domain(format!("time must be >= 0, got {t}"))
    }
}

/// `F(t, t) = F_X F_Y [1 + λ(1 - F_X)(1 - F_Y)]`.
pub fn cdf_max(p: &BleFgmParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(p.cdf_of(&p.pair(t, t)))
}

/// `d/dt ln F(t, t)`:
///
/// ```text
/// f_X/F_X + f_Y/F_Y - λ[f_X(1 - F_Y) + f_Y(1 - F_X)] / [1 + λ(1 - F_X)(1 - F_Y)]
/// ```
pub fn reversed_hazard_max(p: &BleFgmParams, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!(
            "reversed hazard of the maximum needs t > 0, got {t}"
        ));
    }
    let q = p.pair(t, t);
    let (x, y) = (q.x, q.y);
    let correction =
        p.lambda * (x.pdf * y.surv + y.pdf * x.surv) / (1.0 + p.lambda * x.surv * y.surv);
    Ok(x.pdf / x.cdf + y.pdf / y.cdf - correction)
}

/// `F̄(t, t) = (1 - F_X)(1 - F_Y)[1 + λF_X F_Y]`.
pub fn survival_min(p: &BleFgmParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(p.survival_of(&p.pair(t, t)))
}

/// `-d/dt ln F̄(t, t) = h_X + h_Y - λ[f_X F_Y + f_Y F_X]/[1 + λF_X F_Y]`.
pub fn hazard_min(p: &BleFgmParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let q = p.pair(t, t);
    if p.survival_of(&q) <= 0.0 {
        return domain(format!("survival of the minimum underflows at t = {t}"));
    }
    let (x, y) = (q.x, q.y);
    let linear = (p.mx.alpha + p.my.alpha) + (p.mx.beta + p.my.beta) * t;
    let correction = p.lambda * (x.pdf * y.cdf + y.pdf * x.cdf) / (1.0 + p.lambda * x.cdf * y.cdf);
    Ok(linear - correction)
}

pub fn evaluate(p: &BleFgmParams, kind: ExtremeKind, t: f64) -> Result<f64> {
    match kind {
        ExtremeKind::CdfMax => cdf_max(p, t),
        ExtremeKind::RevHazardMax => reversed_hazard_max(p, t),
        ExtremeKind::SurvivalMin => survival_min(p, t),
        ExtremeKind::HazardMin => hazard_min(p, t),
    }
}

/// Rounding slack tolerated before a monotonicity breach counts as real.
const MONOTONE_SLACK: f64 = 4.0 * f64::EPSILON;

fn enforce_monotone(values: &mut [f64], increasing: bool) -> Result<()> {
    for i in 1..values.len() {
        let (prev, cur) = (values[i - 1], values[i]);
        let breach = if increasing { prev - cur } else { cur - prev };
        if breach > MONOTONE_SLACK {
            return Err(Error::AtGridIndex {
                index: i,
                source: Box::new(Error::InvariantViolated(format!(
                    "curve not monotone: {prev} then {cur}"
                ))),
            });
        }
        if breach > 0.0 {
            values[i] = prev;
        }
    }
    Ok(())
}

/// Pointwise evaluation over a strictly increasing, nonnegative grid.
///
/// Probability curves are checked for range and monotonicity; breaches within
/// a few ulps are flattened, larger ones are reported.
pub fn extreme_curve(p: &BleFgmParams, kind: ExtremeKind, t_grid: &[f64]) -> Result<ExtremeCurve> {
    for (i, w) in t_grid.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::AtGridIndex {
                index: i + 1,
                source: Box::new(Error::Domain(
                    "time grid must be strictly increasing".into(),
                )),
            });
        }
    }
    let mut values = Vec::with_capacity(t_grid.len());
    for (index, &t) in t_grid.iter().enumerate() {
        let v = evaluate(p, kind, t).map_err(|e| Error::AtGridIndex {
            index,
            source: Box::new(e),
        })?;
        values.push(v);
    }
    match kind {
        ExtremeKind::CdfMax | ExtremeKind::SurvivalMin => {
            if let Some(index) = values.iter().position(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::AtGridIndex {
                    index,
                    source: Box::new(Error::InvariantViolated(format!(
                        "probability {} outside [0, 1]",
                        values[index]
                    ))),
                });
            }
            enforce_monotone(&mut values, kind == ExtremeKind::CdfMax)?;
        }
        ExtremeKind::RevHazardMax | ExtremeKind::HazardMin => {}
    }
    Ok(ExtremeCurve {
        kind,
        t_grid: t_grid.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::BleFgmParams;
    use crate::numerics::{default_step, finite_diff, StencilDomain};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig1(l: f64) -> BleFgmParams {
        BleFgmParams::from_rates(0.5, 1.5, 0.7, 2.0, l).unwrap()
    }

    fn fig2(l: f64) -> BleFgmParams {
        BleFgmParams::from_rates(0.05, 0.15, 0.07, 0.2, l).unwrap()
    }

    #[test]
    fn cdf_max_values() {
        assert_eq!(cdf_max(&fig1(0.5), 0.0).unwrap(), 0.0);
        let p = fig1(0.0);
        let t = 0.9;
        assert_eq!(
            cdf_max(&p, t).unwrap(),
            p.mx.cdf(t).unwrap() * p.my.cdf(t).unwrap()
        );
        let p = fig1(1.0);
        assert_eq!(cdf_max(&p, 1.0).unwrap(), p.joint_cdf(1.0, 1.0).unwrap());
        assert!(cdf_max(&p, -1.0).is_err());
    }

    #[test]
    fn reversed_hazard_max_values() {
        let p = fig1(0.0);
        let t = 0.6;
        let want = p.mx.reversed_hazard(t).unwrap() + p.my.reversed_hazard(t).unwrap();
        assert!((reversed_hazard_max(&p, t).unwrap() - want).abs() < 1e-14);
        assert!(reversed_hazard_max(&p, 0.0).is_err());

        let p = fig1(0.7);
        let fd = finite_diff(
            |s| cdf_max(&p, s).unwrap().ln(),
            0.8,
            default_step(0.8),
            StencilDomain::Unbounded,
        )
        .unwrap();
        assert!((fd - reversed_hazard_max(&p, 0.8).unwrap()).abs() < 1e-5);

        let m = p.mx;
        for lam in [-1.0, -0.3, 0.4, 1.0] {
            let q = BleFgmParams::new(m, m, lam).unwrap();
            let (f, c) = (m.pdf(1.0).unwrap(), m.cdf(1.0).unwrap());
            let s = 1.0 - c;
            let reduced = 2.0 * f / c - lam * 2.0 * f * s / (1.0 + lam * s * s);
            assert!((reversed_hazard_max(&q, 1.0).unwrap() - reduced).abs() < 1e-12);
        }
    }

    #[test]
    fn survival_min_values() {
        assert_eq!(survival_min(&fig1(-0.4), 0.0).unwrap(), 1.0);
        let p = fig2(0.0);
        assert_eq!(
            survival_min(&p, 3.0).unwrap(),
            p.mx.survival(3.0).unwrap() * p.my.survival(3.0).unwrap()
        );
    }

    #[test]
    fn survival_min_monte_carlo() {
        let p = fig1(0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| {
                let (x, y) = p.sample_pair(&mut rng);
                x.min(y) > 1.0
            })
            .count();
        let want = survival_min(&p, 1.0).unwrap();
        let se = (want * (1.0 - want) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - want).abs() < 3.0 * se);
    }

    #[test]
    fn hazard_min_values() {
        let p = fig1(0.8);
        assert_eq!(hazard_min(&p, 0.0).unwrap(), 0.5 + 0.7);
        let p = fig1(0.0);
        assert!((hazard_min(&p, 1.3).unwrap() - (1.2 + 3.5 * 1.3)).abs() < 1e-15);
        let p = fig2(-1.0);
        let fd = finite_diff(
            |s| -survival_min(&p, s).unwrap().ln(),
            2.0,
            default_step(2.0),
            StencilDomain::Unbounded,
        )
        .unwrap();
        assert!((fd - hazard_min(&p, 2.0).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn hazards_match_log_derivatives_on_grid() {
        for lam in [-1.0, -0.5, 0.5, 1.0] {
            for p in [fig1(lam), fig2(lam)] {
                for i in 1..=50 {
                    let t = i as f64 * 0.08;
                    let h = default_step(t);
                    let rh = finite_diff(
                        |s| cdf_max(&p, s).unwrap().ln(),
                        t,
                        h,
                        StencilDomain::Unbounded,
                    )
                    .unwrap();
                    let hz = finite_diff(
                        |s| -survival_min(&p, s).unwrap().ln(),
                        t,
                        h,
                        StencilDomain::Unbounded,
                    )
                    .unwrap();
                    assert!(
                        (rh - reversed_hazard_max(&p, t).unwrap()).abs() < 1e-5,
                        "lam={lam} t={t}"
                    );
                    assert!(
                        (hz - hazard_min(&p, t).unwrap()).abs() < 1e-5,
                        "lam={lam} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn curves_over_grid() {
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        for lam in [-1.0, 0.0, 1.0] {
            let c = extreme_curve(&fig1(lam), ExtremeKind::CdfMax, &grid).unwrap();
            assert!(c.values.windows(2).all(|w| w[1] >= w[0]));
            assert!(c.values.iter().all(|v| (0.0..=1.0).contains(v)));
        }
        let p = fig1(0.0);
        let s = extreme_curve(&p, ExtremeKind::SurvivalMin, &grid).unwrap();
        for (t, v) in grid.iter().zip(&s.values) {
            assert_eq!(*v, p.mx.survival(*t).unwrap() * p.my.survival(*t).unwrap());
        }
        let h = extreme_curve(&p, ExtremeKind::HazardMin, &grid).unwrap();
        for (t, v) in grid.iter().zip(&h.values) {
            assert!((v - (1.2 + 3.5 * t)).abs() < 1e-13);
        }
    }

    #[test]
    fn curve_errors_carry_index() {
        let grid = [0.0, 0.5, 1.0];
        match extreme_curve(&fig1(0.2), ExtremeKind::RevHazardMax, &grid) {
            Err(Error::AtGridIndex { index: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(extreme_curve(&fig1(0.2), ExtremeKind::CdfMax, &[0.0, 1.0, 1.0]).is_err());
    }
}
