//! Bivariate Laplace transforms `f*(s₁, s₂) = ∬ e^{-s₁x-s₂y} f(x, y)` and the
//! renewal transform `M* = f*/(s₁s₂(1 - f*))`.
//!
//! Per marginal, with `G = gauss_linexp_integral`,
//!
//! ```text
//! A(s) = ∫ e^{-st} f(t) dt              = 1 - s G(s + α, β)
//! B(s) = ∫ e^{-st} f(t)(2F(t) - 1) dt   = s G(s + 2α, 2β) - s G(s + α, β)
//! ```
//!
//! and `f* = A₁A₂ + λ B₁B₂`.

use crate::error::{domain, Result};
use crate::joint::BleFgmParams;
use crate::marginal::LinExpParams;
use crate::moments::{double_factorial_ratio, signed};
use crate::numerics::{
    gauss_linexp_integral, integrate_quadrant, series_diagonal, sum_guarded, QuadValue,
    QuadratureSpec, SeriesResult, SummationMode,
};

fn check_rates(s1: f64, s2: f64) -> Result<()> {
    if s1 >= 0.0 && s2 >= 0.0 && s1.is_finite() && s2.is_finite() {
        Ok(())
    } else {
        domain(format!(
            "transform variables must be finite and >= 0, got ({s1}, {s2})"
        ))
    }
}

fn transform_parts(m: &LinExpParams, s: f64) -> Result<(f64, f64)> {
    if s == 0.0 {
        return Ok((1.0, 0.0));
    }
    let g1 = gauss_linexp_integral(s + m.alpha, m.beta)?;
    let g2 = gauss_linexp_integral(s + 2.0 * m.alpha, 2.0 * m.beta)?;
    Ok((1.0 - s * g1, s * (g2 - g1)))
}

/// Exact `f*` from the one-dimensional closed forms.
pub fn laplace_pdf(p: &BleFgmParams, s1: f64, s2: f64) -> Result<f64> {
    check_rates(s1, s2)?;
    let (a1, b1) = transform_parts(&p.mx, s1)?;
    let (a2, b2) = transform_parts(&p.my, s2)?;
    Ok(a1 * a2 + p.lambda * b1 * b2)
}

/// `f*` by 2-D quadrature of the weighted density.
pub fn laplace_pdf_quadrature(
    p: &BleFgmParams,
    s1: f64,
    s2: f64,
    spec: &QuadratureSpec,
) -> Result<QuadValue> {
    check_rates(s1, s2)?;
    integrate_quadrant(
        |x, y| (-s1 * x - s2 * y).exp() * p.pdf_of(&p.pair(x, y)),
        spec,
    )
}

/// One marginal's factors of the printed double-series term at index `n`:
/// the prefactor `(-1)^n β^n (2n)!/(2^n n! (s+α)^{2n})`, the numerator
/// `αs + α² + 2nβ + β` and the bracketed `λ`-factor
/// `(αs + α² + 2nβ + β)/(s+α)^{2n} - 2^{n+1}(αs + 2α² + 2nβ + β)/(s+2α)^{2n+1}`.
fn printed_factors(m: &LinExpParams, s: f64, n: usize) -> (f64, f64, f64) {
    let a = s + m.alpha;
    let c = s + 2.0 * m.alpha;
    let pre = signed(n) * double_factorial_ratio(n, m.beta / (a * a));
    let nb = (2 * n + 1) as f64 * m.beta;
    let num = m.alpha * s + m.alpha * m.alpha + nb;
    let num2 = m.alpha * s + 2.0 * m.alpha * m.alpha + nb;
    let tilted =
        num / a.powi(2 * n as i32) - 2f64.powi(n as i32 + 1) * num2 / c.powi(2 * n as i32 + 1);
    (pre, num, tilted)
}

/// The printed double series for `f*`, term for term, along anti-diagonals.
///
/// At `β₁ = β₂ = 0, λ = 0` only the leading term survives and equals `α₁α₂`,
/// not the exact `α₁α₂/((s₁+α₁)(s₂+α₂))`.
pub fn laplace_pdf_series_printed(
    p: &BleFgmParams,
    s1: f64,
    s2: f64,
    cap: usize,
    mode: SummationMode,
) -> SeriesResult {
    let (mx, my, lambda) = (p.mx, p.my, p.lambda);
    let (d1, d2) = (s1 + mx.alpha, s2 + my.alpha);
    let term = move |n: usize, m: usize| {
        let (p1, n1, t1) = printed_factors(&mx, s1, n);
        let (p2, n2, t2) = printed_factors(&my, s2, m);
        p1 * p2 * (n1 * n2 / (d1 * d2) + lambda * t1 * t2)
    };
    sum_guarded(series_diagonal(term), cap, mode)
}

/// `M*(s₁, s₂) = f*/(s₁ s₂ (1 - f*))` for `s₁, s₂ > 0`.
pub fn renewal_transform(p: &BleFgmParams, s1: f64, s2: f64) -> Result<f64> {
    if !(s1 > 0.0 && s2 > 0.0) {
        return domain(format!(
            "renewal transform needs s1, s2 > 0, got ({s1}, {s2})"
        ));
    }
    let f = laplace_pdf(p, s1, s2)?;
    if f >= 1.0 - 1e-15 {
        return domain(format!("f* = {f} too close to 1 at ({s1}, {s2})"));
    }
    Ok(f / (s1 * s2 * (1.0 - f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1(l: f64) -> BleFgmParams {
        BleFgmParams::from_rates(0.5, 1.5, 0.7, 2.0, l).unwrap()
    }

    fn fig2(l: f64) -> BleFgmParams {
        BleFgmParams::from_rates(0.05, 0.15, 0.07, 0.2, l).unwrap()
    }

    #[test]
    fn transform_at_origin_and_exponential_case() {
        for lam in [-1.0, 0.0, 1.0] {
            assert!((laplace_pdf(&fig1(lam), 0.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        }
        let p = BleFgmParams::from_rates(0.8, 0.0, 1.6, 0.0, 0.0).unwrap();
        let want = 0.8 / (1.3 + 0.8) * 1.6 / (0.4 + 1.6);
        assert!((laplace_pdf(&p, 1.3, 0.4).unwrap() - want).abs() < 1e-14);
        assert!(laplace_pdf(&p, -0.1, 0.0).is_err());
    }

    #[test]
    fn exact_matches_quadrature() {
        let spec = QuadratureSpec::new(1e-12, 1e-11, 1 << 15).unwrap();
        for (p, s1, s2) in [
            (fig1(0.5), 1.0, 2.0),
            (fig1(-1.0), 0.3, 0.1),
            (fig2(1.0), 0.05, 0.5),
        ] {
            let q = laplace_pdf_quadrature(&p, s1, s2, &spec).unwrap();
            let e = laplace_pdf(&p, s1, s2).unwrap();
            assert!((q.value - e).abs() < 1e-8, "{e} vs {q:?}");
        }
    }

    #[test]
    fn transform_decreases_along_rays() {
        let p = fig1(0.5);
        let vals: Vec<f64> = (0..20)
            .map(|i| laplace_pdf(&p, 0.2 * i as f64, 0.1 * i as f64).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals.iter().all(|&v| v > 0.0 && v <= 1.0));
    }

    #[test]
    fn printed_series_regressions() {
        let p = BleFgmParams::from_rates(0.8, 0.0, 1.6, 0.0, 0.0).unwrap();
        let r = laplace_pdf_series_printed(&p, 1.0, 2.0, 40, SummationMode::OptimalTruncation);
        assert!((r.value - 0.8 * 1.6).abs() < 1e-15);
        let exact = laplace_pdf(&p, 1.0, 2.0).unwrap();
        assert!((r.value * exact - exact * exact * (1.8 * 3.6)).abs() < 1e-12);

        let q = fig2(0.5);
        let one = laplace_pdf_series_printed(&q, 1.0, 1.0, 1, SummationMode::ToCap);
        let (p1, n1, t1) = printed_factors(&q.mx, 1.0, 0);
        let (p2, n2, t2) = printed_factors(&q.my, 1.0, 0);
        assert_eq!(
            one.value,
            p1 * p2 * (n1 * n2 / (1.05 * 1.07) + 0.5 * t1 * t2)
        );
        let full = laplace_pdf_series_printed(&q, 1.0, 1.0, 40, SummationMode::OptimalTruncation);
        assert!(full.terms_used >= 1 && full.first_omitted_magnitude >= 0.0);
    }

    #[test]
    fn renewal_transform_values() {
        let p = BleFgmParams::from_rates(1.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!((laplace_pdf(&p, 1.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((renewal_transform(&p, 1.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let q = fig1(-0.5);
        let m = renewal_transform(&q, 2.0, 3.0).unwrap();
        let f = laplace_pdf(&q, 2.0, 3.0).unwrap();
        assert!((6.0 * m * (1.0 - f) - f).abs() < 1e-12);
        assert!(
            renewal_transform(&q, 1.0, 1.0).unwrap() > renewal_transform(&q, 2.0, 2.0).unwrap()
        );
        assert!(renewal_transform(&q, 0.0, 1.0).is_err());
    }
}
