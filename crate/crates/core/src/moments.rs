//! The product moment `E[XY] = ∬ F̄(x, y) dx dy` (reported as MTTF) and the
//! one-dimensional integrals it factorizes into.
//!
//! `∬F̄ = I_X I_Y + λ K_X K_Y` with `I = ∫(1 - F)` and `K = ∫F(1 - F)`.
//! Exact values come from [`gauss_linexp_integral`]. Two term-by-term series
//! are provided as well: the printed expansion, whose powers of `α` are one
//! short, and the corrected expansion obtained from
//! `∫ t^{2m} e^{-αt} dt = (2m)!/α^{2m+1}`. Both are asymptotic, not convergent.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::joint::BleFgmParams;
use crate::marginal::LinExpParams;
use crate::numerics::series_diagonal;
use crate::numerics::{
    gauss_linexp_integral, integrate_quadrant, sum_guarded, QuadValue, QuadratureSpec,
    SeriesResult, SummationMode, DEFAULT_SERIES_CAP,
};

/// All four evaluation paths of the product moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MttfReport {
    pub exact: f64,
    pub quadrature: QuadValue,
    pub series_printed: SeriesResult,
    /// `None` when a marginal has `α = 0`, where the expansion does not exist.
    pub series_corrected: Option<SeriesResult>,
}

/// `∫₀^∞ (1 - F(t)) dt`, the marginal mean.
pub fn tail_integral_exact(m: &LinExpParams) -> f64 {
    gauss_linexp_integral(m.alpha, m.beta).expect("validated marginal")
}

/// `∫₀^∞ F(t)(1 - F(t)) dt = G(α, β) - G(2α, 2β)`.
pub fn cdf_tail_product_integral_exact(m: &LinExpParams) -> f64 {
    let whole = gauss_linexp_integral(m.alpha, m.beta).expect("validated marginal");
    let squared = gauss_linexp_integral(2.0 * m.alpha, 2.0 * m.beta).expect("validated marginal");
    whole - squared
}

pub fn mttf_exact(p: &BleFgmParams) -> f64 {
    tail_integral_exact(&p.mx) * tail_integral_exact(&p.my)
        + p.lambda * cdf_tail_product_integral_exact(&p.mx) * cdf_tail_product_integral_exact(&p.my)
}

/// `(2m)!/(2^m m!)`, i.e. `(2m-1)!!`, with `β^m/α^{2m}` folded in step by step
/// to stay finite as long as the terms themselves are.
pub(crate) fn double_factorial_ratio(m: usize, ratio: f64) -> f64 {
    (1..=m).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 * ratio)
}

pub(crate) fn signed(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Printed tail-integral term `(-1)^m β^m Γ(2m+1)/(2^m α^{2m} m!)`.
pub(crate) fn printed_tail_term(m: &LinExpParams, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    signed(k) * double_factorial_ratio(k, m.beta / (m.alpha * m.alpha))
}

/// Corrected tail-integral term `(-1)^m β^m (2m)!/(2^m m! α^{2m+1})`.
pub(crate) fn corrected_tail_term(m: &LinExpParams, k: usize) -> f64 {
    printed_tail_term(m, k) / m.alpha
}

/// The printed double series, summed along anti-diagonals `m + n = d`:
///
/// ```text
/// Σ (-1)^{m+n} β₁^m β₂^n Γ(2m+1) Γ(2n+1) / (2^{m+n} α₁^{2m} α₂^{2n} m! n!)
///     · [1 + λ (2^m - 1)(2^n - 1)/2^{m+n}]
/// ```
///
/// At `β₁ = β₂ = 0` only the `m = n = 0` term survives and the sum is exactly
/// one, whatever `λ` and the `α`'s are.
pub fn mttf_series_printed(p: &BleFgmParams, cap: usize, mode: SummationMode) -> SeriesResult {
    let (mx, my, lambda) = (p.mx, p.my, p.lambda);
    let term = move |m: usize, n: usize| {
        let cm = 1.0 - 0.5f64.powi(m as i32);
        let cn = 1.0 - 0.5f64.powi(n as i32);
        printed_tail_term(&mx, m) * printed_tail_term(&my, n) * (1.0 + lambda * cm * cn)
    };
    sum_guarded(series_diagonal(term), cap, mode)
}

/// Term-by-term series with the exponents fixed: `Σ i_m i_n [1 + λ c_m c_n]`,
/// `c_m = (2^{m+1} - 1)/2^{m+1}`, along anti-diagonals.
pub fn mttf_series_corrected(
    p: &BleFgmParams,
    cap: usize,
    mode: SummationMode,
) -> Result<SeriesResult> {
    if p.mx.alpha == 0.0 || p.my.alpha == 0.0 {
        return domain(
            "corrected series expands around the exponential and needs alpha > 0 in both marginals",
        );
    }
    let (mx, my, lambda) = (p.mx, p.my, p.lambda);
    let term = move |m: usize, n: usize| {
        let cm = 1.0 - 0.5f64.powi(m as i32 + 1);
        let cn = 1.0 - 0.5f64.powi(n as i32 + 1);
        corrected_tail_term(&mx, m) * corrected_tail_term(&my, n) * (1.0 + lambda * cm * cn)
    };
    Ok(sum_guarded(series_diagonal(term), cap, mode))
}

/// `∬ F̄` by 2-D quadrature.
pub fn mttf_quadrature(p: &BleFgmParams, spec: &QuadratureSpec) -> Result<QuadValue> {
    integrate_quadrant(|x, y| p.survival_of(&p.pair(x, y)), spec)
}

pub fn mttf_report(p: &BleFgmParams, spec: &QuadratureSpec) -> Result<MttfReport> {
    let exact = mttf_exact(p);
    let quadrature = mttf_quadrature(p, spec)?;
    Ok(MttfReport {
        exact,
        quadrature,
        series_printed: mttf_series_printed(
            p,
            DEFAULT_SERIES_CAP,
            SummationMode::OptimalTruncation,
        ),
        series_corrected: mttf_series_corrected(
            p,
            DEFAULT_SERIES_CAP,
            SummationMode::OptimalTruncation,
        )
        .ok(),
    })
}
