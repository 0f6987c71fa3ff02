use std::f64::consts::PI;

use crate::error::{domain, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `exp(x²)·erfc(x)`.
///
/// Finite for every finite `x ≥ 0`; behaves like `1/(x√π)` for large `x`.
/// Negative arguments are evaluated directly and overflow past `x ≈ -26.6`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 10.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // Continued fraction  erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // evaluated bottom-up; at x ≥ 10 sixty levels are far past convergence.
    let mut tail = x;
    for k in (1..=60).rev() {
        tail = x + (k as f64 * 0.5) / tail;
    }
    FRAC_1_SQRT_PI / tail
}

/// `∫₀^∞ exp(-(a t + b t²/2)) dt` for `a, b ≥ 0`, not both zero.
///
/// For `b > 0` this is `√(π/(2b)) · erfcx(a/√(2b))`, which stays finite when
/// `a²/b` is large.
pub fn gauss_linexp_integral(a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!(
            "gauss_linexp_integral needs finite a, b >= 0 (a={a}, b={b})"
        ));
    }
    if a == 0.0 && b == 0.0 {
        return domain("gauss_linexp_integral diverges at a = b = 0");
    }
    if b == 0.0 {
        return Ok(1.0 / a);
    }
    let root = (2.0 * b).sqrt();
    Ok((PI / (2.0 * b)).sqrt() * erfcx(a / root))
}
