//! Cumulative intensity `Λ(x, y) = ∫₀^x∫₀^y r(u, v) dv du` of the minimal
//! repair process.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::joint::BleFgmParams;
use crate::numerics::{
    integrate_rect, sum_guarded, QuadValue, QuadratureSpec, SeriesResult, SummationMode,
};

/// By 2-D quadrature of the bivariate hazard.
pub fn cumulative_intensity(
    p: &BleFgmParams,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<QuadValue> {
    if !(x >= 0.0 && y >= 0.0) {
        return domain(format!("coordinates must be >= 0, got ({x}, {y})"));
    }
    if !(p.joint_survival(x, y)? > 0.0) {
        return domain(format!(
            "joint survival underflows inside [0, {x}] x [0, {y}]"
        ));
    }
    if x == 0.0 || y == 0.0 {
        return Ok(QuadValue {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    integrate_rect(
        |u, v| p.hazard_of(&p.pair(u, v), u, v),
        (0.0, x),
        (0.0, y),
        spec,
    )
}

/// Number of values each index of the five-fold expansion takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesCaps {
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub m: usize,
}

impl SeriesCaps {
    pub fn uniform(c: usize) -> Self {
        Self {
            k: c,
            r: c,
            s: c,
            n: c,
            m: c,
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `F^a/a`, the integral of `f F^{a-1}` from 0.
fn moment(f: f64, a: usize) -> f64 {
    f.powi(a as i32) / a as f64
}

/// `2F^{a+1}/(a+1) - F^a/a`, the integral of `f (2F - 1) F^{a-1}` from 0.
fn tilted(f: f64, a: usize) -> f64 {
    2.0 * moment(f, a + 1) - moment(f, a)
}

/// The binomial expansion of `Λ` in powers of the marginal cdfs, read as an
/// independent five-fold sum
///
/// ```text
/// Σ_{k,r,s,n,m} (-1)^{k+n+m} λ^k C(k+r, r) C(k+s, s) C(k, n) C(k, m)
///     · [F_X^a F_Y^b/(ab) + λ (2F_X^{a+1}/(a+1) - F_X^a/a)(2F_Y^{b+1}/(b+1) - F_Y^b/b)]
/// ```
///
/// with `a = k+n+r+1` and `b = k+m+s+1`. The geometric expansions in `r` and
/// `s` run to their caps; `n, m ≤ k` because `C(k, ·)` vanishes beyond. Each
/// `k` slice is one term handed to [`sum_guarded`].
pub fn cumulative_intensity_series_printed(
    p: &BleFgmParams,
    x: f64,
    y: f64,
    caps: SeriesCaps,
    mode: SummationMode,
) -> Result<SeriesResult> {
    if [caps.k, caps.r, caps.s, caps.n, caps.m].contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "series caps must be >= 1, got {caps:?}"
        )));
    }
    let fx = p.mx.cdf(x)?;
    let fy = p.my.cdf(y)?;
    let lambda = p.lambda;
    let slice = move |k: usize| {
        let mut acc = 0.0;
        for r in 0..caps.r {
            for s in 0..caps.s {
                for n in 0..caps.n.min(k + 1) {
                    for m in 0..caps.m.min(k + 1) {
                        let sign = if (k + n + m).is_multiple_of(2) {
                            1.0
                        } else {
                            -1.0
                        };
                        let c = sign
                            * lambda.powi(k as i32)
                            * binomial(k + r, r)
                            * binomial(k + s, s)
                            * binomial(k, n)
                            * binomial(k, m);
                        let a = k + n + r + 1;
                        let b = k + m + s + 1;
                        acc += c
                            * (moment(fx, a) * moment(fy, b)
                                + lambda * tilted(fx, a) * tilted(fy, b));
                    }
                }
            }
        }
        acc
    };
    Ok(sum_guarded(slice, caps.k, mode))
}
