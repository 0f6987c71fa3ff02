use crate::error::{domain, Result};

/// Where a finite-difference stencil is allowed to sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StencilDomain {
    Unbounded,
    /// Points below `bound` are off-limits. With `one_sided_fallback` the
    /// stencil switches to a second-order forward formula instead of failing.
    LowerBound {
        bound: f64,
        one_sided_fallback: bool,
    },
}

impl StencilDomain {
    pub fn with_fallback(bound: f64) -> Self {
        StencilDomain::LowerBound {
            bound,
            one_sided_fallback: true,
        }
    }

    /// `Ok(true)` for central, `Ok(false)` for forward differences.
    fn central(&self, t: f64, h: f64) -> Result<bool> {
        match *self {
            StencilDomain::Unbounded => Ok(true),
            StencilDomain::LowerBound {
                bound,
                one_sided_fallback,
            } => {
                if t < bound {
                    return domain(format!("stencil centre {t} below domain bound {bound}"));
                }
                if t - h >= bound {
                    Ok(true)
                } else if one_sided_fallback {
                    Ok(false)
                } else {
                    domain(format!(
                        "stencil [{}, {}] leaves the domain [{bound}, ∞)",
                        t - h,
                        t + h
                    ))
                }
            }
        }
    }
}

/// Default step `max(1e-5, 1e-5·|t|)`.
pub fn default_step(t: f64) -> f64 {
    1e-5 * t.abs().max(1.0)
}

/// Second-order weights for the first derivative: offsets in units of `h`.
fn weights(central: bool) -> [(f64, f64); 3] {
    if central {
        [(-1.0, -0.5), (0.0, 0.0), (1.0, 0.5)]
    } else {
        [(0.0, -1.5), (1.0, 2.0), (2.0, -0.5)]
    }
}

/// First derivative by central differences (or the forward fallback).
pub fn finite_diff<F>(mut f: F, t: f64, h: f64, dom: StencilDomain) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(h > 0.0) {
        return domain(format!("finite-difference step must be positive, got {h}"));
    }
    let central = dom.central(t, h)?;
    let mut acc = 0.0;
    for (off, w) in weights(central) {
        if w != 0.0 {
            acc += w * f(t + off * h);
        }
    }
    Ok(acc / h)
}

/// Mixed second derivative `∂²g/∂x∂y`: the four-point central stencil, or a
/// tensor product with forward differences along any axis that would leave
/// the domain.
pub fn finite_diff_mixed<G>(
    mut g: G,
    x: f64,
    y: f64,
    h: f64,
    dom_x: StencilDomain,
    dom_y: StencilDomain,
) -> Result<f64>
where
    G: FnMut(f64, f64) -> f64,
{
    if !(h > 0.0) {
        return domain(format!("finite-difference step must be positive, got {h}"));
    }
    let wx = weights(dom_x.central(x, h)?);
    let wy = weights(dom_y.central(y, h)?);
    let mut acc = 0.0;
    for (ox, a) in wx {
        if a == 0.0 {
            continue;
        }
        for (oy, b) in wy {
            if b != 0.0 {
                acc += a * b * g(x + ox * h, y + oy * h);
            }
        }
    }
    Ok(acc / (h * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_derivative() {
        let d = finite_diff(|t| t * t, 3.0, 1e-4, StencilDomain::Unbounded).unwrap();
        assert!((d - 6.0).abs() < 1e-6);
    }

    #[test]
    fn bilinear_mixed() {
        let d = finite_diff_mixed(
            |x, y| x * y,
            1.0,
            1.0,
            1e-4,
            StencilDomain::Unbounded,
            StencilDomain::Unbounded,
        )
        .unwrap();
        assert!((d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn forward_fallback_at_boundary() {
        let d = finite_diff(|t| t * t * t, 0.0, 1e-4, StencilDomain::with_fallback(0.0)).unwrap();
        assert!(d.abs() < 1e-7);
        let d = finite_diff_mixed(
            |x, y| x * x * y + y,
            0.0,
            0.5,
            1e-4,
            StencilDomain::with_fallback(0.0),
            StencilDomain::with_fallback(0.0),
        )
        .unwrap();
        assert!(d.abs() < 1e-6);
    }

    #[test]
    fn leaving_domain_without_fallback_fails() {
        let dom = StencilDomain::LowerBound {
            bound: 0.0,
            one_sided_fallback: false,
        };
        assert!(finite_diff(|t| t, 1e-6, 1e-4, dom).is_err());
        assert!(finite_diff(|t| t, -1.0, 1e-4, StencilDomain::with_fallback(0.0)).is_err());
        assert!(finite_diff(|t| t, 1.0, 0.0, StencilDomain::Unbounded).is_err());
    }

    #[test]
    fn default_step_scales() {
        assert_eq!(default_step(0.3), 1e-5);
        assert_eq!(default_step(-200.0), 2e-3);
    }
}
