//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Half-lines are mapped onto `[0, 1)` with `t = lower + u/(1-u)`. Two-dimensional
//! integrals are iterated one-dimensional integrals; the inner error estimates
//! are integrated alongside the inner values and added to the outer estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 1 << 15,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol >= 0.0
            && self.rel_tol >= 0.0
            && self.abs_tol + self.rel_tol > 0.0
            && self.max_subdivisions >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "quadrature spec needs abs_tol, rel_tol >= 0 with positive sum and max_subdivisions >= 1, got {self:?}"
            )))
        }
    }

    /// Tighter tolerances used for the inner integral of an iterated 2-D rule.
    fn inner(&self) -> Self {
        Self {
            abs_tol: self.abs_tol * 0.1,
            rel_tol: self.rel_tol * 0.1,
            max_subdivisions: self.max_subdivisions,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral estimate together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadValue {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel. The integrand returns `(value, attached_error)`;
/// the attached error (from an inner integration) is integrated with the
/// Kronrod weights and added to the panel error.
fn kronrod_panel<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (fc, ec) = f(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    let mut attached = ec.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, e1) = f(center - dx)?;
        let (f2, e2) = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        attached += WGK[j] * (e1.abs() + e2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || !err.is_finite() {
        return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok((value, err + attached * scale))
}

fn adaptive<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadValue>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    spec.validate()?;
    if a == b {
        return Ok(QuadValue {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let (v0, e0) = kronrod_panel(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
    });
    // Segments too narrow to split further are parked here.
    let mut frozen: Vec<Segment> = Vec::new();
    let mut total = v0;
    let mut total_err = e0;
    let mut intervals = 1usize;
    loop {
        if total_err <= spec.target(total) {
            break;
        }
        if intervals >= spec.max_subdivisions {
            return Err(Error::ToleranceNotMet {
                estimate: total,
                error: total_err,
                subdivisions: intervals,
            });
        }
        let Some(seg) = heap.pop() else {
            return Err(Error::ToleranceNotMet {
                estimate: total,
                error: total_err,
                subdivisions: intervals,
            });
        };
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b)
            || (seg.b - seg.a).abs() <= 1e3 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
        {
            frozen.push(seg);
            continue;
        }
        let (v1, e1) = kronrod_panel(&mut f, seg.a, mid)?;
        let (v2, e2) = kronrod_panel(&mut f, mid, seg.b)?;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        intervals += 1;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        // Refresh the running sums now and then so cancellation drift cannot accumulate.
        if intervals.is_multiple_of(64) {
            total = heap.iter().chain(frozen.iter()).map(|s| s.value).sum();
            total_err = heap.iter().chain(frozen.iter()).map(|s| s.error).sum();
        }
    }
    let value: f64 = heap.iter().chain(frozen.iter()).map(|s| s.value).sum();
    let error: f64 = heap.iter().chain(frozen.iter()).map(|s| s.error).sum();
    Ok(QuadValue {
        value,
        error,
        subdivisions: intervals,
    })
}

fn ray_map(lower: f64, u: f64) -> (f64, f64) {
    let one_minus = 1.0 - u;
    (lower + u / one_minus, 1.0 / (one_minus * one_minus))
}

fn interval_checked<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadValue>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "interval endpoints must be finite, got [{a}, {b}]"
        )));
    }
    adaptive(&mut f, a, b, spec)
}

fn ray_checked<F>(mut f: F, lower: f64, spec: &QuadratureSpec) -> Result<QuadValue>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !lower.is_finite() {
        return Err(Error::Domain(format!(
            "ray lower bound must be finite, got {lower}"
        )));
    }
    adaptive(
        |u| {
            let (t, jac) = ray_map(lower, u);
            let (v, e) = f(t)?;
            Ok((v * jac, e * jac))
        },
        0.0,
        1.0,
        spec,
    )
}

/// `∫_a^b f(t) dt` on a finite interval.
pub fn integrate_interval<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadValue>
where
    F: FnMut(f64) -> f64,
{
    interval_checked(|t| Ok((f(t), 0.0)), a, b, spec)
}

/// `∫_lower^∞ f(t) dt` for integrands with (at least) exponential decay.
pub fn integrate_ray<F>(mut f: F, lower: f64, spec: &QuadratureSpec) -> Result<QuadValue>
where
    F: FnMut(f64) -> f64,
{
    ray_checked(|t| Ok((f(t), 0.0)), lower, spec)
}

/// `∫_{x0}^{x1} ∫_{y0}^{y1} f(x, y) dy dx` over a finite rectangle.
pub fn integrate_rect<F>(
    mut f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<QuadValue>
where
    F: FnMut(f64, f64) -> f64,
{
    let inner = spec.inner();
    interval_checked(
        |x| {
            let q = integrate_interval(|y| f(x, y), y_range.0, y_range.1, &inner)?;
            Ok((q.value, q.error))
        },
        x_range.0,
        x_range.1,
        spec,
    )
}

/// `∫₀^∞ ∫₀^∞ f(x, y) dy dx` for integrands with exponential tails in both
/// arguments.
pub fn integrate_quadrant<F>(f: F, spec: &QuadratureSpec) -> Result<QuadValue>
where
    F: FnMut(f64, f64) -> f64,
{
    integrate_tail(f, 0.0, 0.0, spec)
}

/// `∫_x^∞ ∫_y^∞ f(u, v) dv du`.
pub fn integrate_tail<F>(mut f: F, x: f64, y: f64, spec: &QuadratureSpec) -> Result<QuadValue>
where
    F: FnMut(f64, f64) -> f64,
{
    let inner = spec.inner();
    ray_checked(
        |u| {
            let q = integrate_ray(|v| f(u, v), y, &inner)?;
            Ok((q.value, q.error))
        },
        x,
        spec,
    )
}
