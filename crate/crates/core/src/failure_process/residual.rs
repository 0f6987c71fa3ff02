//! Monte Carlo check of the renewal equation
//! `M(x, y) = F(x, y) + ∬_{[0,x]×[0,y]} M(x - u, y - v) f(u, v) du dv`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::renewal::renewal_trace;
use super::{chunk_ranges, Moments, Window};
use crate::error::{Error, Result};
use crate::joint::BleFgmParams;

/// Mean residual and its standard error at each check point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub points: Vec<(f64, f64)>,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub replications: usize,
}

impl ResidualReport {
    /// Largest `|mean|/SE` over the check points.
    pub fn max_z(&self) -> f64 {
        self.mean
            .iter()
            .zip(&self.std_error)
            .map(|(m, s)| {
                if *s > 0.0 {
                    m.abs() / s
                } else if *m == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Prefix sums `P[i][j] = Σ_{a≤i, b≤j} w_a w_b f(a h_x, b h_y) h_x h_y` with
/// trapezoid weights `w_0 = 1/2`, `w_a = 1` otherwise. The far-edge weights
/// never matter because the count vanishes on the axes.
struct Kernel {
    size: usize,
    prefix: Vec<f64>,
}

impl Kernel {
    fn new(p: &BleFgmParams, hx: f64, hy: f64, size: usize) -> Self {
        let w = |a: usize| if a == 0 { 0.5 } else { 1.0 };
        let mut prefix = vec![0.0; size * size];
        for a in 0..size {
            let mut row = 0.0;
            for b in 0..size {
                let (x, y) = (a as f64 * hx, b as f64 * hy);
                row += w(a) * w(b) * p.pdf_of(&p.pair(x, y)) * hx * hy;
                let above = if a > 0 {
                    prefix[(a - 1) * size + b]
                } else {
                    0.0
                };
                prefix[a * size + b] = above + row;
            }
        }
        Self { size, prefix }
    }

    fn at(&self, i: i64, j: i64) -> f64 {
        if i < 0 || j < 0 {
            return 0.0;
        }
        self.prefix[i as usize * self.size + j as usize]
    }
}

/// Per replicate `i`, `R_i = N_i(x, y) - F(x, y) - (N_i ⋆ f)(x, y)` with the
/// convolution done by the trapezoid rule on a `lattice × lattice` mesh of the
/// window. Check points are the `checks × checks` mesh of `(0, x_max] ×
/// (0, y_max]`; `lattice` must be a multiple of `checks`.
pub fn renewal_equation_residual(
    p: &BleFgmParams,
    window: Window,
    replications: usize,
    master_seed: u64,
    lattice: usize,
    checks: usize,
) -> Result<ResidualReport> {
    if checks == 0 || lattice == 0 || !lattice.is_multiple_of(checks) {
        return Err(Error::InvalidParameter(format!(
            "lattice {lattice} must be a positive multiple of checks {checks}"
        )));
    }
    if replications < 2 {
        return Err(Error::InvalidParameter(
            "need at least two replications".into(),
        ));
    }
    let hx = window.x_max / lattice as f64;
    let hy = window.y_max / lattice as f64;
    let kernel = Kernel::new(p, hx, hy, lattice + 1);
    let stride = lattice / checks;
    let nodes: Vec<(i64, i64)> = (1..=checks)
        .flat_map(|i| (1..=checks).map(move |j| ((i * stride) as i64, (j * stride) as i64)))
        .collect();
    let points: Vec<(f64, f64)> = nodes
        .iter()
        .map(|&(i, j)| (i as f64 * hx, j as f64 * hy))
        .collect();
    let cdf: Vec<f64> = points
        .iter()
        .map(|&(x, y)| p.cdf_of(&p.pair(x, y)))
        .collect();

    let per_chunk: Vec<Vec<Moments>> = chunk_ranges(replications)
        .into_par_iter()
        .map(|range| {
            let mut acc = vec![Moments::default(); nodes.len()];
            for rep in range {
                let trace = renewal_trace(p, window, master_seed, rep as u64);
                let cells: Vec<(i64, i64)> = trace
                    .events
                    .iter()
                    .map(|&(x, y)| ((x / hx).ceil() as i64, (y / hy).ceil() as i64))
                    .collect();
                for (k, &(ni, nj)) in nodes.iter().enumerate() {
                    let (x, y) = points[k];
                    let mut count = 0.0;
                    let mut conv = 0.0;
                    for (&(ex, ey), &(ci, cj)) in trace.events.iter().zip(&cells) {
                        if ex <= x && ey <= y {
                            count += 1.0;
                        }
                        conv += kernel.at(ni - ci, nj - cj);
                    }
                    acc[k].push(count - cdf[k] - conv);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Moments::default(); nodes.len()];
    for acc in per_chunk {
        for (t, a) in total.iter_mut().zip(acc) {
            *t = t.merge(a);
        }
    }
    Ok(ResidualReport {
        points,
        mean: total.iter().map(|m| m.mean).collect(),
        std_error: total.iter().map(Moments::std_error).collect(),
        replications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_total_approximates_joint_cdf() {
        let p = BleFgmParams::from_rates(0.5, 1.5, 0.7, 2.0, 0.5).unwrap();
        let n = 512;
        let k = Kernel::new(&p, 2.0 / n as f64, 2.0 / n as f64, n + 1);
        // Adding the missing far-edge half weights gives the plain trapezoid rule.
        let mut trap = k.at(n as i64, n as i64);
        let h = 2.0 / n as f64;
        let w = |a: usize| if a == 0 || a == n { 0.5 } else { 1.0 };
        for a in 0..=n {
            trap -= 0.5 * w(a) * p.joint_pdf(a as f64 * h, 2.0).unwrap() * h * h;
            trap -= 0.5 * w(a) * p.joint_pdf(2.0, a as f64 * h).unwrap() * h * h;
        }
        trap += 0.25 * p.joint_pdf(2.0, 2.0).unwrap() * h * h;
        assert!((trap - p.joint_cdf(2.0, 2.0).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn residual_centred_at_moderate_size() {
        let p = BleFgmParams::from_rates(0.5, 1.5, 0.7, 2.0, 0.5).unwrap();
        let r = renewal_equation_residual(&p, Window::new(2.0, 2.0).unwrap(), 20_000, 11, 256, 8)
            .unwrap();
        assert_eq!(r.points.len(), 64);
        assert!(r.max_z() < 5.0, "max z {}", r.max_z());
        assert!(
            renewal_equation_residual(&p, Window::new(2.0, 2.0).unwrap(), 100, 11, 100, 8).is_err()
        );
    }
}
