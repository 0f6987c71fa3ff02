//! Dependence diagnostics: the local dependence function, total positivity
//! of order two, the hazard gradient and the Clayton–Oakes cross-ratio.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::joint::{BleFgmParams, Pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    #[serde(rename = "TP2")]
    Tp2,
    #[serde(rename = "RR2")]
    Rr2,
    Independent,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Self::Tp2 => "TP2",
            Self::Rr2 => "RR2",
            Self::Independent => "independent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

/// Extremes of `f(x,y)f(u,v) - f(x,v)f(u,y)` over all `x ≤ u`, `y ≤ v` of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantSweep {
    pub min: f64,
    pub max: f64,
    pub pairs: usize,
}

impl DeterminantSweep {
    /// Whether every determinant has the sign the class demands, up to `tol`.
    pub fn consistent_with(&self, class: Classification, tol: f64) -> bool {
        match class {
            Classification::Tp2 => self.min >= -tol,
            Classification::Rr2 => self.max <= tol,
            Classification::Independent => self.min >= -tol && self.max <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceClass {
    pub classification: Classification,
    pub gamma_sign: Sign,
    pub determinant_check: DeterminantSweep,
}

fn check_coords(x: f64, y: f64) -> Result<()> {
    if x >= 0.0 && y >= 0.0 {
        Ok(())
    } else {
        domain(format!("coordinates must be >= 0, got ({x}, {y})"))
    }
}

fn bracket(p: &BleFgmParams, q: &Pair) -> f64 {
    1.0 + p.lambda * (2.0 * q.x.cdf - 1.0) * (2.0 * q.y.cdf - 1.0)
}

/// `γ = ∂²/∂x∂y ln f = 4λ f_X f_Y / [1 + λ(2F_X - 1)(2F_Y - 1)]²`.
pub fn local_dependence(p: &BleFgmParams, x: f64, y: f64) -> Result<f64> {
    check_coords(x, y)?;
    let q = p.pair(x, y);
    if !(p.pdf_of(&q) > 0.0) {
        return domain(format!("joint density vanishes at ({x}, {y})"));
    }
    let b = bracket(p, &q);
    Ok(4.0 * p.lambda * q.x.pdf * q.y.pdf / (b * b))
}

/// Labels the law by the sign of `λ`, which is the sign of `γ`, and records a
/// brute-force determinant sweep on a 10×10 grid of marginal deciles.
pub fn classify_tp2(p: &BleFgmParams) -> DependenceClass {
    let (classification, gamma_sign) = if p.lambda > 0.0 {
        (Classification::Tp2, Sign::Positive)
    } else if p.lambda < 0.0 {
        (Classification::Rr2, Sign::Negative)
    } else {
        (Classification::Independent, Sign::Zero)
    };
    let xs: Vec<f64> = (0..10)
        .map(|i| p.mx.quantile_unchecked(i as f64 / 10.0))
        .collect();
    let ys: Vec<f64> = (0..10)
        .map(|i| p.my.quantile_unchecked(i as f64 / 10.0))
        .collect();
    DependenceClass {
        classification,
        gamma_sign,
        determinant_check: determinant_sweep(p, &xs, &ys),
    }
}

/// Evaluates every 2×2 minor of the density on the grid `xs × ys`.
pub fn determinant_sweep(p: &BleFgmParams, xs: &[f64], ys: &[f64]) -> DeterminantSweep {
    let f: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| ys.iter().map(|&y| p.pdf_of(&p.pair(x, y))).collect())
        .collect();
    let mut sweep = DeterminantSweep {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        pairs: 0,
    };
    for i in 0..xs.len() {
        for k in i..xs.len() {
            for j in 0..ys.len() {
                for l in j..ys.len() {
                    let det = f[i][j] * f[k][l] - f[i][l] * f[k][j];
                    sweep.min = sweep.min.min(det);
                    sweep.max = sweep.max.max(det);
                    sweep.pairs += 1;
                }
            }
        }
    }
    sweep
}

/// `(-∂/∂x ln F̄, -∂/∂y ln F̄)`, with
/// `h₁ = h_X [1 + λF_Y(2F_X - 1)] / [1 + λF_X F_Y]` and `h₂` symmetric.
pub fn hazard_gradient(p: &BleFgmParams, x: f64, y: f64) -> Result<(f64, f64)> {
    check_coords(x, y)?;
    let q = p.pair(x, y);
    if !(p.survival_of(&q) > 0.0) {
        return domain(format!("joint survival underflows at ({x}, {y})"));
    }
    let hx = p.mx.alpha + p.mx.beta * x;
    let hy = p.my.alpha + p.my.beta * y;
    let d = 1.0 + p.lambda * q.x.cdf * q.y.cdf;
    let h1 = hx * (1.0 + p.lambda * q.y.cdf * (2.0 * q.x.cdf - 1.0)) / d;
    let h2 = hy * (1.0 + p.lambda * q.x.cdf * (2.0 * q.y.cdf - 1.0)) / d;
    Ok((h1, h2))
}

/// `(∂F̄/∂x, ∂F̄/∂y)`; both are negative wherever the density is positive.
pub fn survival_partials(p: &BleFgmParams, x: f64, y: f64) -> Result<(f64, f64)> {
    check_coords(x, y)?;
    let q = p.pair(x, y);
    Ok(partials_of(p, &q))
}

fn partials_of(p: &BleFgmParams, q: &Pair) -> (f64, f64) {
    let (x, y) = (q.x, q.y);
    let d1 = -x.pdf * y.surv * (1.0 + p.lambda * y.cdf * (2.0 * x.cdf - 1.0));
    let d2 = -y.pdf * x.surv * (1.0 + p.lambda * x.cdf * (2.0 * y.cdf - 1.0));
    (d1, d2)
}

/// `θ = F̄ f / (F̄₁ F̄₂)`; one under independence and `1 + λ` at the origin.
pub fn clayton_oakes_theta(p: &BleFgmParams, x: f64, y: f64) -> Result<f64> {
    check_coords(x, y)?;
    let q = p.pair(x, y);
    let surv = p.survival_of(&q);
    if !(surv > 0.0) {
        return domain(format!("joint survival underflows at ({x}, {y})"));
    }
    let (d1, d2) = partials_of(p, &q);
    if d1 == 0.0 || d2 == 0.0 {
        return domain(format!("a survival partial vanishes at ({x}, {y})"));
    }
    Ok(surv * p.pdf_of(&q) / (d1 * d2))
}
