//! The FGM bivariate distribution over two linear exponential marginals.
//!
//! ```text
//! F(x, y)  = F_X F_Y [1 + λ (1 - F_X)(1 - F_Y)]
//! f(x, y)  = f_X f_Y [1 + λ (2F_X - 1)(2F_Y - 1)]
//! F̄(x, y) = (1 - F_X)(1 - F_Y) [1 + λ F_X F_Y]
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::marginal::{LinExpParams, Point};

/// Full parameter vector: both marginals and the dependence parameter `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BleFgmParams {
    pub mx: LinExpParams,
    pub my: LinExpParams,
    pub lambda: f64,
}

/// The marginal evaluations every joint quantity is built from.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pair {
    pub x: Point,
    pub y: Point,
}

fn check_coords(x: f64, y: f64) -> Result<()> {
    if x >= 0.0 && y >= 0.0 {
        Ok(())
    } else {
        domain(format!("coordinates must be >= 0, got ({x}, {y})"))
    }
}

impl BleFgmParams {
    pub fn new(mx: LinExpParams, my: LinExpParams, lambda: f64) -> Result<Self> {
        // Re-validate in case the marginals were built as struct literals.
        LinExpParams::new(mx.alpha, mx.beta)?;
        LinExpParams::new(my.alpha, my.beta)?;
        if !(lambda.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "dependence parameter must satisfy |lambda| <= 1, got {lambda}"
            )));
        }
        Ok(Self { mx, my, lambda })
    }

    /// Convenience constructor from the five scalars `(α₁, β₁, α₂, β₂, λ)`.
    pub fn from_rates(
        alpha1: f64,
        beta1: f64,
        alpha2: f64,
        beta2: f64,
        lambda: f64,
    ) -> Result<Self> {
        Self::new(
            LinExpParams::new(alpha1, beta1)?,
            LinExpParams::new(alpha2, beta2)?,
            lambda,
        )
    }

    /// Same marginals, different dependence parameter.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.mx, self.my, lambda)
    }

    pub(crate) fn pair(&self, x: f64, y: f64) -> Pair {
        Pair {
            x: self.mx.point(x),
            y: self.my.point(y),
        }
    }

    pub(crate) fn cdf_of(&self, p: &Pair) -> f64 {
        p.x.cdf * p.y.cdf * (1.0 + self.lambda * p.x.surv * p.y.surv)
    }

    pub(crate) fn pdf_of(&self, p: &Pair) -> f64 {
        p.x.pdf * p.y.pdf * (1.0 + self.lambda * (2.0 * p.x.cdf - 1.0) * (2.0 * p.y.cdf - 1.0))
    }

    pub(crate) fn survival_of(&self, p: &Pair) -> f64 {
        p.x.surv * p.y.surv * (1.0 + self.lambda * p.x.cdf * p.y.cdf)
    }

    /// Bivariate hazard `f/F̄` in the cancelled form
    /// `h_X h_Y [1 + λ(2F_X - 1)(2F_Y - 1)] / [1 + λF_X F_Y]`.
    pub(crate) fn hazard_of(&self, p: &Pair, x: f64, y: f64) -> f64 {
        let hx = self.mx.alpha + self.mx.beta * x;
        let hy = self.my.alpha + self.my.beta * y;
        hx * hy * (1.0 + self.lambda * (2.0 * p.x.cdf - 1.0) * (2.0 * p.y.cdf - 1.0))
            / (1.0 + self.lambda * p.x.cdf * p.y.cdf)
    }

    pub fn joint_cdf(&self, x: f64, y: f64) -> Result<f64> {
        check_coords(x, y)?;
        Ok(self.cdf_of(&self.pair(x, y)))
    }

    pub fn joint_pdf(&self, x: f64, y: f64) -> Result<f64> {
        check_coords(x, y)?;
        Ok(self.pdf_of(&self.pair(x, y)))
    }

    /// `P[X > x, Y > y]`.
    pub fn joint_survival(&self, x: f64, y: f64) -> Result<f64> {
        check_coords(x, y)?;
        Ok(self.survival_of(&self.pair(x, y)))
    }

    /// Density of `X` given `Y = y`.
    pub fn conditional_pdf_x_given_y(&self, x: f64, y: f64) -> Result<f64> {
        check_coords(x, y)?;
        let p = self.pair(x, y);
        Ok(p.x.pdf * (1.0 + self.lambda * (2.0 * p.x.cdf - 1.0) * (2.0 * p.y.cdf - 1.0)))
    }

    /// `P[X ≤ x | Y ≤ y] = F_X [1 + λ(1 - F_X)(1 - F_Y)]`.
    pub fn conditional_cdf_x_given_y_le(&self, x: f64, y: f64) -> Result<f64> {
        check_coords(x, y)?;
        let p = self.pair(x, y);
        if p.y.cdf == 0.0 {
            return domain(format!("conditioning event Y <= {y} has probability zero"));
        }
        Ok(p.x.cdf * (1.0 + self.lambda * p.x.surv * p.y.surv))
    }

    /// `P[X ≤ x | Y = y] = F_X [1 + λ(F_X - 1)(2F_Y - 1)]`.
    pub fn conditional_cdf_x_given_y_eq(&self, x: f64, y: f64) -> Result<f64> {
        check_coords(x, y)?;
        let p = self.pair(x, y);
        Ok(p.x.cdf * (1.0 - self.lambda * p.x.surv * (2.0 * p.y.cdf - 1.0)))
    }

    /// `r(x, y) = f(x, y)/F̄(x, y)`.
    pub fn bivariate_hazard(&self, x: f64, y: f64) -> Result<f64> {
        check_coords(x, y)?;
        let p = self.pair(x, y);
        if self.survival_of(&p) <= 0.0 {
            return domain(format!("joint survival underflows at ({x}, {y})"));
        }
        Ok(self.hazard_of(&p, x, y))
    }

    /// Pearson correlation of `(F_X(X), F_Y(Y))`: the FGM copula gives
    /// `Cov = ∬(C(u,v) - uv) du dv = λ/36` and `Var = 1/12`, hence `λ/3`.
    pub fn grade_correlation(&self) -> f64 {
        self.lambda / 3.0
    }

    /// Exact draw via the conditional copula inverse.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let u: f64 = rng.random();
        let w: f64 = rng.random();
        let v = conditional_copula_quantile_unchecked(self.lambda, u, w).min(ONE_MINUS_ULP);
        (self.mx.quantile_unchecked(u), self.my.quantile_unchecked(v))
    }
}

const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Inverse in `v` of the conditional copula `∂C/∂u = v[1 + a(1 - v)]`,
/// `a = λ(1 - 2u)`.
///
/// Uses `v = 2w / ((1 + a) + √((1 + a)² - 4aw))`, which covers `a = 0` and has
/// no cancellation.
pub fn conditional_copula_quantile(lambda: f64, u: f64, w: f64) -> Result<f64> {
    if !(lambda.abs() <= 1.0) {
        return domain(format!("|lambda| <= 1 required, got {lambda}"));
    }
    if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&w) {
        return domain(format!("u, w must lie in [0, 1], got ({u}, {w})"));
    }
    Ok(conditional_copula_quantile_unchecked(lambda, u, w))
}

fn conditional_copula_quantile_unchecked(lambda: f64, u: f64, w: f64) -> f64 {
    // The root formula reaches the endpoints only up to rounding.
    if w <= 0.0 {
        return 0.0;
    }
    if w >= 1.0 {
        return 1.0;
    }
    let a = lambda * (1.0 - 2.0 * u);
    let b = 1.0 + a;
    let disc = (b * b - 4.0 * a * w).max(0.0);
    let v = 2.0 * w / (b + disc.sqrt());
    v.clamp(0.0, 1.0)
}
