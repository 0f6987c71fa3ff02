//! The linear exponential (linear failure-rate) lifetime distribution with
//! hazard `α + βt`.
//!
//! `β = 0` gives the exponential law and `α = 0` a Rayleigh-type law.

use std::f64::consts::LN_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Rate pair `(α, β)` of one marginal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinExpParams {
    pub alpha: f64,
    pub beta: f64,
}

/// `F`, `1 - F` and `f` at one time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Point {
    pub cdf: f64,
    pub surv: f64,
    pub pdf: f64,
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && !t.is_nan() {
        Ok(())
    } else {
        domain(format!("time must be >= 0, got {t}"))
    }
}

impl LinExpParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = alpha.is_finite()
            && beta.is_finite()
            && alpha >= 0.0
            && beta >= 0.0
            && alpha + beta > 0.0;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "linear exponential rates need alpha, beta >= 0 and alpha + beta > 0, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Exponential marginal with rate `alpha`.
    pub fn exponential(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0)
    }

    /// `H(t) = αt + βt²/2`.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        t * (self.alpha + 0.5 * self.beta * t)
    }

    /// Evaluates `F` and `1 - F` so that they sum to one exactly and each keeps
    /// full relative precision on its own side of the median.
    pub(crate) fn cdf_survival(&self, t: f64) -> (f64, f64) {
        let h = self.cumulative_hazard(t);
        if h < LN_2 {
            let cdf = -(-h).exp_m1();
            (cdf, 1.0 - cdf)
        } else {
            let surv = (-h).exp();
            (1.0 - surv, surv)
        }
    }

    pub(crate) fn point(&self, t: f64) -> Point {
        let (cdf, surv) = self.cdf_survival(t);
        let pdf = (self.alpha + self.beta * t) * (-self.cumulative_hazard(t)).exp();
        Point { cdf, surv, pdf }
    }

    /// `(α + βt)·exp(-(αt + βt²/2))`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.point(t).pdf)
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.cdf_survival(t).0)
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.cdf_survival(t).1)
    }

    /// `α + βt`.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.alpha + self.beta * t)
    }

    /// `f(t)/F(t)`, the log-derivative of the distribution function.
    pub fn reversed_hazard(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("reversed hazard needs t > 0, got {t}"));
        }
        let p = self.point(t);
        Ok(p.pdf / p.cdf)
    }

    /// `(β - (α + βt)²)/(α + βt)`, the slope of `ln f`.
    ///
    /// Kept alongside [`Self::reversed_hazard`]; the two are different
    /// quantities.
    pub fn log_density_slope(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let h = self.alpha + self.beta * t;
        if h == 0.0 {
            return domain("log-density slope undefined where alpha + beta t = 0");
        }
        Ok((self.beta - h * h) / h)
    }

    /// Inverse of the distribution function.
    ///
    /// Solves `αt + βt²/2 = -ln(1-u)` through the cancellation-free root
    /// `t = 2L/(α + √(α² + 2βL))`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return domain(format!("quantile needs 0 <= u < 1, got {u}"));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        let l = -(-u).ln_1p();
        if l == 0.0 {
            return 0.0;
        }
        let root = (self.alpha * self.alpha + 2.0 * self.beta * l).sqrt();
        2.0 * l / (self.alpha + root)
    }

    /// Inverse-transform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile_unchecked(rng.random::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{finite_diff, integrate_ray, QuadratureSpec, StencilDomain};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig1_x() -> LinExpParams {
        LinExpParams::new(0.5, 1.5).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(LinExpParams::new(0.0, 0.0).is_err());
        assert!(LinExpParams::new(-0.1, 1.0).is_err());
        assert!(LinExpParams::new(1.0, f64::NAN).is_err());
        assert!(LinExpParams::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn pdf_examples() {
        let e = LinExpParams::exponential(1.0).unwrap();
        assert_eq!(e.pdf(0.0).unwrap(), 1.0);
        let p = fig1_x();
        assert!((p.pdf(1.0).unwrap() - 2.0 * (-1.25f64).exp()).abs() < 1e-15);
        assert_eq!(p.pdf(0.0).unwrap(), 0.5);
        assert!(p.pdf(-1e-9).is_err());
        let q = integrate_ray(|t| p.pdf(t).unwrap(), 0.0, &QuadratureSpec::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_examples() {
        let e = LinExpParams::exponential(1.0).unwrap();
        assert!((e.cdf(LN_2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(fig1_x().cdf(0.0).unwrap(), 0.0);
        assert!((fig1_x().cdf(2.0).unwrap() - (1.0 - (-4f64).exp())).abs() < 1e-15);
        assert!(fig1_x().cdf(-1.0).is_err());
    }

    #[test]
    fn cdf_and_survival_sum_to_one_exactly() {
        let p = LinExpParams::new(0.05, 0.15).unwrap();
        for i in 0..2000 {
            let t = i as f64 * 0.013;
            let (c, s) = p.cdf_survival(t);
            assert_eq!(c + s, 1.0, "t = {t}");
        }
    }

    #[test]
    fn hazard_examples() {
        assert_eq!(fig1_x().hazard(1.0).unwrap(), 2.0);
        let e = LinExpParams::exponential(1.0).unwrap();
        assert_eq!(e.hazard(17.0).unwrap(), 1.0);
        let p = LinExpParams::new(0.05, 0.15).unwrap();
        let ratio = p.pdf(3.0).unwrap() / p.survival(3.0).unwrap();
        assert!((ratio - p.hazard(3.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn reversed_hazard_examples() {
        let e = LinExpParams::exponential(1.0).unwrap();
        assert!((e.reversed_hazard(LN_2).unwrap() - 1.0).abs() < 1e-15);
        assert!(e.reversed_hazard(0.0).is_err());

        let p = fig1_x();
        let t = 0.7;
        let fd = finite_diff(
            |s| p.cdf(s).unwrap().ln(),
            t,
            1e-5,
            StencilDomain::Unbounded,
        )
        .unwrap();
        assert!((fd - p.reversed_hazard(t).unwrap()).abs() < 1e-5);

        // F(t) >= 1 - 1e-9 once H(t) >= 9 ln 10.
        let t_far = p.quantile(1.0 - 1e-10).unwrap();
        assert!(p.cdf(t_far).unwrap() >= 1.0 - 1e-9);
        assert!(p.reversed_hazard(t_far).unwrap() <= 1e-6);
    }

    #[test]
    fn log_density_slope_examples() {
        let e = LinExpParams::exponential(1.0).unwrap();
        assert_eq!(e.log_density_slope(0.0).unwrap(), -1.0);
        let p = fig1_x();
        assert_eq!(p.log_density_slope(1.0).unwrap(), -1.25);
        let fd = finite_diff(
            |s| p.pdf(s).unwrap().ln(),
            1.0,
            1e-5,
            StencilDomain::Unbounded,
        )
        .unwrap();
        assert!((fd + 1.25).abs() < 1e-6);
        let rayleigh = LinExpParams::new(0.0, 1.0).unwrap();
        assert!(rayleigh.log_density_slope(0.0).is_err());
    }

    #[test]
    fn quantile_examples() {
        let e = LinExpParams::exponential(1.0).unwrap();
        assert!((e.quantile(1.0 - (-1f64).exp()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fig1_x().quantile(0.0).unwrap(), 0.0);
        assert!(fig1_x().quantile(1.0).is_err());
        assert!(fig1_x().quantile(-0.1).is_err());
        for p in [
            fig1_x(),
            e,
            LinExpParams::new(0.0, 2.0).unwrap(),
            LinExpParams::new(0.05, 0.15).unwrap(),
        ] {
            for i in 1..100 {
                let u = i as f64 / 100.0;
                let back = p.cdf(p.quantile(u).unwrap()).unwrap();
                assert!((back - u).abs() < 1e-12, "{p:?} u={u} back={back}");
            }
        }
    }

    #[test]
    fn exponential_sample_mean() {
        let e = LinExpParams::exponential(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mean = (0..n).map(|_| e.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.004, "mean {mean}");
    }

    #[test]
    fn sample_empirical_cdf_distance() {
        let p = fig1_x();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 1_000_000;
        let mut xs: Vec<f64> = (0..n).map(|_| p.sample(&mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        let mut sup: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let c = p.cdf(x).unwrap();
            sup = sup
                .max((c - i as f64 / n as f64).abs())
                .max((c - (i + 1) as f64 / n as f64).abs());
        }
        assert!(sup < 0.002, "sup distance {sup}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = fig1_x();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100)
                .map(|_| p.sample(&mut rng).to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
    }

    #[test]
    fn degenerate_corners_have_known_means() {
        let spec = QuadratureSpec::default();
        let e = LinExpParams::exponential(2.0).unwrap();
        let m = integrate_ray(|t| t * e.pdf(t).unwrap(), 0.0, &spec).unwrap();
        assert!((m.value - 0.5).abs() < 1e-9);
        let r = LinExpParams::new(0.0, 1.0).unwrap();
        let m = integrate_ray(|t| t * r.pdf(t).unwrap(), 0.0, &spec).unwrap();
        assert!((m.value - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-9);
    }
}
