//! Two-dimensional failure processes over the (age, usage) plane.
//!
//! Under minimal repair the failure points form a Poisson field with
//! intensity `r(x, y) = f(x, y)/F̄(x, y)`; under replacement the inter-failure
//! pairs are i.i.d. with the joint law and the count is a bivariate renewal
//! process. Transform-space quantities live in [`laplace`].
//!
//! Replicate `i` of any simulation draws from stream `i` of a ChaCha8
//! generator keyed by the master seed, and results are reduced in replicate
//! order over fixed-size chunks, so output does not depend on thread count.

mod intensity;
pub mod laplace;
mod renewal;
mod residual;
mod sim;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use intensity::{cumulative_intensity, cumulative_intensity_series_printed, SeriesCaps};
pub use laplace::{
    laplace_pdf, laplace_pdf_quadrature, laplace_pdf_series_printed, renewal_transform,
};
pub use renewal::{
    n_fold_cdf_mc, renewal_count_distribution, renewal_function_mc, renewal_trace, renewal_traces,
    simulate_renewal, McProbability, RenewalEstimate,
};
pub use residual::{renewal_equation_residual, ResidualReport};
pub use sim::{minimal_repair_counts, simulate_minimal_repair, MinimalRepairSampler};

/// Observation rectangle `[0, x_max] × [0, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_max: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_max: f64, y_max: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(x_max) && ok(y_max)) {
            return Err(Error::InvalidParameter(format!(
                "window sides must be positive and finite, got ({x_max}, {y_max})"
            )));
        }
        Ok(Self { x_max, y_max })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.x_max).contains(&x) && (0.0..=self.y_max).contains(&y)
    }

    pub fn area(&self) -> f64 {
        self.x_max * self.y_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    MinimalRepair,
    Replacement,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Self::MinimalRepair => "minimal_repair",
            Self::Replacement => "replacement",
        }
    }
}

/// Failure points of one simulated replicate, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub policy: Policy,
    pub events: Vec<(f64, f64)>,
    pub window: Window,
    pub master_seed: u64,
    pub replicate: u64,
}

/// Generator for replicate `replicate` under `master_seed`.
pub fn substream(master_seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate);
    rng
}

/// Replicates per parallel work unit. Fixed so reductions are reproducible.
pub(crate) const CHUNK: usize = 1024;

/// Running mean and sum of squared deviations, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub n: f64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    pub fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.n < 2.0 {
            return 0.0;
        }
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

pub(crate) fn chunk_ranges(replications: usize) -> Vec<std::ops::Range<usize>> {
    (0..replications.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(replications))
        .collect()
}
