//! Minimal repair: thinning of a homogeneous Poisson field on the window.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::{chunk_ranges, substream, Policy, ProcessTrace, Window};
use crate::error::{domain, Error, Result};
use crate::joint::BleFgmParams;

/// Nodes per axis of the majorant scan.
const SCAN_NODES: usize = 200;
const SAFETY: f64 = 1.25;

/// Thinning sampler with a majorant fixed once per (params, window).
#[derive(Debug, Clone, Copy)]
pub struct MinimalRepairSampler {
    params: BleFgmParams,
    window: Window,
    bound: f64,
}

impl MinimalRepairSampler {
    /// Scans `r` on a 200×200 grid including the window edges and keeps 1.25
    /// times the maximum as majorant.
    pub fn new(params: &BleFgmParams, window: Window) -> Result<Self> {
        let step = |hi: f64, i: usize| hi * i as f64 / (SCAN_NODES - 1) as f64;
        if !(params.joint_survival(window.x_max, window.y_max)? > 0.0) {
            return domain("joint survival underflows inside the window; intensity unbounded");
        }
        let mut max: f64 = 0.0;
        for i in 0..SCAN_NODES {
            let x = step(window.x_max, i);
            for j in 0..SCAN_NODES {
                let y = step(window.y_max, j);
                let r = params.hazard_of(&params.pair(x, y), x, y);
                if !r.is_finite() {
                    return domain(format!("intensity not finite at ({x}, {y})"));
                }
                max = max.max(r);
            }
        }
        Ok(Self {
            params: *params,
            window,
            bound: SAFETY * max,
        })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// One replicate. Fails if a proposal ever sees `r` above the majorant.
    pub fn trace(&self, master_seed: u64, replicate: u64) -> Result<ProcessTrace> {
        let mut rng = substream(master_seed, replicate);
        let mean = self.bound * self.window.area();
        let proposals = if mean > 0.0 {
            Poisson::new(mean)
                .map_err(|e| Error::InvalidParameter(format!("majorant mean {mean}: {e}")))?
                .sample(&mut rng) as u64
        } else {
            0
        };
        let mut events = Vec::new();
        for _ in 0..proposals {
            let x = rng.random::<f64>() * self.window.x_max;
            let y = rng.random::<f64>() * self.window.y_max;
            let accept: f64 = rng.random();
            let r = self.params.hazard_of(&self.params.pair(x, y), x, y);
            if r > self.bound {
                return Err(Error::ThinningBoundExceeded {
                    x,
                    y,
                    intensity: r,
                    bound: self.bound,
                });
            }
            if accept * self.bound < r {
                events.push((x, y));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Ok(ProcessTrace {
            policy: Policy::MinimalRepair,
            events,
            window: self.window,
            master_seed,
            replicate,
        })
    }

    /// Traces for replicates `0..replications`, in index order.
    pub fn traces(&self, master_seed: u64, replications: usize) -> Result<Vec<ProcessTrace>> {
        (0..replications as u64)
            .into_par_iter()
            .map(|i| self.trace(master_seed, i))
            .collect()
    }
}

/// Replicate 0 of the minimal repair process.
pub fn simulate_minimal_repair(
    p: &BleFgmParams,
    window: Window,
    master_seed: u64,
) -> Result<ProcessTrace> {
    MinimalRepairSampler::new(p, window)?.trace(master_seed, 0)
}

/// Event counts of replicates `0..replications`, in index order.
pub fn minimal_repair_counts(
    p: &BleFgmParams,
    window: Window,
    master_seed: u64,
    replications: usize,
) -> Result<Vec<usize>> {
    let sampler = MinimalRepairSampler::new(p, window)?;
    let chunks: Vec<Vec<usize>> = chunk_ranges(replications)
        .into_par_iter()
        .map(|range| {
            range
                .map(|i| sampler.trace(master_seed, i as u64).map(|t| t.events.len()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::failure_process::cumulative_intensity;
    use crate::numerics::QuadratureSpec;

    fn mean_var(counts: &[usize]) -> (f64, f64) {
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<usize>() as f64 / n;
        let var = counts
            .iter()
            .map(|&c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn homogeneous_case_is_poisson() {
        let p = BleFgmParams::from_rates(1.5, 0.0, 2.0, 0.0, 0.0).unwrap();
        let counts = minimal_repair_counts(&p, Window::new(1.0, 1.0).unwrap(), 7, 10_000).unwrap();
        let (mean, var) = mean_var(&counts);
        let se = (var / counts.len() as f64).sqrt();
        assert!((mean - 3.0).abs() < 3.0 * se, "mean {mean} se {se}");
        let dispersion = var / mean;
        assert!((0.9..=1.1).contains(&dispersion), "dispersion {dispersion}");
    }

    #[test]
    fn vanishing_window_is_empty() {
        let p = BleFgmParams::from_rates(0.5, 1.5, 0.7, 2.0, 0.5).unwrap();
        let counts = minimal_repair_counts(&p, Window::new(1e-9, 1e-9).unwrap(), 3, 2000).unwrap();
        assert!(counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn mean_count_matches_cumulative_intensity() {
        let p = BleFgmParams::from_rates(0.05, 0.15, 0.07, 0.2, 0.5).unwrap();
        let w = Window::new(2.0, 2.0).unwrap();
        let counts = minimal_repair_counts(&p, w, 99, 10_000).unwrap();
        let (mean, var) = mean_var(&counts);
        let se = (var / counts.len() as f64).sqrt();
        let lam = cumulative_intensity(&p, 2.0, 2.0, &QuadratureSpec::default())
            .unwrap()
            .value;
        assert!(
            (mean - lam).abs() < 3.0 * se,
            "mean {mean} vs {lam}, se {se}"
        );
    }

    #[test]
    fn traces_are_reproducible_and_inside() {
        let p = BleFgmParams::from_rates(0.5, 1.5, 0.7, 2.0, -0.5).unwrap();
        let w = Window::new(1.5, 1.0).unwrap();
        let a = simulate_minimal_repair(&p, w, 42).unwrap();
        let b = simulate_minimal_repair(&p, w, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.events.iter().all(|&(x, y)| w.contains(x, y)));
        assert!(a.events.windows(2).all(|e| e[0] <= e[1]));
    }
}
