//! Replacement policy: the bivariate renewal process and its Monte Carlo
//! renewal function.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{chunk_ranges, substream, Moments, Policy, ProcessTrace, Window};
use crate::error::{Error, Result};
use crate::joint::BleFgmParams;

/// Per-point Monte Carlo estimate of `M(x, y) = E[N(x, y)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewalEstimate {
    pub grid: Vec<(f64, f64)>,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    /// Fraction of replicates with no renewal at the point.
    pub p_zero: Vec<f64>,
    pub replications: usize,
}

/// A Monte Carlo probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McProbability {
    pub estimate: f64,
    pub std_error: f64,
    pub replications: usize,
}

impl McProbability {
    fn from_hits(hits: usize, replications: usize) -> Self {
        let n = replications as f64;
        let estimate = hits as f64 / n;
        Self {
            estimate,
            std_error: (estimate * (1.0 - estimate) / n).sqrt(),
            replications,
        }
    }
}

/// Partial sums `(X_n, Y_n)` of i.i.d. pairs for replicate `replicate`, up to
/// the first one leaving the window.
pub fn renewal_trace(
    p: &BleFgmParams,
    window: Window,
    master_seed: u64,
    replicate: u64,
) -> ProcessTrace {
    let mut rng = substream(master_seed, replicate);
    let (mut x, mut y) = (0.0, 0.0);
    let mut events = Vec::new();
    loop {
        let (z, t) = p.sample_pair(&mut rng);
        x += z;
        y += t;
        if x > window.x_max || y > window.y_max {
            break;
        }
        events.push((x, y));
    }
    ProcessTrace {
        policy: Policy::Replacement,
        events,
        window,
        master_seed,
        replicate,
    }
}

/// Replicate 0 of the renewal process.
pub fn simulate_renewal(p: &BleFgmParams, window: Window, master_seed: u64) -> ProcessTrace {
    renewal_trace(p, window, master_seed, 0)
}

/// Traces for replicates `0..replications`, in index order.
pub fn renewal_traces(
    p: &BleFgmParams,
    window: Window,
    master_seed: u64,
    replications: usize,
) -> Vec<ProcessTrace> {
    (0..replications as u64)
        .into_par_iter()
        .map(|i| renewal_trace(p, window, master_seed, i))
        .collect()
}

fn count_le(events: &[(f64, f64)], x: f64, y: f64) -> usize {
    // Both coordinates increase along a trace, so the qualifying events form a prefix.
    events
        .iter()
        .take_while(|&&(ex, ey)| ex <= x && ey <= y)
        .count()
}

/// `M(x, y)` on every grid point from `replications` renewal traces over the
/// grid's bounding window.
pub fn renewal_function_mc(
    p: &BleFgmParams,
    grid: &[(f64, f64)],
    replications: usize,
    master_seed: u64,
) -> Result<RenewalEstimate> {
    if replications < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 replications, got {replications}"
        )));
    }
    if grid
        .iter()
        .any(|&(x, y)| !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(Error::InvalidParameter(
            "grid points must be finite and nonnegative".into(),
        ));
    }
    let x_max = grid.iter().map(|g| g.0).fold(f64::MIN_POSITIVE, f64::max);
    let y_max = grid.iter().map(|g| g.1).fold(f64::MIN_POSITIVE, f64::max);
    let window = Window::new(x_max, y_max)?;
    let k = grid.len();
    let per_chunk: Vec<(Vec<Moments>, Vec<usize>)> = chunk_ranges(replications)
        .into_par_iter()
        .map(|range| {
            let mut acc = vec![Moments::default(); k];
            let mut zeros = vec![0usize; k];
            for i in range {
                let t = renewal_trace(p, window, master_seed, i as u64);
                for (j, &(x, y)) in grid.iter().enumerate() {
                    let c = count_le(&t.events, x, y);
                    acc[j].push(c as f64);
                    zeros[j] += (c == 0) as usize;
                }
            }
            (acc, zeros)
        })
        .collect();
    let mut total = vec![Moments::default(); k];
    let mut zeros = vec![0usize; k];
    for (acc, z) in per_chunk {
        for j in 0..k {
            total[j] = total[j].merge(acc[j]);
            zeros[j] += z[j];
        }
    }
    Ok(RenewalEstimate {
        grid: grid.to_vec(),
        mean: total.iter().map(|m| m.mean).collect(),
        std_error: total.iter().map(Moments::std_error).collect(),
        p_zero: zeros
            .iter()
            .map(|&z| z as f64 / replications as f64)
            .collect(),
        replications,
    })
}

/// Empirical distribution of `N(x, y)`: entry `n` is the fraction of
/// replicates with exactly `n` renewals.
pub fn renewal_count_distribution(
    p: &BleFgmParams,
    x: f64,
    y: f64,
    replications: usize,
    master_seed: u64,
) -> Result<Vec<f64>> {
    let window = Window::new(x, y)?;
    let counts: Vec<usize> = (0..replications as u64)
        .into_par_iter()
        .map(|i| renewal_trace(p, window, master_seed, i).events.len())
        .collect();
    let top = counts.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0.0; top + 1];
    for c in counts {
        hist[c] += 1.0;
    }
    hist.iter_mut().for_each(|h| *h /= replications as f64);
    Ok(hist)
}

/// `F^{(n)}(x, y) = P[X_n ≤ x, Y_n ≤ y]` from sums of `n` sampled pairs.
pub fn n_fold_cdf_mc(
    p: &BleFgmParams,
    n: usize,
    x: f64,
    y: f64,
    replications: usize,
    master_seed: u64,
) -> Result<McProbability> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "convolution order must be >= 1".into(),
        ));
    }
    if replications == 0 {
        return Err(Error::InvalidParameter(
            "need at least one replication".into(),
        ));
    }
    let hits: usize = chunk_ranges(replications)
        .into_par_iter()
        .map(|range| {
            range
                .filter(|&i| {
                    let mut rng = substream(master_seed, i as u64);
                    let (mut sx, mut sy) = (0.0, 0.0);
                    for _ in 0..n {
                        let (z, t) = p.sample_pair(&mut rng);
                        sx += z;
                        sy += t;
                    }
                    sx <= x && sy <= y
                })
                .count()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(McProbability::from_hits(hits, replications))
}
