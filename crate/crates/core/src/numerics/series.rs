use serde::{Deserialize, Serialize};

/// Default number of terms for the asymptotic series.
pub const DEFAULT_SERIES_CAP: usize = 40;

/// How [`sum_guarded`] decides where to stop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummationMode {
    /// Sum exactly `cap` terms.
    ToCap,
    /// Stop right before the first term whose magnitude does not drop below
    /// its predecessor's (smallest-term rule for asymptotic series).
    OptimalTruncation,
}

/// A truncated series value with truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub first_omitted_magnitude: f64,
    pub diverged: bool,
}

/// Sums `term(0), term(1), ...` under the chosen stopping rule.
///
/// The term at index `terms_used` is always evaluated so its magnitude can be
/// reported. `diverged` is set when a non-finite term shows up; under
/// [`SummationMode::OptimalTruncation`] also when the stop fires before any
/// strict decrease was seen, and under [`SummationMode::ToCap`] when the
/// omitted term is no smaller than the last one summed.
pub fn sum_guarded<F>(mut term: F, cap: usize, mode: SummationMode) -> SeriesResult
where
    F: FnMut(usize) -> f64,
{
    let cap = cap.max(1);
    let mut value = 0.0;
    let mut prev: Option<f64> = None;
    let mut decreased = false;

    let grows = |t: f64, prev: Option<f64>| match prev {
        Some(p) => t != 0.0 && t.abs() >= p.abs(),
        None => false,
    };

    for k in 0..cap {
        let t = term(k);
        if !t.is_finite() {
            return SeriesResult {
                value,
                terms_used: k,
                first_omitted_magnitude: f64::INFINITY,
                diverged: true,
            };
        }
        if mode == SummationMode::OptimalTruncation && grows(t, prev) {
            return SeriesResult {
                value,
                terms_used: k,
                first_omitted_magnitude: t.abs(),
                diverged: !decreased,
            };
        }
        if let Some(p) = prev {
            if t.abs() < p.abs() {
                decreased = true;
            }
        }
        value += t;
        prev = Some(t);
    }

    let omitted = term(cap);
    if !omitted.is_finite() {
        return SeriesResult {
            value,
            terms_used: cap,
            first_omitted_magnitude: f64::INFINITY,
            diverged: true,
        };
    }
    let tail_grows = grows(omitted, prev);
    let diverged = match mode {
        SummationMode::ToCap => tail_grows,
        SummationMode::OptimalTruncation => tail_grows && !decreased,
    };
    SeriesResult {
        value,
        terms_used: cap,
        first_omitted_magnitude: omitted.abs(),
        diverged,
    }
}

/// Adapter that walks a double series `Σ_{m,n} t(m, n)` by anti-diagonals:
/// index `d` is the sum of all terms with `m + n = d`.
pub(crate) fn diagonal<F>(mut term: F) -> impl FnMut(usize) -> f64
where
    F: FnMut(usize, usize) -> f64,
{
    move |d| (0..=d).map(|m| term(m, d - m)).sum()
}
