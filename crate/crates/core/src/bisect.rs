//! Bisection over a monotone, Monte Carlo estimated outage curve.
//!
//! The search assumes the estimate is non-decreasing in the searched value,
//! which the callers guarantee by evaluating every iterate on the same set
//! of random draws (common random numbers).

/// Tuning knobs shared by the partial-CSI searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectParams {
    /// Precision the outage estimator must support: the estimator's
    /// standard error has to stay within a third of this, and the returned
    /// value's true outage is then within roughly this distance of the
    /// target whenever the target is crossed inside the range.
    pub tolerance: f64,
    /// Stop once the bracket is narrower than this, so a curve that is flat
    /// near the target cannot stall the search.
    pub bracket_floor: f64,
    /// Monte Carlo draws per estimate.
    pub samples: usize,
}

impl Default for BisectParams {
    fn default() -> Self {
        Self {
            tolerance: 0.01,
            bracket_floor: 1e-4,
            samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    /// Largest value found whose estimated outage stays at or below the
    /// target. Zero with `feasible = false` when even the lower end of the
    /// range violates the target.
    pub value: f64,
    pub feasible: bool,
    pub oracle_calls: usize,
}

/// Find the largest value in `[0, hi]` whose estimated outage is at most
/// `p_out`. Uses at most `ceil(log2(hi / bracket_floor)) + 1` calls to
/// `estimate`.
pub fn max_feasible(
    hi: f64,
    p_out: f64,
    params: &BisectParams,
    mut estimate: impl FnMut(f64) -> f64,
) -> SearchResult {
    let mut lo = 0.0f64;
    let mut hi = hi.max(0.0);
    let mut calls = 0usize;
    let mut feasible_seen = false;

    while hi - lo > params.bracket_floor {
        let mid = 0.5 * (lo + hi);
        let p_hat = estimate(mid);
        calls += 1;
        if p_hat > p_out {
            hi = mid;
        } else {
            lo = mid;
            feasible_seen = true;
        }
    }

    if feasible_seen {
        SearchResult {
            value: lo,
            feasible: true,
            oracle_calls: calls,
        }
    } else {
        // Nothing above zero passed; decide feasibility of the lower end.
        let p0 = estimate(0.0);
        calls += 1;
        SearchResult {
            value: 0.0,
            feasible: p0 <= p_out,
            oracle_calls: calls,
        }
    }
}
