//! Pair selection across candidate (machine link, cellular link) pairings:
//! maximum-rate and proportional-fair rules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchedulerError {
    #[error("no candidate pairs to select from")]
    NoCandidates,
}

/// One admissible pairing for the current epoch: machine pair `machine`
/// underlays the cellular link of pair `cellular`, and the adaptation has
/// already decided the cellular rate the pairing would achieve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCandidate {
    pub machine: usize,
    pub cellular: usize,
    /// Cellular rate achieved if this pairing is scheduled, in bits/s/Hz.
    pub metric_rate: f64,
}

/// Pick the candidate with the highest instantaneous cellular rate. Ties
/// break toward the smallest `(machine, cellular)` index pair so selection
/// is deterministic.
pub fn select_maxr(candidates: &[PairCandidate]) -> Result<PairCandidate, SchedulerError> {
    candidates
        .iter()
        .copied()
        .max_by(|a, b| {
            a.metric_rate
                .partial_cmp(&b.metric_rate)
                .expect("rates are finite")
                .then(b.machine.cmp(&a.machine))
                .then(b.cellular.cmp(&a.cellular))
        })
        .ok_or(SchedulerError::NoCandidates)
}

/// Exponentially averaged per-user throughput driving the proportional-fair
/// rule.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessState {
    avg_rate: Vec<f64>,
    /// Averaging window in epochs.
    window: f64,
    /// Lower clamp keeping the fairness weights finite for users that have
    /// not been served yet.
    floor: f64,
}

impl FairnessState {
    pub fn new(n_users: usize) -> Self {
        Self::with_window(n_users, 100.0)
    }

    pub fn with_window(n_users: usize, window: f64) -> Self {
        debug_assert!(window >= 1.0);
        let floor = 1e-3;
        Self {
            avg_rate: vec![floor; n_users],
            window,
            floor,
        }
    }

    pub fn avg_rate(&self, user: usize) -> f64 {
        self.avg_rate[user]
    }

    /// Pick the candidate maximizing `rate / avg_rate(cellular user)`. Ties
    /// break toward the smallest `(machine, cellular)` index pair.
    pub fn select_pf(&self, candidates: &[PairCandidate]) -> Result<PairCandidate, SchedulerError> {
        candidates
            .iter()
            .copied()
            .max_by(|a, b| {
                let wa = a.metric_rate / self.avg_rate[a.cellular];
                let wb = b.metric_rate / self.avg_rate[b.cellular];
                wa.partial_cmp(&wb)
                    .expect("weights are finite")
                    .then(b.machine.cmp(&a.machine))
                    .then(b.cellular.cmp(&a.cellular))
            })
            .ok_or(SchedulerError::NoCandidates)
    }

    /// Fold one epoch into the averages: the served user contributes its
    /// achieved rate, everyone else contributes zero.
    pub fn update(&mut self, served: usize, rate: f64) {
        let a = 1.0 / self.window;
        for (user, avg) in self.avg_rate.iter_mut().enumerate() {
            let contribution = if user == served { rate } else { 0.0 };
            *avg = ((1.0 - a) * *avg + a * contribution).max(self.floor);
        }
    }
}
