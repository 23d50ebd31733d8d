//! Batch front-end for the underlay simulator: key-value configuration
//! files, parameter sweeps, CSV results and re-runnable manifests.

pub mod config;
pub mod manifest;
pub mod sweep;

use d2d_underlay::sim::SimError;

/// Process exit code for a failed simulation: 2 for a scenario whose
/// machine link cannot meet its outage target even without interference,
/// 3 for an outage estimator with too few samples for the requested
/// tolerance, 1 for anything else (configuration and I/O problems).
pub fn exit_code(err: &SimError) -> i32 {
    match err {
        SimError::InfeasibleScenario { .. } => 2,
        SimError::Decision(_) => 3,
        _ => 1,
    }
}
