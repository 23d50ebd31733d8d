//! Output type shared by the downlink and uplink adaptation procedures.

use thiserror::Error;

use crate::channel::PowerLevel;
use crate::mac::DecodePath;

/// Which channel state information the decision-maker holds for the
/// machine-side links: instantaneous gains, or mean gains only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiMode {
    Full,
    Partial,
}

/// The (power, rate) pair chosen for the adapted cellular transmitter in
/// one scheduling epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxDecision {
    pub power: PowerLevel,
    /// Rate in bits/s/Hz.
    pub rate: f64,
    /// Decode route the decision-maker expects at the relevant receiver.
    pub predicted_path: DecodePath,
    /// Set when the machine channel itself cannot support its fixed rate,
    /// so the epoch is excluded from the underlay guarantee and the
    /// cellular link falls back to unconstrained operation.
    pub machine_outage: bool,
    /// Set when even the most conservative choice violates the outage
    /// target (partial CSI only: the machine link is too weak on average).
    pub infeasible: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecisionError {
    #[error("outage estimator too noisy: {samples} samples give std err {std_err:.2e}, need <= {required:.2e}; increase the sample count")]
    InsufficientSamples {
        samples: usize,
        std_err: f64,
        required: f64,
    },
}

/// The searches tolerate estimator noise up to a third of the bisection
/// tolerance; fewer samples than that make the search unreliable.
pub(crate) fn check_sample_budget(
    samples: usize,
    p_out: f64,
    tolerance: f64,
) -> Result<(), DecisionError> {
    let std_err = (p_out * (1.0 - p_out) / samples as f64).sqrt();
    let required = tolerance / 3.0;
    if std_err > required {
        return Err(DecisionError::InsufficientSamples {
            samples,
            std_err,
            required,
        });
    }
    Ok(())
}
