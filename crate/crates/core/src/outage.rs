//! Outage thresholds, closed-form Rayleigh outage probability, the
//! margin-based minimum-power rule and the Monte Carlo outage estimators
//! used by the partial-CSI adaptation searches.
//!
//! All rates are in bits/s/Hz (log base 2 throughout).

use num_traits::Float;
use rand::Rng;
use thiserror::Error;

use crate::channel::{sample_fading, NoiseVariance, PowerLevel, Snr};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OutageError {
    #[error("fixed rate must be positive, got {0}")]
    InvalidRate(f64),
    #[error("outage probability must lie strictly in (0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("outage margin must be >= 1, got {0}")]
    InvalidMargin(f64),
}

/// The machine link's contract: fixed rate, target outage probability and
/// the multiplicative power margin dimensioned into the link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageTarget<F: Float = f64> {
    rate: F,
    p_out: F,
    margin: F,
}

impl<F: Float> OutageTarget<F> {
    pub fn new(rate: F, p_out: F, margin: F) -> Result<Self, OutageError> {
        let as_f64 = |x: F| x.to_f64().unwrap_or(f64::NAN);
        if rate.is_nan() || rate <= F::zero() {
            return Err(OutageError::InvalidRate(as_f64(rate)));
        }
        if !(p_out > F::zero() && p_out < F::one()) {
            return Err(OutageError::InvalidProbability(as_f64(p_out)));
        }
        if margin.is_nan() || margin < F::one() {
            return Err(OutageError::InvalidMargin(as_f64(margin)));
        }
        Ok(Self {
            rate,
            p_out,
            margin,
        })
    }

    pub fn rate(self) -> F {
        self.rate
    }

    pub fn p_out(self) -> F {
        self.p_out
    }

    pub fn margin(self) -> F {
        self.margin
    }
}

/// Minimum SNR supporting rate `r`: the inverse of the capacity function,
/// `2^r - 1`.
pub fn min_snr_for_rate<F: Float>(r: F) -> Snr<F> {
    debug_assert!(r >= F::zero());
    Snr::new(F::from(2.0).unwrap().powf(r) - F::one())
}

/// Probability that an exponentially distributed SNR with mean `mean` falls
/// below `threshold`: `1 - e^{-threshold/mean}`.
pub fn rayleigh_outage<F: Float>(threshold: Snr<F>, mean: Snr<F>) -> F {
    debug_assert!(mean.value() > F::zero());
    F::one() - (-threshold.value() / mean.value()).exp()
}

/// Average outage rate of a fixed-rate link: `(1 - p_out) * log2(1 + threshold)`.
pub fn outage_rate<F: Float>(threshold: Snr<F>, p_out: F) -> F {
    debug_assert!(p_out >= F::zero() && p_out < F::one());
    (F::one() - p_out) * (F::one() + threshold.value()).log2()
}

/// Minimum transmit power such that a Rayleigh-faded link with the given
/// mean gain attains outage rate `target.rate()` with outage probability at
/// most `target.p_out()` in the presence of interference bounded by the
/// dimensioning margin:
///
/// `S_M * (noise / mean_gain) * (2^{R/(1-P)} - 1) / (-ln(1 - P))`
///
/// The negated logarithm keeps the power positive.
pub fn min_power_for_outage<F: Float>(
    target: OutageTarget<F>,
    mean_gain: F,
    noise: NoiseVariance<F>,
) -> PowerLevel<F> {
    debug_assert!(mean_gain > F::zero());
    let two = F::from(2.0).unwrap();
    let one = F::one();
    let numer = two.powf(target.rate() / (one - target.p_out())) - one;
    let denom = -(one - target.p_out()).ln();
    PowerLevel::from_watts(target.margin() * noise.watts() / mean_gain * numer / denom)
}

/// Result of a Monte Carlo outage estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub n_samples: usize,
    pub std_err: f64,
}

impl OutageEstimate {
    fn from_failures(failures: usize, n: usize) -> Self {
        let p_hat = failures as f64 / n as f64;
        Self {
            p_hat,
            n_samples: n,
            std_err: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        }
    }
}

/// Machine-link outage at the underlaid downlink receiver, estimated over
/// the machine channel's fading distribution.
///
/// The machine SNR is drawn as an exponential with mean `machine_mean_snr`
/// while the interfering downlink SNR `gamma_b` and its rate `r_b` are
/// fixed. A draw succeeds when the machine message decodes either directly
/// with the downlink treated as noise, or after decoding and cancelling the
/// downlink signal (opportunistic interference cancellation).
pub fn mc_outage_downlink_underlay<R: Rng + ?Sized>(
    r_b: f64,
    gamma_b: Snr,
    machine_mean_snr: Snr,
    target: OutageTarget,
    n: usize,
    rng: &mut R,
) -> OutageEstimate {
    debug_assert!(n >= 10_000);
    let mean = machine_mean_snr.value();
    let samples: Vec<f64> = (0..n).map(|_| mean * sample_fading(rng)).collect();
    mc_outage_downlink_from_samples(r_b, gamma_b, target.rate(), &samples)
}

/// Same estimator over a caller-provided set of machine-SNR draws, so a
/// bisection search can reuse common random numbers across iterates.
pub fn mc_outage_downlink_from_samples(
    r_b: f64,
    gamma_b: Snr,
    r_m: f64,
    machine_snr_samples: &[f64],
) -> OutageEstimate {
    let gamma_m_min = min_snr_for_rate(r_m).value();
    let gb = gamma_b.value();
    // Success region in the machine SNR is a union of at most two intervals:
    // [gamma_m_min * (1 + gb), inf) for direct decode, and
    // [gamma_m_min, gb / (2^r_b - 1) - 1] for decode-cancel-decode.
    let direct_lo = gamma_m_min * (1.0 + gb);
    let t_b = 2f64.powf(r_b) - 1.0;
    let oic_hi = if t_b > 0.0 {
        gb / t_b - 1.0
    } else {
        f64::INFINITY
    };
    let failures = machine_snr_samples
        .iter()
        .map(|&g| {
            let ok = g >= direct_lo || (g >= gamma_m_min && g <= oic_hi);
            usize::from(!ok)
        })
        .sum();
    OutageEstimate::from_failures(failures, machine_snr_samples.len())
}

/// Machine-link outage at the underlaid uplink's machine receiver, where no
/// interference cancellation is available: outage iff the machine SINR with
/// the interferer treated as noise falls below the rate threshold.
///
/// Both the desired machine SNR and the interfering SNR are drawn as
/// independent exponentials whose means follow from the given powers,
/// mean gains and noise level.
#[allow(clippy::too_many_arguments)]
pub fn mc_outage_uplink_underlay<R: Rng + ?Sized>(
    p_interferer: PowerLevel,
    p_machine_tx: PowerLevel,
    machine_mean_gain: f64,
    interferer_mean_gain: f64,
    noise: NoiseVariance,
    target: OutageTarget,
    n: usize,
    rng: &mut R,
) -> OutageEstimate {
    debug_assert!(n >= 10_000);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| (sample_fading(rng), sample_fading(rng)))
        .collect();
    let mean_signal = p_machine_tx.watts() * machine_mean_gain / noise.watts();
    let mean_interference = p_interferer.watts() * interferer_mean_gain / noise.watts();
    mc_outage_uplink_from_samples(target.rate(), mean_signal, mean_interference, &pairs)
}

/// Uplink-underlay estimator over caller-provided pairs of unit-mean
/// exponential draws `(signal, interference)`, for common-random-number
/// reuse across a power bisection.
pub fn mc_outage_uplink_from_samples(
    r_m: f64,
    mean_signal_snr: f64,
    mean_interference_snr: f64,
    unit_pairs: &[(f64, f64)],
) -> OutageEstimate {
    let gamma_m_min = min_snr_for_rate(r_m).value();
    let failures = unit_pairs
        .iter()
        .map(|&(es, ei)| {
            let outage = mean_signal_snr * es < gamma_m_min * (1.0 + mean_interference_snr * ei);
            usize::from(outage)
        })
        .sum();
    OutageEstimate::from_failures(failures, unit_pairs.len())
}
