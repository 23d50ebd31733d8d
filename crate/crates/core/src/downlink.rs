//! Downlink underlay adaptation: choose the base station's (power, rate)
//! pair maximizing the downlink rate while the underlaid machine link keeps
//! meeting its outage target.
//!
//! With full CSI the optimum is one of two closed-form candidates: full
//! power with the rate capped so the machine receiver can still decode (and
//! cancel) the downlink signal, or power backed off to the direct-decode
//! threshold with the rate set by the downlink receiver's capacity. With
//! partial CSI the base station transmits at full power and bisects the
//! rate against a Monte Carlo estimate of the machine outage.

use rand::Rng;

use crate::bisect::{max_feasible, BisectParams};
use crate::channel::{capacity, sample_fading, snr, NoiseVariance, PowerLevel, Snr};
use crate::decision::{check_sample_budget, DecisionError, TxDecision};
use crate::mac::{classify_mi_at_ui, DecodePath, MacState};
use crate::outage::{mc_outage_downlink_from_samples, min_snr_for_rate, OutageTarget};

/// How the downlink receiver's capacity accounts for the machine
/// transmitter's cross interference. The machine power is orders of
/// magnitude below the base station's, so `Approximate` (ignore it) is
/// nearly exact; `Exact` keeps the interference term, using the
/// instantaneous cross gain under full CSI and the mean under partial CSI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UjInterference {
    Exact,
    Approximate,
}

/// Instantaneous gains available to the decision-maker under full CSI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullDownlinkCsi {
    /// Base station to the machine-side receiver.
    pub g_b_ui: f64,
    /// Base station to the downlink receiver.
    pub g_b_uj: f64,
    /// Machine transmitter to its receiver.
    pub g_mi_ui: f64,
    /// Machine transmitter cross gain to the downlink receiver.
    pub g_mi_uj: f64,
}

/// Under partial CSI the machine-side links are known by mean gain only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialDownlinkCsi {
    pub g_b_ui: f64,
    pub g_b_uj: f64,
    pub mean_g_mi_ui: f64,
    pub mean_g_mi_uj: f64,
}

/// Static parameters of the downlink adaptation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownlinkParams {
    pub p_b_max: PowerLevel,
    /// Dimensioned machine transmit power.
    pub p_m: PowerLevel,
    pub target: OutageTarget,
    /// Noise at the user devices.
    pub sigma_u: NoiseVariance,
    pub uj_interference: UjInterference,
}

impl DownlinkParams {
    fn uj_capacity(&self, power: PowerLevel, g_b_uj: f64, machine_cross_gain: f64) -> f64 {
        let g_signal = snr(power, g_b_uj, self.sigma_u);
        match self.uj_interference {
            UjInterference::Approximate => capacity(g_signal),
            UjInterference::Exact => {
                let g_int = snr(self.p_m, machine_cross_gain, self.sigma_u);
                capacity(Snr::new(g_signal.value() / (1.0 + g_int.value())))
            }
        }
    }
}

/// Base-station power above which the machine receiver can no longer decode
/// its signal directly (interference as noise):
/// `(p_m * g_mi_ui / (2^r_m - 1) - sigma_u^2) / g_b_ui`, clamped at zero
/// when the machine link is too deeply faded for any direct decode.
pub fn direct_decode_power_threshold(
    p_m: PowerLevel,
    g_mi_ui: f64,
    r_m: f64,
    sigma_u: NoiseVariance,
    g_b_ui: f64,
) -> PowerLevel {
    debug_assert!(r_m > 0.0 && g_mi_ui > 0.0 && g_b_ui > 0.0);
    let headroom = p_m.watts() * g_mi_ui / (2f64.powf(r_m) - 1.0) - sigma_u.watts();
    PowerLevel::from_watts(headroom.max(0.0) / g_b_ui)
}

/// Full-CSI decision: the better of the two candidate operating points.
pub fn decide_fcsi(csi: &FullDownlinkCsi, p: &DownlinkParams) -> TxDecision {
    let r_m = p.target.rate();
    let gamma_m = snr(p.p_m, csi.g_mi_ui, p.sigma_u);

    if gamma_m.value() < min_snr_for_rate(r_m).value() {
        // The machine channel itself cannot carry the fixed rate this
        // epoch; the constraint is vacuous and the downlink runs free.
        return TxDecision {
            power: p.p_b_max,
            rate: p.uj_capacity(p.p_b_max, csi.g_b_uj, csi.g_mi_uj),
            predicted_path: DecodePath::Undecodable,
            machine_outage: true,
            infeasible: false,
        };
    }

    // Candidate 1: full power, rate capped so the machine receiver can
    // decode-and-cancel the downlink, and by the downlink receiver itself.
    let gamma_b_ui_max = snr(p.p_b_max, csi.g_b_ui, p.sigma_u);
    let oic_bound = capacity(Snr::new(gamma_b_ui_max.value() / (1.0 + gamma_m.value())));
    let rate_1 = oic_bound.min(p.uj_capacity(p.p_b_max, csi.g_b_uj, csi.g_mi_uj));

    // Candidate 2: back the power off to keep the machine directly
    // decodable; the rate is then set by the downlink receiver alone.
    let power_2 = direct_decode_power_threshold(p.p_m, csi.g_mi_ui, r_m, p.sigma_u, csi.g_b_ui)
        .min(p.p_b_max);
    let rate_2 = p.uj_capacity(power_2, csi.g_b_uj, csi.g_mi_uj);

    let (power, rate) = if rate_1 >= rate_2 {
        (p.p_b_max, rate_1)
    } else {
        (power_2, rate_2)
    };
    let predicted_path = classify_mi_at_ui(&MacState {
        snr_signal: gamma_m,
        snr_interference: snr(power, csi.g_b_ui, p.sigma_u),
        rate_signal: r_m,
        rate_interference: rate,
    });
    TxDecision {
        power,
        rate,
        predicted_path,
        machine_outage: false,
        infeasible: false,
    }
}

/// Partial-CSI decision: full power, rate found by bisection against the
/// Monte Carlo machine-outage estimate. All bisection iterates share one
/// set of machine-fading draws so the estimated outage is monotone in the
/// rate within a single search.
pub fn decide_pcsi<R: Rng + ?Sized>(
    csi: &PartialDownlinkCsi,
    p: &DownlinkParams,
    search: &BisectParams,
    rng: &mut R,
) -> Result<TxDecision, DecisionError> {
    check_sample_budget(search.samples, p.target.p_out(), search.tolerance)?;
    let r_m = p.target.rate();
    let machine_mean = snr(p.p_m, csi.mean_g_mi_ui, p.sigma_u);
    let samples: Vec<f64> = (0..search.samples)
        .map(|_| machine_mean.value() * sample_fading(rng))
        .collect();

    let gamma_b_ui = snr(p.p_b_max, csi.g_b_ui, p.sigma_u);
    let rate_hi = p.uj_capacity(p.p_b_max, csi.g_b_uj, csi.mean_g_mi_uj);
    let result = max_feasible(rate_hi, p.target.p_out(), search, |rate| {
        mc_outage_downlink_from_samples(rate, gamma_b_ui, r_m, &samples).p_hat
    });

    let predicted_path = classify_mi_at_ui(&MacState {
        snr_signal: machine_mean,
        snr_interference: gamma_b_ui,
        rate_signal: r_m,
        rate_interference: result.value,
    });
    Ok(TxDecision {
        power: p.p_b_max,
        rate: result.value,
        predicted_path,
        machine_outage: false,
        infeasible: !result.feasible,
    })
}
