//! Uplink underlay adaptation: choose the cellular uplink's (power, rate)
//! pair maximizing its rate while the underlaid machine relay link keeps
//! meeting its outage target.
//!
//! The machine transmitter relays at full device power and fixed rate; its
//! receiver cannot cancel the cellular interference, so the cellular power
//! is capped to protect the machine SINR. At the base station the machine
//! signal appears as interference that may itself be decoded and cancelled,
//! which yields two closed-form candidates under full CSI. Under partial
//! CSI the power is bisected against a Monte Carlo estimate of the machine
//! outage and the rate follows from the realized decode route at the base
//! station.

use rand::Rng;

use crate::bisect::{max_feasible, BisectParams};
use crate::channel::{capacity, sample_fading, snr, NoiseVariance, PowerLevel, Snr};
use crate::decision::{check_sample_budget, DecisionError, TxDecision};
use crate::mac::{classify_uj_at_b, MacState};
use crate::outage::{mc_outage_uplink_from_samples, min_snr_for_rate, OutageTarget};

/// Instantaneous gains available to the decision-maker under full CSI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullUplinkCsi {
    /// Machine transmitter to its receiver.
    pub g_ui_mi: f64,
    /// Cellular transmitter cross gain to the machine receiver.
    pub g_uj_mi: f64,
    /// Machine transmitter to the base station.
    pub g_ui_b: f64,
    /// Cellular transmitter to the base station.
    pub g_uj_b: f64,
}

/// Under partial CSI the links ending at the machine receiver are known by
/// mean gain only; the base station measures its own incoming links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialUplinkCsi {
    pub mean_g_ui_mi: f64,
    pub mean_g_uj_mi: f64,
    pub g_ui_b: f64,
    pub g_uj_b: f64,
}

/// Static parameters of the uplink adaptation. The machine relay transmits
/// at the full device power `p_u_max`, which also caps the cellular uplink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UplinkParams {
    pub p_u_max: PowerLevel,
    pub target: OutageTarget,
    /// Noise at the machine receiver.
    pub sigma_m: NoiseVariance,
    /// Noise at the base station.
    pub sigma_b: NoiseVariance,
}

/// A power ceiling that may be absent: with a zero machine rate the relay
/// signal decodes at any interference level and the base-station side
/// imposes no cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerCap {
    Finite(PowerLevel),
    Unbounded,
}

impl PowerCap {
    /// The cap as a power level, treating `Unbounded` as `limit`.
    pub fn min_with(self, limit: PowerLevel) -> PowerLevel {
        match self {
            PowerCap::Finite(c) => c.min(limit),
            PowerCap::Unbounded => limit,
        }
    }
}

/// Largest cellular power keeping the machine receiver's SINR at or above
/// the fixed-rate threshold:
/// `(p_relay * g_ui_mi / (2^r_m - 1) - sigma_m^2) / g_uj_mi`, clamped at
/// zero when the machine link is too weak for any interference at all.
pub fn machine_protect_power_cap(
    p_relay: PowerLevel,
    g_ui_mi: f64,
    r_m: f64,
    sigma_m: NoiseVariance,
    g_uj_mi: f64,
) -> PowerLevel {
    debug_assert!(r_m > 0.0 && g_ui_mi > 0.0 && g_uj_mi > 0.0);
    let headroom = p_relay.watts() * g_ui_mi / (2f64.powf(r_m) - 1.0) - sigma_m.watts();
    PowerLevel::from_watts(headroom.max(0.0) / g_uj_mi)
}

/// Largest cellular power at which the base station can still decode the
/// machine relay signal treating the cellular signal as noise, which is the
/// precondition for cancelling it.
pub fn relay_decode_power_cap(
    p_relay: PowerLevel,
    g_ui_b: f64,
    r_m: f64,
    sigma_b: NoiseVariance,
    g_uj_b: f64,
) -> PowerCap {
    debug_assert!(r_m >= 0.0 && g_ui_b > 0.0 && g_uj_b > 0.0);
    let gamma_m = min_snr_for_rate(r_m).value();
    if gamma_m == 0.0 {
        return PowerCap::Unbounded;
    }
    let headroom = p_relay.watts() * g_ui_b / gamma_m - sigma_b.watts();
    PowerCap::Finite(PowerLevel::from_watts(headroom.max(0.0) / g_uj_b))
}

/// Full-CSI decision: the better of the two candidate operating points.
pub fn decide_fcsi(csi: &FullUplinkCsi, p: &UplinkParams) -> TxDecision {
    let r_m = p.target.rate();
    let gamma_m_min = min_snr_for_rate(r_m);
    let machine_clean = snr(p.p_u_max, csi.g_ui_mi, p.sigma_m);

    // When the machine channel itself cannot carry the fixed rate, there is
    // nothing left to protect: the constraint is dropped for this epoch and
    // the epoch is excluded from the underlay guarantee.
    let machine_outage = machine_clean.value() < gamma_m_min.value();
    let protect_cap = if machine_outage {
        p.p_u_max
    } else {
        machine_protect_power_cap(p.p_u_max, csi.g_ui_mi, r_m, p.sigma_m, csi.g_uj_mi)
    };

    // Candidate 1: stay below the base station's cancellation cap as well,
    // so the cellular signal decodes on a clean channel after the machine
    // signal is removed.
    let cancel_cap = relay_decode_power_cap(p.p_u_max, csi.g_ui_b, r_m, p.sigma_b, csi.g_uj_b);
    let power_1 = cancel_cap.min_with(p.p_u_max).min(protect_cap);
    let rate_1 = capacity(snr(power_1, csi.g_uj_b, p.sigma_b));

    // Candidate 2: ignore the cancellation cap and decode through the
    // machine interference.
    let power_2 = p.p_u_max.min(protect_cap);
    let gamma_ui_b_2 = snr(p.p_u_max, csi.g_ui_b, p.sigma_b);
    let rate_2 = capacity(Snr::new(
        snr(power_2, csi.g_uj_b, p.sigma_b).value() / (1.0 + gamma_ui_b_2.value()),
    ));

    let (power, rate) = if rate_1 >= rate_2 {
        (power_1, rate_1)
    } else {
        (power_2, rate_2)
    };
    let predicted_path = classify_uj_at_b(&MacState {
        snr_signal: snr(power, csi.g_uj_b, p.sigma_b),
        snr_interference: snr(p.p_u_max, csi.g_ui_b, p.sigma_b),
        rate_signal: rate,
        rate_interference: r_m,
    });
    TxDecision {
        power,
        rate,
        predicted_path,
        machine_outage,
        infeasible: false,
    }
}

/// Partial-CSI decision: bisect the cellular power against the Monte Carlo
/// machine-outage estimate, then read the rate off the realized decode
/// route at the base station. All bisection iterates share one set of
/// fading draws so the estimated outage is monotone in the power.
pub fn decide_pcsi<R: Rng + ?Sized>(
    csi: &PartialUplinkCsi,
    p: &UplinkParams,
    search: &BisectParams,
    rng: &mut R,
) -> Result<TxDecision, DecisionError> {
    check_sample_budget(search.samples, p.target.p_out(), search.tolerance)?;
    let r_m = p.target.rate();
    let pairs: Vec<(f64, f64)> = (0..search.samples)
        .map(|_| (sample_fading(rng), sample_fading(rng)))
        .collect();
    let mean_signal = p.p_u_max.watts() * csi.mean_g_ui_mi / p.sigma_m.watts();

    let result = max_feasible(p.p_u_max.watts(), p.target.p_out(), search, |p_uj| {
        let mean_interference = p_uj * csi.mean_g_uj_mi / p.sigma_m.watts();
        mc_outage_uplink_from_samples(r_m, mean_signal, mean_interference, &pairs).p_hat
    });
    let power = PowerLevel::from_watts(result.value);

    // Rate from the realized decode route: clean capacity when the base
    // station can decode and cancel the machine relay signal at this power,
    // otherwise capacity through the interference.
    let gamma_uj_b = snr(power, csi.g_uj_b, p.sigma_b);
    let gamma_ui_b = snr(p.p_u_max, csi.g_ui_b, p.sigma_b);
    let cancelable = r_m <= capacity(Snr::new(gamma_ui_b.value() / (1.0 + gamma_uj_b.value())));
    let rate = if cancelable {
        capacity(gamma_uj_b)
    } else {
        capacity(Snr::new(gamma_uj_b.value() / (1.0 + gamma_ui_b.value())))
    };
    let predicted_path = classify_uj_at_b(&MacState {
        snr_signal: gamma_uj_b,
        snr_interference: gamma_ui_b,
        rate_signal: rate,
        rate_interference: r_m,
    });
    Ok(TxDecision {
        power,
        rate,
        predicted_path,
        machine_outage: false,
        infeasible: !result.feasible,
    })
}
