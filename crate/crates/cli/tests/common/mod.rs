//! Shared helpers for the acceptance suite: closed-form outage oracles
//! (independent of the library's estimators), scenario shortcuts and a
//! cache so heavyweight runs are executed once per process.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use d2d_underlay::decision::CsiMode;
use d2d_underlay::sim::{self, RunMetrics, ScenarioConfig, Scheme, Topology};

/// Interference-free Rayleigh outage of a fixed-rate link, written out
/// directly: P[mean * E < 2^r - 1] with E unit exponential.
pub fn oracle_baseline_outage(r: f64, mean_snr: f64) -> f64 {
    1.0 - (-(2f64.powf(r) - 1.0) / mean_snr).exp()
}

/// Closed-form machine outage for the downlink underlay: the machine SNR
/// `g` is exponential with mean `m`; decoding succeeds on
/// `[t*(1+gb), inf)` (interferer as noise) or on `[t, gb/(2^rb - 1) - 1]`
/// (decode-cancel-decode), where `t = 2^rm - 1`.
pub fn oracle_downlink_outage(r_b: f64, gamma_b: f64, mean: f64, r_m: f64) -> f64 {
    let t = 2f64.powf(r_m) - 1.0;
    let direct_lo = t * (1.0 + gamma_b);
    let t_b = 2f64.powf(r_b) - 1.0;
    let oic_hi = if t_b > 0.0 {
        gamma_b / t_b - 1.0
    } else {
        f64::INFINITY
    };
    let sf = |x: f64| (-x / mean).exp(); // survival function of the SNR
    let p_success = if oic_hi >= direct_lo {
        // The two intervals merge into [t, inf).
        sf(t)
    } else if oic_hi >= t {
        sf(direct_lo) + (sf(t) - sf(oic_hi))
    } else {
        sf(direct_lo)
    };
    1.0 - p_success
}

/// Closed-form machine outage for the uplink underlay: signal and
/// interference SNRs are independent exponentials with means `s` and `i`;
/// outage iff `S < t * (1 + I)`:
/// `1 - e^{-t/s} / (1 + t*i/s)`.
pub fn oracle_uplink_outage(mean_signal: f64, mean_interference: f64, r_m: f64) -> f64 {
    let t = 2f64.powf(r_m) - 1.0;
    1.0 - (-t / mean_signal).exp() / (1.0 + t * mean_interference / mean_signal)
}

/// Default-geometry scenario at the heavyweight acceptance settings.
pub fn s1_cfg(scheme: Scheme, csi: CsiMode) -> ScenarioConfig {
    ScenarioConfig {
        scheme,
        csi,
        epochs: 100_000,
        mc_samples: 10_000,
        seed: 2026,
        ..ScenarioConfig::default()
    }
}

/// Run a scenario, caching the result so criteria sharing a configuration
/// pay for it once.
pub fn cached_run(cfg: &ScenarioConfig) -> RunMetrics {
    static CACHE: OnceLock<Mutex<HashMap<String, RunMetrics>>> = OnceLock::new();
    let key = format!("{cfg:?}");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let started = std::time::Instant::now();
    let metrics = sim::run(cfg).expect("scenario runs");
    eprintln!(
        "  [run] {:?}/{:?} epochs={} took {:.1}s",
        cfg.scheme,
        cfg.csi,
        cfg.epochs,
        started.elapsed().as_secs_f64()
    );
    cache.lock().unwrap().insert(key, metrics.clone());
    metrics
}

/// A four-pair topology in which every user is statistically identical.
pub fn symmetric_topology(n: usize, cell: f64, cross: f64) -> Topology {
    let mut cross_gain = vec![vec![0.0; n]; n];
    let mut candidates = Vec::new();
    for (i, row) in cross_gain.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            if i != j {
                *g = cross;
                candidates.push((i, j));
            }
        }
    }
    Topology {
        n,
        machine_gain: vec![1e-6; n],
        cell_gain: vec![cell; n],
        cross_gain,
        candidates,
    }
}

/// Combined three-standard-error bound for a difference of two means.
pub fn gap_bound(se_a: f64, se_b: f64) -> f64 {
    3.0 * (se_a * se_a + se_b * se_b).sqrt()
}
