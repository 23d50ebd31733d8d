//! Sweep execution and CSV rendering.
//!
//! A sweep runs the scenario once per (sweep value, scheme/CSI combination)
//! and emits one CSV row each, in a deterministic sorted order. Floating
//! point columns are printed with 17 significant digits so re-parsing the
//! file recovers the exact values.

use rayon::prelude::*;

use d2d_underlay::decision::CsiMode;
use d2d_underlay::sim::{self, RunMetrics, Scheme, SimError};

use crate::config::{apply_numeric, combo_label, Combo, RunSpec};

/// Version tag carried in the CSV header comment; bump when columns change.
pub const CSV_SCHEMA: &str = "# d2d-underlay results v1";

pub const CSV_HEADER: &str = "sweep_value,scheme,csi,mean_gamma_d,std_err_gamma_d,mean_gamma_u,\
std_err_gamma_u,machine_outage,std_err_outage,active_time_machine,active_time_cellular";

/// One output row: a run's aggregates at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// Value of the swept key; zero when the run has no sweep.
    pub sweep_value: f64,
    pub scheme: String,
    pub csi: String,
    pub mean_gamma_d: f64,
    pub std_err_gamma_d: f64,
    pub mean_gamma_u: f64,
    pub std_err_gamma_u: f64,
    pub machine_outage: f64,
    pub std_err_outage: f64,
    /// Mean active time over the machine links that were ever scheduled.
    pub active_time_machine: f64,
    pub active_time_cellular: f64,
}

fn participating_mean(active: &[f64], participation: &[usize]) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (&a, &p) in active.iter().zip(participation) {
        if p > 0 {
            sum += a;
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn to_row(sweep_value: f64, combo: Combo, m: &RunMetrics) -> ResultRow {
    let (scheme, csi) = combo_label(combo);
    ResultRow {
        sweep_value,
        scheme,
        csi,
        mean_gamma_d: m.mean_gamma_d,
        std_err_gamma_d: m.std_err_gamma_d,
        mean_gamma_u: m.mean_gamma_u,
        std_err_gamma_u: m.std_err_gamma_u,
        machine_outage: m.machine_outage_rate,
        std_err_outage: m.outage_std_err,
        active_time_machine: participating_mean(&m.active_time_machine, &m.machine_participation),
        active_time_cellular: participating_mean(
            &m.active_time_cellular,
            &m.cellular_participation,
        ),
    }
}

fn scheme_rank(s: Scheme) -> u8 {
    match s {
        Scheme::U1 => 0,
        Scheme::U2 => 1,
        Scheme::R1 => 2,
        Scheme::R2 => 3,
    }
}

fn csi_rank(c: CsiMode) -> u8 {
    match c {
        CsiMode::Full => 0,
        CsiMode::Partial => 1,
    }
}

/// Run every (sweep value x combo) job and return the rows sorted by
/// (sweep value, scheme, CSI mode). Jobs execute in parallel; the ordering
/// and content of the rows are independent of the worker count.
pub fn run_sweep(spec: &RunSpec) -> Result<Vec<ResultRow>, SimError> {
    let mut jobs: Vec<(Option<f64>, Combo)> = Vec::new();
    match &spec.sweep {
        Some(sweep) => {
            for &v in &sweep.values {
                for &combo in &spec.combos {
                    jobs.push((Some(v), combo));
                }
            }
        }
        None => {
            for &combo in &spec.combos {
                jobs.push((None, combo));
            }
        }
    }
    jobs.sort_by(|a, b| {
        a.0.unwrap_or(0.0)
            .total_cmp(&b.0.unwrap_or(0.0))
            .then(scheme_rank(a.1 .0).cmp(&scheme_rank(b.1 .0)))
            .then(csi_rank(a.1 .1).cmp(&csi_rank(b.1 .1)))
    });

    jobs.par_iter()
        .map(|&(value, combo)| {
            let mut cfg = spec.base.clone();
            if let (Some(v), Some(sweep)) = (value, &spec.sweep) {
                apply_numeric(&mut cfg, &sweep.key, v).map_err(SimError::InvalidConfig)?;
            }
            cfg.scheme = combo.0;
            cfg.csi = combo.1;
            let metrics = sim::run(&cfg)?;
            Ok(to_row(value.unwrap_or(0.0), combo, &metrics))
        })
        .collect()
}

/// Format a float with 17 significant digits, enough for an exact `f64`
/// round trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render rows as RFC-4180-style CSV with the schema comment on top.
pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_SCHEMA);
    out.push('\n');
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.sweep_value),
            r.scheme,
            r.csi,
            fmt_f64(r.mean_gamma_d),
            fmt_f64(r.std_err_gamma_d),
            fmt_f64(r.mean_gamma_u),
            fmt_f64(r.std_err_gamma_u),
            fmt_f64(r.machine_outage),
            fmt_f64(r.std_err_outage),
            fmt_f64(r.active_time_machine),
            fmt_f64(r.active_time_cellular),
        ));
    }
    out
}
