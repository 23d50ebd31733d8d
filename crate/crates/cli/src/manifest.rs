//! Run manifests: a re-runnable echo of the configuration plus a commented
//! summary of the results.
//!
//! A manifest is itself a valid configuration file — feeding it back
//! through the CLI reproduces the run bit-identically — with `#` comment
//! lines carrying derived quantities (the dimensioned machine power), the
//! code version, the wall-clock duration and the per-row metric summary.

use d2d_underlay::downlink::UjInterference;
use d2d_underlay::sim::{ScenarioConfig, SchedulerKind, SimError};

use crate::config::{combo_label, RunSpec};
use crate::sweep::{fmt_f64, ResultRow};

pub const MANIFEST_SCHEMA: &str = "# d2d-underlay run manifest v1";

fn scheduler_label(s: SchedulerKind) -> &'static str {
    match s {
        SchedulerKind::MaxR => "maxr",
        SchedulerKind::ProportionalFair => "pf",
    }
}

fn uj_label(u: UjInterference) -> &'static str {
    match u {
        UjInterference::Exact => "exact",
        UjInterference::Approximate => "approximate",
    }
}

fn push_kv(out: &mut String, key: &str, value: &str) {
    out.push_str(key);
    out.push_str(" = ");
    out.push_str(value);
    out.push('\n');
}

/// Render the manifest for a finished run.
pub fn render_manifest(
    spec: &RunSpec,
    rows: &[ResultRow],
    duration_secs: f64,
) -> Result<String, SimError> {
    let cfg: &ScenarioConfig = &spec.base;
    let mut out = String::new();
    out.push_str(MANIFEST_SCHEMA);
    out.push('\n');
    out.push_str(&format!("# version = {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("# duration_secs = {duration_secs:.3}\n"));
    out.push_str(&format!(
        "# derived machine power p_m_watts = {}\n",
        fmt_f64(cfg.machine_power()?.watts())
    ));

    let (scheme, csi) = combo_label((cfg.scheme, cfg.csi));
    push_kv(&mut out, "scheme", &scheme);
    push_kv(&mut out, "csi", &csi);
    push_kv(&mut out, "scheduler", scheduler_label(cfg.scheduler));
    push_kv(&mut out, "uj_interference", uj_label(cfg.uj_interference));
    let combos = spec
        .combos
        .iter()
        .map(|&c| {
            let (s, m) = combo_label(c);
            format!("{s}:{m}")
        })
        .collect::<Vec<_>>()
        .join(",");
    push_kv(&mut out, "schemes", &combos);
    push_kv(&mut out, "pairs", &cfg.pairs.to_string());
    push_kv(&mut out, "r_m", &fmt_f64(cfg.r_m));
    push_kv(&mut out, "s_m", &fmt_f64(cfg.s_m));
    push_kv(&mut out, "p_out", &fmt_f64(cfg.p_out));
    push_kv(&mut out, "epsilon", &fmt_f64(cfg.epsilon));
    push_kv(&mut out, "p_b_max_dbm", &fmt_f64(cfg.p_b_max_dbm));
    push_kv(&mut out, "p_u_max_dbm", &fmt_f64(cfg.p_u_max_dbm));
    push_kv(&mut out, "d_max", &fmt_f64(cfg.d_max));
    push_kv(&mut out, "machine_gain_db", &fmt_f64(cfg.machine_gain_db));
    push_kv(&mut out, "sigma_m_dbm", &fmt_f64(cfg.sigma_m_dbm));
    push_kv(&mut out, "sigma_u_dbm", &fmt_f64(cfg.sigma_u_dbm));
    push_kv(&mut out, "sigma_b_dbm", &fmt_f64(cfg.sigma_b_dbm));
    push_kv(&mut out, "epochs", &cfg.epochs.to_string());
    push_kv(&mut out, "mc_samples", &cfg.mc_samples.to_string());
    push_kv(&mut out, "seed", &cfg.seed.to_string());
    if let Some(sweep) = &spec.sweep {
        let values = sweep
            .values
            .iter()
            .map(|v| fmt_f64(*v))
            .collect::<Vec<_>>()
            .join(",");
        push_kv(&mut out, "sweep", &format!("{}={values}", sweep.key));
    }

    out.push_str("# results:\n");
    for r in rows {
        out.push_str(&format!(
            "#   sweep_value={} scheme={} csi={} gamma_d={} gamma_u={} outage={}\n",
            fmt_f64(r.sweep_value),
            r.scheme,
            r.csi,
            fmt_f64(r.mean_gamma_d),
            fmt_f64(r.mean_gamma_u),
            fmt_f64(r.machine_outage),
        ));
    }
    Ok(out)
}
