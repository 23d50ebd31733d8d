//! Plain-text `key = value` run configuration.
//!
//! Every key has a default, so an empty file is a valid configuration.
//! Unknown keys are rejected and every error carries the offending line
//! number or key name.

use thiserror::Error;

use d2d_underlay::decision::CsiMode;
use d2d_underlay::downlink::UjInterference;
use d2d_underlay::sim::{ScenarioConfig, SchedulerKind, Scheme};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for {key}: {msg}")]
    InvalidValue {
        line: usize,
        key: String,
        msg: String,
    },
    #[error("invalid sweep spec {spec:?}: expected \"key=v1,v2,...\"")]
    BadSweepSpec { spec: String },
    #[error("unknown sweep key {key:?} (must be a numeric configuration key)")]
    UnknownSweepKey { key: String },
}

/// One scheme/CSI combination to simulate.
pub type Combo = (Scheme, CsiMode);

/// A sweep over one numeric configuration key.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub key: String,
    pub values: Vec<f64>,
}

/// Everything a run needs: the base scenario, the scheme/CSI combinations
/// to cover, and an optional parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub base: ScenarioConfig,
    pub combos: Vec<Combo>,
    pub sweep: Option<SweepSpec>,
}

impl Default for RunSpec {
    fn default() -> Self {
        let base = ScenarioConfig::default();
        Self {
            combos: vec![(base.scheme, base.csi)],
            base,
            sweep: None,
        }
    }
}

fn parse_scheme(s: &str) -> Option<Scheme> {
    match s.to_ascii_uppercase().as_str() {
        "U1" => Some(Scheme::U1),
        "U2" => Some(Scheme::U2),
        "R1" => Some(Scheme::R1),
        "R2" => Some(Scheme::R2),
        _ => None,
    }
}

fn parse_csi(s: &str) -> Option<CsiMode> {
    match s.to_ascii_lowercase().as_str() {
        "full" => Some(CsiMode::Full),
        "partial" => Some(CsiMode::Partial),
        _ => None,
    }
}

/// Parse one combo such as `U1:partial`; a bare scheme implies full CSI.
fn parse_combo(s: &str) -> Option<Combo> {
    match s.split_once(':') {
        Some((scheme, csi)) => Some((parse_scheme(scheme.trim())?, parse_csi(csi.trim())?)),
        None => Some((parse_scheme(s.trim())?, CsiMode::Full)),
    }
}

pub fn combo_label(combo: Combo) -> (String, String) {
    let scheme = match combo.0 {
        Scheme::U1 => "U1",
        Scheme::U2 => "U2",
        Scheme::R1 => "R1",
        Scheme::R2 => "R2",
    };
    let csi = match combo.1 {
        CsiMode::Full => "full",
        CsiMode::Partial => "partial",
    };
    (scheme.to_string(), csi.to_string())
}

/// Numeric keys a sweep may range over.
pub const SWEEP_KEYS: &[&str] = &[
    "pairs",
    "r_m",
    "s_m",
    "p_out",
    "epsilon",
    "p_b_max_dbm",
    "p_u_max_dbm",
    "d_max",
    "machine_gain_db",
    "sigma_m_dbm",
    "sigma_u_dbm",
    "sigma_b_dbm",
    "epochs",
    "mc_samples",
    "seed",
];

/// Apply one numeric value to the named key. Integer-valued keys reject
/// fractional or negative inputs.
pub fn apply_numeric(cfg: &mut ScenarioConfig, key: &str, value: f64) -> Result<(), String> {
    let as_usize = |v: f64| -> Result<usize, String> {
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            Err(format!("expected a non-negative integer, got {v}"))
        } else {
            Ok(v as usize)
        }
    };
    match key {
        "pairs" => cfg.pairs = as_usize(value)?,
        "r_m" => cfg.r_m = value,
        "s_m" => cfg.s_m = value,
        "p_out" => cfg.p_out = value,
        "epsilon" => cfg.epsilon = value,
        "p_b_max_dbm" => cfg.p_b_max_dbm = value,
        "p_u_max_dbm" => cfg.p_u_max_dbm = value,
        "d_max" => cfg.d_max = value,
        "machine_gain_db" => cfg.machine_gain_db = value,
        "sigma_m_dbm" => cfg.sigma_m_dbm = value,
        "sigma_u_dbm" => cfg.sigma_u_dbm = value,
        "sigma_b_dbm" => cfg.sigma_b_dbm = value,
        "epochs" => cfg.epochs = as_usize(value)?,
        "mc_samples" => cfg.mc_samples = as_usize(value)?,
        "seed" => cfg.seed = as_usize(value)? as u64,
        _ => return Err(format!("unknown numeric key {key:?}")),
    }
    Ok(())
}

/// Parse a sweep spec string `key=v1,v2,...`.
pub fn parse_sweep_spec(spec: &str) -> Result<SweepSpec, ConfigError> {
    let (key, rest) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::BadSweepSpec {
            spec: spec.to_string(),
        })?;
    let key = key.trim().to_string();
    if !SWEEP_KEYS.contains(&key.as_str()) {
        return Err(ConfigError::UnknownSweepKey { key });
    }
    let values = rest
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ConfigError::BadSweepSpec {
            spec: spec.to_string(),
        })?;
    if values.is_empty() {
        return Err(ConfigError::BadSweepSpec {
            spec: spec.to_string(),
        });
    }
    Ok(SweepSpec { key, values })
}

/// Parse a configuration file's text. Lines are `key = value`; `#` starts
/// a comment; blank lines are ignored.
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    let mut spec = RunSpec::default();
    let mut combos_set = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: raw.trim().to_string(),
        })?;
        let key = key.trim();
        let value = value.trim();
        let invalid = |msg: String| ConfigError::InvalidValue {
            line,
            key: key.to_string(),
            msg,
        };
        let num = |v: &str| v.parse::<f64>().map_err(|e| invalid(format!("{e}: {v:?}")));
        match key {
            "scheme" => {
                spec.base.scheme = parse_scheme(value)
                    .ok_or_else(|| invalid(format!("unknown scheme {value:?}")))?;
            }
            "csi" => {
                spec.base.csi = parse_csi(value)
                    .ok_or_else(|| invalid(format!("unknown CSI mode {value:?}")))?;
            }
            "scheduler" => {
                spec.base.scheduler = match value.to_ascii_lowercase().as_str() {
                    "maxr" => SchedulerKind::MaxR,
                    "pf" | "proportional_fair" => SchedulerKind::ProportionalFair,
                    _ => return Err(invalid(format!("unknown scheduler {value:?}"))),
                };
            }
            "uj_interference" => {
                spec.base.uj_interference = match value.to_ascii_lowercase().as_str() {
                    "exact" => UjInterference::Exact,
                    "approximate" => UjInterference::Approximate,
                    _ => return Err(invalid(format!("unknown interference mode {value:?}"))),
                };
            }
            "schemes" => {
                let combos = value
                    .split(',')
                    .map(|c| parse_combo(c.trim()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| invalid(format!("bad scheme list {value:?}")))?;
                if combos.is_empty() {
                    return Err(invalid("empty scheme list".to_string()));
                }
                spec.combos = combos;
                combos_set = true;
            }
            "sweep" => {
                spec.sweep = Some(parse_sweep_spec(value).map_err(|e| invalid(e.to_string()))?);
            }
            _ if SWEEP_KEYS.contains(&key) => {
                let v = num(value)?;
                apply_numeric(&mut spec.base, key, v).map_err(invalid)?;
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }
    if !combos_set {
        spec.combos = vec![(spec.base.scheme, spec.base.csi)];
    }
    spec.base
        .validate()
        .map_err(|e| ConfigError::InvalidValue {
            line: 0,
            key: "config".to_string(),
            msg: e.to_string(),
        })?;
    Ok(spec)
}
