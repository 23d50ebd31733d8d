//! Scenario construction, the scheduling-epoch loop, reference schemes and
//! metric accumulation.
//!
//! Four schemes are simulated. The two reference schemes give the machine
//! link and the cellular link one exclusive slot each (a two-slot epoch);
//! the two underlay schemes run both links in a single shared slot, with
//! the cellular transmitter's (power, rate) chosen by the downlink or
//! uplink adaptation. Rates are normalized by the epoch's slot count, so
//! the reference and underlay schemes are directly comparable.
//!
//! Every run is deterministic under its seed regardless of worker count:
//! stream 0 of the seeded generator builds the topology and each epoch `e`
//! owns stream `e + 1`, with a fixed draw order inside the epoch.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bisect::BisectParams;
use crate::channel::{
    capacity, db_to_linear, dbm_to_watts, pathloss_gain, sample_fading, snr, ChannelError,
    NoiseVariance, PowerLevel, Snr,
};
use crate::decision::{CsiMode, DecisionError, TxDecision};
use crate::downlink::{self, DownlinkParams, FullDownlinkCsi, PartialDownlinkCsi, UjInterference};
use crate::mac::{classify_mi_at_ui, classify_uj_at_b, DecodePath, MacState};
use crate::outage::{min_power_for_outage, min_snr_for_rate, rayleigh_outage, OutageTarget};
use crate::scheduler::{select_maxr, FairnessState, PairCandidate, SchedulerError};
use crate::uplink::{self, FullUplinkCsi, PartialUplinkCsi, UplinkParams};

/// Which of the four schemes to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Downlink underlay: the machine link shares the downlink slot.
    U1,
    /// Uplink underlay: the machine relay shares the uplink slot.
    U2,
    /// Downlink reference: machine and downlink in separate slots.
    R1,
    /// Uplink reference: machine relay and uplink in separate slots.
    R2,
}

impl Scheme {
    pub fn is_underlay(self) -> bool {
        matches!(self, Scheme::U1 | Scheme::U2)
    }

    pub fn is_downlink(self) -> bool {
        matches!(self, Scheme::U1 | Scheme::R1)
    }

    /// Slots per scheduling epoch.
    pub fn slots(self) -> u8 {
        if self.is_underlay() {
            1
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerKind {
    MaxR,
    ProportionalFair,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("infeasible scenario: interference-free machine outage {baseline:.4} already exceeds the target {target}")]
    InfeasibleScenario { baseline: f64, target: f64 },
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Scheduler(#[from] SchedulerError),
}

/// Full description of one simulation run. Powers and noise levels are in
/// dBm and gains in dB so the configuration mirrors how the scenario is
/// usually specified; conversions happen once at run start.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scheme: Scheme,
    pub csi: CsiMode,
    pub scheduler: SchedulerKind,
    /// Number of machine pairs. With one pair a dedicated cellular user is
    /// added so the underlay always has a cellular link to share with.
    pub pairs: usize,
    /// Fixed machine rate in bits/s/Hz.
    pub r_m: f64,
    /// Outage margin dimensioned into the machine transmit power.
    pub s_m: f64,
    /// Machine outage target.
    pub p_out: f64,
    /// Bisection tolerance on the estimated outage (partial CSI).
    pub epsilon: f64,
    pub p_b_max_dbm: f64,
    pub p_u_max_dbm: f64,
    /// Cell diameter in meters; users are placed within half of it.
    pub d_max: f64,
    /// Mean gain of every machine link in dB.
    pub machine_gain_db: f64,
    pub sigma_m_dbm: f64,
    pub sigma_u_dbm: f64,
    pub sigma_b_dbm: f64,
    pub epochs: usize,
    /// Monte Carlo draws per outage estimate (partial CSI).
    pub mc_samples: usize,
    pub seed: u64,
    pub uj_interference: UjInterference,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::U1,
            csi: CsiMode::Full,
            scheduler: SchedulerKind::MaxR,
            pairs: 1,
            r_m: 0.5,
            s_m: 10.0,
            p_out: 0.1,
            epsilon: 0.01,
            p_b_max_dbm: 46.0,
            p_u_max_dbm: 24.0,
            d_max: 500.0,
            machine_gain_db: -60.0,
            sigma_m_dbm: -97.5,
            sigma_u_dbm: -97.5,
            sigma_b_dbm: -116.5,
            epochs: 10_000,
            mc_samples: 100_000,
            seed: 0,
            uj_interference: UjInterference::Exact,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.pairs < 1 {
            return bad(format!("pairs must be >= 1, got {}", self.pairs));
        }
        if self.epochs < 1 {
            return bad(format!("epochs must be >= 1, got {}", self.epochs));
        }
        if !(self.r_m > 0.0 && self.r_m.is_finite()) {
            return bad(format!("r_m must be positive, got {}", self.r_m));
        }
        if self.s_m.is_nan() || self.s_m < 1.0 {
            return bad(format!("s_m must be >= 1, got {}", self.s_m));
        }
        if !(self.p_out > 0.0 && self.p_out < 1.0) {
            return bad(format!("p_out must lie in (0, 1), got {}", self.p_out));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if self.d_max.is_nan() || self.d_max < 20.0 {
            return bad(format!("d_max must be >= 20 m, got {}", self.d_max));
        }
        if self.mc_samples == 0 {
            return bad("mc_samples must be >= 1".to_string());
        }
        for (name, v) in [
            ("p_b_max_dbm", self.p_b_max_dbm),
            ("p_u_max_dbm", self.p_u_max_dbm),
            ("machine_gain_db", self.machine_gain_db),
            ("sigma_m_dbm", self.sigma_m_dbm),
            ("sigma_u_dbm", self.sigma_u_dbm),
            ("sigma_b_dbm", self.sigma_b_dbm),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite, got {v}"));
            }
        }
        Ok(())
    }

    /// Machine transmit power dimensioned from the outage contract: the
    /// minimum power at which a margin of `s_m` over the interference-free
    /// requirement still meets the target on the mean machine link.
    pub fn machine_power(&self) -> Result<PowerLevel, SimError> {
        let target = OutageTarget::new(self.r_m, self.p_out, self.s_m)
            .map_err(|e| SimError::InvalidConfig(e.to_string()))?;
        Ok(min_power_for_outage(
            target,
            db_to_linear(self.machine_gain_db),
            NoiseVariance::from_dbm(self.sigma_u_dbm),
        ))
    }
}

/// Converted, run-ready parameters.
#[derive(Debug, Clone, Copy)]
struct Derived {
    p_b_max: PowerLevel,
    p_u_max: PowerLevel,
    p_m: PowerLevel,
    sigma_m: NoiseVariance,
    sigma_u: NoiseVariance,
    sigma_b: NoiseVariance,
    target: OutageTarget,
    gamma_m_min: Snr,
}

impl Derived {
    fn new(cfg: &ScenarioConfig) -> Result<Self, SimError> {
        let to_w = |dbm: f64| dbm_to_watts(dbm).map_err(SimError::Channel);
        Ok(Self {
            p_b_max: to_w(cfg.p_b_max_dbm)?,
            p_u_max: to_w(cfg.p_u_max_dbm)?,
            p_m: cfg.machine_power()?,
            sigma_m: NoiseVariance::from_dbm(cfg.sigma_m_dbm),
            sigma_u: NoiseVariance::from_dbm(cfg.sigma_u_dbm),
            sigma_b: NoiseVariance::from_dbm(cfg.sigma_b_dbm),
            target: OutageTarget::new(cfg.r_m, cfg.p_out, cfg.s_m)
                .map_err(|e| SimError::InvalidConfig(e.to_string()))?,
            gamma_m_min: min_snr_for_rate(cfg.r_m),
        })
    }

    /// Mean SNR of the machine link's receiver for the given scheme.
    fn machine_mean_snr(&self, cfg: &ScenarioConfig) -> Snr {
        let gain = db_to_linear(cfg.machine_gain_db);
        if cfg.scheme.is_downlink() {
            snr(self.p_m, gain, self.sigma_u)
        } else {
            snr(self.p_u_max, gain, self.sigma_m)
        }
    }
}

/// Static mean gains of every directed link. The machine device of pair
/// `k` is co-located with its cellular user, so the base-station side of
/// both shares one distance; reciprocal links share one mean gain and one
/// fading draw per epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    /// Number of cellular users (and machine pairs).
    pub n: usize,
    /// Mean gain of the machine link of pair `k`.
    pub machine_gain: Vec<f64>,
    /// Mean gain between the base station and user `k`.
    pub cell_gain: Vec<f64>,
    /// Mean gain between pair `i`'s machine device and user `j` (`i != j`).
    pub cross_gain: Vec<Vec<f64>>,
    /// Admissible (machine pair, cellular user) pairings.
    pub candidates: Vec<(usize, usize)>,
}

/// Build the topology from the configured geometry; uses stream 0 of the
/// run's generator. With one pair, the machine pair and a dedicated
/// cellular user both sit at half the maximum distance, as does their
/// separation. With several pairs, users are placed uniformly on the disk
/// annulus between 10 m and half the maximum distance.
pub fn build_scenario(cfg: &ScenarioConfig) -> Result<Topology, SimError> {
    cfg.validate()?;
    let machine_gain_lin = db_to_linear(cfg.machine_gain_db);
    let half = cfg.d_max / 2.0;

    if cfg.pairs == 1 {
        let g = pathloss_gain(half)?;
        return Ok(Topology {
            n: 2,
            machine_gain: vec![machine_gain_lin; 2],
            cell_gain: vec![g; 2],
            cross_gain: vec![vec![0.0, g], vec![g, 0.0]],
            candidates: vec![(0, 1)],
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let n = cfg.pairs;
    let mut pos = Vec::with_capacity(n);
    for _ in 0..n {
        let r: f64 = rng.random_range(10.0..=half);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        pos.push((r * theta.cos(), r * theta.sin()));
    }
    let cell_gain = pos
        .iter()
        .map(|&(x, y)| pathloss_gain((x * x + y * y).sqrt()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cross_gain = vec![vec![0.0; n]; n];
    let mut candidates = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
            let d = (dx * dx + dy * dy).sqrt().max(1.0);
            cross_gain[i][j] = pathloss_gain(d)?;
            candidates.push((i, j));
        }
    }
    Ok(Topology {
        n,
        machine_gain: vec![machine_gain_lin; n],
        cell_gain,
        cross_gain,
        candidates,
    })
}

/// One epoch's block-fading realization, one unit-mean exponential draw per
/// reciprocal link, in a fixed order so runs are seed-deterministic.
struct Fading {
    machine: Vec<f64>,
    cell: Vec<f64>,
    cross: Vec<Vec<f64>>,
}

fn draw_fading<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Fading {
    let machine = (0..n).map(|_| sample_fading(rng)).collect();
    let cell = (0..n).map(|_| sample_fading(rng)).collect();
    let mut cross = vec![vec![0.0; n]; n];
    for (i, row) in cross.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if i != j {
                *slot = sample_fading(rng);
            }
        }
    }
    Fading {
        machine,
        cell,
        cross,
    }
}

/// Outcome of one scheduling epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub machine_pair: usize,
    pub cellular_user: usize,
    pub slots: u8,
    /// Cellular rate actually decoded at its receiver, in bits/s/Hz.
    pub cellular_rate: f64,
    /// Machine data was not decoded this epoch.
    pub machine_outage: bool,
    /// The adaptation found no feasible operating point (partial CSI).
    pub infeasible: bool,
}

/// Run-level aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    /// Mean normalized downlink rate (zero for uplink schemes).
    pub mean_gamma_d: f64,
    pub std_err_gamma_d: f64,
    /// Mean normalized uplink rate (zero for downlink schemes).
    pub mean_gamma_u: f64,
    pub std_err_gamma_u: f64,
    pub machine_outage_rate: f64,
    pub outage_std_err: f64,
    /// Per machine link: transmitting slots over the slots of the epochs
    /// its pair was scheduled in (zero when never scheduled).
    pub active_time_machine: Vec<f64>,
    /// Same, per cellular link.
    pub active_time_cellular: Vec<f64>,
    /// Epochs in which each machine pair / cellular user was scheduled.
    pub machine_participation: Vec<usize>,
    pub cellular_participation: Vec<usize>,
    pub infeasible_epochs: usize,
    pub epochs: usize,
}

/// Relative slack applied to rates in the realized decode checks. Decode
/// thresholds are inclusive, and the adaptation regularly places the
/// operating point exactly on a boundary; the decided values come from
/// algebraically rearranged formulas, so without slack the equality would
/// flip on rounding noise.
const DECODE_SLACK: f64 = 1e-9;

fn epoch_rng(seed: u64, epoch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(epoch as u64 + 1);
    rng
}

/// Decide and realize one underlay candidate. Returns the decision and the
/// realized (machine decoded?, credited cellular rate).
fn evaluate_candidate(
    cfg: &ScenarioConfig,
    d: &Derived,
    topo: &Topology,
    fading: &Fading,
    i: usize,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(TxDecision, bool, f64), SimError> {
    let search = BisectParams {
        tolerance: cfg.epsilon,
        bracket_floor: 1e-4,
        samples: cfg.mc_samples,
    };
    let g_machine = topo.machine_gain[i] * fading.machine[i];
    let g_cell_i = topo.cell_gain[i] * fading.cell[i];
    let g_cell_j = topo.cell_gain[j] * fading.cell[j];
    let g_cross = topo.cross_gain[i][j] * fading.cross[i][j];

    match cfg.scheme {
        Scheme::U1 => {
            let params = DownlinkParams {
                p_b_max: d.p_b_max,
                p_m: d.p_m,
                target: d.target,
                sigma_u: d.sigma_u,
                uj_interference: cfg.uj_interference,
            };
            let (decision, known_cross) = match cfg.csi {
                CsiMode::Full => (
                    downlink::decide_fcsi(
                        &FullDownlinkCsi {
                            g_b_ui: g_cell_i,
                            g_b_uj: g_cell_j,
                            g_mi_ui: g_machine,
                            g_mi_uj: g_cross,
                        },
                        &params,
                    ),
                    g_cross,
                ),
                CsiMode::Partial => (
                    downlink::decide_pcsi(
                        &PartialDownlinkCsi {
                            g_b_ui: g_cell_i,
                            g_b_uj: g_cell_j,
                            mean_g_mi_ui: topo.machine_gain[i],
                            mean_g_mi_uj: topo.cross_gain[i][j],
                        },
                        &params,
                        &search,
                        rng,
                    )?,
                    topo.cross_gain[i][j],
                ),
            };
            let decoded = classify_mi_at_ui(&MacState {
                snr_signal: snr(d.p_m, g_machine, d.sigma_u),
                snr_interference: snr(decision.power, g_cell_i, d.sigma_u),
                rate_signal: cfg.r_m * (1.0 - DECODE_SLACK),
                rate_interference: decision.rate * (1.0 - DECODE_SLACK),
            }) != DecodePath::Undecodable;
            // The downlink receiver's capacity under the same interference
            // convention the decision used (the cross term is known to the
            // decision-maker only by its mean under partial CSI).
            let cap = match cfg.uj_interference {
                UjInterference::Approximate => capacity(snr(decision.power, g_cell_j, d.sigma_u)),
                UjInterference::Exact => {
                    let g_sig = snr(decision.power, g_cell_j, d.sigma_u);
                    let g_int = snr(d.p_m, known_cross, d.sigma_u);
                    capacity(Snr::new(g_sig.value() / (1.0 + g_int.value())))
                }
            };
            let credited = if decision.rate <= cap + 1e-12 {
                decision.rate
            } else {
                0.0
            };
            Ok((decision, decoded, credited))
        }
        Scheme::U2 => {
            let params = UplinkParams {
                p_u_max: d.p_u_max,
                target: d.target,
                sigma_m: d.sigma_m,
                sigma_b: d.sigma_b,
            };
            let decision = match cfg.csi {
                CsiMode::Full => uplink::decide_fcsi(
                    &FullUplinkCsi {
                        g_ui_mi: g_machine,
                        g_uj_mi: g_cross,
                        g_ui_b: g_cell_i,
                        g_uj_b: g_cell_j,
                    },
                    &params,
                ),
                CsiMode::Partial => uplink::decide_pcsi(
                    &PartialUplinkCsi {
                        mean_g_ui_mi: topo.machine_gain[i],
                        mean_g_uj_mi: topo.cross_gain[i][j],
                        g_ui_b: g_cell_i,
                        g_uj_b: g_cell_j,
                    },
                    &params,
                    &search,
                    rng,
                )?,
            };
            // No cancellation at the machine receiver: plain SINR test.
            let sinr_m = d.p_u_max.watts() * g_machine
                / (d.sigma_m.watts() + decision.power.watts() * g_cross);
            let decoded = sinr_m >= d.gamma_m_min.value() * (1.0 - DECODE_SLACK);
            let credited = if classify_uj_at_b(&MacState {
                snr_signal: snr(decision.power, g_cell_j, d.sigma_b),
                snr_interference: snr(d.p_u_max, g_cell_i, d.sigma_b),
                rate_signal: decision.rate * (1.0 - DECODE_SLACK),
                rate_interference: cfg.r_m * (1.0 - DECODE_SLACK),
            }) != DecodePath::Undecodable
            {
                decision.rate
            } else {
                0.0
            };
            Ok((decision, decoded, credited))
        }
        Scheme::R1 | Scheme::R2 => unreachable!("reference schemes have no adaptation decision"),
    }
}

/// Candidate rates for one epoch: the rate the scheme would realize for
/// each admissible pairing.
fn epoch_candidates(
    cfg: &ScenarioConfig,
    d: &Derived,
    topo: &Topology,
    fading: &Fading,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<PairCandidate>, SimError> {
    let mut out = Vec::with_capacity(topo.candidates.len());
    for &(i, j) in &topo.candidates {
        let metric_rate = if cfg.scheme.is_underlay() {
            evaluate_candidate(cfg, d, topo, fading, i, j, rng)?.2
        } else {
            // Reference schemes: the cellular link gets a clean slot at
            // capacity.
            let g_cell_j = topo.cell_gain[j] * fading.cell[j];
            if cfg.scheme.is_downlink() {
                capacity(snr(d.p_b_max, g_cell_j, d.sigma_u))
            } else {
                capacity(snr(d.p_u_max, g_cell_j, d.sigma_b))
            }
        };
        out.push(PairCandidate {
            machine: i,
            cellular: j,
            metric_rate,
        });
    }
    Ok(out)
}

/// Realize the selected pairing into the epoch's outcome.
fn realize_epoch(
    cfg: &ScenarioConfig,
    d: &Derived,
    topo: &Topology,
    fading: &Fading,
    epoch: usize,
    selected: PairCandidate,
    rng: &mut ChaCha8Rng,
) -> Result<EpochMetrics, SimError> {
    let (i, j) = (selected.machine, selected.cellular);
    let (cellular_rate, machine_outage, infeasible) = if cfg.scheme.is_underlay() {
        let (decision, decoded, credited) = evaluate_candidate(cfg, d, topo, fading, i, j, rng)?;
        (credited, !decoded, decision.infeasible)
    } else {
        let g_machine = topo.machine_gain[i] * fading.machine[i];
        let machine_snr = if cfg.scheme.is_downlink() {
            snr(d.p_m, g_machine, d.sigma_u)
        } else {
            snr(d.p_u_max, g_machine, d.sigma_m)
        };
        let outage = machine_snr.value() < d.gamma_m_min.value();
        (selected.metric_rate, outage, false)
    };
    Ok(EpochMetrics {
        epoch,
        machine_pair: i,
        cellular_user: j,
        slots: cfg.scheme.slots(),
        cellular_rate,
        machine_outage,
        infeasible,
    })
}

fn run_one_epoch(
    cfg: &ScenarioConfig,
    d: &Derived,
    topo: &Topology,
    epoch: usize,
    fairness: Option<&FairnessState>,
) -> Result<EpochMetrics, SimError> {
    let mut rng = epoch_rng(cfg.seed, epoch);
    let fading = draw_fading(topo.n, &mut rng);
    let candidates = epoch_candidates(cfg, d, topo, &fading, &mut rng)?;
    let selected = match fairness {
        Some(f) => f.select_pf(&candidates)?,
        None => select_maxr(&candidates)?,
    };
    realize_epoch(cfg, d, topo, &fading, epoch, selected, &mut rng)
}

/// Fold a stream of epoch outcomes into run-level aggregates.
pub fn accumulate(cfg: &ScenarioConfig, n_users: usize, epochs: &[EpochMetrics]) -> RunMetrics {
    let n = epochs.len();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut outages = 0usize;
    let mut infeasible = 0usize;
    let mut m_part = vec![0usize; n_users];
    let mut c_part = vec![0usize; n_users];
    for e in epochs {
        let norm = e.cellular_rate / f64::from(e.slots);
        sum += norm;
        sum_sq += norm * norm;
        outages += usize::from(e.machine_outage);
        infeasible += usize::from(e.infeasible);
        m_part[e.machine_pair] += 1;
        c_part[e.cellular_user] += 1;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    let std_err = (var / n as f64).sqrt();
    let outage_rate = outages as f64 / n as f64;
    let outage_std_err = (outage_rate * (1.0 - outage_rate) / n as f64).sqrt();

    // Each scheduled link transmits in exactly one slot of its epoch, so
    // active time per link is 1/slots over the epochs its pair was part of.
    let per_slot = 1.0 / f64::from(cfg.scheme.slots());
    let active = |part: &[usize]| {
        part.iter()
            .map(|&p| if p > 0 { per_slot } else { 0.0 })
            .collect::<Vec<_>>()
    };

    let (mean_gamma_d, std_err_gamma_d, mean_gamma_u, std_err_gamma_u) = if cfg.scheme.is_downlink()
    {
        (mean, std_err, 0.0, 0.0)
    } else {
        (0.0, 0.0, mean, std_err)
    };
    RunMetrics {
        mean_gamma_d,
        std_err_gamma_d,
        mean_gamma_u,
        std_err_gamma_u,
        machine_outage_rate: outage_rate,
        outage_std_err,
        active_time_machine: active(&m_part),
        active_time_cellular: active(&c_part),
        machine_participation: m_part,
        cellular_participation: c_part,
        infeasible_epochs: infeasible,
        epochs: n,
    }
}

/// Execute one full run. Epochs run in parallel for the memoryless
/// schedulers and serially for proportional fair; either way the result is
/// identical for a given configuration and seed.
pub fn run(cfg: &ScenarioConfig) -> Result<RunMetrics, SimError> {
    let topo = build_scenario(cfg)?;
    run_with_topology(cfg, &topo)
}

/// Same as [`run`] but over a caller-provided topology, bypassing the
/// configured geometry.
pub fn run_with_topology(cfg: &ScenarioConfig, topo: &Topology) -> Result<RunMetrics, SimError> {
    cfg.validate()?;
    let d = Derived::new(cfg)?;

    // A machine link that misses its target even without interference makes
    // the underlay contract unsatisfiable.
    let baseline = rayleigh_outage(d.gamma_m_min, d.machine_mean_snr(cfg));
    if baseline > cfg.p_out {
        return Err(SimError::InfeasibleScenario {
            baseline,
            target: cfg.p_out,
        });
    }

    let epochs = match cfg.scheduler {
        SchedulerKind::ProportionalFair => {
            let mut fairness = FairnessState::new(topo.n);
            let mut out = Vec::with_capacity(cfg.epochs);
            for e in 0..cfg.epochs {
                let m = run_one_epoch(cfg, &d, topo, e, Some(&fairness))?;
                fairness.update(m.cellular_user, m.cellular_rate);
                out.push(m);
            }
            out
        }
        SchedulerKind::MaxR => (0..cfg.epochs)
            .into_par_iter()
            .map(|e| run_one_epoch(cfg, &d, topo, e, None))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(accumulate(cfg, topo.n, &epochs))
}
