//! Acceptance suite: seven numbered criteria, each printing one PASS/FAIL
//! line (run with `--nocapture` to see them). Tolerances are pinned in the
//! assertions; the oracles live in `common` and are derived independently
//! of the library's own formulas.

mod common;

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use d2d_underlay::bisect::{max_feasible, BisectParams};
use d2d_underlay::channel::{sample_fading, NoiseVariance, PowerLevel, Snr};
use d2d_underlay::decision::CsiMode;
use d2d_underlay::downlink::{
    decide_fcsi as dl_decide_fcsi, decide_pcsi as dl_decide_pcsi, DownlinkParams, FullDownlinkCsi,
    PartialDownlinkCsi, UjInterference,
};
use d2d_underlay::outage::{
    mc_outage_downlink_from_samples, mc_outage_downlink_underlay, mc_outage_uplink_from_samples,
    mc_outage_uplink_underlay, OutageTarget,
};
use d2d_underlay::sim::{run_with_topology, ScenarioConfig, SchedulerKind, Scheme};
use d2d_underlay::uplink::{
    decide_fcsi as ul_decide_fcsi, decide_pcsi as ul_decide_pcsi, FullUplinkCsi, PartialUplinkCsi,
    UplinkParams,
};

use common::*;

fn finish(criterion: u32, desc: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {criterion} ({desc}): PASS");
    } else {
        println!("criterion {criterion} ({desc}): FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!("criterion {criterion} failed: {failures:?}");
    }
}

fn check(failures: &mut Vec<String>, ok: bool, msg: String) {
    if !ok {
        failures.push(msg);
    }
}

/// Criterion 1 — outage contract: every underlay scheme/CSI combination
/// keeps the realized machine outage within target + tolerance + noise,
/// and under full CSI the outage matches the interference-free analytic
/// value (adaptation never causes outage).
#[test]
fn criterion_1_outage_contract() {
    let mut failures = Vec::new();
    for scheme in [Scheme::U1, Scheme::U2] {
        for csi in [CsiMode::Full, CsiMode::Partial] {
            let cfg = s1_cfg(scheme, csi);
            let started = std::time::Instant::now();
            let m = cached_run(&cfg);
            let secs = started.elapsed().as_secs_f64();
            check(
                &mut failures,
                secs < 120.0,
                format!("{scheme:?}/{csi:?}: took {secs:.0}s (budget 120s)"),
            );
            let bound = 0.1 + 0.01 + 3.0 * m.outage_std_err;
            check(
                &mut failures,
                m.machine_outage_rate <= bound,
                format!(
                    "{scheme:?}/{csi:?}: outage {} above {bound}",
                    m.machine_outage_rate
                ),
            );
            if csi == CsiMode::Full {
                let mean_snr = if scheme == Scheme::U1 {
                    cfg.machine_power().unwrap().watts() * 1e-6
                        / NoiseVariance::from_dbm(-97.5).watts()
                } else {
                    d2d_underlay::channel::dbm_to_watts(24.0).unwrap().watts() * 1e-6
                        / NoiseVariance::from_dbm(-97.5).watts()
                };
                let analytic = oracle_baseline_outage(0.5, mean_snr);
                let sigma = (analytic * (1.0 - analytic) / cfg.epochs as f64).sqrt();
                check(
                    &mut failures,
                    (m.machine_outage_rate - analytic).abs() <= 3.0 * sigma,
                    format!(
                        "{scheme:?}/full: outage {} vs analytic {analytic} (3 sigma {})",
                        m.machine_outage_rate,
                        3.0 * sigma
                    ),
                );
            }
        }
    }
    finish(1, "outage contract", failures);
}

/// Criterion 2 — full-CSI optimality by brute force: on 1,000 random
/// instances each, the closed-form decisions match a grid-search oracle
/// within one grid step, and never violate the oracle's feasibility audit.
#[test]
fn criterion_2_fcsi_optimality_vs_grid() {
    let mut failures = Vec::new();
    let ln2 = 2f64.ln();

    // Downlink: grid over (power, rate).
    let sigma_u = NoiseVariance::from_dbm(-97.5);
    let p_b_max = d2d_underlay::channel::dbm_to_watts(46.0).unwrap();
    let p_m = PowerLevel::from_watts(7.93e-6);
    let params = DownlinkParams {
        p_b_max,
        p_m,
        target: OutageTarget::new(0.5, 0.1, 10.0).unwrap(),
        sigma_u,
        uj_interference: UjInterference::Exact,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let pl250 = 2.17e-12;
    let mut skipped = 0;
    for k in 0..1_000 {
        let csi = FullDownlinkCsi {
            g_b_ui: pl250 * sample_fading(&mut rng),
            g_b_uj: pl250 * sample_fading(&mut rng),
            g_mi_ui: 1e-6 * sample_fading(&mut rng),
            g_mi_uj: pl250 * sample_fading(&mut rng),
        };
        let d = dl_decide_fcsi(&csi, &params);
        if d.machine_outage {
            skipped += 1;
            continue;
        }
        let s = sigma_u.watts();
        let gamma_m = p_m.watts() * csi.g_mi_ui / s;
        let gamma_cross = p_m.watts() * csi.g_mi_uj / s;
        let cap_uj = |p: f64| (1.0 + p * csi.g_b_uj / s / (1.0 + gamma_cross)).log2();
        let feasible = |p: f64, r: f64, slack: f64| {
            let gamma_b = p * csi.g_b_ui / s;
            let direct = 0.5 * (1.0 - slack) <= (1.0 + gamma_m / (1.0 + gamma_b)).log2();
            let oic = r * (1.0 - slack) <= (1.0 + gamma_b / (1.0 + gamma_m)).log2()
                && 0.5 * (1.0 - slack) <= (1.0 + gamma_m).log2();
            (direct || oic) && r * (1.0 - slack) <= cap_uj(p)
        };
        // Audit: the decision itself must be feasible.
        check(
            &mut failures,
            feasible(d.power.watts(), d.rate, 1e-9),
            format!("downlink instance {k}: decision infeasible"),
        );
        // Grid search.
        let n_grid = 200usize;
        let p_step = p_b_max.watts() / n_grid as f64;
        let r_hi = cap_uj(p_b_max.watts());
        let r_step = r_hi / n_grid as f64;
        let mut best = 0.0f64;
        for a in 0..=n_grid {
            let p = p_step * a as f64;
            for b in 0..=n_grid {
                let r = r_step * b as f64;
                if r > best && feasible(p, r, 0.0) {
                    best = r;
                }
            }
        }
        let slope =
            (csi.g_b_uj / (1.0 + gamma_cross)).max(csi.g_b_ui / (1.0 + gamma_m)) / (s * ln2);
        let slack = r_step + p_step * slope;
        check(
            &mut failures,
            (d.rate - best).abs() <= slack,
            format!(
                "downlink instance {k}: decided {} vs grid {best} (slack {slack})",
                d.rate
            ),
        );
    }
    check(
        &mut failures,
        skipped < 100,
        format!("downlink: {skipped} machine-outage instances (expected rare)"),
    );

    // Uplink: grid over the cellular power.
    let up = UplinkParams {
        p_u_max: d2d_underlay::channel::dbm_to_watts(24.0).unwrap(),
        target: OutageTarget::new(0.5, 0.1, 10.0).unwrap(),
        sigma_m: NoiseVariance::from_dbm(-97.5),
        sigma_b: NoiseVariance::from_dbm(-116.5),
    };
    let mut skipped = 0;
    for k in 0..1_000 {
        let csi = FullUplinkCsi {
            g_ui_mi: 1e-6 * sample_fading(&mut rng),
            g_uj_mi: pl250 * sample_fading(&mut rng),
            g_ui_b: pl250 * sample_fading(&mut rng),
            g_uj_b: pl250 * sample_fading(&mut rng),
        };
        let d = ul_decide_fcsi(&csi, &up);
        if d.machine_outage {
            skipped += 1;
            continue;
        }
        let gamma_min = 2f64.sqrt() - 1.0;
        let pmax = up.p_u_max.watts();
        let g_i = pmax * csi.g_ui_b / up.sigma_b.watts();
        let rate_at = |p: f64, slack: f64| {
            let g_s = p * csi.g_uj_b / up.sigma_b.watts();
            if 0.5 * (1.0 - slack) <= (1.0 + g_i / (1.0 + g_s)).log2() {
                (1.0 + g_s).log2()
            } else {
                (1.0 + g_s / (1.0 + g_i)).log2()
            }
        };
        let machine_ok = |p: f64, slack: f64| {
            pmax * csi.g_ui_mi / (up.sigma_m.watts() + p * csi.g_uj_mi) >= gamma_min * (1.0 - slack)
        };
        check(
            &mut failures,
            machine_ok(d.power.watts(), 1e-9)
                && d.rate <= rate_at(d.power.watts(), 1e-9) * (1.0 + 1e-9),
            format!("uplink instance {k}: decision infeasible"),
        );
        let n_grid = 400usize;
        let step = pmax / n_grid as f64;
        let mut best = 0.0f64;
        for a in 0..=n_grid {
            let p = step * a as f64;
            if machine_ok(p, 0.0) {
                best = best.max(rate_at(p, 0.0));
            }
        }
        let slack = step * csi.g_uj_b / (up.sigma_b.watts() * ln2);
        check(
            &mut failures,
            (d.rate - best).abs() <= slack,
            format!(
                "uplink instance {k}: decided {} vs grid {best} (slack {slack})",
                d.rate
            ),
        );
    }
    check(
        &mut failures,
        skipped < 100,
        format!("uplink: {skipped} machine-outage instances (expected rare)"),
    );
    finish(2, "full-CSI optimality vs grid oracle", failures);
}

/// Criterion 3 — Monte Carlo estimators vs closed-form oracles at 20
/// parameter points each, agreement within 3 standard errors at n = 1e5.
#[test]
fn criterion_3_estimators_vs_analytic_oracles() {
    let mut failures = Vec::new();
    let n = 100_000usize;
    let target = OutageTarget::new(0.5, 0.1, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(305);

    for k in 0..20 {
        let r_b: f64 = rng.random_range(0.0..6.0);
        let gamma_b: f64 = rng.random_range(0.0..80.0);
        let mean: f64 = rng.random_range(2.0..80.0);
        let est = mc_outage_downlink_underlay(
            r_b,
            Snr::new(gamma_b),
            Snr::new(mean),
            target,
            n,
            &mut rng,
        );
        let oracle = oracle_downlink_outage(r_b, gamma_b, mean, 0.5);
        let sigma = (oracle * (1.0 - oracle) / n as f64).sqrt().max(est.std_err);
        check(
            &mut failures,
            (est.p_hat - oracle).abs() <= 3.0 * sigma,
            format!(
                "downlink point {k}: estimate {} vs oracle {oracle}",
                est.p_hat
            ),
        );
    }

    let noise = NoiseVariance::from_dbm(-97.5);
    for k in 0..20 {
        let mean_s: f64 = rng.random_range(1.0..80.0);
        let mean_i: f64 = rng.random_range(0.0..40.0);
        let p_tx = PowerLevel::from_watts(1.0);
        let g_s = mean_s * noise.watts();
        let g_i = mean_i * noise.watts();
        let est = mc_outage_uplink_underlay(p_tx, p_tx, g_s, g_i, noise, target, n, &mut rng);
        let oracle = oracle_uplink_outage(mean_s, mean_i, 0.5);
        let sigma = (oracle * (1.0 - oracle) / n as f64).sqrt().max(est.std_err);
        check(
            &mut failures,
            (est.p_hat - oracle).abs() <= 3.0 * sigma,
            format!(
                "uplink point {k}: estimate {} vs oracle {oracle}",
                est.p_hat
            ),
        );
    }
    finish(3, "estimators vs analytic oracles", failures);
}

/// Criterion 4 — bisection contract: call budget
/// <= ceil(log2(range / 1e-4)) + 1, and feasible-side return values whose
/// independently re-estimated outage (fresh seed, 1e6 samples) lies in
/// [p_out - eps, p_out + eps]. Instances are built so the target is
/// crossed strictly inside the search range.
#[test]
fn criterion_4_bisection_contract() {
    let mut failures = Vec::new();
    let params = BisectParams {
        tolerance: 0.01,
        bracket_floor: 1e-4,
        samples: 100_000,
    };
    let budget = |range: f64| (range / 1e-4).log2().ceil() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(404);

    // Downlink rate search.
    for k in 0..10 {
        let mean: f64 = rng.random_range(35.0..60.0);
        let gamma_b: f64 = rng.random_range(30.0..100.0);
        let gamma_uj: f64 = rng.random_range(30.0..100.0);
        let rate_hi = (1.0 + gamma_uj).log2();
        let samples: Vec<f64> = (0..params.samples)
            .map(|_| mean * sample_fading(&mut rng))
            .collect();
        let mut calls = 0usize;
        let result = max_feasible(rate_hi, 0.1, &params, |r| {
            calls += 1;
            mc_outage_downlink_from_samples(r, Snr::new(gamma_b), 0.5, &samples).p_hat
        });
        check(
            &mut failures,
            calls <= budget(rate_hi),
            format!("downlink search {k}: {calls} calls > {}", budget(rate_hi)),
        );
        check(
            &mut failures,
            result.feasible && result.value > 1e-3 && result.value < rate_hi - 1e-3,
            format!("downlink search {k}: not an interior crossing ({result:?})"),
        );
        let mut fresh = ChaCha8Rng::seed_from_u64(9_000 + k);
        let re = mc_outage_downlink_underlay(
            result.value,
            Snr::new(gamma_b),
            Snr::new(mean),
            OutageTarget::new(0.5, 0.1, 1.0).unwrap(),
            1_000_000,
            &mut fresh,
        );
        check(
            &mut failures,
            (0.09..=0.11).contains(&re.p_hat),
            format!(
                "downlink search {k}: re-estimate {} outside window",
                re.p_hat
            ),
        );
    }

    // Uplink power search (power enters through the interference mean).
    for k in 0..10 {
        let mean_s: f64 = rng.random_range(35.0..60.0);
        let i_full: f64 = rng.random_range(20.0..60.0);
        let pairs: Vec<(f64, f64)> = (0..params.samples)
            .map(|_| (sample_fading(&mut rng), sample_fading(&mut rng)))
            .collect();
        let mut calls = 0usize;
        let result = max_feasible(i_full, 0.1, &params, |x| {
            calls += 1;
            mc_outage_uplink_from_samples(0.5, mean_s, x, &pairs).p_hat
        });
        check(
            &mut failures,
            calls <= budget(i_full),
            format!("uplink search {k}: {calls} calls > {}", budget(i_full)),
        );
        check(
            &mut failures,
            result.feasible && result.value > 1e-3 && result.value < i_full - 1e-3,
            format!("uplink search {k}: not an interior crossing ({result:?})"),
        );
        let noise = NoiseVariance::from_dbm(-97.5);
        let p_tx = PowerLevel::from_watts(1.0);
        let mut fresh = ChaCha8Rng::seed_from_u64(10_000 + k);
        let re = mc_outage_uplink_underlay(
            PowerLevel::from_watts(result.value),
            p_tx,
            mean_s * noise.watts(),
            noise.watts(),
            noise,
            OutageTarget::new(0.5, 0.1, 1.0).unwrap(),
            1_000_000,
            &mut fresh,
        );
        check(
            &mut failures,
            (0.09..=0.11).contains(&re.p_hat),
            format!("uplink search {k}: re-estimate {} outside window", re.p_hat),
        );
    }

    // The same contract through the public decision procedures.
    let sigma_u = NoiseVariance::from_dbm(-97.5);
    let p_b_max = d2d_underlay::channel::dbm_to_watts(46.0).unwrap();
    let dl_params = DownlinkParams {
        p_b_max,
        p_m: PowerLevel::from_watts(7.93e-6),
        target: OutageTarget::new(0.5, 0.1, 10.0).unwrap(),
        sigma_u,
        uj_interference: UjInterference::Exact,
    };
    for k in 0..5 {
        let mean: f64 = rng.random_range(35.0..60.0);
        let gamma_b: f64 = rng.random_range(30.0..100.0);
        let gamma_uj: f64 = rng.random_range(30.0..100.0);
        let csi = PartialDownlinkCsi {
            g_b_ui: gamma_b * sigma_u.watts() / p_b_max.watts(),
            g_b_uj: gamma_uj * sigma_u.watts() / p_b_max.watts(),
            mean_g_mi_ui: mean * sigma_u.watts() / dl_params.p_m.watts(),
            mean_g_mi_uj: 1e-30,
        };
        let d = dl_decide_pcsi(&csi, &dl_params, &params, &mut rng).unwrap();
        let mut fresh = ChaCha8Rng::seed_from_u64(11_000 + k);
        let re = mc_outage_downlink_underlay(
            d.rate,
            Snr::new(gamma_b),
            Snr::new(mean),
            OutageTarget::new(0.5, 0.1, 1.0).unwrap(),
            1_000_000,
            &mut fresh,
        );
        check(
            &mut failures,
            !d.infeasible && (0.09..=0.11).contains(&re.p_hat),
            format!(
                "downlink decision {k}: re-estimate {} outside window",
                re.p_hat
            ),
        );
    }
    let ul_params = UplinkParams {
        p_u_max: d2d_underlay::channel::dbm_to_watts(24.0).unwrap(),
        target: OutageTarget::new(0.5, 0.1, 10.0).unwrap(),
        sigma_m: NoiseVariance::from_dbm(-97.5),
        sigma_b: NoiseVariance::from_dbm(-116.5),
    };
    for k in 0..5 {
        let mean_s: f64 = rng.random_range(35.0..60.0);
        let i_full: f64 = rng.random_range(20.0..60.0);
        let pmax = ul_params.p_u_max.watts();
        let csi = PartialUplinkCsi {
            mean_g_ui_mi: mean_s * ul_params.sigma_m.watts() / pmax,
            mean_g_uj_mi: i_full * ul_params.sigma_m.watts() / pmax,
            g_ui_b: 2.17e-12,
            g_uj_b: 2.17e-12,
        };
        let d = ul_decide_pcsi(&csi, &ul_params, &params, &mut rng).unwrap();
        let mut fresh = ChaCha8Rng::seed_from_u64(12_000 + k);
        let re = mc_outage_uplink_underlay(
            d.power,
            ul_params.p_u_max,
            csi.mean_g_ui_mi,
            csi.mean_g_uj_mi,
            ul_params.sigma_m,
            OutageTarget::new(0.5, 0.1, 1.0).unwrap(),
            1_000_000,
            &mut fresh,
        );
        check(
            &mut failures,
            !d.infeasible && (0.09..=0.11).contains(&re.p_hat),
            format!(
                "uplink decision {k}: re-estimate {} outside window",
                re.p_hat
            ),
        );
    }
    finish(4, "bisection call budget and window", failures);
}

/// Criterion 5 — figure-ordering reproduction at full-power settings, with
/// each strict gap exceeding 3 combined standard errors, plus the active
/// time split between underlay and reference schemes.
#[test]
fn criterion_5_figure_orderings_and_active_time() {
    let mut failures = Vec::new();

    let u1_f = cached_run(&s1_cfg(Scheme::U1, CsiMode::Full));
    let u1_p = cached_run(&s1_cfg(Scheme::U1, CsiMode::Partial));
    let r1 = cached_run(&s1_cfg(Scheme::R1, CsiMode::Full));
    let u2 = cached_run(&s1_cfg(Scheme::U2, CsiMode::Full));
    let r2 = cached_run(&s1_cfg(Scheme::R2, CsiMode::Full));

    check(
        &mut failures,
        u1_f.mean_gamma_d - u1_p.mean_gamma_d
            > gap_bound(u1_f.std_err_gamma_d, u1_p.std_err_gamma_d),
        format!(
            "downlink full-CSI {} not above partial-CSI {}",
            u1_f.mean_gamma_d, u1_p.mean_gamma_d
        ),
    );
    check(
        &mut failures,
        u1_p.mean_gamma_d - r1.mean_gamma_d > gap_bound(u1_p.std_err_gamma_d, r1.std_err_gamma_d),
        format!(
            "downlink partial-CSI underlay {} not above reference {}",
            u1_p.mean_gamma_d, r1.mean_gamma_d
        ),
    );
    check(
        &mut failures,
        u2.mean_gamma_u - r2.mean_gamma_u > gap_bound(u2.std_err_gamma_u, r2.std_err_gamma_u),
        format!(
            "uplink underlay {} not above reference {}",
            u2.mean_gamma_u, r2.mean_gamma_u
        ),
    );

    // Multi-pair active time: underlaid links are active the whole epoch,
    // reference links at most half of it. Proportional fair guarantees
    // every link participates, so the per-link bound is meaningful.
    let s2_u1 = cached_run(&ScenarioConfig {
        pairs: 4,
        epochs: 10_000,
        scheduler: SchedulerKind::ProportionalFair,
        ..s1_cfg(Scheme::U1, CsiMode::Full)
    });
    for (k, (&a, &p)) in s2_u1
        .active_time_machine
        .iter()
        .zip(&s2_u1.machine_participation)
        .enumerate()
    {
        check(
            &mut failures,
            p > 0 && a > 0.5,
            format!("underlay machine link {k}: active {a} (participation {p})"),
        );
    }
    for (k, &a) in s2_u1.active_time_cellular.iter().enumerate() {
        check(
            &mut failures,
            a > 0.5,
            format!("underlay cellular link {k}: active {a}"),
        );
    }
    let s2_r1 = cached_run(&ScenarioConfig {
        pairs: 4,
        epochs: 10_000,
        scheduler: SchedulerKind::ProportionalFair,
        ..s1_cfg(Scheme::R1, CsiMode::Full)
    });
    for (k, &a) in s2_r1
        .active_time_machine
        .iter()
        .chain(&s2_r1.active_time_cellular)
        .enumerate()
    {
        check(
            &mut failures,
            a <= 0.5,
            format!("reference link {k}: active {a} above 0.5"),
        );
    }
    finish(5, "figure orderings and active time", failures);
}

/// Criterion 6 — scheduler properties on a symmetric four-pair topology:
/// proportional fair serves every user 1/4 +- 0.05 of the time, and MaxR's
/// mean served rate dominates PF on identical channel streams.
#[test]
fn criterion_6_scheduler_properties() {
    let mut failures = Vec::new();
    let topo = symmetric_topology(4, 2.17e-12, 2.17e-12);
    let base = ScenarioConfig {
        pairs: 4,
        epochs: 10_000,
        ..s1_cfg(Scheme::U1, CsiMode::Full)
    };
    let pf = run_with_topology(
        &ScenarioConfig {
            scheduler: SchedulerKind::ProportionalFair,
            ..base.clone()
        },
        &topo,
    )
    .unwrap();
    for (user, &served) in pf.cellular_participation.iter().enumerate() {
        let share = served as f64 / base.epochs as f64;
        check(
            &mut failures,
            (share - 0.25).abs() <= 0.05,
            format!("PF share of user {user} is {share}"),
        );
    }
    let maxr = run_with_topology(&base, &topo).unwrap();
    check(
        &mut failures,
        maxr.mean_gamma_d >= pf.mean_gamma_d,
        format!(
            "MaxR mean rate {} below PF {}",
            maxr.mean_gamma_d, pf.mean_gamma_d
        ),
    );
    finish(6, "scheduler properties", failures);
}

/// Criterion 7 — determinism: re-running a finished run from its manifest
/// produces byte-identical CSV.
#[test]
fn criterion_7_manifest_determinism() {
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.cfg");
    std::fs::write(
        &cfg_path,
        "schemes = U1:full, U1:partial, R1\nepochs = 500\nmc_samples = 10000\nseed = 77\nsweep = p_b_max_dbm=38,46\n",
    )
    .unwrap();
    let run_cli = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_d2d-sim"))
            .args(args)
            .current_dir(dir.path())
            .output()
            .expect("binary runs")
    };
    let out = run_cli(&["--config", cfg_path.to_str().unwrap(), "--output", "a.csv"]);
    check(
        &mut failures,
        out.status.success(),
        format!("first run failed: {}", String::from_utf8_lossy(&out.stderr)),
    );
    let manifest = dir.path().join("a.csv.manifest");
    let out = run_cli(&["--config", manifest.to_str().unwrap(), "--output", "b.csv"]);
    check(
        &mut failures,
        out.status.success(),
        format!(
            "manifest run failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ),
    );
    if failures.is_empty() {
        let a = std::fs::read(dir.path().join("a.csv")).unwrap();
        let b = std::fs::read(dir.path().join("b.csv")).unwrap();
        check(
            &mut failures,
            a == b,
            "CSV from manifest re-run differs".to_string(),
        );
    }
    finish(7, "manifest determinism", failures);
}
