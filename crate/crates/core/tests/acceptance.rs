//! Acceptance checks, one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::time::Instant;

use changuard::budget::{detection_margin, shot_budget, BudgetParams, ReferenceMode};
use changuard::channels::{
    local_family, observable_family, reference_circuit, ChannelKind, DriftParams, FamilyTier,
};
use changuard::contract::{
    compute_fingerprint, contract_deviation, run_verifier, verify_audit_chain, AuditDecision,
    MeasurementMode, StageSpec, Verdict, VerifierConfig,
};
use changuard::expcli::{
    experiment_detection, experiment_drift, experiment_sample_complexity, interval_from_artifact,
    rate_rows, ExperimentConfig, ExperimentKind,
};
use changuard::framebound::{diamond_distance_unitary, frame_bound_numeric, FrameBoundOptions};
use changuard::rng::{seeded, substream};
use changuard::simcore::NoiseModel;
use changuard::Error;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: ok,
        detail: detail.into(),
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        pass: parts.iter().all(|p| p.pass),
        detail: parts
            .iter()
            .map(|p| format!("{}{}", if p.pass { "" } else { "[x] " }, p.detail))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn budget_regression() -> Outcome {
    let mut p = BudgetParams::deployed();
    p.mode = ReferenceMode::Precomputed;
    let pre = shot_budget(&p).unwrap();
    p.mode = ReferenceMode::Sampled;
    let s = shot_budget(&p).unwrap();
    check(
        pre.total == 3420 && s.total == 13680 && s.per_observable == 2280,
        format!(
            "precomputed N = {}, sampled N = {}, n_O = {}",
            pre.total, s.total, s.per_observable
        ),
    )
}

fn detection_margin_check() -> Outcome {
    let g = detection_margin(0.5, 3f64.sqrt(), 0.15).unwrap();
    let neg = detection_margin(0.5, 3.73, 0.15);
    let g2 = detection_margin(0.5, 3.73, 0.05).unwrap();
    let n = shot_budget(&BudgetParams {
        delta: 0.5,
        epsilon: 0.05,
        frame_bound: 3.73,
        k: 15,
        op_norm: 1.0,
        eta: 0.05,
        mode: ReferenceMode::Sampled,
    })
    .unwrap()
    .total as f64;
    merge(vec![
        check((g - 0.139).abs() < 5e-4, format!("gamma = {g:.6}")),
        check(
            matches!(neg, Err(Error::NonPositiveMargin { .. })),
            "NonPositiveMargin at C = 3.73, eps = 0.15",
        ),
        check((g2 - 0.084).abs() < 5e-4, format!("gamma(C=3.73, eps=0.05) = {g2:.6}")),
        check(
            (n / 1.4e5 - 1.0).abs() <= 0.02,
            format!("N(C=3.73, eps=0.05, k=15) = {n} vs 1.4e5 +/- 2%"),
        ),
    ])
}

fn frame_bounds() -> Outcome {
    let opts = FrameBoundOptions::default();
    let mut parts = Vec::new();
    let cases = [
        ("1-qubit local", local_family(1).unwrap(), 1.732, 0.01),
        ("2-qubit local", local_family(2).unwrap(), 1.732, 0.01),
        ("tier2", observable_family(FamilyTier::Tier2), 2.21, 0.03),
        ("tier3", observable_family(FamilyTier::Tier3), 3.73, 0.06),
    ];
    for (i, (name, fam, want, tol)) in cases.into_iter().enumerate() {
        let r = frame_bound_numeric(&fam, &opts, &mut seeded(100 + i as u64)).unwrap();
        parts.push(check(
            r.restarts_used >= 200 && (r.c_estimate - want).abs() <= tol,
            format!("{name} C = {:.5} (target {want} +/- {tol})", r.c_estimate),
        ));
    }
    merge(parts)
}

fn sneaky_detection_exact() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Detection, 1);
    cfg.exact = true;
    let a = experiment_detection(&cfg).unwrap();
    let weak = a.verdict("weak").unwrap();
    let complete = a.verdict("complete").unwrap();
    let dev = &a.deviations[0].deviation;
    let oracle = common::sneaky_deviation_oracle();
    let oracle_max = oracle.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let rows_match = oracle
        .iter()
        .all(|(l, v)| (dev.get(l).unwrap() - v).abs() < 1e-12);
    let z_floor = ["Z1", "Z2", "Z1Z2"].iter().all(|l| dev.get(l).unwrap() < 1e-12);
    let beyond = ["X1", "Y1", "X2", "Y2"]
        .iter()
        .filter(|l| dev.get(l).unwrap() > cfg.epsilon)
        .count();
    check(
        weak.max_deviation == 0.0
            && (complete.max_deviation - oracle_max).abs() < 1e-12
            && rows_match
            && complete.max_deviation > 0.15
            && weak.verdict == Verdict::Accept
            && complete.verdict == Verdict::Halt
            && z_floor
            && beyond >= 3,
        format!(
            "weak max = {}, complete max = {:.12} (oracle {:.12}) on {}, {beyond} X/Y rows > eps, verdicts ({}, {})",
            weak.max_deviation,
            complete.max_deviation,
            oracle_max,
            complete.argmax,
            weak.verdict.as_str(),
            complete.verdict.as_str()
        ),
    )
}

fn weakened_magnitude() -> Outcome {
    let fam = observable_family(FamilyTier::Complete);
    let fp = |k: ChannelKind| {
        compute_fingerprint(
            &reference_circuit(&k).unwrap(),
            &fam,
            &MeasurementMode::Exact,
            &mut seeded(0),
        )
        .unwrap()
    };
    let d = contract_deviation(&fp(ChannelKind::WeakenedSneaky), &fp(ChannelKind::Honest)).unwrap();
    check(
        (d.max_dev - 0.259).abs() <= 0.005,
        format!("max deviation {:.6} on {} (target 0.259 +/- 0.005)", d.max_dev, d.argmax_label),
    )
}

fn informative_detection() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Sample, 6);
    cfg.trials = 100;
    let rows = rate_rows(&experiment_sample_complexity(&cfg).unwrap()).unwrap();
    let full = rows.iter().find(|r| r.divisor == 1).unwrap();
    let tiny = rows.iter().find(|r| r.divisor == 100).unwrap();
    check(
        full.total_shots == 13680 && full.tpr >= 0.95 && full.fpr <= 0.05 && tiny.fpr >= 0.5,
        format!(
            "N = {}: TPR {:.2} FPR {:.2}; N/100 (n_O = {}): FPR {:.2}; {} trials",
            full.total_shots, full.tpr, full.fpr, tiny.per_observable, tiny.fpr, cfg.trials
        ),
    )
}

fn drift_calibration() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Drift, 7);
    cfg.exact = true;
    let a = experiment_drift(&cfg).unwrap();
    let iv = interval_from_artifact(&a).unwrap();
    let rec = iv.recommended.unwrap_or(f64::NAN);
    check(
        (iv.d_typ - 0.067).abs() <= 1e-3 && (iv.upper - 0.289).abs() <= 1e-3 && (rec - 0.178).abs() <= 1e-3,
        format!("interval [{:.4}, {:.4}], recommended {:.4}", iv.d_typ, iv.upper, rec),
    )
}

fn soundness() -> Outcome {
    let fam = observable_family(FamilyTier::Tier3);
    let honest = reference_circuit(&ChannelKind::Honest).unwrap();
    let fp_h = compute_fingerprint(&honest, &fam, &MeasurementMode::Exact, &mut seeded(0)).unwrap();
    let u_h = honest.unitary().unwrap();
    let mut rng = seeded(8);
    let mut worst_slack = f64::INFINITY;
    let draws = 200;
    for _ in 0..draws {
        let angles: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        let d = ChannelKind::Drifted(DriftParams::from_angles(angles));
        let c = reference_circuit(&d).unwrap();
        let fp_d = compute_fingerprint(&c, &fam, &MeasurementMode::Exact, &mut seeded(0)).unwrap();
        let dev = contract_deviation(&fp_d, &fp_h).unwrap();
        let diamond = diamond_distance_unitary(&u_h, &c.unitary().unwrap()).unwrap();
        worst_slack = worst_slack.min(diamond - dev.max_dev);
    }
    check(
        worst_slack >= -1e-12,
        format!("{draws} drifts, min (d_diamond - max deviation) = {worst_slack:.6}"),
    )
}

fn hoeffding_coverage() -> Outcome {
    let fam = observable_family(FamilyTier::Complete);
    let honest = reference_circuit(&ChannelKind::Honest).unwrap();
    let exact = compute_fingerprint(&honest, &fam, &MeasurementMode::Exact, &mut seeded(0)).unwrap();
    let n_o = 3420u64.div_ceil(6);
    let gamma = detection_margin(0.5, 3f64.sqrt(), 0.15).unwrap();
    let mode = MeasurementMode::Shots {
        shots: n_o,
        noise: NoiseModel::IDEAL,
    };
    let trials = 1000;
    let failures = (0..trials)
        .filter(|&t| {
            let fp = compute_fingerprint(&honest, &fam, &mode, &mut substream(9, &[t])).unwrap();
            contract_deviation(&fp, &exact).unwrap().max_dev > gamma
        })
        .count();
    let frac = failures as f64 / trials as f64;
    check(
        frac <= 0.05,
        format!("n_O = {n_o}, gamma = {gamma:.4}: {failures}/{trials} trials exceed gamma ({frac:.3} <= 0.05)"),
    )
}

fn audit_integrity() -> Outcome {
    let fam = observable_family(FamilyTier::Complete);
    let spec = StageSpec::new(&fam, 0.15, "honest").unwrap();
    let reference = compute_fingerprint(
        &reference_circuit(&ChannelKind::Honest).unwrap(),
        &fam,
        &MeasurementMode::Exact,
        &mut seeded(0),
    )
    .unwrap();
    let cfg = VerifierConfig {
        rounds: 25,
        shots_per_round: 2280,
        noise: NoiseModel::default(),
    };
    let (mut total, mut caught) = (0, 0);
    for (seed, kind) in [(1, ChannelKind::Honest), (2, ChannelKind::Sneaky), (3, ChannelKind::WeakenedSneaky)] {
        let channel = reference_circuit(&kind).unwrap();
        let report = run_verifier(&spec, &reference, &channel, &cfg, &mut seeded(seed)).unwrap();
        assert!(verify_audit_chain(&report.trail, &spec.spec_hash));
        for i in 0..report.trail.len() {
            for field in 0..7 {
                let mut t = report.trail.clone();
                let e = &mut t[i];
                match field {
                    0 => e.round += 1,
                    1 => e.observable = if e.observable == "X1" { "Y1".into() } else { "X1".into() },
                    2 => e.mu_hat = -e.mu_hat + 1e-9,
                    3 => e.deviation += 1e-12,
                    4 => {
                        e.decision = match e.decision {
                            AuditDecision::Halt => AuditDecision::DriftLogged,
                            AuditDecision::DriftLogged => AuditDecision::Halt,
                        }
                    }
                    5 => e.prev_hash.replace_range(0..1, if e.prev_hash.starts_with('0') { "1" } else { "0" }),
                    _ => e.entry_hash.replace_range(0..1, if e.entry_hash.starts_with('0') { "1" } else { "0" }),
                }
                total += 1;
                if !verify_audit_chain(&t, &spec.spec_hash) {
                    caught += 1;
                }
            }
        }
    }
    check(
        total > 0 && caught == total,
        format!("{caught}/{total} single-field mutations detected"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("budget regression", budget_regression),
        ("detection margin", detection_margin_check),
        ("frame bounds", frame_bounds),
        ("sneaky detection (exact)", sneaky_detection_exact),
        ("weakened-sneaky magnitude", weakened_magnitude),
        ("informative-detection thresholding", informative_detection),
        ("drift calibration", drift_calibration),
        ("soundness property", soundness),
        ("Hoeffding coverage", hoeffding_coverage),
        ("audit integrity", audit_integrity),
    ];
    println!();
    println!(
        "info: convex-dual frame bounds local {:.7}, tier2 {:.7}, tier3 {:.7}",
        common::FRAME_BOUND_LOCAL,
        common::FRAME_BOUND_TIER2,
        common::FRAME_BOUND_TIER3
    );
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} ({secs:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
