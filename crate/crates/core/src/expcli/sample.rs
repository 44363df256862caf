use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{shot_budget, BudgetParams, ReferenceMode};
use crate::channels::{kernel_circuit_with, observable_family, ChannelKind, FamilyTier, REFERENCE_PAIR};
use crate::contract::{compute_fingerprint, contract_deviation, MeasurementMode};
use crate::rng::substream;
use crate::{Error, Result};

use super::report::{cell, NamedFingerprint, Table};
use super::{measurement_mode, ExperimentConfig, RunArtifact};

/// Detection rates at one budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub divisor: u64,
    pub total_shots: u64,
    pub per_observable: u64,
    pub tpr: f64,
    pub fpr: f64,
}

fn budget_label(divisor: u64) -> String {
    if divisor == 1 {
        "N".into()
    } else {
        format!("N/{divisor}")
    }
}

/// TPR and FPR of the full-family-max decision at budgets `N / divisor`.
///
/// `N` is the sampled-reference budget for the complete family. Each trial
/// draws fresh honest and adversarial fingerprints at `n_O = ⌊N_b / k⌋` shots
/// per observable and flags when the largest deviation from the clean
/// reference exceeds `ε_A`.
pub fn experiment_sample_complexity(cfg: &ExperimentConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    let seed = cfg.seed()?;
    let family = observable_family(FamilyTier::Complete);
    let k = family.len() as u64;
    let budget = shot_budget(&BudgetParams {
        delta: cfg.delta,
        epsilon: cfg.epsilon,
        frame_bound: cfg.frame_bound,
        k: family.len(),
        op_norm: 1.0,
        eta: cfg.eta,
        mode: ReferenceMode::Sampled,
    })?;

    let (xi, xj) = REFERENCE_PAIR;
    let adversary = cfg.adversary();
    let honest = kernel_circuit_with(&cfg.feature_map, &ChannelKind::Honest, &xi, &xj)?;
    let attacked = kernel_circuit_with(&cfg.feature_map, &adversary, &xi, &xj)?;

    let reference_mode = match (cfg.exact, cfg.reference_shots) {
        (false, Some(n)) => measurement_mode(cfg, &ChannelKind::Honest, n),
        _ => MeasurementMode::Exact,
    };
    let mut reference = compute_fingerprint(
        &honest,
        &family,
        &reference_mode,
        &mut substream(seed, &[0]),
    )?;
    reference.provenance.channel = "honest".into();
    reference.provenance.seed = Some(seed);

    let mut rows = Vec::new();
    for (b, &divisor) in cfg.budget_divisors.iter().enumerate() {
        let total = budget.total / divisor;
        if total < k {
            return Err(Error::InvalidParameter(format!(
                "budget {} = {total} shots is below the family size {k}",
                budget_label(divisor)
            )));
        }
        let n_o = total / k;
        let flags: Vec<(bool, bool)> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<(bool, bool)> {
                let mut flagged = [false; 2];
                for (stream, (circuit, kind)) in
                    [(&honest, ChannelKind::Honest), (&attacked, adversary)].into_iter().enumerate()
                {
                    let mode = MeasurementMode::Shots {
                        shots: n_o,
                        noise: kind.effective_noise(&cfg.noise),
                    };
                    let mut rng = substream(seed, &[1, b as u64, t as u64, stream as u64]);
                    let fp = compute_fingerprint(circuit, &family, &mode, &mut rng)?;
                    flagged[stream] = contract_deviation(&fp, &reference)?.max_dev > cfg.epsilon;
                }
                Ok((flagged[0], flagged[1]))
            })
            .collect::<Result<_>>()?;
        let n = cfg.trials as f64;
        rows.push(RateRow {
            divisor,
            total_shots: total,
            per_observable: n_o,
            fpr: flags.iter().filter(|f| f.0).count() as f64 / n,
            tpr: flags.iter().filter(|f| f.1).count() as f64 / n,
        });
    }

    let mut artifact = RunArtifact::new(cfg);
    artifact.fingerprints.push(NamedFingerprint {
        name: "reference".into(),
        fingerprint: reference,
    });
    artifact.notes.push(format!(
        "budget N = {} ({} per observable) from gamma = {:.6} with a sampled reference",
        budget.total, budget.per_observable, budget.gamma
    ));
    artifact
        .notes
        .push(format!("adversary: {}; trials per budget: {}", adversary, cfg.trials));
    let mut table = Table::new("rates", &["budget", "n_O", "TPR", "FPR"]);
    for r in &rows {
        table.push(vec![
            r.total_shots.to_string(),
            r.per_observable.to_string(),
            cell(r.tpr),
            cell(r.fpr),
        ]);
    }
    artifact.tables.push(table);
    Ok(artifact)
}

/// Parse the rate rows back out of a sample artifact.
pub fn rate_rows(artifact: &RunArtifact) -> Result<Vec<RateRow>> {
    let table = artifact
        .table("rates")
        .ok_or_else(|| Error::Config("artifact has no rates table".into()))?;
    let parse = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|e| Error::Config(format!("bad cell {s:?}: {e}")))
    };
    table
        .rows
        .iter()
        .zip(&artifact.config.budget_divisors)
        .map(|(r, d)| {
            Ok(RateRow {
                divisor: *d,
                total_shots: parse(&r[0])? as u64,
                per_observable: parse(&r[1])? as u64,
                tpr: parse(&r[2])?,
                fpr: parse(&r[3])?,
            })
        })
        .collect()
}
