use crate::channels::{
    family_labels, kernel_circuit_with, observable_family, ChannelKind, FamilyTier, REFERENCE_PAIR,
};
use crate::contract::{contract_deviation, measure_family, StageSpec, Verdict};
use crate::rng::substream;
use crate::simcore::PauliObservable;
use crate::Result;

use super::report::{cell, CountsRecord, NamedDeviation, NamedFingerprint, Table, VerdictRecord};
use super::{measurement_mode, ExperimentConfig, RunArtifact};

fn contracts(cfg: &ExperimentConfig) -> Vec<FamilyTier> {
    match cfg.family {
        Some(t) => vec![t],
        None => vec![FamilyTier::Weak, FamilyTier::Complete],
    }
}

/// Union of the contract families, first occurrence order.
fn union_family(tiers: &[FamilyTier]) -> Vec<PauliObservable> {
    let mut out: Vec<PauliObservable> = Vec::new();
    for t in tiers {
        for o in observable_family(*t) {
            if !out.contains(&o) {
                out.push(o);
            }
        }
    }
    out
}

/// Honest versus adversarial fingerprints at the reference pair, with the
/// full-family-max verdict of each configured contract.
pub fn experiment_detection(cfg: &ExperimentConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    let seed = cfg.seed()?;
    let tiers = contracts(cfg);
    let family = union_family(&tiers);
    let (xi, xj) = REFERENCE_PAIR;
    let adversary = cfg.adversary();

    let mut artifact = RunArtifact::new(cfg);
    let mut measured = Vec::new();
    for (stream, kind) in [(0u64, ChannelKind::Honest), (1, adversary)] {
        let circuit = kernel_circuit_with(&cfg.feature_map, &kind, &xi, &xj)?;
        let mode = measurement_mode(cfg, &kind, cfg.shots);
        let mut m = measure_family(&circuit, &family, &mode, &mut substream(seed, &[stream]))?;
        m.fingerprint.provenance.channel = kind.descriptor();
        m.fingerprint.provenance.seed = Some(seed);
        for (obs, counts) in m.counts {
            artifact.raw_counts.push(CountsRecord {
                channel: kind.descriptor(),
                observable: obs,
                counts,
            });
        }
        artifact.fingerprints.push(NamedFingerprint {
            name: if stream == 0 { "honest" } else { "adversary" }.into(),
            fingerprint: m.fingerprint.clone(),
        });
        measured.push(m.fingerprint);
    }
    let deviation = contract_deviation(&measured[1], &measured[0])?;

    let mut verdicts = Table::new(
        "verdicts",
        &["contract", "family_size", "max_deviation", "argmax", "verdict"],
    );
    for tier in &tiers {
        let labels = family_labels(&observable_family(*tier));
        let spec = StageSpec::from_labels(labels.clone(), cfg.epsilon, "honest")?;
        artifact
            .spec_hashes
            .insert(tier.name().to_string(), spec.spec_hash.clone());
        let (max_dev, argmax) = deviation.max_over(&labels)?;
        let verdict = Verdict::from_max_deviation(max_dev, cfg.epsilon);
        verdicts.push(vec![
            tier.name().into(),
            labels.len().to_string(),
            cell(max_dev),
            argmax.clone(),
            verdict.as_str().into(),
        ]);
        artifact.verdicts.push(VerdictRecord {
            contract: tier.name().into(),
            family: labels,
            epsilon: cfg.epsilon,
            max_deviation: max_dev,
            argmax,
            verdict,
        });
    }

    let mut table = Table::new(
        "deviations",
        &["observable", "dev_honest_vs_sneaky", "within_tolerance"],
    );
    for e in &deviation.per_observable {
        table.push(vec![
            e.observable.clone(),
            cell(e.value),
            (e.value <= cfg.epsilon).to_string(),
        ]);
    }
    artifact.deviations.push(NamedDeviation {
        name: "honest_vs_adversary".into(),
        deviation,
    });
    artifact.tables.push(table);
    artifact.tables.push(verdicts);
    Ok(artifact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcli::ExperimentKind;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig::new(ExperimentKind::Detection, 11)
    }

    #[test]
    fn exact_contrast() {
        let mut c = cfg();
        c.exact = true;
        let a = experiment_detection(&c).unwrap();
        let weak = a.verdict("weak").unwrap();
        let complete = a.verdict("complete").unwrap();
        assert_eq!(weak.max_deviation, 0.0);
        assert_eq!(weak.verdict, Verdict::Accept);
        assert!(complete.max_deviation > 0.3);
        assert_eq!(complete.verdict, Verdict::Halt);
        assert!(a.raw_counts.is_empty());
        assert_eq!(a.table("deviations").unwrap().rows.len(), 7);
    }

    #[test]
    fn noisy_pattern() {
        let a = experiment_detection(&cfg()).unwrap();
        let dev = &a.deviations[0].deviation;
        for z in ["Z1", "Z2", "Z1Z2"] {
            assert!(dev.get(z).unwrap() < 0.05, "{z}");
        }
        let beyond = ["X1", "Y1", "X2", "Y2"]
            .iter()
            .filter(|l| dev.get(l).unwrap() > 0.15)
            .count();
        assert!(beyond >= 3);
        assert_eq!(a.verdict("weak").unwrap().verdict, Verdict::Accept);
        assert_eq!(a.verdict("complete").unwrap().verdict, Verdict::Halt);
        assert_eq!(a.raw_counts.len(), 14);
    }

    #[test]
    fn weak_only() {
        let mut c = cfg();
        c.family = Some(FamilyTier::Weak);
        let a = experiment_detection(&c).unwrap();
        assert_eq!(a.table("deviations").unwrap().rows.len(), 1);
        assert_eq!(a.verdicts.len(), 1);
        assert_eq!(a.verdicts[0].verdict, Verdict::Accept);
    }

    #[test]
    fn halt_whenever_a_row_exceeds_tolerance() {
        let a = experiment_detection(&cfg()).unwrap();
        let rows = &a.table("deviations").unwrap().rows;
        let complete = a.verdict("complete").unwrap();
        let any_beyond = rows
            .iter()
            .filter(|r| complete.family.contains(&r[0]))
            .any(|r| r[2] == "false");
        assert_eq!(any_beyond, complete.verdict == Verdict::Halt);
    }

    #[test]
    fn reproducible() {
        let a = experiment_detection(&cfg()).unwrap();
        let b = experiment_detection(&cfg()).unwrap();
        assert_eq!(a.reproducible_json().unwrap(), b.reproducible_json().unwrap());
    }
}
