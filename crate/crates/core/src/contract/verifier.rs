use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::simcore::{expectation_from_counts, measurement_circuit, sample_counts, Circuit, NoiseModel};
use crate::{Error, Result};

use super::{AuditDecision, AuditEntry, AuditTrail, Fingerprint, StageSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Halt,
}

impl Verdict {
    /// Full-family rule: halt iff the largest deviation exceeds the tolerance.
    pub fn from_max_deviation(max_dev: f64, epsilon: f64) -> Verdict {
        if max_dev > epsilon {
            Verdict::Halt
        } else {
            Verdict::Accept
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::Halt => "halt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifierConfig {
    pub rounds: u64,
    pub shots_per_round: u64,
    pub noise: NoiseModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub halted_round: Option<u64>,
    pub spec_hash: String,
    pub trail: Vec<AuditEntry>,
    pub config: VerifierConfig,
}

/// Streaming verification.
///
/// Each round draws one observable uniformly from the spec family, estimates
/// it with `shots_per_round` shots on `channel`, and compares against the
/// reference. The first round whose deviation exceeds `spec.epsilon` halts;
/// every other round is committed as a drift event. Exhausting `rounds`
/// accepts.
pub fn run_verifier<R: Rng + ?Sized>(
    spec: &StageSpec,
    reference: &Fingerprint,
    channel: &Circuit,
    config: &VerifierConfig,
    rng: &mut R,
) -> Result<VerdictReport> {
    reference.validate_against(spec)?;
    if config.rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be at least 1".into()));
    }
    if config.shots_per_round == 0 {
        return Err(Error::ZeroShots);
    }
    config.noise.validate()?;

    let observables = spec.observables(channel.n_qubits())?;
    let prepared = observables
        .iter()
        .map(|o| measurement_circuit(channel, o)?.run_from_zero())
        .collect::<Result<Vec<_>>>()?;
    let reference_values = reference.values();

    let mut trail = AuditTrail::new(&spec.spec_hash);
    let mut verdict = Verdict::Accept;
    let mut halted_round = None;
    for round in 1..=config.rounds {
        let idx = rng.gen_range(0..observables.len());
        let counts = sample_counts(&prepared[idx], config.shots_per_round, &config.noise, rng)?;
        let mu_hat = expectation_from_counts(&counts, &observables[idx])?;
        let deviation = (mu_hat - reference_values[idx]).abs();
        let label = &spec.family[idx];
        if deviation > spec.epsilon {
            trail.commit(round, label, mu_hat, deviation, AuditDecision::Halt);
            verdict = Verdict::Halt;
            halted_round = Some(round);
            break;
        }
        trail.commit(round, label, mu_hat, deviation, AuditDecision::DriftLogged);
    }
    Ok(VerdictReport {
        verdict,
        halted_round,
        spec_hash: spec.spec_hash.clone(),
        trail: trail.into_entries(),
        config: *config,
    })
}
