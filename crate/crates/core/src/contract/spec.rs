use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::simcore::PauliObservable;
use crate::{Error, Result};

/// Declared stage contract: hash anchor, observable family, tolerance and
/// declaration time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSpec {
    pub spec_hash: String,
    pub family: Vec<String>,
    pub epsilon: f64,
    pub channel: String,
    pub timestamp: String,
}

impl StageSpec {
    pub fn new(family: &[PauliObservable], epsilon: f64, channel: &str) -> Result<Self> {
        let labels: Vec<String> = family.iter().map(PauliObservable::label).collect();
        Self::from_labels(labels, epsilon, channel)
    }

    pub fn from_labels(family: Vec<String>, epsilon: f64, channel: &str) -> Result<Self> {
        let hash = spec_hash(&family, epsilon, channel)?;
        Ok(StageSpec {
            spec_hash: hash,
            family,
            epsilon,
            channel: channel.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        })
    }

    /// Recompute the digest from the contents and compare.
    pub fn verify_hash(&self) -> bool {
        spec_hash(&self.family, self.epsilon, &self.channel)
            .map(|h| h == self.spec_hash)
            .unwrap_or(false)
    }

    /// Parse the family labels against an `n_qubits` register.
    pub fn observables(&self, n_qubits: usize) -> Result<Vec<PauliObservable>> {
        self.family
            .iter()
            .map(|l| PauliObservable::parse(l, n_qubits))
            .collect()
    }
}

/// Fixed 17-significant-digit rendering used in every canonical form.
pub fn canonical_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialise")
}

/// SHA-256 over the canonical serialization of `(channel, epsilon, family)`:
/// sorted keys, reals at 17 significant digits, UTF-8, no whitespace.
pub fn spec_hash(family: &[String], epsilon: f64, channel: &str) -> Result<String> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {epsilon} outside (0, 2]"
        )));
    }
    let fam: Vec<String> = family.iter().map(|l| json_string(l)).collect();
    let canonical = format!(
        "{{\"channel\":{},\"epsilon_A\":\"{}\",\"family\":[{}]}}",
        json_string(channel),
        canonical_real(epsilon),
        fam.join(",")
    );
    Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
}
