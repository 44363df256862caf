use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::canonical_real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditDecision {
    /// Within tolerance; recorded as a drift event.
    DriftLogged,
    /// Beyond tolerance; verification stopped.
    Halt,
}

impl AuditDecision {
    fn as_str(self) -> &'static str {
        match self {
            AuditDecision::DriftLogged => "drift_logged",
            AuditDecision::Halt => "halt",
        }
    }
}

/// One committed verifier round. `entry_hash` covers `prev_hash` and every
/// payload field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub round: u64,
    pub observable: String,
    pub mu_hat: f64,
    pub deviation: f64,
    pub decision: AuditDecision,
    pub prev_hash: String,
    pub entry_hash: String,
}

impl AuditEntry {
    fn payload(
        round: u64,
        observable: &str,
        mu_hat: f64,
        deviation: f64,
        decision: AuditDecision,
    ) -> String {
        format!(
            "{{\"decision\":\"{}\",\"deviation\":\"{}\",\"mu_hat\":\"{}\",\"observable\":{},\"round\":{}}}",
            decision.as_str(),
            canonical_real(deviation),
            canonical_real(mu_hat),
            serde_json::to_string(observable).expect("strings always serialise"),
            round
        )
    }

    fn digest(prev_hash: &str, payload: &str) -> String {
        let mut h = Sha256::new();
        h.update(prev_hash.as_bytes());
        h.update(b"\n");
        h.update(payload.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn recompute_hash(&self) -> String {
        let payload = Self::payload(
            self.round,
            &self.observable,
            self.mu_hat,
            self.deviation,
            self.decision,
        );
        Self::digest(&self.prev_hash, &payload)
    }
}

/// Append-only hash chain anchored at a spec hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditTrail {
    anchor: String,
    entries: Vec<AuditEntry>,
}

impl AuditTrail {
    pub fn new(spec_hash: &str) -> Self {
        AuditTrail {
            anchor: spec_hash.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn commit(
        &mut self,
        round: u64,
        observable: &str,
        mu_hat: f64,
        deviation: f64,
        decision: AuditDecision,
    ) -> &AuditEntry {
        let prev_hash = self
            .entries
            .last()
            .map_or_else(|| self.anchor.clone(), |e| e.entry_hash.clone());
        let payload = AuditEntry::payload(round, observable, mu_hat, deviation, decision);
        let entry_hash = AuditEntry::digest(&prev_hash, &payload);
        self.entries.push(AuditEntry {
            round,
            observable: observable.to_string(),
            mu_hat,
            deviation,
            decision,
            prev_hash,
            entry_hash,
        });
        self.entries.last().expect("just pushed")
    }

    pub fn anchor(&self) -> &str {
        &self.anchor
    }

    pub fn entries(&self) -> &[AuditEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<AuditEntry> {
        self.entries
    }
}

/// True iff the first entry chains from `spec_hash`, each later entry chains
/// from its predecessor, and every `entry_hash` recomputes. Empty trails verify.
pub fn verify_audit_chain(trail: &[AuditEntry], spec_hash: &str) -> bool {
    let mut expected_prev = spec_hash;
    for entry in trail {
        if entry.prev_hash != expected_prev || entry.recompute_hash() != entry.entry_hash {
            return false;
        }
        expected_prev = &entry.entry_hash;
    }
    true
}
