//! Observable contracts: stage specifications, behavioral fingerprints,
//! contract deviation, the round-based verifier and its audit trail.

mod audit;
mod fingerprint;
mod spec;
mod verifier;

pub use audit::{verify_audit_chain, AuditDecision, AuditEntry, AuditTrail};
pub use fingerprint::{
    compute_fingerprint, contract_deviation, measure_family, Deviation, Fingerprint,
    FingerprintEntry, MeasuredFamily, MeasurementMode, Provenance, ReferenceSource, ShotCount,
};
pub use spec::{canonical_real, spec_hash, StageSpec};
pub use verifier::{run_verifier, Verdict, VerdictReport, VerifierConfig};
