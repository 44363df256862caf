//! Behavioral fingerprinting and observable-contract verification for small
//! quantum kernel channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`simcore`]: a pure-state simulator for up to four qubits, Pauli
//!   expectations, basis-change measurement circuits and finite-shot sampling
//!   with a readout-level noise model.
//! * [`channels`]: the ZZ feature map, the inversion-test kernel circuit and
//!   its adversarial and drifted variants, and the observable families.
//! * [`contract`]: stage specifications, fingerprints, contract deviation,
//!   the round-based verifier and its hash-chained audit trail.
//! * [`budget`]: detection margin, shot budgets and tolerance calibration.
//! * [`framebound`]: frame-bound constants, Hermitian operator norms and the
//!   diamond distance between unitary channels.
//! * [`expcli`]: experiment harness and report emission used by the
//!   `changuard` binary.
//!
//! Bit ordering is little-endian throughout: qubit 0 is the least significant
//! bit of a basis index and the rightmost character of a bitstring.

pub mod budget;
pub mod channels;
pub mod contract;
pub mod error;
pub mod expcli;
pub mod framebound;
pub mod linalg;
pub mod rng;
pub mod simcore;

pub use error::{Error, Result};
