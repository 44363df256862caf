//! Pure-state simulator for registers of up to [`MAX_QUBITS`] qubits.
//!
//! Amplitudes are indexed little-endian: basis index `b` has qubit `q` in
//! state `(b >> q) & 1`. Bitstrings render qubit 0 as the rightmost character.
//! Noise never acts mid-circuit; [`NoiseModel`] perturbs the measurement
//! distribution only.

mod circuit;
mod gate;
mod pauli;
mod sampling;
mod state;

pub use circuit::{run_circuit, Circuit};
pub use gate::Gate;
pub use pauli::{measurement_circuit, pauli_expectation_exact, Pauli, PauliObservable};
pub use sampling::{expectation_from_counts, sample_counts, Counts, NoiseModel};
pub use state::Statevector;

pub const MAX_QUBITS: usize = 4;

/// Tolerance used for norm and unitarity checks.
pub const NORM_TOL: f64 = 1e-12;

pub(crate) fn check_register(n_qubits: usize) -> crate::Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(crate::Error::UnsupportedQubits(n_qubits));
    }
    Ok(())
}

/// Render a basis index as a little-endian bitstring of width `n_qubits`.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parse a little-endian bitstring back into a basis index.
pub fn parse_bitstring(s: &str) -> Option<usize> {
    if s.is_empty() || s.len() > MAX_QUBITS {
        return None;
    }
    s.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Some(acc << 1),
        '1' => Some((acc << 1) | 1),
        _ => None,
    })
}
