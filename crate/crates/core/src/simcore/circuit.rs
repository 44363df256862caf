use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

use super::{check_register, Gate, Statevector};

/// Ordered gate list on a fixed register. Every gate is validated on insert.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Circuit {
            n_qubits,
            ops: Vec::new(),
        })
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.ops.push(gate);
        Ok(self)
    }

    /// Append every gate of `other` after the gates of `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::QubitMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Reverse the gate order and invert each gate.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Apply the gates left to right to `init`.
    pub fn run(&self, init: &Statevector) -> Result<Statevector> {
        if init.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                expected: self.n_qubits,
                actual: init.n_qubits(),
            });
        }
        let mut state = init.clone();
        for g in &self.ops {
            state.apply_gate_mut(g)?;
        }
        Ok(state)
    }

    /// Run from `|0…0⟩`.
    pub fn run_from_zero(&self) -> Result<Statevector> {
        self.run(&Statevector::zero(self.n_qubits)?)
    }

    /// Full unitary, built column by column from the basis states.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.n_qubits;
        let mut u = ComplexMatrix::zeros(dim);
        for col in 0..dim {
            let out = self.run(&Statevector::basis(self.n_qubits, col)?)?;
            for (row, amp) in out.amplitudes().iter().enumerate() {
                u[(row, col)] = *amp;
            }
        }
        Ok(u)
    }
}

/// Convenience for `circuit.run(init)`.
pub fn run_circuit(circuit: &Circuit, init: &Statevector) -> Result<Statevector> {
    circuit.run(init)
}
