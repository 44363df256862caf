use crate::linalg::{C64, ONE, ZERO};
use crate::{Error, Result};

use super::{check_register, Gate, NORM_TOL};

/// Normalised pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl Statevector {
    /// The all-zero computational basis state `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidState(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Statevector {
            n_qubits,
            amplitudes,
        })
    }

    /// Wrap explicit amplitudes; they must already be normalised.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_register(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes, got {}",
                1usize << n_qubits,
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "squared norm {norm} differs from 1"
            )));
        }
        Ok(Statevector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born-rule probabilities of every basis outcome.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Return `U·self` for the gate's unitary.
    pub fn apply_gate(&self, gate: &Gate) -> Result<Statevector> {
        let mut out = self.clone();
        out.apply_gate_mut(gate)?;
        Ok(out)
    }

    pub fn apply_gate_mut(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::Cx { control, target } => {
                let (cm, tm) = (1usize << control, 1usize << target);
                for b in 0..self.dim() {
                    if b & cm != 0 && b & tm == 0 {
                        self.amplitudes.swap(b, b | tm);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                    if idx & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            _ => {
                let q = gate.qubits()[0];
                let m = gate
                    .single_qubit_matrix()
                    .expect("non-controlled gates have a 2x2 matrix");
                let bit = 1usize << q;
                for b in 0..self.dim() {
                    if b & bit == 0 {
                        let a0 = self.amplitudes[b];
                        let a1 = self.amplitudes[b | bit];
                        self.amplitudes[b] = m[0][0] * a0 + m[0][1] * a1;
                        self.amplitudes[b | bit] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() < 1e3 * NORM_TOL);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &[C64], b: &[C64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn hadamard_on_zero() {
        let s = Statevector::zero(1).unwrap().apply_gate(&Gate::H(0)).unwrap();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes(), &[h, h]));
    }

    #[test]
    fn phase_gate_on_plus() {
        let plus = Statevector::zero(1).unwrap().apply_gate(&Gate::H(0)).unwrap();
        let s = plus.apply_gate(&Gate::S(0)).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(close(s.amplitudes(), &[C64::new(h, 0.0), C64::new(0.0, h)]));
    }

    #[test]
    fn cx_truth_table() {
        // |10⟩ written big-endian in the label means qubit 1 set; control on qubit 1.
        let s = Statevector::basis(2, 0b10).unwrap();
        let out = s
            .apply_gate(&Gate::Cx {
                control: 1,
                target: 0,
            })
            .unwrap();
        assert_eq!(out, Statevector::basis(2, 0b11).unwrap());
        // Control clear: untouched.
        let s = Statevector::basis(2, 0b01).unwrap();
        let out = s
            .apply_gate(&Gate::Cx {
                control: 1,
                target: 0,
            })
            .unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn out_of_range_target_is_rejected() {
        let s = Statevector::zero(2).unwrap();
        assert!(matches!(
            s.apply_gate(&Gate::X(2)),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            s.apply_gate(&Gate::Cx {
                control: 1,
                target: 1
            }),
            Err(Error::RepeatedQubit(1))
        ));
    }

    #[test]
    fn register_size_limits() {
        assert!(Statevector::zero(0).is_err());
        assert!(Statevector::zero(5).is_err());
        assert!(Statevector::zero(4).is_ok());
        assert!(Statevector::from_amplitudes(1, vec![ONE, ONE]).is_err());
    }
}
