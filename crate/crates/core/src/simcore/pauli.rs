use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{C64, I, ONE};
use crate::{Error, Result};

use super::{check_register, Circuit, Gate, Statevector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli string with at least one non-identity factor.
///
/// Labels name each non-identity factor with a 1-based wire number:
/// `X1` is X on qubit 0, `Z1Z2` is Z on qubits 0 and 1. Operator norm is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliObservable {
    factors: Vec<Pauli>,
}

impl PauliObservable {
    pub fn new(factors: Vec<Pauli>) -> Result<Self> {
        check_register(factors.len())?;
        if factors.iter().all(|p| *p == Pauli::I) {
            return Err(Error::InvalidLabel(
                "identity string is not an observable".into(),
            ));
        }
        Ok(PauliObservable { factors })
    }

    /// Single non-identity factor on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits,
            });
        }
        let mut factors = vec![Pauli::I; n_qubits];
        factors[qubit] = p;
        Self::new(factors)
    }

    /// Parse a label such as `"X1"` or `"Z1Z2"` on an `n_qubits` register.
    pub fn parse(label: &str, n_qubits: usize) -> Result<Self> {
        let bad = || Error::InvalidLabel(label.to_string());
        check_register(n_qubits)?;
        let mut factors = vec![Pauli::I; n_qubits];
        let mut chars = label.chars().peekable();
        let mut last_wire = 0usize;
        while let Some(c) = chars.next() {
            let p = match c {
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(bad()),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let wire: usize = digits.parse().map_err(|_| bad())?;
            // wires strictly increasing, 1-based
            if wire == 0 || wire > n_qubits || wire <= last_wire {
                return Err(bad());
            }
            last_wire = wire;
            factors[wire - 1] = p;
        }
        Self::new(factors).map_err(|_| bad())
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn label(&self) -> String {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(q, p)| format!("{}{}", p.symbol(), q + 1))
            .collect()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|p| **p != Pauli::I).count()
    }

    /// Bitmask of qubits carrying a non-identity factor.
    pub fn support_mask(&self) -> usize {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// True if every factor is I or Z.
    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))
    }

    /// Action on a basis state: `P|b⟩ = phase · |b ⊕ flip_mask⟩`.
    pub(crate) fn act_on_basis(&self, b: usize) -> (usize, C64) {
        let mut phase = ONE;
        let mut flip = 0usize;
        for (q, p) in self.factors.iter().enumerate() {
            let bit = (b >> q) & 1;
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    phase *= if bit == 0 { I } else { -I };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        (b ^ flip, phase)
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliObservable {
    type Err = Error;

    /// Parse with the register size inferred from the highest wire number.
    fn from_str(s: &str) -> Result<Self> {
        let max_wire = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|d| d.parse::<usize>().ok())
            .max()
            .ok_or_else(|| Error::InvalidLabel(s.to_string()))?;
        Self::parse(s, max_wire.max(1))
    }
}

impl Serialize for PauliObservable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for PauliObservable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact `⟨ψ|P|ψ⟩`.
pub fn pauli_expectation_exact(state: &Statevector, obs: &PauliObservable) -> Result<f64> {
    if state.n_qubits() != obs.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: state.n_qubits(),
            actual: obs.n_qubits(),
        });
    }
    let amps = state.amplitudes();
    let value: C64 = (0..amps.len())
        .map(|b| {
            let (target, phase) = obs.act_on_basis(b);
            amps[target].conj() * phase * amps[b]
        })
        .sum();
    Ok(value.re.clamp(-1.0, 1.0))
}

/// Append basis-change rotations so that a Z-basis readout realises `obs`:
/// H before X, S†·H before Y, nothing before Z.
pub fn measurement_circuit(base: &Circuit, obs: &PauliObservable) -> Result<Circuit> {
    if base.n_qubits() != obs.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: base.n_qubits(),
            actual: obs.n_qubits(),
        });
    }
    let mut c = base.clone();
    for (q, p) in obs.factors().iter().enumerate() {
        match p {
            Pauli::X => {
                c.push(Gate::H(q))?;
            }
            Pauli::Y => {
                c.push(Gate::Sdg(q))?;
                c.push(Gate::H(q))?;
            }
            Pauli::I | Pauli::Z => {}
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> Statevector {
        Circuit::from_gates(
            2,
            [
                Gate::H(0),
                Gate::Cx {
                    control: 0,
                    target: 1,
                },
            ],
        )
        .unwrap()
        .run_from_zero()
        .unwrap()
    }

    #[test]
    fn labels_round_trip() {
        for label in ["X1", "Y2", "Z1Z2", "X1Y2", "Z3"] {
            let o = PauliObservable::parse(label, 3).unwrap();
            assert_eq!(o.label(), label);
        }
        let o: PauliObservable = "Z1Z2".parse().unwrap();
        assert_eq!(o.n_qubits(), 2);
        assert_eq!(o.support_mask(), 0b11);
    }

    #[test]
    fn bad_labels_rejected() {
        for label in ["", "X0", "X3", "Q1", "X2X1", "X1X1", "X"] {
            assert!(PauliObservable::parse(label, 2).is_err(), "{label}");
        }
        assert!(PauliObservable::new(vec![Pauli::I, Pauli::I]).is_err());
    }

    #[test]
    fn basis_eigenstate() {
        let s = Statevector::zero(2).unwrap();
        let z1 = PauliObservable::parse("Z1", 2).unwrap();
        assert_eq!(pauli_expectation_exact(&s, &z1).unwrap(), 1.0);
    }

    #[test]
    fn bell_marginals_and_stabilizer() {
        let s = bell();
        let x1 = PauliObservable::parse("X1", 2).unwrap();
        let xx = PauliObservable::parse("X1X2", 2).unwrap();
        let yy = PauliObservable::parse("Y1Y2", 2).unwrap();
        assert!(pauli_expectation_exact(&s, &x1).unwrap().abs() < 1e-12);
        assert!((pauli_expectation_exact(&s, &xx).unwrap() - 1.0).abs() < 1e-12);
        assert!((pauli_expectation_exact(&s, &yy).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_rotations() {
        let base = Circuit::from_gates(2, [Gate::H(0)]).unwrap();
        let z1 = PauliObservable::parse("Z1", 2).unwrap();
        assert_eq!(measurement_circuit(&base, &z1).unwrap(), base);

        let x2 = PauliObservable::parse("X2", 2).unwrap();
        let c = measurement_circuit(&base, &x2).unwrap();
        assert_eq!(&c.ops()[1..], &[Gate::H(1)]);

        let y1 = PauliObservable::parse("Y1", 2).unwrap();
        let c = measurement_circuit(&base, &y1).unwrap();
        assert_eq!(&c.ops()[1..], &[Gate::Sdg(0), Gate::H(0)]);
    }

    #[test]
    fn dimension_mismatch() {
        let s = Statevector::zero(1).unwrap();
        let o = PauliObservable::parse("Z1", 2).unwrap();
        assert!(pauli_expectation_exact(&s, &o).is_err());
    }
}
