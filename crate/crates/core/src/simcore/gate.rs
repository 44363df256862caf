use crate::linalg::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::{Error, Result};

/// Gate alphabet. Angles are radians.
///
/// Conventions: `S = diag(1, i)`, `Phase(θ) = diag(1, e^{iθ})`,
/// `Rz(θ) = diag(e^{−iθ/2}, e^{iθ/2})`, `Rx(θ) = exp(−iθX/2)`,
/// `Ry(θ) = exp(−iθY/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Phase(usize, f64),
    Cx { control: usize, target: usize },
    Cz(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::Rx(q, _)
            | Gate::Ry(q, _)
            | Gate::Rz(q, _)
            | Gate::Phase(q, _) => vec![q],
            Gate::Cx { control, target } => vec![control, target],
            Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::Rx(..) => "rx",
            Gate::Ry(..) => "ry",
            Gate::Rz(..) => "rz",
            Gate::Phase(..) => "p",
            Gate::Cx { .. } => "cx",
            Gate::Cz(..) => "cz",
        }
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::RepeatedQubit(qs[0]));
        }
        Ok(())
    }

    /// The inverse gate. Rotations and phases invert by negating the angle.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::Rx(q, t) => Gate::Rx(q, -t),
            Gate::Ry(q, t) => Gate::Ry(q, -t),
            Gate::Rz(q, t) => Gate::Rz(q, -t),
            Gate::Phase(q, t) => Gate::Phase(q, -t),
            g => g,
        }
    }

    /// 2×2 matrix for single-qubit gates, `None` for two-qubit gates.
    pub fn single_qubit_matrix(&self) -> Option<[[C64; 2]; 2]> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = match *self {
            Gate::H(_) => [
                [C64::new(h, 0.0), C64::new(h, 0.0)],
                [C64::new(h, 0.0), C64::new(-h, 0.0)],
            ],
            Gate::S(_) => [[ONE, ZERO], [ZERO, I]],
            Gate::Sdg(_) => [[ONE, ZERO], [ZERO, -I]],
            Gate::X(_) => [[ZERO, ONE], [ONE, ZERO]],
            Gate::Y(_) => [[ZERO, -I], [I, ZERO]],
            Gate::Z(_) => [[ONE, ZERO], [ZERO, -ONE]],
            Gate::Rx(_, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                [
                    [C64::new(c, 0.0), C64::new(0.0, -s)],
                    [C64::new(0.0, -s), C64::new(c, 0.0)],
                ]
            }
            Gate::Ry(_, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                [
                    [C64::new(c, 0.0), C64::new(-s, 0.0)],
                    [C64::new(s, 0.0), C64::new(c, 0.0)],
                ]
            }
            Gate::Rz(_, t) => [
                [C64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, C64::from_polar(1.0, t / 2.0)],
            ],
            Gate::Phase(_, t) => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, t)]],
            Gate::Cx { .. } | Gate::Cz(..) => return None,
        };
        Some(m)
    }

    /// Local matrix on the gate's own qubits: 2×2, or 4×4 in the basis
    /// `|q_first q_second⟩` little-endian (first listed qubit is bit 0).
    pub fn local_matrix(&self) -> ComplexMatrix {
        if let Some(m) = self.single_qubit_matrix() {
            return ComplexMatrix::from_rows(&[m[0].to_vec(), m[1].to_vec()]);
        }
        match self {
            Gate::Cx { .. } => {
                // control = bit 0, target = bit 1
                let mut m = ComplexMatrix::zeros(4);
                for b in 0..4usize {
                    let nb = if b & 1 == 1 { b ^ 2 } else { b };
                    m[(nb, b)] = ONE;
                }
                m
            }
            Gate::Cz(..) => ComplexMatrix::from_diagonal(&[ONE, ONE, ONE, -ONE]),
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<Gate> {
        let mut v = vec![
            Gate::H(0),
            Gate::S(0),
            Gate::Sdg(0),
            Gate::X(0),
            Gate::Y(0),
            Gate::Z(0),
            Gate::Cx {
                control: 0,
                target: 1,
            },
            Gate::Cz(0, 1),
        ];
        for t in [-2.7, -0.3, 0.0, 0.4, 1.2, std::f64::consts::PI] {
            v.extend([
                Gate::Rx(0, t),
                Gate::Ry(0, t),
                Gate::Rz(0, t),
                Gate::Phase(0, t),
            ]);
        }
        v
    }

    #[test]
    fn every_gate_is_unitary() {
        for g in all_kinds() {
            assert!(g.local_matrix().unitary_defect() < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        for g in all_kinds() {
            let m = g.local_matrix();
            let inv = g.inverse().local_matrix();
            let prod = &m * &inv;
            let d = prod.dim();
            assert!(prod.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn pinned_conventions() {
        let s = Gate::S(0).single_qubit_matrix().unwrap();
        assert_eq!(s[1][1], I);
        let t = 0.7;
        let rz = Gate::Rz(0, t).single_qubit_matrix().unwrap();
        assert!((rz[0][0] - C64::from_polar(1.0, -t / 2.0)).norm() < 1e-15);
        let p = Gate::Phase(0, t).single_qubit_matrix().unwrap();
        assert_eq!(p[0][0], ONE);
        assert!((p[1][1] - C64::from_polar(1.0, t)).norm() < 1e-15);
    }
}
