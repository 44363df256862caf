//! Kernel channels: the ZZ feature map, the inversion-test circuit and its
//! adversarial and drifted variants, plus the observable families.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::simcore::{Circuit, Gate, NoiseModel, Pauli, PauliObservable};
use crate::{Error, Result};

/// Qubit count of the deployed kernel.
pub const KERNEL_QUBITS: usize = 2;

/// Fixed reference input pair `(x_i, x_j)` used by every experiment.
pub const REFERENCE_PAIR: (FeatureVector, FeatureVector) =
    (FeatureVector([0.4, 1.2]), FeatureVector([1.1, 0.3]));

/// Angle of the weakened adversary's per-qubit Z rotation.
pub const WEAKENED_ANGLE: f64 = PI / 6.0;

/// Two classical features.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub [f64; 2]);

impl FeatureVector {
    pub fn new(x0: f64, x1: f64) -> Self {
        FeatureVector([x0, x1])
    }
}

/// Two-qubit ZZ feature map.
///
/// Each repetition applies H on both qubits, `P(s·x_i)` on qubit `i`, then
/// `CX(0,1) · P(s·(π−x_0)(π−x_1)) on qubit 1 · CX(0,1)`, where `s` is
/// `phase_scale`. The default `s = 1` reproduces the reported kernel
/// deviations; `s = 2` is the alternative evolution-time convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZzFeatureMap {
    pub reps: usize,
    pub phase_scale: f64,
}

impl Default for ZzFeatureMap {
    fn default() -> Self {
        ZzFeatureMap {
            reps: 2,
            phase_scale: 1.0,
        }
    }
}

impl ZzFeatureMap {
    pub fn circuit(&self, x: &FeatureVector) -> Result<Circuit> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter(
                "feature map needs reps >= 1".into(),
            ));
        }
        let s = self.phase_scale;
        let [x0, x1] = x.0;
        let pair_phase = s * (PI - x0) * (PI - x1);
        let mut c = Circuit::new(KERNEL_QUBITS)?;
        for _ in 0..self.reps {
            c.push(Gate::H(0))?.push(Gate::H(1))?;
            c.push(Gate::Phase(0, s * x0))?.push(Gate::Phase(1, s * x1))?;
            c.push(Gate::Cx {
                control: 0,
                target: 1,
            })?;
            c.push(Gate::Phase(1, pair_phase))?;
            c.push(Gate::Cx {
                control: 0,
                target: 1,
            })?;
        }
        Ok(c)
    }
}

/// ZZ feature map with the default phase scale.
pub fn zz_feature_map(x: &FeatureVector, reps: usize) -> Result<Circuit> {
    ZzFeatureMap {
        reps,
        ..ZzFeatureMap::default()
    }
    .circuit(x)
}

/// Per-qubit coherent over-rotations modelling calibration drift.
///
/// The drifted channel appends `Rz(beta[q])` then `Rx(alpha[q])` on each qubit,
/// i.e. the operator `Rx(α)·Rz(β)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DriftParams {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depolarize: Option<f64>,
}

impl DriftParams {
    pub fn validate(&self) -> Result<()> {
        for a in self.alpha.iter().chain(&self.beta) {
            if !a.is_finite() || a.abs() > PI {
                return Err(Error::InvalidParameter(format!(
                    "drift angle {a} outside [-π, π]"
                )));
            }
        }
        if let Some(l) = self.depolarize {
            NoiseModel::new(l, 0.0)?;
        }
        Ok(())
    }

    /// Angles as `[α0, β0, α1, β1]`.
    pub fn angles(&self) -> [f64; 4] {
        [self.alpha[0], self.beta[0], self.alpha[1], self.beta[1]]
    }

    pub fn from_angles(angles: [f64; 4]) -> Self {
        DriftParams {
            alpha: [angles[0], angles[2]],
            beta: [angles[1], angles[3]],
            depolarize: None,
        }
    }

    pub fn max_abs_angle(&self) -> f64 {
        self.angles().iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelKind {
    Honest,
    /// S gate on every qubit before measurement.
    Sneaky,
    /// `Rz(π/6)` on every qubit before measurement.
    WeakenedSneaky,
    Drifted(DriftParams),
}

impl ChannelKind {
    /// Measurement noise for this channel, honouring a drift override of λ.
    pub fn effective_noise(&self, base: &NoiseModel) -> NoiseModel {
        match self {
            ChannelKind::Drifted(DriftParams {
                depolarize: Some(l),
                ..
            }) => NoiseModel {
                depolarize: *l,
                ..*base
            },
            _ => *base,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            ChannelKind::Honest => "honest".into(),
            ChannelKind::Sneaky => "sneaky".into(),
            ChannelKind::WeakenedSneaky => "weak-sneaky".into(),
            ChannelKind::Drifted(d) => {
                let mut s = format!(
                    "drift(alpha={:?},beta={:?}",
                    d.alpha, d.beta
                );
                if let Some(l) = d.depolarize {
                    s.push_str(&format!(",lambda={l:?}"));
                }
                s.push(')');
                s
            }
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// Inversion-test kernel circuit on `|00⟩`: `U(x_j)†` followed by `U(x_i)`,
/// plus the channel-specific pre-measurement layer.
pub fn kernel_circuit(kind: &ChannelKind, xi: &FeatureVector, xj: &FeatureVector) -> Result<Circuit> {
    kernel_circuit_with(&ZzFeatureMap::default(), kind, xi, xj)
}

pub fn kernel_circuit_with(
    map: &ZzFeatureMap,
    kind: &ChannelKind,
    xi: &FeatureVector,
    xj: &FeatureVector,
) -> Result<Circuit> {
    let mut c = map.circuit(xj)?.adjoint();
    c.append(&map.circuit(xi)?)?;
    for q in 0..KERNEL_QUBITS {
        match kind {
            ChannelKind::Honest => {}
            ChannelKind::Sneaky => {
                c.push(Gate::S(q))?;
            }
            ChannelKind::WeakenedSneaky => {
                c.push(Gate::Rz(q, WEAKENED_ANGLE))?;
            }
            ChannelKind::Drifted(d) => {
                d.validate()?;
                // zero angles are skipped so a null drift is the honest circuit
                if d.beta[q] != 0.0 {
                    c.push(Gate::Rz(q, d.beta[q]))?;
                }
                if d.alpha[q] != 0.0 {
                    c.push(Gate::Rx(q, d.alpha[q]))?;
                }
            }
        }
    }
    Ok(c)
}

/// Kernel circuit at [`REFERENCE_PAIR`].
pub fn reference_circuit(kind: &ChannelKind) -> Result<Circuit> {
    let (xi, xj) = REFERENCE_PAIR;
    kernel_circuit(kind, &xi, &xj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTier {
    /// `{Z1Z2}`.
    Weak,
    /// The six local Paulis.
    Complete,
    /// Local Paulis plus `X1X2, Y1Y2, Z1Z2`.
    Tier2,
    /// All fifteen non-identity two-qubit strings.
    Tier3,
}

impl FamilyTier {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTier::Weak => "weak",
            FamilyTier::Complete => "complete",
            FamilyTier::Tier2 => "tier2",
            FamilyTier::Tier3 => "tier3",
        }
    }
}

impl FromStr for FamilyTier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weak" => Ok(FamilyTier::Weak),
            "complete" | "local" | "tier1" => Ok(FamilyTier::Complete),
            "tier2" => Ok(FamilyTier::Tier2),
            "tier3" | "full" => Ok(FamilyTier::Tier3),
            other => Err(Error::Config(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for FamilyTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Local Paulis `X, Y, Z` on each of `n_qubits` wires, wire-major.
pub fn local_family(n_qubits: usize) -> Result<Vec<PauliObservable>> {
    let mut v = Vec::with_capacity(3 * n_qubits);
    for q in 0..n_qubits {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            v.push(PauliObservable::single(n_qubits, q, p)?);
        }
    }
    Ok(v)
}

/// Canonical ordering: `X1, Y1, Z1, X2, Y2, Z2`, then correlations in
/// lexicographic order.
pub fn observable_family(tier: FamilyTier) -> Vec<PauliObservable> {
    let pair = |a: Pauli, b: Pauli| PauliObservable::new(vec![a, b]).expect("non-identity");
    let xyz = [Pauli::X, Pauli::Y, Pauli::Z];
    match tier {
        FamilyTier::Weak => vec![pair(Pauli::Z, Pauli::Z)],
        FamilyTier::Complete => local_family(KERNEL_QUBITS).expect("two qubits"),
        FamilyTier::Tier2 => {
            let mut v = local_family(KERNEL_QUBITS).expect("two qubits");
            v.extend(xyz.iter().map(|&p| pair(p, p)));
            v
        }
        FamilyTier::Tier3 => {
            let mut v = local_family(KERNEL_QUBITS).expect("two qubits");
            for a in xyz {
                for b in xyz {
                    v.push(pair(a, b));
                }
            }
            v
        }
    }
}

/// Labels of a family, in order.
pub fn family_labels(family: &[PauliObservable]) -> Vec<String> {
    family.iter().map(PauliObservable::label).collect()
}
