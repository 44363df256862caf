//! Shot-budget and tolerance arithmetic.
//!
//! With detection margin `γ = δ/C − ε_A`, a Hoeffding bound on each Pauli
//! estimator plus a union bound over the `k` family members gives
//!
//! * precomputed (exact) reference: `N ≥ 2·B²·k·ln(2k/η) / γ²`
//! * sampled reference: `N ≥ 8·B²·k·ln(2k/η) / γ²`
//!
//! `N` is rounded up, then split uniformly as `n_O = ⌈N/k⌉`.

use serde::{Deserialize, Serialize};

use crate::contract::Fingerprint;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMode {
    Precomputed,
    Sampled,
}

impl ReferenceMode {
    fn hoeffding_factor(self) -> f64 {
        match self {
            ReferenceMode::Precomputed => 2.0,
            ReferenceMode::Sampled => 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetParams {
    /// Diamond-norm separation to detect.
    pub delta: f64,
    pub epsilon: f64,
    /// Frame-bound constant of the family.
    pub frame_bound: f64,
    /// Family size.
    pub k: usize,
    /// Operator-norm bound of the observables (1 for Pauli strings).
    pub op_norm: f64,
    /// Failure probability.
    pub eta: f64,
    pub mode: ReferenceMode,
}

impl BudgetParams {
    /// Operating point of the deployed two-qubit contract.
    pub fn deployed() -> Self {
        BudgetParams {
            delta: 0.5,
            epsilon: 0.15,
            frame_bound: 3f64.sqrt(),
            k: 6,
            op_norm: 1.0,
            eta: 0.05,
            mode: ReferenceMode::Sampled,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("delta", self.delta),
            ("frame_bound", self.frame_bound),
            ("op_norm", self.op_norm),
            ("eta", self.eta),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {} must be non-negative",
                self.epsilon
            )));
        }
        if self.eta >= 1.0 {
            return Err(Error::InvalidParameter(format!("eta = {} must be < 1", self.eta)));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("family size k must be >= 1".into()));
        }
        Ok(())
    }
}

/// `γ = δ/C − ε_A`; errors when `γ ≤ 0`.
pub fn detection_margin(delta: f64, frame_bound: f64, epsilon: f64) -> Result<f64> {
    if !(delta > 0.0 && frame_bound > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta ({delta}) and C ({frame_bound}) must be positive"
        )));
    }
    let ratio = delta / frame_bound;
    let gamma = ratio - epsilon;
    if gamma <= 0.0 {
        return Err(Error::NonPositiveMargin {
            gamma,
            ratio,
            epsilon,
        });
    }
    Ok(gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotBudget {
    pub gamma: f64,
    /// Unrounded bound.
    pub raw: f64,
    pub total: u64,
    pub per_observable: u64,
    pub params: BudgetParams,
}

/// Unrounded `c·B²·k·ln(2k/η)/γ²`.
pub fn raw_shot_budget(params: &BudgetParams) -> Result<f64> {
    params.validate()?;
    let gamma = detection_margin(params.delta, params.frame_bound, params.epsilon)?;
    let k = params.k as f64;
    Ok(params.mode.hoeffding_factor() * params.op_norm.powi(2) * k * (2.0 * k / params.eta).ln()
        / (gamma * gamma))
}

pub fn shot_budget(params: &BudgetParams) -> Result<ShotBudget> {
    let raw = raw_shot_budget(params)?;
    let gamma = detection_margin(params.delta, params.frame_bound, params.epsilon)?;
    let total = raw.ceil() as u64;
    let per_observable = total.div_ceil(params.k as u64);
    Ok(ShotBudget {
        gamma,
        raw,
        total,
        per_observable,
        params: *params,
    })
}

/// Admissible tolerance interval `[d_typ, δ_min / C]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceInterval {
    pub d_typ: f64,
    pub upper: f64,
    pub empty: bool,
    /// Midpoint when the interval is non-empty.
    pub recommended: Option<f64>,
}

impl ToleranceInterval {
    pub fn from_drift(d_typ: f64, delta_min: f64, frame_bound: f64) -> Result<Self> {
        if !(delta_min > 0.0 && frame_bound > 0.0) {
            return Err(Error::InvalidParameter(
                "delta_min and C must be positive".into(),
            ));
        }
        if !(d_typ >= 0.0) {
            return Err(Error::InvalidParameter(format!("drift {d_typ} must be >= 0")));
        }
        let upper = delta_min / frame_bound;
        let empty = d_typ > upper;
        Ok(ToleranceInterval {
            d_typ,
            upper,
            empty,
            recommended: (!empty).then(|| 0.5 * (d_typ + upper)),
        })
    }
}

/// Max over observables of `|Fp_i[O] − Fp_j[O]|` for one pair.
pub fn pairwise_drift(a: &Fingerprint, b: &Fingerprint) -> Result<f64> {
    Ok(crate::contract::contract_deviation(a, b)?.max_dev)
}

/// Typical drift (max over pairs and observables) and the resulting interval.
pub fn calibrate_tolerance(
    timepoints: &[Fingerprint],
    delta_min: f64,
    frame_bound: f64,
) -> Result<ToleranceInterval> {
    if timepoints.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "calibration needs at least 2 timepoints, got {}",
            timepoints.len()
        )));
    }
    let mut d_typ: f64 = 0.0;
    for i in 0..timepoints.len() {
        for j in i + 1..timepoints.len() {
            d_typ = d_typ.max(pairwise_drift(&timepoints[i], &timepoints[j])?);
        }
    }
    ToleranceInterval::from_drift(d_typ, delta_min, frame_bound)
}

/// End-to-end tolerance of a composed pipeline: the sum of stage tolerances.
pub fn compose_tolerances(stage_tolerances: &[f64]) -> Result<f64> {
    if let Some(bad) = stage_tolerances.iter().find(|e| !(**e >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "stage tolerance {bad} must be >= 0"
        )));
    }
    Ok(stage_tolerances.iter().sum())
}
