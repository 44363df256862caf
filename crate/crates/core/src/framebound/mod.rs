//! Frame-bound constants, Hermitian operator norms and unitary diamond
//! distances.
//!
//! The frame bound of a family `{O}` is
//! `C = sup { Σ|c_O| : ‖Σ c_O·O‖ ≤ 1 }`, which converts a diamond-norm
//! separation `δ` into a guaranteed per-observable deviation of at least
//! `δ/C`.

mod diamond;
mod jacobi;
mod nelder_mead;

use std::collections::HashSet;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::rng::substream;
use crate::simcore::{Pauli, PauliObservable};
use crate::{Error, Result};

pub use diamond::diamond_distance_unitary;
pub use jacobi::{hermitian_eigen, Eigen};
pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};

/// Tolerance on `‖M − M†‖` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let defect = m.hermitian_defect();
        if !(defect <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(HermitianMatrix(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.0).values
    }

    /// `Σ c_i·M_i`; all terms must share one dimension.
    pub fn linear_combination(coeffs: &[f64], terms: &[HermitianMatrix]) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::EmptyFamily);
        };
        if coeffs.len() != terms.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} terms",
                coeffs.len(),
                terms.len()
            )));
        }
        let dim = first.dim();
        let mut out = vec![ZERO; dim * dim];
        for (c, t) in coeffs.iter().zip(terms) {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch(format!("{} vs {dim}", t.dim())));
            }
            for (o, x) in out.iter_mut().zip(t.0.as_slice()) {
                *o += x * *c;
            }
        }
        let rows: Vec<Vec<C64>> = out.chunks(dim).map(<[C64]>::to_vec).collect();
        Ok(HermitianMatrix(ComplexMatrix::from_rows(&rows)))
    }
}

fn single_pauli(p: Pauli) -> ComplexMatrix {
    match p {
        Pauli::I => ComplexMatrix::identity(2),
        Pauli::X => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        Pauli::Y => ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
        Pauli::Z => ComplexMatrix::from_diagonal(&[ONE, -ONE]),
    }
}

/// Dense matrix of a Pauli string in the simulator's little-endian basis, so
/// the highest wire is the leftmost Kronecker factor.
pub fn pauli_matrix(obs: &PauliObservable) -> HermitianMatrix {
    let mut m = ComplexMatrix::identity(1);
    for p in obs.factors().iter().rev() {
        m = m.kron(&single_pauli(*p));
    }
    HermitianMatrix(m)
}

/// Largest absolute eigenvalue.
pub fn hermitian_opnorm(m: &HermitianMatrix) -> f64 {
    m.eigenvalues().iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Frame bound of the local family `{X_q, Y_q, Z_q}`. Tensor factors on
/// distinct wires add their extreme eigenvalues, so the single-qubit value
/// `√3` holds for every register size.
pub fn frame_bound_analytic_local(n_qubits: usize) -> Result<f64> {
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("n_qubits must be >= 1".into()));
    }
    Ok(3f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundOptions {
    pub restarts: usize,
    pub iters: usize,
    /// Random unit directions tried before each simplex run.
    pub search_samples: usize,
    pub simplex_scale: f64,
    pub tolerance: f64,
}

impl Default for FrameBoundOptions {
    fn default() -> Self {
        FrameBoundOptions {
            restarts: 200,
            iters: 500,
            search_samples: 32,
            simplex_scale: 0.1,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundResult {
    pub family: Vec<String>,
    pub c_estimate: f64,
    /// Scaled so that `‖Σ c_O·O‖ = 1`, hence `Σ|c_O| = c_estimate`.
    pub witness_coefficients: Vec<f64>,
    pub restarts_used: usize,
    /// Best objective of each restart, in restart order.
    pub objective_trace: Vec<f64>,
    pub standard_error: f64,
    pub options: FrameBoundOptions,
}

/// `Σ|c_O| / ‖Σ c_O·O‖` for a prepared family; 0 at the origin.
pub struct FrameObjective {
    terms: Vec<HermitianMatrix>,
}

impl FrameObjective {
    pub fn new(family: &[PauliObservable]) -> Result<Self> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        let mut seen = HashSet::new();
        for o in family {
            if o.n_qubits() != first.n_qubits() {
                return Err(Error::DegenerateFamily(format!(
                    "mixed register sizes ({} and {})",
                    first.n_qubits(),
                    o.n_qubits()
                )));
            }
            if !seen.insert(o.label()) {
                return Err(Error::DegenerateFamily(format!("{} repeated", o.label())));
            }
        }
        Ok(FrameObjective {
            terms: family.iter().map(pauli_matrix).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn opnorm(&self, c: &[f64]) -> f64 {
        let m = HermitianMatrix::linear_combination(c, &self.terms)
            .expect("coefficients sized to the family");
        hermitian_opnorm(&m)
    }

    pub fn value(&self, c: &[f64]) -> f64 {
        let l1: f64 = c.iter().map(|x| x.abs()).sum();
        if l1 == 0.0 {
            return 0.0;
        }
        let norm = self.opnorm(c);
        if norm <= 0.0 {
            return 0.0;
        }
        l1 / norm
    }
}

fn random_direction<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Random search over unit directions followed by Nelder–Mead refinement,
/// repeated over independent restarts and merged by maximum. Each restart
/// draws from its own substream of a master seed taken from `rng`, so the
/// result does not depend on thread scheduling.
pub fn frame_bound_numeric<R: Rng + ?Sized>(
    family: &[PauliObservable],
    options: &FrameBoundOptions,
    rng: &mut R,
) -> Result<FrameBoundResult> {
    if options.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    if !(options.simplex_scale > 0.0 && options.tolerance > 0.0) {
        return Err(Error::InvalidParameter(
            "simplex scale and tolerance must be positive".into(),
        ));
    }
    let objective = FrameObjective::new(family)?;
    let k = objective.len();
    let master: u64 = rng.gen();
    let nm = NelderMeadOptions {
        max_iters: options.iters,
        simplex_scale: options.simplex_scale,
        tolerance: options.tolerance,
    };

    let runs: Vec<(f64, Vec<f64>)> = (0..options.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = substream(master, &[r as u64]);
            let mut start = random_direction(k, &mut rng);
            let mut start_val = objective.value(&start);
            for _ in 1..options.search_samples.max(1) {
                let d = random_direction(k, &mut rng);
                let v = objective.value(&d);
                if v > start_val {
                    start = d;
                    start_val = v;
                }
            }
            let m = minimize(|c| -objective.value(c), &start, &nm);
            if -m.value >= start_val {
                (-m.value, m.x)
            } else {
                (start_val, start)
            }
        })
        .collect();

    let objective_trace: Vec<f64> = runs.iter().map(|(v, _)| *v).collect();
    let (best_idx, _) = objective_trace
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("restarts >= 1");
    let raw = &runs[best_idx].1;
    let norm = objective.opnorm(raw);
    if norm <= 0.0 {
        return Err(Error::DegenerateFamily("zero operator at optimum".into()));
    }
    let witness: Vec<f64> = raw.iter().map(|x| x / norm).collect();
    let c_estimate = witness.iter().map(|x| x.abs()).sum::<f64>() / objective.opnorm(&witness);

    let n = objective_trace.len() as f64;
    let mean = objective_trace.iter().sum::<f64>() / n;
    let standard_error = if objective_trace.len() > 1 {
        let var = objective_trace.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };

    Ok(FrameBoundResult {
        family: family.iter().map(PauliObservable::label).collect(),
        c_estimate,
        witness_coefficients: witness,
        restarts_used: options.restarts,
        objective_trace,
        standard_error,
        options: *options,
    })
}
