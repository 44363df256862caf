//! Diamond distance between unitary channels.

use std::f64::consts::PI;

use crate::linalg::{ComplexMatrix, C64};
use crate::{Error, Result};

use super::jacobi::hermitian_eigen;

const UNITARY_TOL: f64 = 1e-9;

/// Eigenvalues of a normal matrix `w`.
///
/// `K = (W + W†)/2 + t·(W − W†)/(2i)` is Hermitian and shares eigenvectors
/// with `W`; an irrational `t` keeps distinct eigenvalues of `W` distinct in
/// `K`. Eigenvalues of `W` are then Rayleigh quotients.
fn normal_eigenvalues(w: &ComplexMatrix) -> Vec<C64> {
    let n = w.dim();
    let wd = w.adjoint();
    let mut best: Option<(f64, Vec<C64>)> = None;
    for t in [0.618_033_988_749_894_9, 0.577_215_664_901_532_9, 1.414_213_562_373_095] {
        let mut k = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let re = (w[(r, c)] + wd[(r, c)]) * 0.5;
                let im = (w[(r, c)] - wd[(r, c)]) / C64::new(0.0, 2.0);
                k[(r, c)] = re + im * t;
            }
        }
        let eig = hermitian_eigen(&k);
        let mut lambdas = Vec::with_capacity(n);
        let mut residual: f64 = 0.0;
        for j in 0..n {
            let v: Vec<C64> = (0..n).map(|r| eig.vectors[(r, j)]).collect();
            let wv = w.mul_vec(&v);
            let lambda: C64 = v.iter().zip(&wv).map(|(a, b)| a.conj() * b).sum();
            let res = wv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            residual = residual.max(res);
            lambdas.push(lambda);
        }
        if residual < 1e-9 {
            return lambdas;
        }
        if best.as_ref().map_or(true, |(r, _)| residual < *r) {
            best = Some((residual, lambdas));
        }
    }
    best.expect("at least one attempt").1
}

fn segment_distance_to_origin(a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (a + d * t).norm()
}

/// `‖U·U† − V·V†‖⋄ = 2·√(1 − d²)` where `d` is the distance from the origin to
/// the convex hull of the eigenvalues of `U†V`.
pub fn diamond_distance_unitary(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            u.dim(),
            u.dim(),
            v.dim(),
            v.dim()
        )));
    }
    for m in [u, v] {
        let defect = m.unitary_defect();
        if !(defect <= UNITARY_TOL) {
            return Err(Error::NotUnitary(defect));
        }
    }
    let w = &u.adjoint() * v;
    let lambdas = normal_eigenvalues(&w);

    let mut phases: Vec<f64> = lambdas.iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    let n = phases.len();
    let max_gap = (0..n)
        .map(|i| {
            if i + 1 < n {
                phases[i + 1] - phases[i]
            } else {
                phases[0] + 2.0 * PI - phases[n - 1]
            }
        })
        .fold(0.0, f64::max);
    // every gap below π: the eigenvalues surround the origin
    if max_gap < PI - 1e-12 {
        return Ok(2.0);
    }

    let mut d = f64::INFINITY;
    for i in 0..n {
        for j in i..n {
            d = d.min(segment_distance_to_origin(lambdas[i], lambdas[j]));
        }
    }
    let d = d.min(1.0);
    Ok(2.0 * (1.0 - d * d).max(0.0).sqrt())
}
