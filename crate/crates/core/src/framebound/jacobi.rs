//! Cyclic Jacobi eigendecomposition of complex Hermitian matrices.

use crate::linalg::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and matching unit eigenvectors (columns of
/// `vectors`).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

fn off_diagonal_sq(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s
}

/// Diagonalise a Hermitian matrix. The caller is responsible for checking
/// hermiticity; only the upper triangle drives the rotations.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Eigen {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let threshold = (scale * 1e-30).max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sq(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                // phase e^{-iφ} on column q makes the pivot real, then a real
                // rotation zeroes it
                let phase = (apq / b).conj();
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase * -s;
                let g_qq = phase * c;

                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Eigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{I, ONE};

    fn random_hermitian(seed: u64, n: usize) -> ComplexMatrix {
        use rand::Rng;
        let mut rng = crate::rng::seeded(seed);
        let mut m = ComplexMatrix::zeros(n);
        for r in 0..n {
            m[(r, r)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
            for c in r + 1..n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(r, c)] = z;
                m[(c, r)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for seed in 0..20 {
            for n in [2, 4, 8, 16] {
                let m = random_hermitian(seed, n);
                let e = hermitian_eigen(&m);
                let d = ComplexMatrix::from_diagonal(
                    &e.values.iter().map(|x| C64::new(*x, 0.0)).collect::<Vec<_>>(),
                );
                let back = &(&e.vectors * &d) * &e.vectors.adjoint();
                assert!(back.max_abs_diff(&m) < 1e-12, "n={n} seed={seed}");
                assert!(e.vectors.unitary_defect() < 1e-12);
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]);
        let e = hermitian_eigen(&y);
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_input_untouched() {
        let d = ComplexMatrix::from_diagonal(&[ONE * 3.0, -ONE, ONE * 0.5]);
        let e = hermitian_eigen(&d);
        assert_eq!(e.values, vec![-1.0, 0.5, 3.0]);
    }
}
