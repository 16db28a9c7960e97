//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each pivot (p, q) is annihilated by a 2x2 unitary rotation; a full sweep
//! visits every off-diagonal pair once. Rotations accumulate into the
//! eigenvector matrix, so the eigenvector set is orthonormal by construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Off-diagonal Frobenius norm at which a sweep is declared converged
/// (scaled by the input's Frobenius norm when that exceeds 1).
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Sweep budget before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Hermiticity gate tolerance used by the solver's precondition.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Result of diagonalizing a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    /// Ascending eigenvalues, one per eigenvector (degeneracies repeated).
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, `eigenvectors[k]` pairing with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalize a Hermitian matrix: `M v_k = λ_k v_k` with ascending `λ`.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Eigendecomposition> {
    let deviation = m.hermitian_deviation();
    let tol = HERMITIAN_TOL * m.max_abs().max(1.0);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }

    let n = m.dim();
    // Symmetrize away the sub-tolerance asymmetry so the diagonal stays real.
    let mut a = m.add_matrix(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);
    if n == 1 {
        return Ok(Eigendecomposition {
            eigenvalues: vec![a.get(0, 0).re],
            eigenvectors: vec![vec![Complex64::new(1.0, 0.0)]],
        });
    }

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&a),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // Annihilation condition: (app - aqq)·t + r·(1 - t²) = 0,
                // solved by the smaller-magnitude root for stability.
                let tau = (app - aqq) / (2.0 * r);
                let t = -tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                let phase = apq / r;
                let s = phase * sigma;

                // A <- U† A U restricted to rows/cols p and q.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * c - aiq * s.conj());
                    a.set(i, q, aip * s + aiq * c);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * c - aqj * s);
                    a.set(q, j, apj * s.conj() + aqj * c);
                }
                // Pin the pivot pair to exact Hermitian form.
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

                // V <- V U keeps columns orthonormal.
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c - viq * s.conj());
                    v.set(i, q, vip * s + viq * c);
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let eigenvalues = order.iter().map(|&k| a.get(k, k).re).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v.get(i, k)).collect())
        .collect();

    Ok(Eigendecomposition {
        eigenvalues,
        eigenvectors,
    })
}
