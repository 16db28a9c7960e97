//! Observables: Hermitian operators with a cached spectral decomposition.

use num_complex::Complex64;

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default degeneracy clustering tolerance, relative to the spectral range.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Validation tolerance for projector algebra in [`Observable::from_eigenpairs`].
const PROJECTOR_TOL: f64 = 1e-9;

/// One eigenspace: an eigenvalue and the orthogonal projector onto it.
#[derive(Debug, Clone)]
pub struct SpectralLine {
    pub eigenvalue: f64,
    pub projector: ComplexMatrix,
}

/// Hermitian operator together with its spectral decomposition
/// `M = Σ λ P_λ`, eigenvalues strictly increasing.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: Vec<SpectralLine>,
}

impl Observable {
    /// Spectral decomposition with the default degeneracy clustering.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        spectral_decompose(&matrix, DEFAULT_CLUSTER_TOL)
    }

    /// Build directly from eigenvalue/projector pairs.
    ///
    /// Validates the full projector algebra: Hermitian, idempotent, mutually
    /// orthogonal, complete. The matrix is reconstructed as `Σ λ P_λ`, which
    /// keeps exactly representable spectra (e.g. ±1) exact.
    pub fn from_eigenpairs(pairs: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "observable from eigenpairs",
                expected: 1,
                found: 0,
            });
        }
        let dim = pairs[0].1.dim();
        let mut spectrum: Vec<SpectralLine> = pairs
            .into_iter()
            .map(|(eigenvalue, projector)| SpectralLine {
                eigenvalue,
                projector,
            })
            .collect();
        spectrum.sort_by(|a, b| a.eigenvalue.partial_cmp(&b.eigenvalue).unwrap());

        let mut completeness = ComplexMatrix::zeros(dim);
        for (k, line) in spectrum.iter().enumerate() {
            let p = &line.projector;
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "projector dimension",
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !line.eigenvalue.is_finite() {
                return Err(Error::NonFiniteEntry);
            }
            let dev = p.hermitian_deviation();
            if dev > PROJECTOR_TOL {
                return Err(Error::NotHermitian {
                    deviation: dev,
                    tol: PROJECTOR_TOL,
                });
            }
            if p.matmul(p).max_abs_diff(p) > PROJECTOR_TOL {
                return Err(Error::Semantic {
                    field: format!("projector[{k}]"),
                    message: "not idempotent".into(),
                });
            }
            for (l, other) in spectrum.iter().enumerate() {
                if l != k && p.matmul(&other.projector).max_abs() > PROJECTOR_TOL {
                    return Err(Error::Semantic {
                        field: format!("projector[{k}]"),
                        message: format!("not orthogonal to projector[{l}]"),
                    });
                }
            }
            completeness = completeness.add_matrix(p);
        }
        if completeness.max_abs_diff(&ComplexMatrix::identity(dim)) > PROJECTOR_TOL {
            return Err(Error::Semantic {
                field: "projectors".into(),
                message: "do not sum to the identity".into(),
            });
        }
        for w in spectrum.windows(2) {
            if w[1].eigenvalue - w[0].eigenvalue <= 0.0 {
                return Err(Error::Semantic {
                    field: "eigenvalues".into(),
                    message: "must be strictly increasing".into(),
                });
            }
        }

        let mut matrix = ComplexMatrix::zeros(dim);
        for line in &spectrum {
            matrix = matrix.add_matrix(
                &line
                    .projector
                    .scale(Complex64::new(line.eigenvalue, 0.0)),
            );
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenspaces in strictly increasing eigenvalue order.
    pub fn spectrum(&self) -> &[SpectralLine] {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|l| l.eigenvalue).collect()
    }

    /// Eigenspace whose eigenvalue matches `value` within `tol`.
    pub fn line_for(&self, value: f64, tol: f64) -> Option<&SpectralLine> {
        self.spectrum
            .iter()
            .find(|l| (l.eigenvalue - value).abs() <= tol)
    }

    /// Largest |eigenvalue| (the operator norm of a Hermitian matrix).
    pub fn spectral_norm(&self) -> f64 {
        self.spectrum
            .iter()
            .map(|l| l.eigenvalue.abs())
            .fold(0.0, f64::max)
    }

    /// The unitary `exp(-i t M) = Σ exp(-i t λ) P_λ` generated by this observable.
    pub fn evolution_unitary(&self, t: f64) -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(self.dim());
        for line in &self.spectrum {
            let phase = Complex64::from_polar(1.0, -t * line.eigenvalue);
            u = u.add_matrix(&line.projector.scale(phase));
        }
        u
    }
}

/// Decompose a Hermitian matrix into eigenvalue clusters and their projectors.
///
/// Eigenvalues closer than `cluster_tol` (relative to the spectral range) are
/// merged into a single eigenspace; the projector of a cluster is the sum of
/// outer products of its eigenvectors. Degenerate spectra need this merge to
/// produce well-defined projectors at all.
pub fn spectral_decompose(m: &ComplexMatrix, cluster_tol: f64) -> Result<Observable> {
    let decomposition = eig_hermitian(m)?;
    let values = &decomposition.eigenvalues;
    let range = values[values.len() - 1] - values[0];
    let merge_gap = cluster_tol * range.max(1.0);

    let mut spectrum: Vec<SpectralLine> = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] <= merge_gap {
            end += 1;
        }
        let members = &values[start..end];
        let eigenvalue = members.iter().sum::<f64>() / members.len() as f64;
        let mut projector = ComplexMatrix::zeros(m.dim());
        for k in start..end {
            let v = &decomposition.eigenvectors[k];
            projector = projector.add_matrix(&ComplexMatrix::outer(v, v));
        }
        spectrum.push(SpectralLine {
            eigenvalue,
            projector,
        });
        start = end;
    }

    Ok(Observable {
        matrix: m.clone(),
        spectrum,
    })
}

/// Hermiticity gate re-exported at the operation level: true iff
/// `max |M[i][j] - conj(M[j][i])| <= tol`.
pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_hermitian(tol)
}

/// Spectral norm (largest singular value) of a general square matrix,
/// computed as the square root of the largest eigenvalue of `M† M`.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    let gram = m.adjoint().matmul(m);
    match eig_hermitian(&gram) {
        Ok(e) => e
            .eigenvalues
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .fold(0.0, f64::max),
        Err(_) => m.frobenius_norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli, tensor_product};

    #[test]
    fn pauli_z_spectrum() {
        let o = Observable::new(pauli::z()).unwrap();
        let lines = o.spectrum();
        assert_eq!(lines.len(), 2);
        assert!((lines[0].eigenvalue + 1.0).abs() <= 1e-12);
        assert!((lines[1].eigenvalue - 1.0).abs() <= 1e-12);
        // -1 projector is |1><1|, +1 projector is |0><0|
        let p_minus = ComplexMatrix::from_real(2, &[0., 0., 0., 1.]).unwrap();
        let p_plus = ComplexMatrix::from_real(2, &[1., 0., 0., 0.]).unwrap();
        assert!(lines[0].projector.max_abs_diff(&p_minus) <= 1e-12);
        assert!(lines[1].projector.max_abs_diff(&p_plus) <= 1e-12);
    }

    #[test]
    fn identity_merges_into_one_line() {
        let o = Observable::new(ComplexMatrix::identity(2)).unwrap();
        assert_eq!(o.spectrum().len(), 1);
        assert!((o.spectrum()[0].eigenvalue - 1.0).abs() <= 1e-12);
        assert!(o.spectrum()[0]
            .projector
            .max_abs_diff(&ComplexMatrix::identity(2))
            <= 1e-12);
    }

    #[test]
    fn z_tensor_z_has_two_twofold_lines() {
        let zz = tensor_product(&pauli::z(), &pauli::z());
        let o = Observable::new(zz.clone()).unwrap();
        assert_eq!(o.spectrum().len(), 2);
        for line in o.spectrum() {
            // two-dimensional projectors: trace 2
            assert!((line.projector.trace().re - 2.0).abs() <= 1e-9);
        }
        // completeness and reconstruction
        let mut sum_p = ComplexMatrix::zeros(4);
        let mut rec = ComplexMatrix::zeros(4);
        for line in o.spectrum() {
            sum_p = sum_p.add_matrix(&line.projector);
            rec = rec.add_matrix(&line.projector.scale(Complex64::new(line.eigenvalue, 0.0)));
        }
        assert!(sum_p.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-9);
        assert!(rec.max_abs_diff(&zz) <= 1e-9);
    }

    #[test]
    fn from_eigenpairs_keeps_exact_spectrum() {
        let p_plus = ComplexMatrix::from_real(2, &[1., 0., 0., 0.]).unwrap();
        let p_minus = ComplexMatrix::from_real(2, &[0., 0., 0., 1.]).unwrap();
        let o = Observable::from_eigenpairs(vec![(1.0, p_plus), (-1.0, p_minus)]).unwrap();
        assert_eq!(o.eigenvalues(), vec![-1.0, 1.0]);
        assert!(o.matrix().max_abs_diff(&pauli::z()) == 0.0);
    }

    #[test]
    fn from_eigenpairs_rejects_incomplete_projectors() {
        let p_plus = ComplexMatrix::from_real(2, &[1., 0., 0., 0.]).unwrap();
        let r = Observable::from_eigenpairs(vec![(1.0, p_plus)]);
        assert!(r.is_err());
    }

    #[test]
    fn evolution_unitary_matches_closed_form_rotation() {
        // exp(-i θ σy / 2) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]
        let theta = 0.7313_f64;
        let o = Observable::new(pauli::y()).unwrap();
        let u = o.evolution_unitary(theta / 2.0);
        let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let want = ComplexMatrix::from_real(2, &[ch, -sh, sh, ch]).unwrap();
        assert!(u.max_abs_diff(&want) <= 1e-12);
        assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn spectral_norm_of_general_matrix() {
        // ||2i σz|| = 2
        let m = pauli::z().scale(Complex64::new(0.0, 2.0));
        assert!((spectral_norm(&m) - 2.0).abs() <= 1e-9);
    }
}
