//! Composite systems: tensor composition, Schmidt decomposition, the singlet,
//! observable lifts, and the state-induced observable transport between the
//! two sides of a maximally entangled pair.

use num_complex::Complex64;

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{partial_trace, tensor_product, vec_inner, vec_norm, ComplexMatrix, Keep};
use crate::observable::Observable;
use crate::state::StateVector;

/// Schmidt coefficients below this floor are numerically indistinguishable
/// from zero at the reduced-density eigensolve's resolution.
pub const SCHMIDT_FLOOR: f64 = 1e-7;

/// How a bipartite Hilbert space factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteShape {
    pub da: usize,
    pub db: usize,
}

impl BipartiteShape {
    pub fn new(da: usize, db: usize) -> Self {
        Self { da, db }
    }

    pub fn dim(&self) -> usize {
        self.da * self.db
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::ShapeMismatch {
                da: self.da,
                db: self.db,
                dim,
            });
        }
        Ok(())
    }
}

/// Which tensor factor an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// `ψ = Σ c_i |a_i> ⊗ |b_i>` with nonincreasing positive coefficients and
/// orthonormal bases on both sides.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<StateVector>,
    pub right_basis: Vec<StateVector>,
}

impl SchmidtDecomposition {
    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }

    /// Rebuild the state this decomposition came from.
    pub fn reconstruct(&self, shape: BipartiteShape) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); shape.dim()];
        for ((c, a), b) in self
            .coefficients
            .iter()
            .zip(self.left_basis.iter())
            .zip(self.right_basis.iter())
        {
            for (m, am) in a.amplitudes().iter().enumerate() {
                for (k, bk) in b.amplitudes().iter().enumerate() {
                    out[m * shape.db + k] += c * am * bk;
                }
            }
        }
        out
    }
}

/// Tensor composition of two subsystem states.
pub fn compose(psi_a: &StateVector, psi_b: &StateVector) -> StateVector {
    psi_a.tensor(psi_b)
}

/// Contract the A side with a fixed vector: returns `(<a| ⊗ I)|ψ>`.
fn contract_left(a: &[Complex64], psi: &StateVector, db: usize) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); db];
    for (m, am) in a.iter().enumerate() {
        let w = am.conj();
        for (k, slot) in u.iter_mut().enumerate() {
            *slot += w * psi.amplitudes()[m * db + k];
        }
    }
    u
}

/// Schmidt decomposition through the reduced density matrix.
///
/// Coefficients are the square roots of the reduced-state eigenvalues;
/// anything at or below `tol` (floored at [`SCHMIDT_FLOOR`]) is dropped as
/// numerically zero weight.
pub fn schmidt(
    psi: &StateVector,
    shape: BipartiteShape,
    tol: f64,
) -> Result<SchmidtDecomposition> {
    shape.check(psi.dim())?;
    let reduced = partial_trace(&psi.density(), (shape.da, shape.db), Keep::A)?;
    let eig = eig_hermitian(&reduced)?;

    let floor = tol.max(SCHMIDT_FLOOR);
    let mut triples: Vec<(f64, StateVector, StateVector)> = Vec::new();
    for a_raw in eig.eigenvectors.iter() {
        let a = StateVector::normalized(a_raw.clone())?.canonicalized();
        let u = contract_left(a.amplitudes(), psi, shape.db);
        let weight = vec_norm(&u);
        if weight <= floor {
            continue;
        }
        let b = StateVector::normalized(u)?;
        triples.push((weight, a, b));
    }
    triples.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    let mut decomposition = SchmidtDecomposition {
        coefficients: Vec::with_capacity(triples.len()),
        left_basis: Vec::with_capacity(triples.len()),
        right_basis: Vec::with_capacity(triples.len()),
    };
    for (c, a, b) in triples {
        decomposition.coefficients.push(c);
        decomposition.left_basis.push(a);
        decomposition.right_basis.push(b);
    }
    Ok(decomposition)
}

/// Separability test: entangled iff the Schmidt rank is at least 2.
pub fn is_entangled(psi: &StateVector, shape: BipartiteShape, tol: f64) -> Result<bool> {
    let decomposition = schmidt(psi, shape, tol)?;
    Ok(decomposition.rank(tol) >= 2)
}

/// The two-qubit singlet `(|↑↓> - |↓↑>)/√2` in the (↑↑, ↑↓, ↓↑, ↓↓) basis.
pub fn singlet() -> StateVector {
    let s = 1.0 / 2f64.sqrt();
    StateVector::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .expect("singlet amplitudes are unit norm")
}

/// Embed a one-side observable into the joint space as `O ⊗ I` or `I ⊗ O`.
///
/// The lifted spectrum is recomputed by the Kronecker rule — same
/// eigenvalues, projectors `P ⊗ I` (or `I ⊗ P`) — so exactly representable
/// spectra stay exact.
pub fn lift(o: &Observable, side: Side, shape: BipartiteShape) -> Result<Observable> {
    let own_dim = match side {
        Side::A => shape.da,
        Side::B => shape.db,
    };
    if o.dim() != own_dim {
        return Err(Error::DimensionMismatch {
            context: "lift",
            expected: own_dim,
            found: o.dim(),
        });
    }
    let pairs = o
        .spectrum()
        .iter()
        .map(|line| {
            let projector = match side {
                Side::A => tensor_product(&line.projector, &ComplexMatrix::identity(shape.db)),
                Side::B => tensor_product(&ComplexMatrix::identity(shape.da), &line.projector),
            };
            (line.eigenvalue, projector)
        })
        .collect();
    Observable::from_eigenpairs(pairs)
}

/// Transport a side-A observable to side B through a maximally entangled
/// state: expand `ψ` in the eigenbasis of `O_A`, orthonormalize the paired
/// side-B vectors, and reuse the side-A eigenvalues on them.
///
/// The result commutes with `lift(O_A, A)` on the joint space, and its
/// noncommutativity with an intended side-B observable is exactly where the
/// incompatibility sits.
pub fn choi_induced(
    psi: &StateVector,
    shape: BipartiteShape,
    o_a: &Observable,
) -> Result<Observable> {
    shape.check(psi.dim())?;
    if shape.da != shape.db {
        return Err(Error::ShapeMismatch {
            da: shape.da,
            db: shape.db,
            dim: psi.dim(),
        });
    }
    let d = shape.da;
    let decomposition = schmidt(psi, shape, 1e-9)?;
    let rank = decomposition.rank(1e-9);
    if rank != d {
        return Err(Error::NotMaximalRank { rank, need: d });
    }
    if o_a.dim() != d {
        return Err(Error::DimensionMismatch {
            context: "choi_induced",
            expected: d,
            found: o_a.dim(),
        });
    }

    // Eigenvectors of O_A, keyed to the cached spectral line they belong to
    // so exact eigenvalues survive the round trip through the eigensolver.
    let eig = eig_hermitian(o_a.matrix())?;
    let mut per_line: Vec<Vec<Vec<Complex64>>> = vec![Vec::new(); o_a.spectrum().len()];
    for (raw_value, vector) in eig.eigenvalues.iter().zip(eig.eigenvectors.iter()) {
        let nearest = o_a
            .spectrum()
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| {
                (x.eigenvalue - raw_value)
                    .abs()
                    .partial_cmp(&(y.eigenvalue - raw_value).abs())
                    .unwrap()
            })
            .map(|(k, _)| k)
            .expect("spectrum is nonempty");
        per_line[nearest].push(vector.clone());
    }

    // Paired side-B vectors, orthonormalized in spectrum order.
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    let mut pairs: Vec<(f64, ComplexMatrix)> = Vec::with_capacity(o_a.spectrum().len());
    for (line, vectors) in o_a.spectrum().iter().zip(per_line.iter()) {
        let mut projector = ComplexMatrix::zeros(d);
        for a in vectors {
            let mut u = contract_left(a, psi, d);
            for prior in &basis {
                let overlap = vec_inner(prior, &u);
                for (slot, p) in u.iter_mut().zip(prior.iter()) {
                    *slot -= overlap * p;
                }
            }
            let norm = vec_norm(&u);
            if norm <= 1e-9 {
                return Err(Error::NotMaximalRank { rank, need: d });
            }
            let b: Vec<Complex64> = u.into_iter().map(|c| c / norm).collect();
            projector = projector.add_matrix(&ComplexMatrix::outer(&b, &b));
            basis.push(b);
        }
        pairs.push((line.eigenvalue, projector));
    }
    Observable::from_eigenpairs(pairs)
}

/// Tension between a preparation and an observable: true iff `ψ` is not an
/// eigenvector of `O` within `tol`.
pub fn preparation_tension(psi: &StateVector, o: &Observable, tol: f64) -> Result<bool> {
    if psi.dim() != o.dim() {
        return Err(Error::DimensionMismatch {
            context: "preparation_tension",
            expected: psi.dim(),
            found: o.dim(),
        });
    }
    let applied = o.matrix().matvec(psi.amplitudes());
    let mean = vec_inner(psi.amplitudes(), &applied);
    let residual: Vec<Complex64> = applied
        .iter()
        .zip(psi.amplitudes().iter())
        .map(|(op, amp)| op - mean * amp)
        .collect();
    Ok(vec_norm(&residual) > tol)
}
