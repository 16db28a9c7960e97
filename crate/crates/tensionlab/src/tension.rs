//! Incompatibility metrics: the commutator-based tension degree, shared
//! eigenvector detection (noncommutativity without tension), and
//! Heisenberg-picture transport of observables.

use num_complex::Complex64;

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{commutator, vec_inner, vec_norm, ComplexMatrix};
use crate::measurement::born_distribution;
use crate::observable::Observable;
use crate::state::StateVector;

/// Probability/state tolerance for the sequential tension-free check.
const TENSION_FREE_TOL: f64 = 1e-9;

/// What two observables agree and disagree on.
#[derive(Debug, Clone)]
pub struct TensionReport {
    /// Spectral norm of the commutator; zero iff the pair commutes.
    pub degree: f64,
    /// Maximal orthogonal set of simultaneous eigenvectors.
    pub common_eigenvectors: Vec<StateVector>,
    /// The common eigenvectors from which measuring A then B provably
    /// leaves the state alone.
    pub tension_free_states: Vec<StateVector>,
}

fn check_dims(a: &Observable, b: &Observable, context: &'static str) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context,
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Degree of incompatibility: the spectral norm of `[A, B]`.
///
/// The commutator of Hermitian operators is anti-Hermitian, so its largest
/// singular value equals the largest |eigenvalue| of `i[A, B]`.
pub fn tension_degree(a: &Observable, b: &Observable) -> Result<f64> {
    check_dims(a, b, "tension_degree")?;
    let comm = commutator(a.matrix(), b.matrix())?;
    let hermitian = comm.scale(Complex64::new(0.0, 1.0));
    let eig = eig_hermitian(&hermitian)?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max))
}

/// Maximal set of mutually orthogonal unit vectors that are simultaneous
/// eigenvectors of both observables within `tol`.
///
/// Works eigenspace pair by eigenspace pair: directions fixed by
/// `P_α Q_β P_α` with eigenvalue 1 lie in both eigenspaces, and candidates
/// are verified against both operators before being accepted.
pub fn common_eigenvectors(
    a: &Observable,
    b: &Observable,
    tol: f64,
) -> Result<Vec<StateVector>> {
    check_dims(a, b, "common_eigenvectors")?;
    let mut found = Vec::new();
    for line_a in a.spectrum() {
        for line_b in b.spectrum() {
            let sandwich = line_a
                .projector
                .matmul(&line_b.projector)
                .matmul(&line_a.projector);
            let eig = eig_hermitian(&sandwich)?;
            for (value, vector) in eig.eigenvalues.iter().zip(eig.eigenvectors.iter()) {
                if (value - 1.0).abs() > tol {
                    continue;
                }
                let candidate = StateVector::normalized(vector.clone())?.canonicalized();
                if eigen_residual(a.matrix(), &candidate) <= tol
                    && eigen_residual(b.matrix(), &candidate) <= tol
                {
                    found.push(candidate);
                }
            }
        }
    }
    Ok(found)
}

/// `||Mv - <v|Mv> v||` — how far `v` is from being an eigenvector of `M`.
fn eigen_residual(m: &ComplexMatrix, v: &StateVector) -> f64 {
    let applied = m.matvec(v.amplitudes());
    let mean = vec_inner(v.amplitudes(), &applied);
    let residual: Vec<Complex64> = applied
        .iter()
        .zip(v.amplitudes().iter())
        .map(|(x, amp)| x - mean * amp)
        .collect();
    vec_norm(&residual)
}

/// True iff measuring A then B from `ψ` leaves, with probability 1, the
/// post-A state untouched. Uses exhaustive branch enumeration, never
/// sampling.
pub fn tension_free_check(psi: &StateVector, a: &Observable, b: &Observable) -> Result<bool> {
    check_dims(a, b, "tension_free_check")?;
    if psi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "tension_free_check",
            expected: a.dim(),
            found: psi.dim(),
        });
    }
    let first = born_distribution(psi, a)?;
    for branch in &first.entries {
        let post_a = match &branch.post_state {
            Some(state) => state,
            None => continue,
        };
        let second = born_distribution(post_a, b)?;
        let mut certain = false;
        for outcome in &second.entries {
            if outcome.probability >= 1.0 - TENSION_FREE_TOL {
                let post_b = outcome
                    .post_state
                    .as_ref()
                    .expect("a certain branch carries a post-state");
                certain = post_a.distance_up_to_phase(post_b) <= TENSION_FREE_TOL * 10.0;
            }
        }
        if !certain {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Transport an observable through a unitary: `O -> U† O U`, eigenvalues
/// untouched, eigenspaces carried along.
pub fn heisenberg_picture(o: &Observable, u: &ComplexMatrix) -> Result<Observable> {
    let deviation = u.unitary_deviation();
    if deviation > crate::measurement::UNITARY_TOL {
        return Err(Error::NotUnitary {
            deviation,
            tol: crate::measurement::UNITARY_TOL,
        });
    }
    if u.dim() != o.dim() {
        return Err(Error::DimensionMismatch {
            context: "heisenberg_picture",
            expected: o.dim(),
            found: u.dim(),
        });
    }
    let u_dag = u.adjoint();
    let pairs = o
        .spectrum()
        .iter()
        .map(|line| (line.eigenvalue, u_dag.matmul(&line.projector).matmul(u)))
        .collect();
    Observable::from_eigenpairs(pairs)
}

/// Full pairwise analysis: degree, shared eigenvectors, and which of those
/// are provably tension-free starting points.
pub fn tension_report(a: &Observable, b: &Observable, tol: f64) -> Result<TensionReport> {
    let degree = tension_degree(a, b)?;
    let common = common_eigenvectors(a, b, tol)?;
    let mut tension_free = Vec::new();
    for v in &common {
        if tension_free_check(v, a, b)? {
            tension_free.push(v.clone());
        }
    }
    Ok(TensionReport {
        degree,
        common_eigenvectors: common,
        tension_free_states: tension_free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;

    fn obs(m: ComplexMatrix) -> Observable {
        Observable::new(m).unwrap()
    }

    /// diag(1,2,3) and σx ⊕ 5: noncommuting, sharing exactly e3.
    fn shared_eigenvector_pair() -> (Observable, Observable) {
        let a = ComplexMatrix::from_real(3, &[1., 0., 0., 0., 2., 0., 0., 0., 3.]).unwrap();
        let b = ComplexMatrix::from_real(3, &[0., 1., 0., 1., 0., 0., 0., 0., 5.]).unwrap();
        (obs(a), obs(b))
    }

    #[test]
    fn degree_of_anticommuting_paulis() {
        let d = tension_degree(&obs(pauli::x()), &obs(pauli::y())).unwrap();
        assert!((d - 2.0).abs() <= 1e-10);
        // swap symmetry
        let d2 = tension_degree(&obs(pauli::y()), &obs(pauli::x())).unwrap();
        assert!((d - d2).abs() <= 1e-12);
    }

    #[test]
    fn degree_of_commuting_pair_vanishes() {
        let zz = obs(pauli::z());
        let d = tension_degree(&zz, &obs(ComplexMatrix::identity(2))).unwrap();
        assert!(d <= 1e-12);
    }

    #[test]
    fn common_eigenvectors_of_constructed_pair() {
        let (a, b) = shared_eigenvector_pair();
        assert!(tension_degree(&a, &b).unwrap() > 0.5);
        let common = common_eigenvectors(&a, &b, 1e-8).unwrap();
        assert_eq!(common.len(), 1);
        // the shared direction is e3
        assert!((common[0].amplitudes()[2].norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn commuting_diagonal_pair_shares_full_basis() {
        let a = obs(ComplexMatrix::from_real(3, &[1., 0., 0., 0., 2., 0., 0., 0., 3.]).unwrap());
        let b = obs(ComplexMatrix::from_real(3, &[4., 0., 0., 0., 4., 0., 0., 0., 7.]).unwrap());
        let common = common_eigenvectors(&a, &b, 1e-8).unwrap();
        assert_eq!(common.len(), 3);
        assert!(tension_degree(&a, &b).unwrap() <= 1e-12);
    }

    #[test]
    fn anticommuting_paulis_share_nothing() {
        let common = common_eigenvectors(&obs(pauli::x()), &obs(pauli::y()), 1e-8).unwrap();
        assert!(common.is_empty());
    }

    #[test]
    fn commuting_nondiagonal_pair_shares_a_full_basis() {
        // zero tension degree comes with a complete common eigenbasis
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(71);
        for _ in 0..5 {
            let m = crate::testutil::random_hermitian(&mut rng, 4);
            let a = Observable::new(m.clone()).unwrap();
            let polynomial = m.matmul(&m).add_matrix(&m.scale(Complex64::new(3.0, 0.0)));
            let b = Observable::new(polynomial).unwrap();
            assert!(tension_degree(&a, &b).unwrap() <= 1e-9);
            let common = common_eigenvectors(&a, &b, 1e-8).unwrap();
            assert_eq!(common.len(), 4);
        }
    }

    #[test]
    fn noncommutativity_without_tension() {
        let (a, b) = shared_eigenvector_pair();
        let shared = StateVector::basis_state(3, 2);
        assert!(tension_free_check(&shared, &a, &b).unwrap());
        // a generic state does feel the tension
        let generic = StateVector::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(!tension_free_check(&generic, &a, &b).unwrap());
    }

    #[test]
    fn z_then_x_is_not_tension_free() {
        let psi = StateVector::basis_state(2, 0);
        assert!(!tension_free_check(&psi, &obs(pauli::z()), &obs(pauli::x())).unwrap());
    }

    #[test]
    fn measuring_the_same_observable_twice_is_tension_free() {
        let o = obs(pauli::dot([0.6, 0.0, 0.8]));
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..10 {
            let psi = crate::testutil::random_state(&mut rng, 2);
            assert!(tension_free_check(&psi, &o, &o).unwrap());
        }
    }

    #[test]
    fn all_common_eigenvectors_are_tension_free() {
        let (a, b) = shared_eigenvector_pair();
        let report = tension_report(&a, &b, 1e-8).unwrap();
        assert_eq!(
            report.common_eigenvectors.len(),
            report.tension_free_states.len()
        );
        assert!(report.degree > 0.0);
    }

    #[test]
    fn commutator_expectation_is_bounded_by_its_norm() {
        // the Robertson rhs never exceeds half the tension degree
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(53);
        for _ in 0..50 {
            let a = Observable::new(crate::testutil::random_hermitian(&mut rng, 4)).unwrap();
            let b = Observable::new(crate::testutil::random_hermitian(&mut rng, 4)).unwrap();
            let psi = crate::testutil::random_state(&mut rng, 4);
            let (_, rhs) = crate::measurement::robertson_sides(&psi, &a, &b).unwrap();
            let degree = tension_degree(&a, &b).unwrap();
            assert!(rhs <= degree / 2.0 + 1e-9, "rhs {rhs} vs degree {degree}");
        }
    }

    #[test]
    fn heisenberg_identity_is_noop() {
        let o = obs(pauli::z());
        let moved = heisenberg_picture(&o, &ComplexMatrix::identity(2)).unwrap();
        assert!(moved.matrix().max_abs_diff(o.matrix()) <= 1e-12);
    }

    #[test]
    fn heisenberg_preserves_spectrum() {
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(17);
        let m = crate::testutil::random_hermitian(&mut rng, 4);
        let o = Observable::new(m).unwrap();
        let generator = Observable::new(crate::testutil::random_hermitian(&mut rng, 4)).unwrap();
        let u = generator.evolution_unitary(0.37);
        let moved = heisenberg_picture(&o, &u).unwrap();
        let before = o.eigenvalues();
        let after = moved.eigenvalues();
        assert_eq!(before.len(), after.len());
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn evolved_sigma_z_stops_commuting_with_itself() {
        // U = exp(-i π/4 σx) sends σz to σy
        let o = obs(pauli::z());
        let u = obs(pauli::x()).evolution_unitary(std::f64::consts::FRAC_PI_4);
        let moved = heisenberg_picture(&o, &u).unwrap();
        assert!(moved.matrix().max_abs_diff(&pauli::y()) <= 1e-12);
        let d = tension_degree(&o, &moved).unwrap();
        assert!((d - 2.0).abs() <= 1e-10);
    }
}
