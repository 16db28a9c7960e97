//! Projective measurement: Born probabilities, state projection, expectation
//! values, the Robertson uncertainty sides, unitary evolution, and exhaustive
//! enumeration of sequential measurement chains.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{commutator, vec_inner, ComplexMatrix};
use crate::observable::Observable;
use crate::state::StateVector;

/// Probability below which a branch is treated as impossible.
pub const PRUNE_TOL: f64 = 1e-12;

/// Unitarity gate for supplied evolution operators.
pub const UNITARY_TOL: f64 = 1e-9;

/// Matching tolerance when a caller names an eigenvalue.
const EIGENVALUE_MATCH_TOL: f64 = 1e-9;

/// One Born-rule outcome: eigenvalue, probability, and (when the branch is
/// possible) the normalized post-measurement state.
#[derive(Debug, Clone)]
pub struct OutcomeBranch {
    pub eigenvalue: f64,
    pub probability: f64,
    pub post_state: Option<StateVector>,
}

/// Full outcome distribution of measuring one observable.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    pub entries: Vec<OutcomeBranch>,
}

/// One step of a sequential measurement: an optional evolution applied
/// before projecting onto the observable's eigenspaces.
#[derive(Debug, Clone)]
pub struct SequentialStep {
    pub observable: Observable,
    pub pre_unitary: Option<ComplexMatrix>,
}

impl SequentialStep {
    pub fn measure(observable: Observable) -> Self {
        Self {
            observable,
            pre_unitary: None,
        }
    }

    pub fn evolve_then_measure(unitary: ComplexMatrix, observable: Observable) -> Self {
        Self {
            observable,
            pre_unitary: Some(unitary),
        }
    }
}

/// One outcome path of a measurement sequence.
#[derive(Debug, Clone)]
pub struct BranchPath {
    pub outcomes: Vec<f64>,
    pub probability: f64,
    pub final_state: StateVector,
}

fn check_dims(psi: &StateVector, o: &Observable, context: &'static str) -> Result<()> {
    if psi.dim() != o.dim() {
        return Err(Error::DimensionMismatch {
            context,
            expected: psi.dim(),
            found: o.dim(),
        });
    }
    Ok(())
}

/// Born rule: probability of outcome λ is `<ψ|P_λ|ψ>`, with the projected
/// post-state attached to every branch above the probability floor.
pub fn born_distribution(psi: &StateVector, o: &Observable) -> Result<OutcomeDistribution> {
    check_dims(psi, o, "born_distribution")?;
    let mut entries = Vec::with_capacity(o.spectrum().len());
    for line in o.spectrum() {
        let projected = line.projector.matvec(psi.amplitudes());
        let probability = vec_inner(psi.amplitudes(), &projected).re.max(0.0);
        let post_state = if probability > PRUNE_TOL {
            Some(StateVector::normalized(projected)?.canonicalized())
        } else {
            None
        };
        entries.push(OutcomeBranch {
            eigenvalue: line.eigenvalue,
            probability,
            post_state,
        });
    }
    Ok(OutcomeDistribution { entries })
}

/// Projection postulate: collapse |ψ> onto the eigenspace of `eigenvalue`.
pub fn project(psi: &StateVector, o: &Observable, eigenvalue: f64) -> Result<StateVector> {
    check_dims(psi, o, "project")?;
    let line = o
        .line_for(eigenvalue, EIGENVALUE_MATCH_TOL)
        .ok_or(Error::EigenvalueNotInSpectrum { value: eigenvalue })?;
    let projected = line.projector.matvec(psi.amplitudes());
    let probability = vec_inner(psi.amplitudes(), &projected).re.max(0.0);
    if probability <= PRUNE_TOL {
        return Err(Error::ZeroProbabilityBranch {
            eigenvalue: line.eigenvalue,
            probability,
        });
    }
    Ok(StateVector::normalized(projected)?.canonicalized())
}

/// Expectation value `<ψ|O|ψ>`. The imaginary residue is round-off only and
/// is discarded after a debug assertion.
pub fn expectation(psi: &StateVector, o: &Observable) -> Result<f64> {
    check_dims(psi, o, "expectation")?;
    let value = vec_inner(psi.amplitudes(), &o.matrix().matvec(psi.amplitudes()));
    debug_assert!(value.im.abs() <= 1e-10, "imaginary residue {}", value.im);
    Ok(value.re)
}

/// Standard deviation `sqrt(<O²> - <O>²)`, with negative round-off clamped.
pub fn std_dev(psi: &StateVector, o: &Observable) -> Result<f64> {
    check_dims(psi, o, "std_dev")?;
    let applied = o.matrix().matvec(psi.amplitudes());
    let mean_sq = vec_inner(&applied, &applied).re;
    let mean = vec_inner(psi.amplitudes(), &applied).re;
    let variance = mean_sq - mean * mean;
    debug_assert!(variance > -1e-12, "variance {variance}");
    Ok(variance.max(0.0).sqrt())
}

/// Both sides of the Robertson inequality: `(σ_A σ_B, |<[A,B]>|/2)`.
pub fn robertson_sides(
    psi: &StateVector,
    a: &Observable,
    b: &Observable,
) -> Result<(f64, f64)> {
    check_dims(psi, a, "robertson_sides")?;
    check_dims(psi, b, "robertson_sides")?;
    let lhs = std_dev(psi, a)? * std_dev(psi, b)?;
    let comm = commutator(a.matrix(), b.matrix())?;
    let expect = vec_inner(psi.amplitudes(), &comm.matvec(psi.amplitudes()));
    Ok((lhs, expect.norm() / 2.0))
}

/// Apply a unitary to the state.
pub fn unitary_evolve(psi: &StateVector, u: &ComplexMatrix) -> Result<StateVector> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            context: "unitary_evolve",
            expected: psi.dim(),
            found: u.dim(),
        });
    }
    let deviation = u.unitary_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary {
            deviation,
            tol: UNITARY_TOL,
        });
    }
    StateVector::normalized(u.matvec(psi.amplitudes()))
}

/// Exhaustively enumerate every outcome path of a measurement sequence.
///
/// Each step applies its unitary (if any), then branches over the Born
/// outcomes; paths are pruned when their cumulative probability drops to
/// the floor. Branch order follows ascending eigenvalues, so the output
/// order is deterministic.
pub fn sequential_paths(
    psi: &StateVector,
    sequence: &[SequentialStep],
) -> Result<Vec<BranchPath>> {
    if sequence.is_empty() {
        return Err(Error::EmptySequence);
    }
    for step in sequence {
        check_dims(psi, &step.observable, "sequential_paths")?;
        if let Some(u) = &step.pre_unitary {
            let deviation = u.unitary_deviation();
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary {
                    deviation,
                    tol: UNITARY_TOL,
                });
            }
            if u.dim() != psi.dim() {
                return Err(Error::DimensionMismatch {
                    context: "sequential_paths unitary",
                    expected: psi.dim(),
                    found: u.dim(),
                });
            }
        }
    }

    let mut paths = Vec::new();
    let mut outcomes = Vec::with_capacity(sequence.len());
    walk(psi, 1.0, sequence, &mut outcomes, &mut paths)?;
    Ok(paths)
}

fn walk(
    state: &StateVector,
    probability: f64,
    remaining: &[SequentialStep],
    outcomes: &mut Vec<f64>,
    paths: &mut Vec<BranchPath>,
) -> Result<()> {
    let (step, rest) = match remaining.split_first() {
        Some(split) => split,
        None => {
            paths.push(BranchPath {
                outcomes: outcomes.clone(),
                probability,
                final_state: state.clone(),
            });
            return Ok(());
        }
    };
    let evolved = match &step.pre_unitary {
        Some(u) => StateVector::normalized(u.matvec(state.amplitudes()))?,
        None => state.clone(),
    };
    let distribution = born_distribution(&evolved, &step.observable)?;
    for branch in distribution.entries {
        let cumulative = probability * branch.probability;
        if cumulative <= PRUNE_TOL {
            continue;
        }
        let post = branch
            .post_state
            .expect("branch above the floor carries a post-state");
        outcomes.push(branch.eigenvalue);
        walk(&post, cumulative, rest, outcomes, paths)?;
        outcomes.pop();
    }
    Ok(())
}

/// Sample a single stochastic trajectory through a measurement sequence.
/// The random source is caller-owned; the exhaustive enumeration above is
/// what everything deterministic builds on.
pub fn sample_trajectory<R: Rng + ?Sized>(
    psi: &StateVector,
    sequence: &[SequentialStep],
    rng: &mut R,
) -> Result<BranchPath> {
    if sequence.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut state = psi.clone();
    let mut probability = 1.0;
    let mut outcomes = Vec::with_capacity(sequence.len());
    for step in sequence {
        if let Some(u) = &step.pre_unitary {
            state = unitary_evolve(&state, u)?;
        }
        let distribution = born_distribution(&state, &step.observable)?;
        let draw: f64 = rng.gen();
        let mut cumulative = 0.0;
        let mut chosen = None;
        for branch in &distribution.entries {
            cumulative += branch.probability;
            if draw <= cumulative && branch.post_state.is_some() {
                chosen = Some(branch);
                break;
            }
        }
        let branch = chosen.unwrap_or_else(|| {
            distribution
                .entries
                .iter()
                .rev()
                .find(|b| b.post_state.is_some())
                .expect("a normalized state always has a possible branch")
        });
        outcomes.push(branch.eigenvalue);
        probability *= branch.probability;
        state = branch.post_state.clone().unwrap();
    }
    Ok(BranchPath {
        outcomes,
        probability,
        final_state: state,
    })
}
