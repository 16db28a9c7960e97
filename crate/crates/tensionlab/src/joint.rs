//! Hidden-variable oracles: exhaustive ±1 pre-assignment search and
//! joint-probability-distribution feasibility via the phase-one simplex.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scenario::{
    classical_bound, quantum_value, term_values, DeterministicStrategy, Direction, Scenario,
};
use crate::simplex::{equality_feasibility, Feasibility};

/// Cap on the ±1 pre-assignment search.
pub const KS_SYMBOL_LIMIT: usize = 24;

/// Cap on the joint-distribution atom space.
pub const ATOM_LIMIT: u128 = 1_000_000;

/// How closely a feasible witness distribution must reproduce every
/// constrained expectation.
pub const FINE_MATCH_TOL: f64 = 1e-7;

/// Default violation threshold for bound reports.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Result of the exhaustive pre-assignment search.
#[derive(Debug, Clone)]
pub enum KsOutcome {
    /// An assignment satisfying every product constraint.
    Feasible(DeterministicStrategy),
    /// Proof by exhaustion, with the least number of constraints any
    /// assignment violates.
    Infeasible {
        assignments: u64,
        min_violated: usize,
    },
}

/// Search every ±1 assignment of the named dichotomic observables for one
/// satisfying all product constraints `Π_{n∈term} s(n) = required`.
pub fn ks_assignment_search(
    names: &[String],
    constraints: &[(Vec<String>, f64)],
) -> Result<KsOutcome> {
    if names.len() > KS_SYMBOL_LIMIT {
        return Err(Error::StrategyOverflow {
            count: 1u128 << names.len(),
            limit: 1u128 << KS_SYMBOL_LIMIT,
        });
    }
    let index: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    if index.len() != names.len() {
        return Err(Error::Semantic {
            field: "observables".into(),
            message: "duplicate name in assignment search".into(),
        });
    }
    let mut resolved: Vec<(Vec<usize>, f64)> = Vec::with_capacity(constraints.len());
    for (term, required) in constraints {
        if (required.abs() - 1.0).abs() > 1e-9 {
            return Err(Error::Semantic {
                field: "product_constraints".into(),
                message: format!("required product {required} is not ±1"),
            });
        }
        let idxs = term
            .iter()
            .map(|n| {
                index
                    .get(n.as_str())
                    .copied()
                    .ok_or_else(|| Error::UnknownName { name: n.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        resolved.push((idxs, *required));
    }

    let total: u64 = 1 << names.len();
    let mut min_violated = usize::MAX;
    for mask in 0..total {
        let value = |i: usize| -> f64 {
            if mask >> i & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let violated = resolved
            .iter()
            .filter(|(idxs, required)| {
                let product: f64 = idxs.iter().map(|&i| value(i)).product();
                (product - required).abs() > 0.5
            })
            .count();
        if violated == 0 {
            let assignment = names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), value(i)))
                .collect();
            return Ok(KsOutcome::Feasible(DeterministicStrategy { assignment }));
        }
        min_violated = min_violated.min(violated);
    }
    Ok(KsOutcome::Infeasible {
        assignments: total,
        min_violated,
    })
}

/// Explicit joint probability distribution over the product outcome space.
/// Atoms run in odometer order over `labels`, last observable fastest.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    pub labels: Vec<(String, Vec<f64>)>,
    pub probabilities: Vec<f64>,
}

impl JointDistribution {
    fn atom_digit(&self, atom: usize, observable_index: usize) -> usize {
        let mut rest = atom;
        let mut digit = 0;
        for (i, (_, outcomes)) in self.labels.iter().enumerate().rev() {
            let d = rest % outcomes.len();
            rest /= outcomes.len();
            if i == observable_index {
                digit = d;
            }
        }
        digit
    }

    /// Atoms carrying probability above `floor`, described as
    /// `name=value` lists. A basic feasible solution has at most one atom
    /// per constraint, so this stays short.
    pub fn nonzero_atoms(&self, floor: f64) -> Vec<(String, f64)> {
        let describe = |v: f64| -> String {
            if v == v.round() && v.abs() < 1e15 {
                format!("{:+}", v as i64)
            } else {
                format!("{v}")
            }
        };
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > floor)
            .map(|(atom, &p)| {
                let label = self
                    .labels
                    .iter()
                    .enumerate()
                    .map(|(i, (name, outcomes))| {
                        format!("{name}={}", describe(outcomes[self.atom_digit(atom, i)]))
                    })
                    .collect::<Vec<_>>()
                    .join(",");
                (label, p)
            })
            .collect()
    }

    /// Expectation of an outcome product under this distribution.
    pub fn expectation(&self, term: &[String]) -> f64 {
        let indices: Vec<usize> = term
            .iter()
            .map(|n| {
                self.labels
                    .iter()
                    .position(|(name, _)| name == n)
                    .expect("term name present in distribution labels")
            })
            .collect();
        self.probabilities
            .iter()
            .enumerate()
            .map(|(atom, p)| {
                let product: f64 = indices
                    .iter()
                    .map(|&i| self.labels[i].1[self.atom_digit(atom, i)])
                    .product();
                p * product
            })
            .sum()
    }
}

/// LP feasibility verdict for a joint-distribution question.
#[derive(Debug, Clone)]
pub enum JointFeasibility {
    Feasible(JointDistribution),
    Infeasible,
}

impl JointFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, JointFeasibility::Feasible(_))
    }
}

/// Does any joint probability distribution over the labelled outcome space
/// reproduce all constrained expectations?
///
/// Variables are atom probabilities (nonnegative, summing to 1); each
/// constraint pins the expectation of an outcome product. Feasible answers
/// come with an explicit witness distribution.
pub fn joint_distribution_feasible(
    labels: &[(String, Vec<f64>)],
    constraints: &[(Vec<String>, f64)],
) -> Result<JointFeasibility> {
    let atom_count: u128 = labels.iter().map(|(_, o)| o.len() as u128).product();
    if atom_count > ATOM_LIMIT {
        return Err(Error::AtomOverflow {
            count: atom_count,
            limit: ATOM_LIMIT,
        });
    }
    let atoms = atom_count as usize;
    let template = JointDistribution {
        labels: labels.to_vec(),
        probabilities: vec![0.0; atoms],
    };

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(constraints.len() + 1);
    let mut rhs: Vec<f64> = Vec::with_capacity(constraints.len() + 1);
    rows.push(vec![1.0; atoms]);
    rhs.push(1.0);
    for (term, required) in constraints {
        let indices: Vec<usize> = term
            .iter()
            .map(|n| {
                labels
                    .iter()
                    .position(|(name, _)| name == n)
                    .ok_or_else(|| Error::UnknownName { name: n.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut row = Vec::with_capacity(atoms);
        for atom in 0..atoms {
            let product: f64 = indices
                .iter()
                .map(|&i| labels[i].1[template.atom_digit(atom, i)])
                .product();
            row.push(product);
        }
        rows.push(row);
        rhs.push(*required);
    }

    match equality_feasibility(&rows, &rhs)? {
        Feasibility::Infeasible => Ok(JointFeasibility::Infeasible),
        Feasibility::Feasible(probabilities) => {
            let witness = JointDistribution {
                labels: labels.to_vec(),
                probabilities,
            };
            for (term, required) in constraints {
                let got = witness.expectation(term);
                if (got - required).abs() > FINE_MATCH_TOL {
                    return Err(Error::LpFailure(format!(
                        "witness misses constraint ({}) by {:.3e}",
                        term.join(","),
                        (got - required).abs()
                    )));
                }
            }
            Ok(JointFeasibility::Feasible(witness))
        }
    }
}

/// The Fine question for a scenario: is there one joint distribution over
/// all term observables reproducing every quantum term expectation?
pub fn fine_feasibility(scenario: &Scenario) -> Result<JointFeasibility> {
    let values = term_values(scenario)?;
    let mut labels: Vec<(String, Vec<f64>)> = Vec::new();
    for (_, names) in &scenario.inequality().terms {
        for name in names {
            if !labels.iter().any(|(n, _)| n == name) {
                labels.push((name.clone(), scenario.observable(name)?.eigenvalues()));
            }
        }
    }
    let constraints: Vec<(Vec<String>, f64)> = scenario
        .inequality()
        .terms
        .iter()
        .zip(values.iter())
        .map(|((_, names), value)| (names.clone(), *value))
        .collect();
    joint_distribution_feasible(&labels, &constraints)
}

/// Either side's certificate: a bound-achieving deterministic strategy, or
/// a joint distribution reproducing the quantum correlators.
#[derive(Debug, Clone)]
pub enum BoundWitness {
    Strategy(DeterministicStrategy),
    Distribution(JointDistribution),
}

/// Quantum value vs. classical bound vs. joint-distribution verdict.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub quantum_value: f64,
    pub classical_bound: f64,
    pub lp_feasible: bool,
    pub violation: bool,
    pub witness: Option<BoundWitness>,
}

/// Run all three analyses on a scenario. `violation_tol` is the margin by
/// which the quantum value must beat the classical bound, in the
/// inequality's direction, to raise the flag.
pub fn bound_report(scenario: &Scenario, violation_tol: f64) -> Result<BoundReport> {
    let quantum = quantum_value(scenario)?;
    let (bound, strategy) = classical_bound(scenario)?;
    let fine = fine_feasibility(scenario)?;
    let violation = match scenario.inequality().direction {
        Direction::Maximize => quantum > bound + violation_tol,
        Direction::Minimize => quantum < bound - violation_tol,
    };
    let (lp_feasible, witness) = match fine {
        JointFeasibility::Feasible(distribution) => {
            (true, Some(BoundWitness::Distribution(distribution)))
        }
        JointFeasibility::Infeasible => (false, Some(BoundWitness::Strategy(strategy))),
    };
    Ok(BoundReport {
        quantum_value: quantum,
        classical_bound: bound,
        lp_feasible,
        violation,
        witness,
    })
}
