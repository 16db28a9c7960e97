//! Measurement scenarios: a state, named observables grouped into commuting
//! contexts (or a temporal sequence), and a linear correlation inequality.
//!
//! Quantum values come from the Born rule; classical bounds come from
//! exhaustive deterministic-strategy enumeration. The two never share code.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{commutator, vec_inner, ComplexMatrix};
use crate::measurement::{born_distribution, sequential_paths, SequentialStep, PRUNE_TOL};
use crate::observable::Observable;
use crate::state::StateVector;

/// Commutation tolerance defining a context.
pub const CONTEXT_COMMUTE_TOL: f64 = 1e-9;

/// Cap on the deterministic-strategy enumeration.
pub const STRATEGY_LIMIT: u128 = 10_000_000;

/// Optimization sense of an inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// Linear expression over outcome products plus the comparison direction.
/// `declared_bound` is a slot for documents that state their classical bound;
/// [`classical_bound`] recomputes it from scratch either way.
#[derive(Debug, Clone)]
pub struct Inequality {
    pub terms: Vec<(f64, Vec<String>)>,
    pub direction: Direction,
    pub declared_bound: Option<f64>,
}

/// One step of a temporal scenario: optionally evolve, then measure the
/// named observable.
#[derive(Debug, Clone)]
pub struct TemporalStep {
    pub observable: String,
    pub pre_unitary: Option<ComplexMatrix>,
}

/// A pre-assignment of one eigenvalue to every observable — the classical
/// hidden-variable atom.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicStrategy {
    pub assignment: BTreeMap<String, f64>,
}

/// State + observables + contexts (or temporal sequence) + inequality.
#[derive(Debug, Clone)]
pub struct Scenario {
    id: String,
    state: StateVector,
    observables: Vec<(String, Observable)>,
    contexts: Vec<Vec<String>>,
    temporal_sequence: Option<Vec<TemporalStep>>,
    inequality: Inequality,
}

impl Scenario {
    /// Validate and assemble a scenario. Every name must resolve, dimensions
    /// must agree, and every pair inside a context must commute — that is
    /// the definition of a context.
    pub fn new(
        id: impl Into<String>,
        state: StateVector,
        observables: Vec<(String, Observable)>,
        contexts: Vec<Vec<String>>,
        temporal_sequence: Option<Vec<TemporalStep>>,
        inequality: Inequality,
    ) -> Result<Self> {
        let scenario = Self {
            id: id.into(),
            state,
            observables,
            contexts,
            temporal_sequence,
            inequality,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    fn validate(&self) -> Result<()> {
        let dim = self.state.dim();
        for (name, o) in &self.observables {
            if o.dim() != dim {
                return Err(Error::Semantic {
                    field: format!("observables.{name}"),
                    message: format!("dimension {} does not match state dimension {dim}", o.dim()),
                });
            }
        }
        for (i, (name, _)) in self.observables.iter().enumerate() {
            if self.observables[i + 1..].iter().any(|(n, _)| n == name) {
                return Err(Error::Semantic {
                    field: format!("observables.{name}"),
                    message: "duplicate observable name".into(),
                });
            }
        }
        for (k, context) in self.contexts.iter().enumerate() {
            for name in context {
                self.observable(name)?;
            }
            for (i, left) in context.iter().enumerate() {
                for right in &context[i + 1..] {
                    let a = self.observable(left)?;
                    let b = self.observable(right)?;
                    let deviation = commutator(a.matrix(), b.matrix())?.max_abs();
                    if deviation > CONTEXT_COMMUTE_TOL {
                        return Err(Error::Semantic {
                            field: format!("contexts[{k}]"),
                            message: format!(
                                "observables {left} and {right} do not commute (max entry {deviation:.3e})"
                            ),
                        });
                    }
                }
            }
        }
        if let Some(sequence) = &self.temporal_sequence {
            for (k, step) in sequence.iter().enumerate() {
                self.observable(&step.observable)?;
                if let Some(u) = &step.pre_unitary {
                    if u.dim() != dim {
                        return Err(Error::Semantic {
                            field: format!("sequence[{k}].unitary"),
                            message: format!("dimension {} does not match state dimension {dim}", u.dim()),
                        });
                    }
                    let deviation = u.unitary_deviation();
                    if deviation > crate::measurement::UNITARY_TOL {
                        return Err(Error::Semantic {
                            field: format!("sequence[{k}].unitary"),
                            message: format!("not unitary (max deviation {deviation:.3e})"),
                        });
                    }
                }
            }
        }
        for (coeff, names) in &self.inequality.terms {
            if !coeff.is_finite() {
                return Err(Error::Semantic {
                    field: "inequality.terms".into(),
                    message: "non-finite coefficient".into(),
                });
            }
            if names.is_empty() {
                return Err(Error::Semantic {
                    field: "inequality.terms".into(),
                    message: "empty term".into(),
                });
            }
            for name in names {
                self.observable(name)?;
            }
        }
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn observables(&self) -> &[(String, Observable)] {
        &self.observables
    }

    pub fn observable(&self, name: &str) -> Result<&Observable> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, o)| o)
            .ok_or_else(|| Error::UnknownName { name: name.into() })
    }

    pub fn contexts(&self) -> &[Vec<String>] {
        &self.contexts
    }

    pub fn temporal_sequence(&self) -> Option<&[TemporalStep]> {
        self.temporal_sequence.as_deref()
    }

    pub fn is_temporal(&self) -> bool {
        self.temporal_sequence.is_some()
    }

    pub fn inequality(&self) -> &Inequality {
        &self.inequality
    }
}

/// Correlation of two commuting observables: `<ψ|AB|ψ>`.
///
/// Noncommuting pairs are rejected — an ordered measurement wants
/// [`temporal_correlator`] instead.
pub fn correlation(psi: &StateVector, a: &Observable, b: &Observable) -> Result<f64> {
    product_expectation(psi, &[a, b])
}

/// Expectation of a product of mutually commuting observables.
pub fn product_expectation(psi: &StateVector, observables: &[&Observable]) -> Result<f64> {
    for o in observables {
        if o.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                context: "product_expectation",
                expected: psi.dim(),
                found: o.dim(),
            });
        }
    }
    for (i, a) in observables.iter().enumerate() {
        for b in &observables[i + 1..] {
            let deviation = commutator(a.matrix(), b.matrix())?.max_abs();
            if deviation > CONTEXT_COMMUTE_TOL {
                return Err(Error::Noncommuting {
                    context: "correlation of noncommuting observables".into(),
                    deviation,
                });
            }
        }
    }
    let mut product = observables[0].matrix().clone();
    for o in &observables[1..] {
        product = product.matmul(o.matrix());
    }
    let value = vec_inner(psi.amplitudes(), &product.matvec(psi.amplitudes()));
    debug_assert!(value.im.abs() <= 1e-10, "imaginary residue {}", value.im);
    Ok(value.re)
}

/// Two-time correlator `E[o₁·o₂]`: measure A, optionally evolve, measure B,
/// averaged over the exhaustive branch enumeration.
pub fn temporal_correlator(
    psi: &StateVector,
    a: &Observable,
    b: &Observable,
    between: Option<&ComplexMatrix>,
) -> Result<f64> {
    let steps = vec![
        SequentialStep::measure(a.clone()),
        SequentialStep {
            observable: b.clone(),
            pre_unitary: between.cloned(),
        },
    ];
    let paths = sequential_paths(psi, &steps)?;
    Ok(paths
        .iter()
        .map(|p| p.probability * p.outcomes[0] * p.outcomes[1])
        .sum())
}

/// Expectation of the outcome product over the named steps of a temporal
/// sequence, run as its own experiment: unitaries of every step apply, but
/// only the named observables are measured.
fn temporal_term_value(scenario: &Scenario, names: &[String]) -> Result<f64> {
    let sequence = scenario
        .temporal_sequence()
        .expect("caller checked temporal mode");
    for name in names {
        if !sequence.iter().any(|s| &s.observable == name) {
            return Err(Error::TermNotMeasurable {
                term: names.join(","),
            });
        }
    }

    fn walk(
        scenario: &Scenario,
        sequence: &[TemporalStep],
        state: &StateVector,
        probability: f64,
        product: f64,
        names: &[String],
        acc: &mut f64,
    ) -> Result<()> {
        let (step, rest) = match sequence.split_first() {
            Some(split) => split,
            None => {
                *acc += probability * product;
                return Ok(());
            }
        };
        let evolved = match &step.pre_unitary {
            Some(u) => StateVector::normalized(u.matvec(state.amplitudes()))?,
            None => state.clone(),
        };
        if names.contains(&step.observable) {
            let o = scenario.observable(&step.observable)?;
            for branch in born_distribution(&evolved, o)?.entries {
                let cumulative = probability * branch.probability;
                if cumulative <= PRUNE_TOL {
                    continue;
                }
                let post = branch.post_state.expect("surviving branch has a post-state");
                walk(
                    scenario,
                    rest,
                    &post,
                    cumulative,
                    product * branch.eigenvalue,
                    names,
                    acc,
                )?;
            }
            Ok(())
        } else {
            walk(scenario, rest, &evolved, probability, product, names, acc)
        }
    }

    let mut acc = 0.0;
    walk(
        scenario,
        sequence,
        scenario.state(),
        1.0,
        1.0,
        names,
        &mut acc,
    )?;
    Ok(acc)
}

/// Per-term quantum expectations, in term order.
pub fn term_values(scenario: &Scenario) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(scenario.inequality().terms.len());
    for (_, names) in &scenario.inequality().terms {
        let value = if scenario.is_temporal() {
            temporal_term_value(scenario, names)?
        } else {
            let in_context = scenario.contexts().iter().any(|context| {
                names.iter().all(|n| context.contains(n))
            });
            if !in_context {
                return Err(Error::TermNotMeasurable {
                    term: names.join(","),
                });
            }
            let observables: Vec<&Observable> = names
                .iter()
                .map(|n| scenario.observable(n))
                .collect::<Result<_>>()?;
            product_expectation(scenario.state(), &observables)?
        };
        values.push(value);
    }
    Ok(values)
}

/// Quantum value of the scenario's inequality.
pub fn quantum_value(scenario: &Scenario) -> Result<f64> {
    let values = term_values(scenario)?;
    Ok(scenario
        .inequality()
        .terms
        .iter()
        .zip(values.iter())
        .map(|((coeff, _), v)| coeff * v)
        .sum())
}

/// Exhaustive classical bound: the extremal inequality value over every
/// assignment of one eigenvalue per observable, with the first extremal
/// strategy in lexicographic assignment order as witness.
pub fn classical_bound(scenario: &Scenario) -> Result<(f64, DeterministicStrategy)> {
    let observables = scenario.observables();
    let choices: Vec<Vec<f64>> = observables
        .iter()
        .map(|(_, o)| o.eigenvalues())
        .collect();
    let count: u128 = choices
        .iter()
        .map(|c| c.len() as u128)
        .product();
    if count > STRATEGY_LIMIT {
        return Err(Error::StrategyOverflow {
            count,
            limit: STRATEGY_LIMIT,
        });
    }

    // Resolve term names to observable indices once.
    let index_of = |name: &str| -> usize {
        observables
            .iter()
            .position(|(n, _)| n == name)
            .expect("validated scenario resolves every term name")
    };
    let terms: Vec<(f64, Vec<usize>)> = scenario
        .inequality()
        .terms
        .iter()
        .map(|(coeff, names)| (*coeff, names.iter().map(|n| index_of(n)).collect()))
        .collect();

    let maximize = scenario.inequality().direction == Direction::Maximize;
    let mut indices = vec![0usize; choices.len()];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let value: f64 = terms
            .iter()
            .map(|(coeff, idxs)| {
                coeff
                    * idxs
                        .iter()
                        .map(|&k| choices[k][indices[k]])
                        .product::<f64>()
            })
            .sum();
        let improves = match &best {
            None => true,
            Some((incumbent, _)) => {
                if maximize {
                    value > *incumbent
                } else {
                    value < *incumbent
                }
            }
        };
        if improves {
            best = Some((value, indices.clone()));
        }

        // odometer: last observable varies fastest, so earlier assignments
        // are visited in lexicographic order
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < choices[pos].len() {
                break;
            }
            indices[pos] = 0;
        }
        if indices.iter().all(|&i| i == 0) {
            break;
        }
    }

    let (bound, winning) = best.expect("at least one strategy exists");
    let assignment = observables
        .iter()
        .enumerate()
        .map(|(k, (name, _))| (name.clone(), choices[k][winning[k]]))
        .collect();
    Ok((bound, DeterministicStrategy { assignment }))
}

/// Rewrite a static-context scenario as a temporal one: all term observables
/// measured in sequence with no evolution in between. For commuting terms
/// the two-time correlator equals the static correlator, so the quantum
/// value is unchanged.
pub fn temporal_embed(scenario: &Scenario) -> Result<Scenario> {
    if scenario.is_temporal() {
        return Err(Error::Semantic {
            field: "scenario".into(),
            message: "already in temporal mode".into(),
        });
    }
    for (_, names) in &scenario.inequality().terms {
        for (i, left) in names.iter().enumerate() {
            for right in &names[i + 1..] {
                let a = scenario.observable(left)?;
                let b = scenario.observable(right)?;
                let deviation = commutator(a.matrix(), b.matrix())?.max_abs();
                if deviation > CONTEXT_COMMUTE_TOL {
                    return Err(Error::Noncommuting {
                        context: format!("temporal embedding of term ({left},{right})"),
                        deviation,
                    });
                }
            }
        }
    }

    let mut order: Vec<String> = Vec::new();
    for (_, names) in &scenario.inequality().terms {
        for name in names {
            if !order.contains(name) {
                order.push(name.clone());
            }
        }
    }
    let sequence = order
        .into_iter()
        .map(|observable| TemporalStep {
            observable,
            pre_unitary: None,
        })
        .collect();

    Scenario::new(
        scenario.id().to_string(),
        scenario.state().clone(),
        scenario.observables().to_vec(),
        scenario.contexts().to_vec(),
        Some(sequence),
        scenario.inequality().clone(),
    )
}
