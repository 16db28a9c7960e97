//! The built-in demo catalog.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::builders::{
    chsh_default, ghz_scenario, kcbs_scenario, leggett_garg_scenario, mermin_peres_scenario,
    spin_observable,
};
use crate::entangle::{choi_induced, lift, schmidt, singlet, BipartiteShape, Side};
use crate::error::{Error, Result};
use crate::joint::{bound_report, ks_assignment_search, KsOutcome};
use crate::matrix::{commutator, ComplexMatrix};
use crate::measurement::robertson_sides;
use crate::observable::Observable;
use crate::report::RunReport;
use crate::scenario::{term_values, Scenario};
use crate::state::StateVector;
use crate::tension::tension_degree;

/// Every demo `run_demo` knows about.
pub const DEMO_NAMES: &[&str] = &[
    "chsh",
    "kcbs",
    "leggett-garg",
    "mermin-peres",
    "ghz",
    "uncertainty",
    "epr-choi",
];

/// The angle the Leggett-Garg demo runs at; K(π/3) = 1.5 beats the bound 1.
pub const LEGGETT_GARG_DEMO_THETA: f64 = std::f64::consts::FRAC_PI_3;

/// Seed of the uncertainty demo's random sweep.
const UNCERTAINTY_SEED: u64 = 0xA11CE;
const UNCERTAINTY_TRIPLES: usize = 1000;

/// The scenario behind a demo name, when the demo is scenario-shaped.
pub fn demo_scenario(name: &str) -> Result<Option<Scenario>> {
    match name {
        "chsh" => chsh_default().map(Some),
        "kcbs" => kcbs_scenario().map(Some),
        "leggett-garg" => leggett_garg_scenario(LEGGETT_GARG_DEMO_THETA).map(Some),
        "mermin-peres" => mermin_peres_scenario().map(Some),
        "ghz" => ghz_scenario().map(Some),
        "uncertainty" | "epr-choi" => Ok(None),
        other => Err(Error::UnknownDemo(other.to_string())),
    }
}

/// Pairwise tension degrees over a list of named observables, rows in
/// sorted pair order so machine output does not depend on listing order.
fn tension_table(observables: &[(String, Observable)]) -> Result<Vec<(String, String, f64)>> {
    let mut rows = Vec::new();
    for (i, (left_name, left)) in observables.iter().enumerate() {
        for (right_name, right) in &observables[i + 1..] {
            let degree = tension_degree(left, right)?;
            let (first, second) = if left_name <= right_name {
                (left_name.clone(), right_name.clone())
            } else {
                (right_name.clone(), left_name.clone())
            };
            rows.push((first, second, degree));
        }
    }
    rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(rows)
}

/// Build a canonical scenario or sweep, compute its numbers, and pack them
/// into a report.
pub fn run_demo(name: &str, violation_tol: f64) -> Result<RunReport> {
    match name {
        "uncertainty" => uncertainty_demo(),
        "epr-choi" => epr_choi_demo(),
        _ => {
            let scenario = demo_scenario(name)?.expect("scenario demos return a scenario");
            scenario_report(&scenario, violation_tol)
        }
    }
}

/// Full report for a scenario: quantum value, classical bound, LP verdict,
/// per-term correlators and the pairwise tension table.
pub fn scenario_report(scenario: &Scenario, violation_tol: f64) -> Result<RunReport> {
    let bounds = bound_report(scenario, violation_tol)?;
    let values = term_values(scenario)?;
    let mut metrics = BTreeMap::new();
    for ((_, names), value) in scenario.inequality().terms.iter().zip(values.iter()) {
        metrics.insert(format!("C({})", names.join(",")), *value);
    }

    // the Kochen-Specker-flavoured demos also run the pre-assignment search
    let constraints = match scenario.id() {
        "mermin-peres" => Some(crate::builders::mermin_peres_constraints()),
        "ghz" => Some(crate::builders::ghz_constraints()),
        _ => None,
    };
    if let Some((symbols, constraints)) = constraints {
        match ks_assignment_search(&symbols, &constraints)? {
            KsOutcome::Feasible(_) => {
                metrics.insert("ks_feasible".into(), 1.0);
            }
            KsOutcome::Infeasible {
                assignments,
                min_violated,
            } => {
                metrics.insert("ks_feasible".into(), 0.0);
                metrics.insert("ks_assignments".into(), assignments as f64);
                metrics.insert("ks_min_violated".into(), min_violated as f64);
            }
        }
    }

    Ok(RunReport {
        scenario_id: scenario.id().to_string(),
        quantum_value: Some(bounds.quantum_value),
        classical_bound: Some(bounds.classical_bound),
        lp_feasible: Some(bounds.lp_feasible),
        violation: Some(bounds.violation),
        tension: tension_table(scenario.observables())?,
        metrics,
    })
}

fn random_hermitian(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        for j in i + 1..dim {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    m
}

fn random_state(rng: &mut StdRng, dim: usize) -> Result<StateVector> {
    let amplitudes = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amplitudes)
}

/// Robertson sweep: σ_A σ_B ≥ |<[A,B]>|/2 on a seeded random sample, plus
/// the textbook equality case (|0>, σx, σy).
fn uncertainty_demo() -> Result<RunReport> {
    let mut rng = StdRng::seed_from_u64(UNCERTAINTY_SEED);
    let mut violations = 0usize;
    let mut min_margin = f64::INFINITY;
    for _ in 0..UNCERTAINTY_TRIPLES {
        let dim = rng.gen_range(2..=8);
        let a = Observable::new(random_hermitian(&mut rng, dim))?;
        let b = Observable::new(random_hermitian(&mut rng, dim))?;
        let psi = random_state(&mut rng, dim)?;
        let (lhs, rhs) = robertson_sides(&psi, &a, &b)?;
        let margin = lhs - rhs;
        if margin < -1e-9 {
            violations += 1;
        }
        if margin < min_margin {
            min_margin = margin;
        }
    }

    let x = Observable::new(crate::matrix::pauli::x())?;
    let y = Observable::new(crate::matrix::pauli::y())?;
    let z = Observable::new(crate::matrix::pauli::z())?;
    let (eq_lhs, eq_rhs) = robertson_sides(&StateVector::basis_state(2, 0), &x, &y)?;

    let mut metrics = BTreeMap::new();
    metrics.insert("triples".into(), UNCERTAINTY_TRIPLES as f64);
    metrics.insert("violations".into(), violations as f64);
    metrics.insert("min_margin".into(), min_margin);
    metrics.insert("equality_lhs".into(), eq_lhs);
    metrics.insert("equality_rhs".into(), eq_rhs);

    let named = vec![
        ("sigma_x".to_string(), x),
        ("sigma_y".to_string(), y),
        ("sigma_z".to_string(), z),
    ];
    Ok(RunReport {
        scenario_id: "uncertainty".into(),
        quantum_value: None,
        classical_bound: None,
        lp_feasible: None,
        violation: None,
        tension: tension_table(&named)?,
        metrics,
    })
}

/// The singlet-induced observable transport and its incompatibility witness.
fn epr_choi_demo() -> Result<RunReport> {
    let shape = BipartiteShape::new(2, 2);
    let psi = singlet();
    let o_a = spin_observable([0.0, 0.0, 1.0])?;
    let transported = choi_induced(&psi, shape, &o_a)?;

    let lifted_a = lift(&o_a, Side::A, shape)?;
    let lifted_t = lift(&transported, Side::B, shape)?;
    let joint_comm = commutator(lifted_a.matrix(), lifted_t.matrix())?.max_abs();

    let o_x = spin_observable([1.0, 0.0, 0.0])?;
    let o_z = spin_observable([0.0, 0.0, 1.0])?;
    let witness_x = tension_degree(&o_x, &transported)?;
    let witness_z = tension_degree(&o_z, &transported)?;

    let prep = crate::entangle::preparation_tension(&psi, &lifted_a, 1e-9)?;
    let decomposition = schmidt(&psi, shape, 1e-9)?;

    let mut metrics = BTreeMap::new();
    metrics.insert("joint_commutator_max_entry".into(), joint_comm);
    metrics.insert("witness_vs_sigma_x".into(), witness_x);
    metrics.insert("witness_vs_sigma_z".into(), witness_z);
    metrics.insert(
        "preparation_tension_lifted_z".into(),
        if prep { 1.0 } else { 0.0 },
    );
    for (i, c) in decomposition.coefficients.iter().enumerate() {
        metrics.insert(format!("schmidt_coefficient_{i}"), *c);
    }

    let lifted_x = lift(&o_x, Side::B, shape)?;
    let named = vec![
        ("A_z".to_string(), lifted_a),
        ("B_x".to_string(), lifted_x),
        ("B_choi".to_string(), lifted_t),
    ];
    Ok(RunReport {
        scenario_id: "epr-choi".into(),
        quantum_value: None,
        classical_bound: None,
        lp_feasible: None,
        violation: None,
        tension: tension_table(&named)?,
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_demo_is_rejected() {
        assert!(matches!(
            run_demo("nope", 1e-9),
            Err(Error::UnknownDemo(_))
        ));
    }

    #[test]
    fn chsh_demo_report() {
        let report = run_demo("chsh", 1e-9).unwrap();
        assert!((report.quantum_value.unwrap() - 2.0 * 2f64.sqrt()).abs() <= 1e-6);
        assert_eq!(report.classical_bound.unwrap(), 2.0);
        assert_eq!(report.lp_feasible, Some(false));
        assert_eq!(report.violation, Some(true));
        // 4 observables -> 6 pairs
        assert_eq!(report.tension.len(), 6);
    }

    #[test]
    fn mermin_peres_demo_reports_the_search() {
        let report = run_demo("mermin-peres", 1e-9).unwrap();
        assert_eq!(report.metrics["ks_feasible"], 0.0);
        assert_eq!(report.metrics["ks_assignments"], 512.0);
        assert_eq!(report.metrics["ks_min_violated"], 1.0);
    }

    #[test]
    fn uncertainty_demo_sees_no_violations() {
        let report = run_demo("uncertainty", 1e-9).unwrap();
        assert_eq!(report.metrics["violations"], 0.0);
        assert!((report.metrics["equality_lhs"] - 1.0).abs() <= 1e-9);
        assert!((report.metrics["equality_rhs"] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn epr_choi_demo_witnesses() {
        let report = run_demo("epr-choi", 1e-9).unwrap();
        assert!(report.metrics["joint_commutator_max_entry"] <= 1e-10);
        assert!((report.metrics["witness_vs_sigma_x"] - 2.0).abs() <= 1e-9);
        assert!(report.metrics["witness_vs_sigma_z"] <= 1e-10);
        assert_eq!(report.metrics["preparation_tension_lifted_z"], 1.0);
    }

    #[test]
    fn demo_reports_are_deterministic() {
        for name in DEMO_NAMES {
            let a = run_demo(name, 1e-9).unwrap();
            let b = run_demo(name, 1e-9).unwrap();
            assert_eq!(
                crate::report::emit_report(&a, crate::report::ReportFormat::JsonLines),
                crate::report::emit_report(&b, crate::report::ReportFormat::JsonLines),
                "{name} must be deterministic"
            );
        }
    }
}
