//! Phase-one dense simplex for equality-constrained feasibility:
//! does `Ax = b, x >= 0` have a solution?
//!
//! Minimizes the sum of artificial variables with Bland's anti-cycling rule.
//! Sizes here are tiny (at most a few thousand columns), so a dense tableau
//! is exact enough and dependency-free.

use crate::error::{Error, Result};

/// Feasibility tolerance on the phase-one objective.
pub const FEASIBILITY_TOL: f64 = 1e-9;

const PIVOT_EPS: f64 = 1e-9;

/// Outcome of a feasibility solve.
#[derive(Debug, Clone)]
pub enum Feasibility {
    /// A nonnegative solution of `Ax = b`.
    Feasible(Vec<f64>),
    Infeasible,
}

/// Decide feasibility of `Ax = b, x >= 0` by phase-one simplex.
pub fn equality_feasibility(a: &[Vec<f64>], b: &[f64]) -> Result<Feasibility> {
    let m = a.len();
    if m != b.len() {
        return Err(Error::LpFailure(format!(
            "constraint matrix has {m} rows but rhs has {} entries",
            b.len()
        )));
    }
    if m == 0 {
        return Ok(Feasibility::Feasible(Vec::new()));
    }
    let n = a[0].len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::LpFailure("ragged constraint matrix".into()));
    }

    // Tableau: n structural columns, m artificial columns, rhs.
    let cols = n + m + 1;
    let rhs = n + m;
    let mut tableau: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0.0; cols];
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = flip * a[i][j];
        }
        row[n + i] = 1.0;
        row[rhs] = flip * b[i];
        tableau.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Cost row for minimizing the artificial sum, with the artificial basis
    // already priced out: cost[j] = -Σ_i tableau[i][j] on structural columns.
    let mut cost = vec![0.0; cols];
    for j in 0..n {
        cost[j] = -tableau.iter().map(|row| row[j]).sum::<f64>();
    }
    cost[rhs] = -tableau.iter().map(|row| row[rhs]).sum::<f64>();

    let iteration_cap = 10_000 * (n + m).max(1);
    for _ in 0..iteration_cap {
        // Bland: entering column is the lowest index with a negative reduced cost.
        let entering = (0..n + m).find(|&j| cost[j] < -PIVOT_EPS);
        let entering = match entering {
            Some(j) => j,
            None => {
                let objective = -cost[rhs];
                if objective > FEASIBILITY_TOL {
                    return Ok(Feasibility::Infeasible);
                }
                let mut x = vec![0.0; n];
                for (i, &var) in basis.iter().enumerate() {
                    if var < n {
                        x[var] = tableau[i][rhs].max(0.0);
                    }
                }
                return Ok(Feasibility::Feasible(x));
            }
        };

        // Ratio test; ties broken by the smallest basis variable (Bland).
        let mut leaving: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let coef = tableau[i][entering];
            if coef > PIVOT_EPS {
                let ratio = tableau[i][rhs] / coef;
                let better = match leaving {
                    None => true,
                    Some(current) => {
                        ratio < best - 1e-15
                            || ((ratio - best).abs() <= 1e-15 && basis[i] < basis[current])
                    }
                };
                if better {
                    best = ratio;
                    leaving = Some(i);
                }
            }
        }
        let leaving = match leaving {
            Some(i) => i,
            // Unbounded phase-one cannot happen for a bounded artificial sum;
            // treat it as a numerical failure.
            None => return Err(Error::LpFailure("phase-one column unbounded".into())),
        };

        pivot(&mut tableau, &mut cost, leaving, entering);
        basis[leaving] = entering;
    }
    Err(Error::LpFailure("iteration cap exceeded".into()))
}

fn pivot(tableau: &mut [Vec<f64>], cost: &mut [f64], row: usize, col: usize) {
    let scale = tableau[row][col];
    for value in tableau[row].iter_mut() {
        *value /= scale;
    }
    let pivot_row = tableau[row].clone();
    for (i, other) in tableau.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let factor = other[col];
        if factor != 0.0 {
            for (value, &p) in other.iter_mut().zip(pivot_row.iter()) {
                *value -= factor * p;
            }
        }
    }
    let factor = cost[col];
    if factor != 0.0 {
        for (value, &p) in cost.iter_mut().zip(pivot_row.iter()) {
            *value -= factor * p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_feasible(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        match equality_feasibility(a, b).unwrap() {
            Feasibility::Feasible(x) => {
                for (row, &target) in a.iter().zip(b.iter()) {
                    let lhs: f64 = row.iter().zip(x.iter()).map(|(c, v)| c * v).sum();
                    assert!((lhs - target).abs() <= 1e-7, "residual {}", lhs - target);
                }
                assert!(x.iter().all(|&v| v >= -1e-12));
                x
            }
            Feasibility::Infeasible => panic!("expected feasible"),
        }
    }

    #[test]
    fn simplex_on_a_probability_simplex() {
        let a = vec![vec![1.0, 1.0, 1.0]];
        assert_feasible(&a, &[1.0]);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let r = equality_feasibility(&a, &[1.0, 2.0]).unwrap();
        assert!(matches!(r, Feasibility::Infeasible));
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // x1 - x2 = -3 has the solution x2 = 3
        let a = vec![vec![1.0, -1.0]];
        let x = assert_feasible(&a, &[-3.0]);
        assert!(x[1] >= 2.9);
    }

    #[test]
    fn sign_constrained_system_is_infeasible() {
        // x1 + x2 = -1 with x >= 0 cannot hold
        let a = vec![vec![1.0, 1.0]];
        let r = equality_feasibility(&a, &[-1.0]).unwrap();
        assert!(matches!(r, Feasibility::Infeasible));
    }

    #[test]
    fn redundant_constraints_stay_feasible() {
        let a = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_feasible(&a, &[0.5, 0.5, 0.25]);
    }

    #[test]
    fn moment_system_with_interior_solution() {
        // two ±1 coins with mean 0 each and product mean 0:
        // atoms (++, +-, -+, --) with uniform distribution works
        let a = vec![
            vec![1.0, 1.0, 1.0, 1.0],
            vec![1.0, 1.0, -1.0, -1.0],
            vec![1.0, -1.0, 1.0, -1.0],
            vec![1.0, -1.0, -1.0, 1.0],
        ];
        assert_feasible(&a, &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn extremal_moment_system_needs_a_point_mass() {
        let a = vec![
            vec![1.0, 1.0, 1.0, 1.0],
            vec![1.0, 1.0, -1.0, -1.0],
            vec![1.0, -1.0, 1.0, -1.0],
        ];
        // means +1 and +1 force the ++ point mass
        let x = assert_feasible(&a, &[1.0, 1.0, 1.0]);
        assert!((x[0] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn overconstrained_moments_are_infeasible() {
        // mean(+1) twice but product forced to -1: impossible
        let a = vec![
            vec![1.0, 1.0, 1.0, 1.0],
            vec![1.0, 1.0, -1.0, -1.0],
            vec![1.0, -1.0, 1.0, -1.0],
            vec![1.0, -1.0, -1.0, 1.0],
        ];
        let r = equality_feasibility(&a, &[1.0, 1.0, 1.0, -1.0]).unwrap();
        assert!(matches!(r, Feasibility::Infeasible));
    }
}
