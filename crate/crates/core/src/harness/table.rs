//! Consistency verdicts for the published reference table.

use crate::consistency::{check_full_physical, ConsistencyReport};
use crate::fixtures::{table_one, TableRow};
use crate::params::params_from_theta;
use crate::regressor::StackedSystem;
use crate::solver::{initial_guess_from_params, solve_manifold, SolverConfig};
use nalgebra::{DMatrix, DVector};

/// Tolerance used on the published fixtures.
pub const TABLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct RowVerdict {
    pub row: TableRow,
    pub report: ConsistencyReport,
    pub fully_consistent: bool,
    /// ∞-norm distance to the closest fully consistent parameters found by
    /// a least-squares projection onto the manifold (an upper bound).
    pub projection_gap: f64,
}

impl RowVerdict {
    /// Checker verdict agrees with the source highlighting.
    pub fn matches_highlight(&self) -> bool {
        self.fully_consistent != self.row.highlighted
    }
}

fn projection_gap(row: &TableRow) -> f64 {
    let system = StackedSystem {
        a: DMatrix::identity(10, 10),
        b: DVector::from_column_slice(row.params.to_vector().as_slice()),
        n_samples: 1,
    };
    let theta0 = initial_guess_from_params(&row.params);
    let (theta, _) = solve_manifold(&system, &theta0, &SolverConfig::default());
    (params_from_theta(&theta).to_vector() - row.params.to_vector()).amax()
}

pub fn evaluate_table(tol: f64) -> Vec<RowVerdict> {
    table_one()
        .into_iter()
        .map(|row| {
            let (fully_consistent, report) = check_full_physical(&row.params, tol);
            RowVerdict { projection_gap: projection_gap(&row), row, report, fully_consistent }
        })
        .collect()
}
