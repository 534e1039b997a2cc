//! Knapsack and exponent equations `v_0 u_1^{x_1} v_1 ⋯ u_k^{x_k} v_k = 1`.
//!
//! [`Solver::solve`] computes the full solution set as a semilinear set
//! for hyperbolic groups and for `G × ℤ` with `G` hyperbolic; the grid route
//! of [`Solver::decide`] handles everything else given an exponent bound.

mod base;
mod expr;
mod formula;
mod normalize;
mod polygon;
mod solver;
#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::automata::AutomataError;
use crate::groups::GroupError;
use crate::oracle::OracleError;
use crate::semilinear::SemilinearError;

pub use base::{solve_depth1, solve_depth2};
pub use expr::{ExponentExpression, Factor, KnapsackExpression};
pub use formula::{Congruence, Conjunct, Link, SolutionFormula};
pub use normalize::{
    normalize_power, normalize_powers, positivity_split, quasigeodesify, reduce_torsion, Branch, Normalized,
    NormalizedPower, TEST_EXPONENT,
};
pub use polygon::{split_polygon, CaseCounts, CASE_NAMES};
pub use solver::{Decision, Route, SolveStats, Solver, SolverOptions, SystemSolution};

#[derive(Debug, Error)]
pub enum KnapsackError {
    #[error("parse error at column {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("variable `{0}` occurs more than once; knapsack expressions need distinct variables")]
    RepeatedVariable(String),
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("the grid route needs an exponent bound for this group")]
    BoundRequired,
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Semilinear(#[from] SemilinearError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
