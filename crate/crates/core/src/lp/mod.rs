//! Bounded-variable linear programming.
//!
//! [`LpProblem`] is always a minimization. Each constraint row is turned into
//! an equality with a bounded logical variable, `a·x - r = 0`, so ranged,
//! equality and one-sided rows share a single code path in the simplex.

mod lpfile;
mod simplex;
mod slp;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lpfile::write_lp_file;
pub use simplex::{solve_lp, solve_lp_warm};
pub(crate) use slp::smaller_root;
pub use slp::{slp_solve, ConcaveBound, Cut, SlpOptions, SlpOutcome};
pub use verify::{verify_kkt, KktReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("basis matrix is singular ({0})")]
    SingularBasis(String),
    #[error("numerical breakdown: {0}")]
    Numerical(String),
    #[error("iteration limit of {0} pivots reached")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    /// Sparse `(variable, coefficient)` terms. Repeated variables are summed.
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let act = self.activity(x);
        match self.relation {
            Relation::Le => (act - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - act).max(0.0),
            Relation::Eq => (act - self.rhs).abs(),
        }
    }
}

/// A linear program `min c·x` subject to rows and variable bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    pub names: Vec<String>,
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Constraint>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, cost: f64) -> usize {
        self.names.push(name.into());
        self.lower.push(lower);
        self.upper.push(upper);
        self.cost.push(cost);
        self.names.len() - 1
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> usize {
        self.rows.push(Constraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Checks index ranges, finiteness and bound ordering.
    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n || self.names.len() != n {
            return Err(LpError::Invalid("variable vectors differ in length".into()));
        }
        for j in 0..n {
            if !self.cost[j].is_finite() {
                return Err(LpError::Invalid(format!("cost of {} is not finite", self.names[j])));
            }
            if self.lower[j].is_nan() || self.upper[j].is_nan() || self.lower[j] > self.upper[j] {
                return Err(LpError::Invalid(format!(
                    "bounds of {} are inconsistent: [{}, {}]",
                    self.names[j], self.lower[j], self.upper[j]
                )));
            }
            if self.lower[j] == f64::INFINITY || self.upper[j] == f64::NEG_INFINITY {
                return Err(LpError::Invalid(format!("bounds of {} are empty", self.names[j])));
            }
        }
        for row in &self.rows {
            if !row.rhs.is_finite() {
                return Err(LpError::Invalid(format!("rhs of row {} is not finite", row.name)));
            }
            for &(j, a) in &row.terms {
                if j >= n {
                    return Err(LpError::Invalid(format!(
                        "row {} references variable {j} of {n}",
                        row.name
                    )));
                }
                if !a.is_finite() {
                    return Err(LpError::Invalid(format!(
                        "row {} has a non-finite coefficient",
                        row.name
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Final simplex basis, reusable as a warm start for a problem with the same
/// variables and additional rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub num_vars: usize,
    pub num_rows: usize,
    /// Basic variable per basis position. Indices `>= num_vars` are row logicals.
    pub head: Vec<usize>,
    /// Nonbasic variables sitting at their upper bound.
    pub at_upper: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals, `d objective / d rhs`.
    pub duals: Vec<f64>,
    pub iterations: usize,
    pub basis: Option<Basis>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// Absolute primal feasibility tolerance.
    pub feas_tol: f64,
    /// Reduced-cost tolerance, relative to the largest cost magnitude.
    pub opt_tol: f64,
    pub pivot_tol: f64,
    pub refactor_every: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// Pivot cap; 0 picks a size-based default.
    pub max_iter: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-7,
            opt_tol: 1e-9,
            pivot_tol: 1e-9,
            refactor_every: 50,
            bland_after: 100,
            max_iter: 0,
        }
    }
}
