use std::time::Duration;

use thiserror::Error;

use crate::highs_backend::HighsBackend;
use crate::model::{Model, ModelError};

/// Environment variable naming the backend used by [`default_backend`].
pub const SOLVER_ENV: &str = "CLGAME_SOLVER";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// Time limit hit with an incumbent available.
    FeasibleTimeLimit,
    /// Time limit hit before any feasible point was found.
    TimeLimitNoSolution,
    Infeasible,
    Unbounded,
    Error,
}

impl SolveStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::FeasibleTimeLimit)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Wall-clock limit in seconds; `None` solves to completion.
    pub time_limit: Option<f64>,
    pub mip_rel_gap: f64,
    pub mip_abs_gap: f64,
    /// Primal and dual feasibility tolerance for the LP engine.
    pub lp_tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            time_limit: None,
            mip_rel_gap: 1e-6,
            mip_abs_gap: 1e-9,
            lp_tolerance: 1e-8,
        }
    }
}

impl SolveOptions {
    pub fn with_time_limit(mut self, seconds: Option<f64>) -> Self {
        self.time_limit = seconds;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Primal values, present iff `status.has_solution()`.
    pub values: Option<Vec<f64>>,
    pub objective: Option<f64>,
    /// Best proven bound on the optimum (equals `objective` for solved LPs).
    pub bound: Option<f64>,
    /// Shadow prices d(objective)/d(rhs), one per row; pure LPs only.
    pub row_duals: Option<Vec<f64>>,
    pub wall_time: Duration,
}

impl SolveOutcome {
    pub fn value(&self, var: crate::Var) -> f64 {
        self.values.as_ref().map_or(f64::NAN, |v| v[var.index()])
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver backend {0:?} is not available")]
    Unavailable(String),
    #[error("invalid model: {0}")]
    InvalidModel(#[from] ModelError),
}

/// A concrete LP/MILP engine.
pub trait Backend: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, model: &Model, options: &SolveOptions) -> Result<SolveOutcome, SolverError>;
}

/// Resolves a backend by name. Only `highs` ships with the crate.
pub fn backend_by_name(name: &str) -> Result<Box<dyn Backend>, SolverError> {
    match name.trim().to_ascii_lowercase().as_str() {
        "" | "highs" => Ok(Box::new(HighsBackend)),
        other => Err(SolverError::Unavailable(other.to_string())),
    }
}

/// Backend selected by `CLGAME_SOLVER`, defaulting to HiGHS.
pub fn default_backend() -> Result<Box<dyn Backend>, SolverError> {
    backend_by_name(&std::env::var(SOLVER_ENV).unwrap_or_default())
}

/// Solves with the backend selected by the environment.
pub fn solve(model: &Model, options: &SolveOptions) -> Result<SolveOutcome, SolverError> {
    default_backend()?.solve(model, options)
}
