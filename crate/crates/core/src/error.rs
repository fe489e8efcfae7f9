use clgame_milp::{SolveStatus, SolverError};
use thiserror::Error;

use crate::scenario::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("scenario failed validation:\n{}", format_violations(.0))]
    InvalidScenario(Vec<Violation>),
    #[error("{what} enumeration exceeds cap {cap} ({detail})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        detail: String,
    },
    #[error("{context}: solver finished with status {status:?}")]
    Unsolved {
        context: &'static str,
        status: SolveStatus,
    },
    #[error("{context}: time limit reached without an incumbent")]
    NoIncumbent { context: &'static str },
    #[error("invalid mixed strategy: {0}")]
    InvalidMixture(String),
    #[error("infeasible plan: {0}")]
    InfeasiblePlan(String),
    #[error("payoff matrix is empty")]
    EmptyMatrix,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  - {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}
