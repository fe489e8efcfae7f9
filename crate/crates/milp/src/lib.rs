//! Minimal LP/MILP modelling layer.
//!
//! Upstream code builds a [`Model`] (variables, sparse rows, linear objective)
//! and hands it to a [`Backend`]. The bundled backend wraps HiGHS; the
//! `CLGAME_SOLVER` environment variable selects a backend by name.

mod backend;
mod highs_backend;
mod lp_format;
mod model;

pub use backend::{
    backend_by_name, default_backend, solve, Backend, SolveOptions, SolveOutcome, SolveStatus,
    SolverError, SOLVER_ENV,
};
pub use highs_backend::HighsBackend;
pub use model::{Cmp, Model, ModelError, RowId, Sense, Var, VarKind};
