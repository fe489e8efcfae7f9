//! Best-response MILPs for both players.

mod blue;
mod mixed;
mod red;

use std::path::PathBuf;

use clgame_milp::{solve, Model, SolveOptions, SolveOutcome, SolveStatus};

use crate::error::{Error, Result};

pub use blue::{blue_best_response, blue_best_response_from, blue_fixed_plan_value};
pub(crate) use blue::{add_path_flows, add_recourse_block, extract_plan};
pub use mixed::MixedStrategy;
pub use red::{red_best_response, red_dual_model, red_inner_dual, red_inner_primal, RedDualModel};

#[derive(Clone, Debug, Default)]
pub struct BrOptions {
    /// Wall-clock limit per solve; `None` solves to optimality.
    pub time_limit: Option<f64>,
    pub solve: SolveOptions,
    /// Write the model in LP format here before solving.
    pub dump: Option<PathBuf>,
}

impl BrOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn with_time_limit(mut self, seconds: Option<f64>) -> Self {
        self.time_limit = seconds;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestResponse<P> {
    pub plan: P,
    /// Objective of the returned plan in the oracle model.
    pub value: f64,
    /// Proven bound on the optimum (upper for Blue, lower for Red).
    pub bound: f64,
    /// The solver proved optimality.
    pub optimal: bool,
}

pub(crate) fn run_milp(model: &Model, opts: &BrOptions, context: &'static str) -> Result<SolveOutcome> {
    if let Some(path) = &opts.dump {
        std::fs::write(path, model.to_lp_string())?;
    }
    let options = opts.solve.clone().with_time_limit(opts.time_limit);
    let out = solve(model, &options)?;
    match out.status {
        SolveStatus::Optimal | SolveStatus::FeasibleTimeLimit => Ok(out),
        SolveStatus::TimeLimitNoSolution => Err(Error::NoIncumbent { context }),
        status => Err(Error::Unsolved { context, status }),
    }
}
