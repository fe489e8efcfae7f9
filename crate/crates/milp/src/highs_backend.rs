use std::time::Instant;

use highs::{HighsModelStatus, HighsSolutionStatus, RowProblem, Sense as HSense};

use crate::backend::{Backend, SolveOptions, SolveOutcome, SolveStatus, SolverError};
use crate::model::{Cmp, Model, Sense, VarKind};

/// Backend over the bundled HiGHS solver.
///
/// Every solve runs single-threaded inside HiGHS; callers parallelize across
/// independent models instead.
#[derive(Clone, Copy, Debug, Default)]
pub struct HighsBackend;

impl Backend for HighsBackend {
    fn name(&self) -> &'static str {
        "highs"
    }

    fn solve(&self, model: &Model, options: &SolveOptions) -> Result<SolveOutcome, SolverError> {
        model.validate()?;
        let start = Instant::now();
        let is_mip = model.is_mip();

        if model.num_vars() == 0 {
            let infeasible = model.rows.iter().any(|r| match r.cmp {
                Cmp::Le => r.rhs < -options.lp_tolerance,
                Cmp::Ge => r.rhs > options.lp_tolerance,
                Cmp::Eq => r.rhs.abs() > options.lp_tolerance,
            });
            let obj = model.objective_constant();
            return Ok(if infeasible {
                empty_outcome(SolveStatus::Infeasible, start)
            } else {
                SolveOutcome {
                    status: SolveStatus::Optimal,
                    values: Some(Vec::new()),
                    objective: Some(obj),
                    bound: Some(obj),
                    row_duals: Some(vec![0.0; model.num_rows()]),
                    wall_time: start.elapsed(),
                }
            });
        }

        let mut pb = RowProblem::default();
        let cols: Vec<_> = model
            .vars
            .iter()
            .zip(&model.objective)
            .map(|(v, &c)| {
                let integral = v.kind != VarKind::Continuous;
                pb.add_column_with_integrality(c, v.lower..=v.upper, integral)
            })
            .collect();
        for row in &model.rows {
            let terms = row.terms.iter().map(|(v, c)| (cols[v.index()], *c));
            match row.cmp {
                Cmp::Le => pb.add_row(..=row.rhs, terms),
                Cmp::Ge => pb.add_row(row.rhs.., terms),
                Cmp::Eq => pb.add_row(row.rhs..=row.rhs, terms),
            }
        }

        let sense = match model.sense() {
            Sense::Minimize => HSense::Minimise,
            Sense::Maximize => HSense::Maximise,
        };
        let mut hm = pb.optimise(sense);
        hm.make_quiet();
        hm.set_option("threads", 1);
        hm.set_option("random_seed", 0);
        hm.set_option("primal_feasibility_tolerance", options.lp_tolerance);
        hm.set_option("dual_feasibility_tolerance", options.lp_tolerance);
        if is_mip {
            hm.set_option("mip_rel_gap", options.mip_rel_gap);
            hm.set_option("mip_abs_gap", options.mip_abs_gap);
        }
        if let Some(start) = model.start().filter(|s| is_mip && s.len() == cols.len()) {
            // A rejected start only costs the heuristic head start.
            let _ = hm.try_set_solution(Some(start), None, None, None);
        }
        if let Some(limit) = options.time_limit {
            hm.set_option("time_limit", limit.max(1e-3));
        }

        let solved = match hm.try_solve() {
            Ok(s) => s,
            Err(_) => return Ok(empty_outcome(SolveStatus::Error, start)),
        };
        let has_primal = solved.primal_solution_status() == HighsSolutionStatus::Feasible;
        let status = match solved.status() {
            HighsModelStatus::Optimal => SolveStatus::Optimal,
            HighsModelStatus::ModelEmpty => SolveStatus::Optimal,
            HighsModelStatus::Infeasible => SolveStatus::Infeasible,
            HighsModelStatus::Unbounded | HighsModelStatus::UnboundedOrInfeasible => {
                SolveStatus::Unbounded
            }
            HighsModelStatus::ReachedTimeLimit
            | HighsModelStatus::ReachedIterationLimit
            | HighsModelStatus::ReachedInterrupt
            | HighsModelStatus::ReachedSolutionLimit => {
                if has_primal {
                    SolveStatus::FeasibleTimeLimit
                } else {
                    SolveStatus::TimeLimitNoSolution
                }
            }
            _ => SolveStatus::Error,
        };
        if !status.has_solution() {
            return Ok(empty_outcome(status, start));
        }

        let solution = solved.get_solution();
        let values = solution.columns().to_vec();
        let constant = model.objective_constant();
        let objective = model.objective_value(&values);
        let bound = if is_mip {
            solved
                .double_info_value(c"mip_dual_bound")
                .ok()
                .filter(|b| b.is_finite())
                .map(|b| b + constant)
                .unwrap_or(objective)
        } else {
            objective
        };
        // HiGHS row duals already read as d(objective)/d(rhs) in either sense.
        let row_duals = (!is_mip).then(|| solution.dual_rows().to_vec());
        Ok(SolveOutcome {
            status,
            values: Some(values),
            objective: Some(objective),
            bound: Some(bound),
            row_duals,
            wall_time: start.elapsed(),
        })
    }
}

fn empty_outcome(status: SolveStatus, start: Instant) -> SolveOutcome {
    SolveOutcome {
        status,
        values: None,
        objective: None,
        bound: None,
        row_duals: None,
        wall_time: start.elapsed(),
    }
}
