use std::fmt::Write;
use std::path::PathBuf;
use std::time::Instant;

use clgame_milp::SolveOptions;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::layered::{InterdictionPlan, LogisticsPlan};
use crate::oracles::{
    blue_best_response_from, red_best_response, BestResponse, BrOptions, MixedStrategy,
};
use crate::payoff::{PayoffEvaluator, PayoffMatrix};

use super::subgame_nash;

#[derive(Clone, Debug)]
pub struct DoConfig {
    /// Stop once the bracket width is at most this.
    pub epsilon: f64,
    /// Per-solve limit for best responses; `None` always solves exactly.
    pub br_time_limit: Option<f64>,
    /// Every this many iterations both oracles run without a time limit.
    pub exact_every: usize,
    pub max_iterations: usize,
    pub solve: SolveOptions,
    /// Starting plans; empty means the no-Red optimum resp. no interdiction.
    pub initial_blue: Vec<LogisticsPlan>,
    pub initial_red: Vec<InterdictionPlan>,
    /// Write every oracle model here as `iterNNNN_{blue,red}.lp`.
    pub dump_dir: Option<PathBuf>,
}

impl Default for DoConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-2,
            br_time_limit: Some(5.0),
            exact_every: 10,
            max_iterations: 1000,
            solve: SolveOptions::default(),
            initial_blue: Vec::new(),
            initial_red: Vec::new(),
            dump_dir: None,
        }
    }
}

impl DoConfig {
    /// Exact oracles, tight MILP gaps and the given tolerance.
    pub fn exact(epsilon: f64) -> Self {
        let mut solve = SolveOptions::default();
        solve.mip_rel_gap = 1e-9;
        solve.mip_abs_gap = 1e-10;
        Self {
            epsilon,
            br_time_limit: None,
            solve,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub subgame_value: f64,
    /// Utility of Blue's best response against the subgame Red mixture.
    pub blue_br_value: f64,
    /// Utility of the subgame Blue mixture against Red's best response.
    pub red_br_value: f64,
    pub gap: f64,
    pub blue_exact: bool,
    pub red_exact: bool,
    pub blue_plans: usize,
    pub red_plans: usize,
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    Converged,
    Cap,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// Value of the final subgame equilibrium.
    pub value: f64,
    /// Utility of `blue` against an exact Red best response.
    pub lower_bound: f64,
    /// Utility of an exact Blue best response against `red`.
    pub upper_bound: f64,
    pub gap: f64,
    pub blue: MixedStrategy<LogisticsPlan>,
    pub red: MixedStrategy<InterdictionPlan>,
    pub trace: Vec<TraceRow>,
    pub termination: Termination,
    pub iterations: usize,
    pub seconds: f64,
    pub lp_solves: usize,
}

impl SolveResult {
    /// One line per iteration.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from(
            "iteration,subgame_value,blue_br_value,red_br_value,gap,blue_exact,red_exact,blue_plans,red_plans,seconds\n",
        );
        for r in &self.trace {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{:.3}",
                r.iteration,
                r.subgame_value,
                r.blue_br_value,
                r.red_br_value,
                r.gap,
                r.blue_exact,
                r.red_exact,
                r.blue_plans,
                r.red_plans,
                r.seconds
            );
        }
        s
    }
}

fn mixture<P: Clone + Eq + std::hash::Hash>(plans: &[P], probs: &[f64]) -> Result<MixedStrategy<P>> {
    MixedStrategy::from_weights(
        plans
            .iter()
            .cloned()
            .zip(probs.iter().map(|p| if *p > 1e-12 { *p } else { 0.0 })),
    )
}

struct Oracles<'a> {
    game: &'a Game,
    cfg: &'a DoConfig,
}

impl Oracles<'_> {
    fn options(&self, exact: bool, iteration: usize, side: &str) -> BrOptions {
        BrOptions {
            time_limit: if exact { None } else { self.cfg.br_time_limit },
            solve: self.cfg.solve.clone(),
            dump: self
                .cfg
                .dump_dir
                .as_ref()
                .map(|d| d.join(format!("iter{iteration:04}_{side}.lp"))),
        }
    }

    fn blue(
        &self,
        red: &MixedStrategy<InterdictionPlan>,
        start: Option<&LogisticsPlan>,
        exact: bool,
        it: usize,
    ) -> Result<BestResponse<LogisticsPlan>> {
        match blue_best_response_from(self.game, red, &self.options(exact, it, "blue"), start) {
            Err(Error::NoIncumbent { .. }) if !exact => self.blue(red, start, true, it),
            r => r,
        }
    }

    fn red(&self, blue: &MixedStrategy<LogisticsPlan>, exact: bool, it: usize) -> Result<BestResponse<InterdictionPlan>> {
        match red_best_response(self.game, blue, &self.options(exact, it, "red")) {
            Err(Error::NoIncumbent { .. }) if !exact => self.red(blue, true, it),
            r => r,
        }
    }
}

/// Double-oracle equilibrium computation.
///
/// Each iteration solves the subgame, asks both oracles for best responses
/// (concurrently) and adds them. The run converges once both responses were
/// solved exactly and either the bracket width is at most `epsilon` or
/// neither response is new.
pub fn double_oracle(game: &Game, cfg: &DoConfig) -> Result<SolveResult> {
    if !(cfg.epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {}", cfg.epsilon)));
    }
    if cfg.max_iterations == 0 {
        return Err(Error::InvalidArgument("iteration cap must be at least 1".into()));
    }
    if let Some(dir) = &cfg.dump_dir {
        std::fs::create_dir_all(dir)?;
    }
    let start = Instant::now();
    let eval = PayoffEvaluator::new(game);
    let oracles = Oracles { game, cfg };

    let mut blue0 = cfg.initial_blue.clone();
    if blue0.is_empty() {
        blue0.push(oracles.blue(&MixedStrategy::pure(InterdictionPlan::empty()), None, true, 0)?.plan);
    }
    for p in &blue0 {
        p.check(game)?;
    }
    let mut red0 = cfg.initial_red.clone();
    if red0.is_empty() {
        red0.push(InterdictionPlan::empty());
    }
    for r in &red0 {
        r.check(game)?;
    }
    let mut matrix = PayoffMatrix::build(&eval, vec![], vec![])?;
    for p in blue0 {
        matrix.insert_blue(&eval, p)?;
    }
    for r in red0 {
        matrix.insert_red(&eval, r)?;
    }

    let mut trace = Vec::new();
    let mut last = None;
    for it in 1..=cfg.max_iterations {
        let sub = subgame_nash(matrix.values())?;
        let xb = mixture(matrix.blue_plans(), &sub.blue)?;
        let xr = mixture(matrix.red_plans(), &sub.red)?;

        // Best subgame row against the Red mixture seeds Blue's oracle.
        let seed = (0..matrix.rows())
            .map(|i| (i, matrix.row_value(i, &sub.red)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| matrix.blue_plans()[i].clone());
        let seed = seed.as_ref();
        let mut exact = cfg.br_time_limit.is_none() || (cfg.exact_every > 0 && it % cfg.exact_every == 0);
        let (b, r) = rayon::join(|| oracles.blue(&xr, seed, exact, it), || oracles.red(&xb, exact, it));
        let (mut bbr, mut rbr) = (b?, r?);
        let (upper, lower, added) = loop {
            let (bi, bnew) = matrix.insert_blue(&eval, bbr.plan.clone())?;
            let (rj, rnew) = matrix.insert_red(&eval, rbr.plan.clone())?;
            let upper = matrix.row_value(bi, &sub.red);
            let lower = matrix.col_value(rj, &sub.blue);
            let done = upper - lower <= cfg.epsilon || (!bnew && !rnew);
            if done && !(bbr.optimal && rbr.optimal) && !exact {
                exact = true;
                let (b, r) = rayon::join(
                    || if bbr.optimal { Ok(bbr.clone()) } else { oracles.blue(&xr, seed, true, it) },
                    || if rbr.optimal { Ok(rbr.clone()) } else { oracles.red(&xb, true, it) },
                );
                bbr = b?;
                rbr = r?;
                continue;
            }
            break (upper, lower, bnew || rnew);
        };
        let gap = (upper - lower).max(0.0);
        trace.push(TraceRow {
            iteration: it,
            subgame_value: sub.value,
            blue_br_value: upper,
            red_br_value: lower,
            gap,
            blue_exact: bbr.optimal,
            red_exact: rbr.optimal,
            blue_plans: matrix.rows(),
            red_plans: matrix.cols(),
            seconds: start.elapsed().as_secs_f64(),
        });
        log::debug!(
            "iteration {it}: value {:.6} bracket [{lower:.6}, {upper:.6}] plans {}x{}",
            sub.value,
            matrix.rows(),
            matrix.cols()
        );
        let converged = bbr.optimal && rbr.optimal && (gap <= cfg.epsilon || !added);
        last = Some((sub.value, lower, upper, gap, xb, xr));
        if converged {
            return Ok(finish(last, trace, Termination::Converged, it, start, &eval));
        }
    }
    Ok(finish(last, trace, Termination::Cap, cfg.max_iterations, start, &eval))
}

type Snapshot = (
    f64,
    f64,
    f64,
    f64,
    MixedStrategy<LogisticsPlan>,
    MixedStrategy<InterdictionPlan>,
);

fn finish(
    last: Option<Snapshot>,
    trace: Vec<TraceRow>,
    termination: Termination,
    iterations: usize,
    start: Instant,
    eval: &PayoffEvaluator<'_>,
) -> SolveResult {
    let (value, lower_bound, upper_bound, gap, blue, red) =
        last.expect("at least one iteration runs");
    SolveResult {
        value,
        lower_bound,
        upper_bound,
        gap,
        blue,
        red,
        trace,
        termination,
        iterations,
        seconds: start.elapsed().as_secs_f64(),
        lp_solves: eval.lp_solves(),
    }
}
