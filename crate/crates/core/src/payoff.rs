//! Leontief objective, the recourse LP for a pure strategy pair, and cached
//! payoff matrices.

use std::collections::HashMap;
use std::fmt::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

use clgame_milp::{solve, Cmp, Model, Sense, SolveOptions, SolveStatus, Var};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::layered::{truncate_plan, InterdictionPlan, LogisticsPlan, TruncatedPlan};

/// Weighted Leontief satisfaction of terminal stocks, indexed
/// `[warehouse][package]`. Warehouses without demand contribute nothing.
pub fn leontief_value(game: &Game, terminal: &[Vec<f64>]) -> f64 {
    game.warehouses()
        .iter()
        .zip(terminal)
        .filter(|(w, _)| w.has_demand())
        .map(|(w, stock)| {
            let ratio = w
                .demand
                .iter()
                .zip(stock)
                .filter(|(d, _)| **d > 0.0)
                .map(|(d, s)| s / d)
                .fold(f64::INFINITY, f64::min);
            w.payoff * ratio.min(w.max_units)
        })
        .sum()
}

/// Optimal package movement along fixed (possibly truncated) paths.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution {
    /// `[connector][path position][package]`.
    pub loads: Vec<Vec<Vec<f64>>>,
    /// `[warehouse][t][package]` for t in 0..=T+1.
    pub stocks: Vec<Vec<Vec<f64>>>,
    /// Satisfied units per warehouse; zero where there is no demand.
    pub satisfied: Vec<f64>,
}

impl FlowSolution {
    /// Stocks at T+1, indexed `[warehouse][package]`.
    pub fn terminal_stocks(&self) -> Vec<Vec<f64>> {
        self.stocks
            .iter()
            .map(|s| s.last().cloned().unwrap_or_default())
            .collect()
    }
}

/// LP over package loads along fixed paths.
pub(crate) struct FixedFlowLp {
    pub model: Model,
    /// `[connector][position][package]`.
    pub loads: Vec<Vec<Vec<Var>>>,
    /// `[warehouse][t-1][package]` for t in 1..=T+1.
    pub stocks: Vec<Vec<Vec<Var>>>,
    pub satisfied: Vec<Option<Var>>,
}

impl FixedFlowLp {
    /// Builds the package-flow LP on `paths`. A destroyed connector's final
    /// edge delivers nothing at its head. The objective is
    /// `weight · Σ_w P(w) g_w`.
    pub fn build(game: &Game, paths: &[Vec<usize>], destroyed: &[bool], weight: f64) -> Self {
        let t_max = game.horizon() as usize;
        let np = game.num_packages();
        let nw = game.warehouses().len();
        let mut m = Model::new(Sense::Maximize);

        let loads: Vec<Vec<Vec<Var>>> = paths
            .iter()
            .map(|p| p.iter().map(|_| (0..np).map(|_| m.nonneg()).collect()).collect())
            .collect();
        let stocks: Vec<Vec<Vec<Var>>> = (0..nw)
            .map(|_| (0..=t_max).map(|_| (0..np).map(|_| m.nonneg()).collect()).collect())
            .collect();

        // (c, k) arriving at / leaving warehouse w at time t.
        let mut inflow = vec![vec![Vec::new(); t_max + 1]; nw];
        let mut outflow = vec![vec![Vec::new(); t_max + 1]; nw];
        for (c, path) in paths.iter().enumerate() {
            let g = game.layered(c);
            for (k, &e) in path.iter().enumerate() {
                let le = g.edge(e);
                let (tail, head) = (g.node(le.tail), g.node(le.head));
                let last = k + 1 == path.len();
                if let Some(w) = game.warehouse_at(tail.node) {
                    outflow[w][tail.time as usize].push((c, k));
                }
                match game.warehouse_at(head.node) {
                    Some(w) if !(last && destroyed[c]) => {
                        inflow[w][head.time as usize].push((c, k));
                    }
                    None if !last => {
                        for p in 0..np {
                            m.constrain(
                                [(loads[c][k][p], 1.0), (loads[c][k + 1][p], -1.0)],
                                Cmp::Eq,
                                0.0,
                            );
                        }
                    }
                    _ => {}
                }
            }
        }

        for (w, wh) in game.warehouses().iter().enumerate() {
            for t in 0..=t_max {
                for p in 0..np {
                    let mut terms: Vec<(Var, f64)> = Vec::new();
                    for &(c, k) in &inflow[w][t] {
                        terms.push((loads[c][k][p], 1.0));
                    }
                    for &(c, k) in &outflow[w][t] {
                        terms.push((loads[c][k][p], -1.0));
                    }
                    terms.push((stocks[w][t][p], -1.0));
                    let rhs = if t == 0 {
                        -wh.supply[p]
                    } else {
                        terms.push((stocks[w][t - 1][p], 1.0));
                        0.0
                    };
                    m.constrain(terms, Cmp::Eq, rhs);
                }
            }
        }

        for (c, path) in paths.iter().enumerate() {
            let cd = game.connector(c);
            for k in 0..path.len() {
                let w: Vec<_> = (0..np).map(|p| (loads[c][k][p], game.weight(p))).collect();
                m.constrain(w, Cmp::Le, cd.weight_cap);
                let v: Vec<_> = (0..np).map(|p| (loads[c][k][p], game.volume(p))).collect();
                m.constrain(v, Cmp::Le, cd.volume_cap);
            }
        }

        let satisfied = game
            .warehouses()
            .iter()
            .enumerate()
            .map(|(w, wh)| {
                if !wh.has_demand() {
                    return None;
                }
                let g = m.continuous(0.0, wh.max_units);
                m.set_objective(g, weight * wh.payoff);
                for p in 0..np {
                    if wh.demand[p] > 0.0 {
                        m.constrain([(g, wh.demand[p]), (stocks[w][t_max][p], -1.0)], Cmp::Le, 0.0);
                    }
                }
                Some(g)
            })
            .collect();

        Self {
            model: m,
            loads,
            stocks,
            satisfied,
        }
    }

    pub fn extract(&self, game: &Game, values: &[f64]) -> FlowSolution {
        let get = |v: &Var| values[v.index()].max(0.0);
        FlowSolution {
            loads: self
                .loads
                .iter()
                .map(|c| c.iter().map(|k| k.iter().map(get).collect()).collect())
                .collect(),
            stocks: self
                .stocks
                .iter()
                .zip(game.warehouses())
                .map(|(s, wh)| {
                    std::iter::once(wh.supply.clone())
                        .chain(s.iter().map(|t| t.iter().map(get).collect()))
                        .collect()
                })
                .collect(),
            satisfied: self
                .satisfied
                .iter()
                .map(|g| g.as_ref().map_or(0.0, get))
                .collect(),
        }
    }
}

/// Solves the recourse LP on an already truncated plan.
pub fn truncated_utility(game: &Game, plan: &TruncatedPlan) -> Result<(f64, FlowSolution)> {
    let lp = FixedFlowLp::build(game, &plan.paths, &plan.destroyed, 1.0);
    let out = solve(&lp.model, &SolveOptions::default())?;
    if out.status != SolveStatus::Optimal {
        return Err(Error::Unsolved {
            context: "recourse LP",
            status: out.status,
        });
    }
    let values = out.values.expect("optimal LP has values");
    let value = out.objective.expect("optimal LP has objective").max(0.0);
    Ok((value, lp.extract(game, &values)))
}

/// Utility of `plan` against `interdiction`: truncate, then let Blue
/// re-optimize package loads on what survives.
pub fn recourse_utility(
    game: &Game,
    plan: &LogisticsPlan,
    interdiction: &InterdictionPlan,
) -> Result<(f64, FlowSolution)> {
    truncated_utility(game, &truncate_plan(game, plan, interdiction))
}

/// Recourse values memoized by truncated plan, so plans that coincide after
/// truncation share one LP solve.
pub struct PayoffEvaluator<'g> {
    game: &'g Game,
    cache: RwLock<HashMap<TruncatedPlan, f64>>,
    solves: AtomicUsize,
}

impl<'g> PayoffEvaluator<'g> {
    pub fn new(game: &'g Game) -> Self {
        Self {
            game,
            cache: RwLock::new(HashMap::new()),
            solves: AtomicUsize::new(0),
        }
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn utility(&self, plan: &LogisticsPlan, interdiction: &InterdictionPlan) -> Result<f64> {
        self.truncated(truncate_plan(self.game, plan, interdiction))
    }

    pub fn truncated(&self, key: TruncatedPlan) -> Result<f64> {
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let (v, _) = truncated_utility(self.game, &key)?;
        self.solves.fetch_add(1, Ordering::Relaxed);
        self.cache.write().expect("cache lock").insert(key, v);
        Ok(v)
    }

    /// Number of LPs actually solved so far.
    pub fn lp_solves(&self) -> usize {
        self.solves.load(Ordering::Relaxed)
    }
}

/// Utilities of Blue plans (rows) against Red plans (columns).
#[derive(Clone, Debug, Default)]
pub struct PayoffMatrix {
    blue: Vec<LogisticsPlan>,
    red: Vec<InterdictionPlan>,
    values: Vec<Vec<f64>>,
}

impl PayoffMatrix {
    /// Evaluates every cell, in parallel.
    pub fn build(
        eval: &PayoffEvaluator<'_>,
        blue: Vec<LogisticsPlan>,
        red: Vec<InterdictionPlan>,
    ) -> Result<Self> {
        let values = blue
            .par_iter()
            .map(|b| red.iter().map(|r| eval.utility(b, r)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { blue, red, values })
    }

    pub fn rows(&self) -> usize {
        self.blue.len()
    }

    pub fn cols(&self) -> usize {
        self.red.len()
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row][col]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn blue_plans(&self) -> &[LogisticsPlan] {
        &self.blue
    }

    pub fn red_plans(&self) -> &[InterdictionPlan] {
        &self.red
    }

    pub fn blue_index(&self, plan: &LogisticsPlan) -> Option<usize> {
        self.blue.iter().position(|b| b == plan)
    }

    pub fn red_index(&self, plan: &InterdictionPlan) -> Option<usize> {
        self.red.iter().position(|r| r == plan)
    }

    /// Appends a row even if the plan is already present.
    pub fn push_blue(&mut self, eval: &PayoffEvaluator<'_>, plan: LogisticsPlan) -> Result<usize> {
        let row = self
            .red
            .par_iter()
            .map(|r| eval.utility(&plan, r))
            .collect::<Result<Vec<_>>>()?;
        self.blue.push(plan);
        self.values.push(row);
        Ok(self.blue.len() - 1)
    }

    /// Appends a column even if the plan is already present.
    pub fn push_red(&mut self, eval: &PayoffEvaluator<'_>, plan: InterdictionPlan) -> Result<usize> {
        let col = self
            .blue
            .par_iter()
            .map(|b| eval.utility(b, &plan))
            .collect::<Result<Vec<_>>>()?;
        for (row, v) in self.values.iter_mut().zip(col) {
            row.push(v);
        }
        self.red.push(plan);
        Ok(self.red.len() - 1)
    }

    /// Row index of `plan`, adding it if new. The flag is true when added.
    pub fn insert_blue(&mut self, eval: &PayoffEvaluator<'_>, plan: LogisticsPlan) -> Result<(usize, bool)> {
        match self.blue_index(&plan) {
            Some(i) => Ok((i, false)),
            None => Ok((self.push_blue(eval, plan)?, true)),
        }
    }

    pub fn insert_red(&mut self, eval: &PayoffEvaluator<'_>, plan: InterdictionPlan) -> Result<(usize, bool)> {
        match self.red_index(&plan) {
            Some(j) => Ok((j, false)),
            None => Ok((self.push_red(eval, plan)?, true)),
        }
    }

    /// Expected utility of row `row` against a column distribution.
    pub fn row_value(&self, row: usize, red: &[f64]) -> f64 {
        self.values[row].iter().zip(red).map(|(v, p)| v * p).sum()
    }

    pub fn col_value(&self, col: usize, blue: &[f64]) -> f64 {
        self.values.iter().zip(blue).map(|(r, p)| r[col] * p).sum()
    }

    /// CSV with Red plan ids `r<j>` as header and Blue plan ids `b<i>` leading
    /// each row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("plan");
        for j in 0..self.cols() {
            let _ = write!(s, ",r{j}");
        }
        s.push('\n');
        for (i, row) in self.values.iter().enumerate() {
            let _ = write!(s, "b{i}");
            for v in row {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        s
    }
}

/// Full matrix of `blue` × `red` with a fresh cache.
pub fn payoff_matrix(
    game: &Game,
    blue: Vec<LogisticsPlan>,
    red: Vec<InterdictionPlan>,
) -> Result<PayoffMatrix> {
    PayoffMatrix::build(&PayoffEvaluator::new(game), blue, red)
}
