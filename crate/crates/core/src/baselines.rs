//! Non-game-theoretic baselines and robustness experiments.

use std::collections::HashMap;
use std::fmt::Write;

use clgame_milp::{Cmp, Model, Sense, SolveOptions, SolveStatus};
use rayon::prelude::*;

use crate::equilibrium::{double_oracle, exploitability, DoConfig};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::layered::{InterdictionPlan, LogisticsPlan};
use crate::oracles::{
    add_path_flows, add_recourse_block, blue_best_response, extract_plan, run_milp, BrOptions,
    MixedStrategy,
};
use crate::payoff::recourse_utility;
use crate::scenario::Scenario;

/// Blue's best plan when Red does nothing, with its recourse value.
pub fn no_red_optimal(game: &Game, solve: &SolveOptions) -> Result<(LogisticsPlan, f64)> {
    let opts = BrOptions {
        solve: solve.clone(),
        ..BrOptions::exact()
    };
    let br = blue_best_response(game, &MixedStrategy::pure(InterdictionPlan::empty()), &opts)?;
    let (value, _) = recourse_utility(game, &br.plan, &InterdictionPlan::empty())?;
    Ok((br.plan, value))
}

#[derive(Clone, Debug)]
pub struct MinOverlap {
    /// Uniform over `plans`, repeated plans merged.
    pub strategy: MixedStrategy<LogisticsPlan>,
    /// The extracted plans in replica order, repeats kept.
    pub plans: Vec<LogisticsPlan>,
    /// Largest number of connector traversals of one non-loop physical edge.
    pub max_overlap: f64,
    /// Number of replicas repeating an earlier plan.
    pub duplicates: usize,
    pub optimal: bool,
}

/// `n_str` plans, each worth at least `target` without interdiction, that
/// minimize the largest number of traversals of any non-loop physical edge
/// summed over all plans and connectors.
pub fn min_overlap_strategy(game: &Game, target: f64, n_str: usize, opts: &BrOptions) -> Result<MinOverlap> {
    if n_str == 0 {
        return Err(Error::InvalidArgument("support size must be at least 1".into()));
    }
    let mut m = Model::new(Sense::Minimize);
    let z = m.nonneg();
    m.set_name(z, "max_overlap");
    m.set_objective(z, 1.0);

    let mut copies: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (c, g) in game.layered_graphs().iter().enumerate() {
        for (e, le) in g.edges().iter().enumerate() {
            let pe = game.edge(le.edge);
            if pe.tail != pe.head {
                copies.entry(le.edge).or_default().push((c, e));
            }
        }
    }

    let mut replicas = Vec::with_capacity(n_str);
    for _ in 0..n_str {
        let flows = add_path_flows(&mut m, game);
        let sat = add_recourse_block(&mut m, game, &flows, &InterdictionPlan::empty(), 0.0);
        let value = sat
            .iter()
            .zip(game.warehouses())
            .filter_map(|(g, w)| g.map(|g| (g, w.payoff)));
        m.constrain(value, Cmp::Ge, target);
        replicas.push(flows);
    }
    let mut edges: Vec<_> = copies.keys().copied().collect();
    edges.sort_unstable();
    for pe in edges {
        let terms = replicas
            .iter()
            .flat_map(|f| copies[&pe].iter().map(move |&(c, e)| (f[c][e], -1.0)));
        m.constrain(terms.chain([(z, 1.0)]), Cmp::Ge, 0.0);
    }

    let out = match run_milp(&m, opts, "min-overlap heuristic") {
        Err(Error::Unsolved {
            status: SolveStatus::Infeasible,
            ..
        }) => {
            return Err(Error::InfeasiblePlan(format!(
                "no plan reaches value {target} even without interdiction"
            )))
        }
        r => r?,
    };
    let values = out.values.as_deref().expect("solution present");
    let plans: Vec<LogisticsPlan> = replicas.iter().map(|f| extract_plan(game, f, values)).collect();
    let duplicates = plans
        .iter()
        .enumerate()
        .filter(|(i, p)| plans[..*i].contains(p))
        .count();
    Ok(MinOverlap {
        strategy: MixedStrategy::uniform(plans.clone())?,
        plans,
        max_overlap: out.objective.expect("solution present"),
        duplicates,
        optimal: out.status == SolveStatus::Optimal,
    })
}

/// Expected-budget × true-budget exploitability table.
#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessTable {
    pub budgets: Vec<f64>,
    /// `values[e][t]`: mixture computed for `budgets[e]`, evaluated against a
    /// best-responding Red with budget `budgets[t]`.
    pub values: Vec<Vec<f64>>,
    /// Double-oracle value at each budget.
    pub game_values: Vec<f64>,
}

impl RobustnessTable {
    /// Rows are expected budgets, columns true budgets.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("expected_budget");
        for b in &self.budgets {
            let _ = write!(s, ",{b}");
        }
        s.push('\n');
        for (b, row) in self.budgets.iter().zip(&self.values) {
            let _ = write!(s, "{b}");
            for v in row {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        s
    }

    /// Largest shortfall of a column's diagonal entry below that column's maximum.
    pub fn diagonal_shortfall(&self) -> f64 {
        (0..self.budgets.len())
            .map(|t| {
                let best = self.values.iter().map(|r| r[t]).fold(f64::NEG_INFINITY, f64::max);
                best - self.values[t][t]
            })
            .fold(0.0, f64::max)
    }
}

/// Plans against each expected budget with double oracle, then measures each
/// resulting mixture against every true budget.
pub fn price_of_robustness(scenario: &Scenario, budgets: &[f64], cfg: &DoConfig) -> Result<RobustnessTable> {
    if budgets.is_empty() || budgets.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("budgets must be nonempty and ascending".into()));
    }
    let games = budgets
        .iter()
        .map(|&b| Game::new(scenario.with_budget(b)))
        .collect::<Result<Vec<_>>>()?;
    let rows = games
        .par_iter()
        .map(|g| -> Result<(f64, Vec<f64>)> {
            let res = double_oracle(g, cfg)?;
            let row = games
                .iter()
                .map(|gt| exploitability(gt, &res.blue, &cfg.solve).map(|e| e.value))
                .collect::<Result<Vec<_>>>()?;
            Ok((res.value, row))
        })
        .collect::<Result<Vec<_>>>()?;
    let (game_values, values) = rows.into_iter().unzip();
    Ok(RobustnessTable {
        budgets: budgets.to_vec(),
        values,
        game_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::exploitability;
    use crate::fixtures::{triangle, two_corridor};
    use crate::scenario::{generate_sat_gadget, Cnf};

    #[test]
    fn unopposed_satisfiable_formula_is_worth_one() {
        let cnf = Cnf::new(2, vec![vec![1, 2], vec![-1]]);
        let game = Game::new(generate_sat_gadget(&cnf).unwrap()).unwrap();
        let (plan, v) = no_red_optimal(&game, &SolveOptions::default()).unwrap();
        plan.check(&game).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn min_overlap_splits_the_corridors() {
        let game = two_corridor();
        let h = min_overlap_strategy(&game, 1.0, 2, &BrOptions::exact()).unwrap();
        assert!(h.optimal);
        assert!((h.max_overlap - 1.0).abs() < 1e-6);
        assert_eq!(h.duplicates, 0);
        assert_eq!(h.strategy.len(), 2);
        let ex = exploitability(&game, &h.strategy, &SolveOptions::default()).unwrap();
        assert!((ex.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn min_overlap_repeats_when_forced() {
        let game = two_corridor();
        let h = min_overlap_strategy(&game, 1.0, 3, &BrOptions::exact()).unwrap();
        assert!((h.max_overlap - 2.0).abs() < 1e-6);
        assert_eq!(h.plans.len(), 3);
        assert_eq!(h.duplicates, 1);
    }

    #[test]
    fn unreachable_target_is_reported() {
        let err = min_overlap_strategy(&two_corridor(), 1.5, 1, &BrOptions::exact()).unwrap_err();
        assert!(matches!(err, Error::InfeasiblePlan(_)));
        assert!(min_overlap_strategy(&two_corridor(), 1.0, 0, &BrOptions::exact()).is_err());
    }

    #[test]
    fn planning_for_the_true_budget_is_best() {
        let eps = 1e-6;
        for s in [triangle().scenario().clone(), two_corridor().scenario().clone()] {
            let t = price_of_robustness(&s, &[0.0, 1.0, 2.0], &DoConfig::exact(eps)).unwrap();
            assert!(t.diagonal_shortfall() <= 2.0 * eps + 1e-9, "{}", t.to_csv());
            for (i, v) in t.game_values.iter().enumerate() {
                assert!((t.values[i][i] - v).abs() < 1e-5);
            }
            assert_eq!(t.to_csv().lines().count(), 4);
        }
        assert!(price_of_robustness(triangle().scenario(), &[1.0, 0.0], &DoConfig::exact(eps)).is_err());
    }
}
