use std::collections::BTreeMap;

use clgame_milp::{solve, Cmp, Model, Sense, SolveOptions, SolveStatus, Var, VarKind};

use super::{run_milp, BestResponse, BrOptions, MixedStrategy};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::layered::{InterdictionPlan, LogisticsPlan};
use crate::payoff::FixedFlowLp;

/// Red's best response as one minimization over interdiction binaries and
/// the dual multipliers of Blue's penalized recourse LPs.
///
/// For each support plan the inner LP is the recourse LP on the untruncated
/// paths with a penalty `Z·(#interdicted edges so far)` per unit of load on
/// every path position. Since the interdiction enters only as objective
/// coefficients of the inner LP, its dual is linear in the binaries.
pub struct RedDualModel {
    pub model: Model,
    /// Interdiction binary per candidate physical edge.
    pub interdict: Vec<(usize, Var)>,
    /// Dual multipliers whose increase keeps every dual row satisfied
    /// (capacity and satisfied-unit caps).
    pub slack_duals: Vec<Var>,
}

fn candidate_edges(game: &Game, blue: &MixedStrategy<LogisticsPlan>) -> Vec<usize> {
    let mut out: Vec<usize> = blue
        .support()
        .iter()
        .flat_map(|plan| {
            plan.paths
                .iter()
                .enumerate()
                .flat_map(move |(c, p)| p.iter().map(move |&e| game.layered(c).edge(e).edge))
        })
        .filter(|&e| game.edge(e).cost.is_some())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Builds the dualized model. With `fixed` the interdiction variables are
/// fixed continuous columns and the model is a pure LP.
pub fn red_dual_model(
    game: &Game,
    blue: &MixedStrategy<LogisticsPlan>,
    fixed: Option<&InterdictionPlan>,
) -> RedDualModel {
    let np = game.num_packages();
    let t_max = game.horizon() as usize;
    let z = game.unit_value_bound();
    let mut m = Model::new(Sense::Minimize);
    let mut slack_duals = Vec::new();

    let interdict: Vec<(usize, Var)> = candidate_edges(game, blue)
        .into_iter()
        .map(|e| {
            let y = match fixed {
                Some(plan) => {
                    let v = if plan.contains(e) { 1.0 } else { 0.0 };
                    m.add_var(VarKind::Continuous, v, v)
                }
                None => m.binary(),
            };
            m.set_name(y, format!("y_{}", game.edge_id(e)));
            (e, y)
        })
        .collect();
    let y_of: BTreeMap<usize, Var> = interdict.iter().copied().collect();
    if fixed.is_none() {
        m.constrain(
            interdict.iter().map(|&(e, y)| (y, game.edge(e).cost.expect("interdictable"))),
            Cmp::Le,
            game.budget(),
        );
    }

    for (plan, x) in blue.iter() {
        if x <= 0.0 {
            continue;
        }
        // Warehouse balance multipliers, t = 0..=T.
        let alpha: Vec<Vec<Vec<Var>>> = game
            .warehouses()
            .iter()
            .map(|_| {
                (0..=t_max)
                    .map(|_| (0..np).map(|_| m.continuous(f64::NEG_INFINITY, f64::INFINITY)).collect())
                    .collect()
            })
            .collect();
        for (w, wh) in game.warehouses().iter().enumerate() {
            for p in 0..np {
                m.add_objective(alpha[w][0][p], -wh.supply[p]);
                for t in 1..=t_max {
                    m.constrain([(alpha[w][t][p], 1.0), (alpha[w][t - 1][p], -1.0)], Cmp::Ge, 0.0);
                }
            }
            if !wh.has_demand() {
                for p in 0..np {
                    m.constrain([(alpha[w][t_max][p], -1.0)], Cmp::Ge, 0.0);
                }
                continue;
            }
            let mu = m.nonneg();
            m.set_objective(mu, wh.max_units);
            slack_duals.push(mu);
            let mut g_row = vec![(mu, 1.0)];
            for p in 0..np {
                if wh.demand[p] > 0.0 {
                    let gamma = m.nonneg();
                    g_row.push((gamma, wh.demand[p]));
                    m.constrain([(alpha[w][t_max][p], -1.0), (gamma, -1.0)], Cmp::Ge, 0.0);
                } else {
                    m.constrain([(alpha[w][t_max][p], -1.0)], Cmp::Ge, 0.0);
                }
            }
            m.constrain(g_row, Cmp::Ge, x * wh.payoff);
        }

        for (c, path) in plan.paths.iter().enumerate() {
            let g = game.layered(c);
            let cd = game.connector(c);
            // Pass-through multiplier between positions k and k+1.
            let beta: Vec<Option<Vec<Var>>> = path
                .iter()
                .enumerate()
                .map(|(k, &e)| {
                    let head = g.node(g.edge(e).head).node;
                    (k + 1 < path.len() && game.warehouse_at(head).is_none()).then(|| {
                        (0..np)
                            .map(|_| m.continuous(f64::NEG_INFINITY, f64::INFINITY))
                            .collect()
                    })
                })
                .collect();
            let mut hits: Vec<Var> = Vec::new();
            for (k, &e) in path.iter().enumerate() {
                let le = g.edge(e);
                if let Some(&y) = y_of.get(&le.edge) {
                    hits.push(y);
                }
                let omega = m.nonneg();
                m.set_objective(omega, cd.weight_cap);
                let nu = m.nonneg();
                m.set_objective(nu, cd.volume_cap);
                slack_duals.extend([omega, nu]);
                let (tail, head) = (g.node(le.tail), g.node(le.head));
                for p in 0..np {
                    let mut terms = vec![(omega, game.weight(p)), (nu, game.volume(p))];
                    if let Some(w) = game.warehouse_at(head.node) {
                        terms.push((alpha[w][head.time as usize][p], 1.0));
                    }
                    if let Some(w) = game.warehouse_at(tail.node) {
                        terms.push((alpha[w][tail.time as usize][p], -1.0));
                    }
                    if let Some(b) = &beta[k] {
                        terms.push((b[p], 1.0));
                    }
                    if k > 0 {
                        if let Some(b) = &beta[k - 1] {
                            terms.push((b[p], -1.0));
                        }
                    }
                    terms.extend(hits.iter().map(|&y| (y, z)));
                    m.constrain(terms, Cmp::Ge, 0.0);
                }
            }
        }
    }

    RedDualModel {
        model: m,
        interdict,
        slack_duals,
    }
}

/// Red's best interdiction plan against a Blue mixture.
pub fn red_best_response(
    game: &Game,
    blue: &MixedStrategy<LogisticsPlan>,
    opts: &BrOptions,
) -> Result<BestResponse<InterdictionPlan>> {
    let dual = red_dual_model(game, blue, None);
    let out = run_milp(&dual.model, opts, "Red best response")?;
    let values = out.values.as_deref().expect("solution present");
    let plan = InterdictionPlan::new(
        dual.interdict
            .iter()
            .filter(|(_, y)| values[y.index()] > 0.5)
            .map(|(e, _)| *e)
            .collect(),
    );
    Ok(BestResponse {
        plan,
        value: out.objective.expect("solution present").max(0.0),
        bound: out.bound.expect("solution present"),
        optimal: out.status == SolveStatus::Optimal,
    })
}

/// Optimum of the dualized inner problem at a fixed interdiction.
pub fn red_inner_dual(
    game: &Game,
    blue: &MixedStrategy<LogisticsPlan>,
    interdiction: &InterdictionPlan,
) -> Result<f64> {
    let dual = red_dual_model(game, blue, Some(interdiction));
    let out = solve(&dual.model, &SolveOptions::default())?;
    match out.status {
        SolveStatus::Optimal => Ok(out.objective.expect("optimal")),
        status => Err(Error::Unsolved {
            context: "dualized inner LP",
            status,
        }),
    }
}

/// Optimum of the penalized primal inner LPs at a fixed interdiction,
/// summed over the Blue support with its weights.
pub fn red_inner_primal(
    game: &Game,
    blue: &MixedStrategy<LogisticsPlan>,
    interdiction: &InterdictionPlan,
) -> Result<f64> {
    let z = game.unit_value_bound();
    let mut total = 0.0;
    for (plan, x) in blue.iter() {
        let destroyed = vec![false; plan.paths.len()];
        let mut lp = FixedFlowLp::build(game, &plan.paths, &destroyed, x);
        for (c, path) in plan.paths.iter().enumerate() {
            let g = game.layered(c);
            let mut count = 0.0;
            for (k, &e) in path.iter().enumerate() {
                if interdiction.contains(g.edge(e).edge) {
                    count += 1.0;
                }
                for &l in &lp.loads[c][k] {
                    lp.model.set_objective(l, -z * count);
                }
            }
        }
        let out = solve(&lp.model, &SolveOptions::default())?;
        if out.status != SolveStatus::Optimal {
            return Err(Error::Unsolved {
                context: "penalized inner LP",
                status: out.status,
            });
        }
        total += out.objective.expect("optimal");
    }
    Ok(total)
}
