use clgame_milp::{Cmp, Model, Sense, SolveStatus, Var};

use super::{run_milp, BestResponse, BrOptions, MixedStrategy};
use crate::error::Result;
use crate::game::Game;
use crate::layered::{InterdictionPlan, LogisticsPlan};

/// Binary edge flows forming one start-to-layer-T path per connector.
pub(crate) fn add_path_flows(m: &mut Model, game: &Game) -> Vec<Vec<Var>> {
    let horizon = game.horizon();
    game.layered_graphs()
        .iter()
        .map(|g| {
            let f: Vec<Var> = (0..g.num_edges()).map(|_| m.binary()).collect();
            m.constrain(g.out_edges(g.root()).iter().map(|&e| (f[e], 1.0)), Cmp::Eq, 1.0);
            for v in g.topological_order() {
                let t = g.node(v).time;
                if t == 0 || t >= horizon {
                    continue;
                }
                let terms = g
                    .in_edges(v)
                    .iter()
                    .map(|&e| (f[e], 1.0))
                    .chain(g.out_edges(v).iter().map(|&e| (f[e], -1.0)));
                m.constrain(terms, Cmp::Eq, 0.0);
            }
            f
        })
        .collect()
}

/// Package flows on the variable paths `flows` under one interdiction plan.
///
/// Loads on interdicted copies never arrive, and once a connector crosses an
/// interdicted copy it may not pick anything up downstream. Capacity rows
/// bind against the surviving part of the path, and a demand warehouse
/// needing deliveries only counts units when some connector arrives alive. Returns the
/// satisfied-units variable of each demand warehouse, already weighted into
/// the objective by `weight · P(w)`.
pub(crate) fn add_recourse_block(
    m: &mut Model,
    game: &Game,
    flows: &[Vec<Var>],
    interdiction: &InterdictionPlan,
    weight: f64,
) -> Vec<Option<Var>> {
    let np = game.num_packages();
    let t_max = game.horizon() as usize;
    let same_sizes = (0..np).all(|p| game.weight(p) == game.volume(p));

    let loads: Vec<Vec<Vec<Var>>> = game
        .layered_graphs()
        .iter()
        .map(|g| (0..g.num_edges()).map(|_| (0..np).map(|_| m.nonneg()).collect()).collect())
        .collect();
    let hit = |g: &crate::layered::LayeredGraph, e: usize| interdiction.contains(g.edge(e).edge);

    // Flow of each connector that has not yet crossed an interdicted copy;
    // loads may only ride on this part of the path.
    let mut alive: Vec<Vec<Var>> = Vec::with_capacity(flows.len());
    for (c, g) in game.layered_graphs().iter().enumerate() {
        if !(0..g.num_edges()).any(|e| hit(g, e)) {
            alive.push(flows[c].clone());
            continue;
        }
        let z: Vec<Var> = (0..g.num_edges()).map(|_| m.continuous(0.0, 1.0)).collect();
        for e in 0..g.num_edges() {
            m.constrain([(z[e], 1.0), (flows[c][e], -1.0)], Cmp::Le, 0.0);
        }
        for v in g.topological_order().filter(|&v| v != g.root()) {
            if g.out_edges(v).is_empty() {
                continue;
            }
            let terms = g
                .out_edges(v)
                .iter()
                .map(|&e| (z[e], 1.0))
                .chain(g.in_edges(v).iter().filter(|&&e| !hit(g, e)).map(|&e| (z[e], -1.0)));
            m.constrain(terms, Cmp::Le, 0.0);
        }
        alive.push(z);
    }

    for (c, g) in game.layered_graphs().iter().enumerate() {
        let cd = game.connector(c);
        let l = &loads[c];
        let z = &alive[c];

        for v in g.topological_order() {
            let n = g.node(v);
            if n.time == 0 || n.time as usize >= t_max || game.warehouse_at(n.node).is_some() {
                continue;
            }
            for p in 0..np {
                let terms = g
                    .in_edges(v)
                    .iter()
                    .filter(|&&e| !hit(g, e))
                    .map(|&e| (l[e][p], 1.0))
                    .chain(g.out_edges(v).iter().map(|&e| (l[e][p], -1.0)));
                m.constrain(terms, Cmp::Eq, 0.0);
            }
        }

        let min_w = (0..np).map(|p| game.weight(p)).fold(f64::INFINITY, f64::min);
        let min_v = (0..np).map(|p| game.volume(p)).fold(f64::INFINITY, f64::min);
        let implied = (min_w > 0.0 && cd.weight_cap / min_w <= cd.load_bound)
            || (min_v > 0.0 && cd.volume_cap / min_v <= cd.load_bound);
        let same_caps = same_sizes && cd.weight_cap == cd.volume_cap;
        for e in 0..g.num_edges() {
            let w = (0..np).map(|p| (l[e][p], game.weight(p)));
            m.constrain(w.chain([(z[e], -cd.weight_cap)]), Cmp::Le, 0.0);
            if !same_caps {
                let v = (0..np).map(|p| (l[e][p], game.volume(p)));
                m.constrain(v.chain([(z[e], -cd.volume_cap)]), Cmp::Le, 0.0);
            }
            if !implied {
                let s = (0..np).map(|p| (l[e][p], 1.0));
                m.constrain(s.chain([(z[e], -cd.load_bound)]), Cmp::Le, 0.0);
            }
        }

        for e in (0..g.num_edges()).filter(|&e| hit(g, e)) {
            let head = g.edge(e).head;
            let downstream: Vec<usize> = (0..g.num_edges())
                .filter(|&e2| {
                    let tail = g.edge(e2).tail;
                    e2 != e && game.warehouse_at(g.node(tail).node).is_some() && g.reaches(head, tail)
                })
                .collect();
            if downstream.is_empty() {
                continue;
            }
            let mut times: Vec<u32> = downstream.iter().map(|&e2| g.node(g.edge(e2).tail).time).collect();
            times.sort_unstable();
            times.dedup();
            let big_m = cd.load_bound * times.len() as f64;
            let terms = downstream
                .iter()
                .flat_map(|&e2| (0..np).map(move |p| (l[e2][p], 1.0)))
                .chain([(flows[c][e], big_m)]);
            m.constrain(terms, Cmp::Le, big_m);
        }
    }

    let mut stocks: Vec<Vec<Vec<Var>>> = Vec::new();
    for wh in game.warehouses() {
        let s: Vec<Vec<Var>> = (0..=t_max).map(|_| (0..np).map(|_| m.nonneg()).collect()).collect();
        for t in 0..=t_max {
            for p in 0..np {
                let mut terms: Vec<(Var, f64)> = Vec::new();
                for (c, g) in game.layered_graphs().iter().enumerate() {
                    let Some(v) = g.find_node(wh.node, t as u32) else {
                        continue;
                    };
                    for &e in g.in_edges(v) {
                        if !hit(g, e) {
                            terms.push((loads[c][e][p], 1.0));
                        }
                    }
                    for &e in g.out_edges(v) {
                        terms.push((loads[c][e][p], -1.0));
                    }
                }
                terms.push((s[t][p], -1.0));
                let rhs = if t == 0 {
                    -wh.supply[p]
                } else {
                    terms.push((s[t - 1][p], 1.0));
                    0.0
                };
                m.constrain(terms, Cmp::Eq, rhs);
            }
        }
        stocks.push(s);
    }

    game.warehouses()
        .iter()
        .enumerate()
        .map(|(w, wh)| {
            if !wh.has_demand() {
                return None;
            }
            let g = m.continuous(0.0, wh.max_units);
            m.set_objective(g, weight * wh.payoff);
            // Beyond what local supply covers, units need a surviving arrival.
            let local = (0..np)
                .filter(|&p| wh.demand[p] > 0.0)
                .map(|p| wh.supply[p] / wh.demand[p])
                .fold(wh.max_units, f64::min);
            if local < wh.max_units {
                let mut terms = vec![(g, 1.0)];
                for (c, lg) in game.layered_graphs().iter().enumerate() {
                    for e in 0..lg.num_edges() {
                        let le = lg.edge(e);
                        if lg.node(le.head).node == wh.node && lg.node(le.tail).node != wh.node && !hit(lg, e) {
                            terms.push((alive[c][e], -(wh.max_units - local)));
                        }
                    }
                }
                m.constrain(terms, Cmp::Le, local);
            }
            for p in 0..np {
                if wh.demand[p] > 0.0 {
                    m.constrain([(g, wh.demand[p]), (stocks[w][t_max][p], -1.0)], Cmp::Le, 0.0);
                }
            }
            Some(g)
        })
        .collect()
}

/// Follows the chosen edges from each connector's start.
pub(crate) fn extract_plan(game: &Game, flows: &[Vec<Var>], values: &[f64]) -> LogisticsPlan {
    let paths = game
        .layered_graphs()
        .iter()
        .zip(flows)
        .map(|(g, f)| {
            let mut path = Vec::new();
            let mut at = g.root();
            while g.node(at).time < game.horizon() {
                let Some(&e) = g
                    .out_edges(at)
                    .iter()
                    .max_by(|&&a, &&b| values[f[a].index()].total_cmp(&values[f[b].index()]))
                else {
                    break;
                };
                path.push(e);
                at = g.edge(e).head;
            }
            path
        })
        .collect();
    LogisticsPlan::new(paths)
}

fn build(game: &Game, red: &MixedStrategy<InterdictionPlan>) -> (Model, Vec<Vec<Var>>) {
    let mut m = Model::new(Sense::Maximize);
    let flows = add_path_flows(&mut m, game);
    for (plan, x) in red.iter() {
        if x > 0.0 {
            add_recourse_block(&mut m, game, &flows, plan, x);
        }
    }
    (m, flows)
}

/// Blue's best logistics plan against a Red mixture.
pub fn blue_best_response(
    game: &Game,
    red: &MixedStrategy<InterdictionPlan>,
    opts: &BrOptions,
) -> Result<BestResponse<LogisticsPlan>> {
    blue_best_response_from(game, red, opts, None)
}

/// As [`blue_best_response`], seeding the solver with `start` as its first
/// incumbent.
pub fn blue_best_response_from(
    game: &Game,
    red: &MixedStrategy<InterdictionPlan>,
    opts: &BrOptions,
    start: Option<&LogisticsPlan>,
) -> Result<BestResponse<LogisticsPlan>> {
    let (mut m, flows) = build(game, red);
    if let Some(plan) = start {
        plan.check(game)?;
        let out = run_milp(&fix_paths(m.clone(), &flows, plan), &BrOptions::exact(), "Blue warm start")?;
        m.set_start(out.values.expect("solution present"));
    }
    let out = run_milp(&m, opts, "Blue best response")?;
    let values = out.values.as_deref().expect("solution present");
    Ok(BestResponse {
        plan: extract_plan(game, &flows, values),
        value: out.objective.expect("solution present"),
        bound: out.bound.expect("solution present"),
        optimal: out.status == SolveStatus::Optimal,
    })
}

fn fix_paths(mut m: Model, flows: &[Vec<Var>], plan: &LogisticsPlan) -> Model {
    for (c, path) in plan.paths.iter().enumerate() {
        for (e, &var) in flows[c].iter().enumerate() {
            m.fix(var, if path.contains(&e) { 1.0 } else { 0.0 });
        }
    }
    m
}

/// Objective of the Blue best-response model with the path variables fixed
/// to `plan`.
pub fn blue_fixed_plan_value(
    game: &Game,
    red: &MixedStrategy<InterdictionPlan>,
    plan: &LogisticsPlan,
) -> Result<f64> {
    plan.check(game)?;
    let (m, flows) = build(game, red);
    let out = run_milp(&fix_paths(m, &flows, plan), &BrOptions::exact(), "fixed-plan Blue model")?;
    Ok(out.objective.expect("solution present"))
}
