use crate::error::{Error, Result};
use crate::game::Game;

use super::{InterdictionPlan, LogisticsPlan};

/// Every logistics plan: the cartesian product of all start-to-layer-T
/// paths of each connector.
pub fn enumerate_logistics_plans(game: &Game, cap: usize) -> Result<Vec<LogisticsPlan>> {
    let counts: Vec<u128> = game.layered_graphs().iter().map(|g| g.path_count()).collect();
    let total = counts.iter().fold(1u128, |a, &b| a.saturating_mul(b));
    if total > cap as u128 {
        let detail = (0..game.num_connectors())
            .map(|c| format!("{}: {}", game.connector_id(c), counts[c]))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::CapExceeded {
            what: "logistics plan",
            cap,
            detail: format!("{total} plans; paths per connector {detail}"),
        });
    }
    let per_connector: Vec<Vec<Vec<usize>>> = game
        .layered_graphs()
        .iter()
        .map(|g| g.paths(cap).expect("path count checked above"))
        .collect();

    let mut plans = vec![Vec::new()];
    for paths in &per_connector {
        let mut next = Vec::with_capacity(plans.len() * paths.len());
        for prefix in &plans {
            for p in paths {
                let mut v: Vec<Vec<usize>> = prefix.clone();
                v.push(p.clone());
                next.push(v);
            }
        }
        plans = next;
    }
    Ok(plans.into_iter().map(LogisticsPlan::new).collect())
}

/// Budget-feasible interdiction sets: the empty set plus every set that is
/// maximal by inclusion, or every feasible set when `include_all`.
pub fn enumerate_interdiction_plans(
    game: &Game,
    cap: usize,
    include_all: bool,
) -> Result<Vec<InterdictionPlan>> {
    let candidates: Vec<(usize, f64)> = game
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.cost.map(|c| (i, c)))
        .collect();
    let budget = game.budget() + 1e-9;
    let mut out = vec![InterdictionPlan::empty()];
    let mut chosen = Vec::new();
    let mut in_set = vec![false; candidates.len()];
    let mut overflow = false;

    fn visit(
        from: usize,
        spent: f64,
        budget: f64,
        candidates: &[(usize, f64)],
        chosen: &mut Vec<usize>,
        in_set: &mut [bool],
        include_all: bool,
        cap: usize,
        out: &mut Vec<InterdictionPlan>,
        overflow: &mut bool,
    ) {
        for k in from..candidates.len() {
            if *overflow {
                return;
            }
            let (e, c) = candidates[k];
            if spent + c > budget {
                continue;
            }
            chosen.push(e);
            in_set[k] = true;
            let spent2 = spent + c;
            let maximal = candidates
                .iter()
                .zip(in_set.iter())
                .all(|(&(_, c2), &taken)| taken || spent2 + c2 > budget);
            if include_all || maximal {
                if out.len() >= cap {
                    *overflow = true;
                } else {
                    out.push(InterdictionPlan::new(chosen.clone()));
                }
            }
            visit(k + 1, spent2, budget, candidates, chosen, in_set, include_all, cap, out, overflow);
            chosen.pop();
            in_set[k] = false;
        }
    }

    visit(
        0,
        0.0,
        budget,
        &candidates,
        &mut chosen,
        &mut in_set,
        include_all,
        cap,
        &mut out,
        &mut overflow,
    );
    if overflow {
        return Err(Error::CapExceeded {
            what: "interdiction plan",
            cap,
            detail: format!("{} interdictable edges, budget {}", candidates.len(), game.budget()),
        });
    }
    Ok(out)
}
