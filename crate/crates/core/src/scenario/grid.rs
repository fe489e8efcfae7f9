use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AllowedEdge, Connector, Edge, Package, Scenario, Warehouse};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub horizon: u32,
    pub budget: f64,
    pub uniform_costs: bool,
    pub edge_drop_prob: f64,
    pub seed: u64,
}

impl GridConfig {
    pub fn new(n: usize, horizon: u32, budget: f64) -> Self {
        Self {
            n,
            horizon,
            budget,
            uniform_costs: true,
            edge_drop_prob: 0.0,
            seed: 0,
        }
    }
}

fn cell(r: usize, c: usize) -> String {
    format!("r{r}c{c}")
}

fn map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// N×N grid world with two trucks, two package types and five warehouses.
///
/// Random draws come from `ChaCha8Rng::seed_from_u64(seed)` in this order:
/// for each undirected adjacency, scanning cells row-major and taking the
/// right neighbour before the down neighbour, one uniform draw in [0,1)
/// decides removal (both directions together); a kept adjacency under random
/// costs then draws the forward and the backward cost from 1..=5. After all
/// adjacencies, the payoffs of the demand corners (0,N-1) and (N-1,0) are
/// drawn from [1,2] in that order.
pub fn generate_grid_world(cfg: &GridConfig) -> Result<Scenario> {
    let n = cfg.n;
    if n < 3 {
        return Err(Error::InvalidArgument(format!("grid side must be at least 3, got {n}")));
    }
    if !(0.0..=1.0).contains(&cfg.edge_drop_prob) {
        return Err(Error::InvalidArgument(format!(
            "edge drop probability {} outside [0,1]",
            cfg.edge_drop_prob
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut nodes = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            nodes.push(cell(r, c));
        }
    }

    let mut edges = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let here = cell(r, c);
            let neighbours = [(r, c + 1), (r + 1, c)];
            for (r2, c2) in neighbours {
                if r2 >= n || c2 >= n {
                    continue;
                }
                let there = cell(r2, c2);
                let dropped = rng.gen::<f64>() < cfg.edge_drop_prob;
                if dropped {
                    continue;
                }
                let (fwd, bwd) = if cfg.uniform_costs {
                    (1.0, 1.0)
                } else {
                    (rng.gen_range(1..=5) as f64, rng.gen_range(1..=5) as f64)
                };
                edges.push(Edge::new(format!("{here}->{there}"), &here, &there).with_cost(fwd));
                edges.push(Edge::new(format!("{there}->{here}"), &there, &here).with_cost(bwd));
            }
        }
    }
    for v in &nodes {
        edges.push(Edge::new(format!("wait@{v}"), v, v));
    }

    let payoff_a: f64 = rng.gen_range(1.0..=2.0);
    let payoff_b: f64 = rng.gen_range(1.0..=2.0);

    let packages = vec![
        Package {
            id: "A".into(),
            unit_weight: 1.0,
            unit_volume: 1.0,
        },
        Package {
            id: "B".into(),
            unit_weight: 1.0,
            unit_volume: 1.0,
        },
    ];

    let last = n - 1;
    let demand = |node: String, payoff: f64| Warehouse {
        node,
        demand: map(&[("A", 3.0), ("B", 2.0)]),
        unit_payoff: payoff,
        max_units: 1.0,
        ..Warehouse::default()
    };
    let supply = |node: String, a: f64, b: f64| Warehouse {
        node,
        supply: map(&[("A", a), ("B", b)]),
        ..Warehouse::default()
    };
    let warehouses = vec![
        supply(cell(0, 0), 4.0, 1.0),
        supply(cell(last, last), 1.0, 3.0),
        supply(cell(n / 2, n / 2), 1.0, 1.0),
        demand(cell(0, last), payoff_a),
        demand(cell(last, 0), payoff_b),
    ];

    let capacity: f64 = warehouses.iter().flat_map(|w| w.supply.values()).sum();
    let allowed: Vec<AllowedEdge> = edges.iter().map(|e| AllowedEdge::new(&e.id, 1)).collect();
    let truck = |id: &str, at: String| Connector {
        id: id.into(),
        initial_location: at,
        weight_cap: capacity,
        volume_cap: capacity,
        allowed_edges: allowed.clone(),
    };
    let connectors = vec![truck("truck1", cell(0, 0)), truck("truck2", cell(last, last))];

    Ok(Scenario {
        nodes,
        edges,
        packages,
        connectors,
        warehouses,
        budget: cfg.budget,
        horizon: cfg.horizon,
    })
}
