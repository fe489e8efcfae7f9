use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::layered::LayeredGraph;
use crate::scenario::{validate_scenario, Scenario};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysEdge {
    pub tail: usize,
    pub head: usize,
    /// `None` for edges Red cannot interdict.
    pub cost: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WarehouseData {
    pub node: usize,
    /// Indexed by package.
    pub supply: Vec<f64>,
    pub demand: Vec<f64>,
    pub payoff: f64,
    pub max_units: f64,
}

impl WarehouseData {
    pub fn has_demand(&self) -> bool {
        self.demand.iter().any(|d| *d > 0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectorData {
    pub origin: usize,
    pub weight_cap: f64,
    pub volume_cap: f64,
    /// (physical edge, traversal time).
    pub allowed: Vec<(usize, u32)>,
    /// Upper bound on the total load a single layered edge can carry.
    pub load_bound: f64,
}

/// A validated scenario with dense indices and unrolled layered graphs.
#[derive(Clone, Debug)]
pub struct Game {
    scenario: Scenario,
    node_ids: HashMap<String, usize>,
    edge_ids: HashMap<String, usize>,
    edges: Vec<PhysEdge>,
    weights: Vec<f64>,
    volumes: Vec<f64>,
    warehouses: Vec<WarehouseData>,
    warehouse_of: Vec<Option<usize>>,
    connectors: Vec<ConnectorData>,
    layered: Vec<LayeredGraph>,
}

impl Game {
    /// Validates and indexes `scenario`. Warnings are tolerated.
    pub fn new(scenario: Scenario) -> Result<Self> {
        let errors: Vec<_> = validate_scenario(&scenario)
            .into_iter()
            .filter(|v| v.is_error())
            .collect();
        if !errors.is_empty() {
            return Err(Error::InvalidScenario(errors));
        }
        Ok(Self::index(scenario))
    }

    /// Indexes a scenario that already passed the structural checks.
    pub(crate) fn index(scenario: Scenario) -> Self {
        let s = &scenario;
        let node_ids: HashMap<String, usize> =
            s.nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edge_ids: HashMap<String, usize> =
            s.edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        let edges: Vec<PhysEdge> = s
            .edges
            .iter()
            .map(|e| PhysEdge {
                tail: node_ids[&e.tail],
                head: node_ids[&e.head],
                cost: e.interdiction_cost,
            })
            .collect();
        let package_ids: HashMap<&str, usize> = s
            .packages
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.as_str(), i))
            .collect();
        let weights: Vec<f64> = s.packages.iter().map(|p| p.unit_weight).collect();
        let volumes: Vec<f64> = s.packages.iter().map(|p| p.unit_volume).collect();

        let np = s.packages.len();
        let mut warehouse_of = vec![None; s.nodes.len()];
        let warehouses: Vec<WarehouseData> = s
            .warehouses
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let node = node_ids[&w.node];
                warehouse_of[node] = Some(i);
                let dense = |m: &std::collections::BTreeMap<String, f64>| {
                    let mut v = vec![0.0; np];
                    for (p, q) in m {
                        v[package_ids[p.as_str()]] = *q;
                    }
                    v
                };
                WarehouseData {
                    node,
                    supply: dense(&w.supply),
                    demand: dense(&w.demand),
                    payoff: w.unit_payoff,
                    max_units: w.max_units,
                }
            })
            .collect();

        let total_supply: f64 = warehouses.iter().flat_map(|w| &w.supply).sum();
        let min_positive = |xs: &[f64]| -> Option<f64> {
            let m = xs.iter().copied().fold(f64::INFINITY, f64::min);
            (m > 0.0 && m.is_finite()).then_some(m)
        };
        let (min_w, min_v) = (min_positive(&weights), min_positive(&volumes));
        let connectors: Vec<ConnectorData> = s
            .connectors
            .iter()
            .map(|c| {
                let mut bound = total_supply;
                if let Some(w) = min_w {
                    bound = bound.min(c.weight_cap / w);
                }
                if let Some(v) = min_v {
                    bound = bound.min(c.volume_cap / v);
                }
                ConnectorData {
                    origin: node_ids[&c.initial_location],
                    weight_cap: c.weight_cap,
                    volume_cap: c.volume_cap,
                    allowed: c
                        .allowed_edges
                        .iter()
                        .map(|a| (edge_ids[&a.edge], a.traversal_time))
                        .collect(),
                    load_bound: bound,
                }
            })
            .collect();

        let layered = connectors
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                LayeredGraph::build(ci, s.nodes.len(), &edges, &c.allowed, c.origin, s.horizon)
            })
            .collect();

        Self {
            node_ids,
            edge_ids,
            edges,
            weights,
            volumes,
            warehouses,
            warehouse_of,
            connectors,
            layered,
            scenario,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn horizon(&self) -> u32 {
        self.scenario.horizon
    }

    pub fn budget(&self) -> f64 {
        self.scenario.budget
    }

    pub fn num_packages(&self) -> usize {
        self.weights.len()
    }

    pub fn num_connectors(&self) -> usize {
        self.connectors.len()
    }

    pub fn weight(&self, package: usize) -> f64 {
        self.weights[package]
    }

    pub fn volume(&self, package: usize) -> f64 {
        self.volumes[package]
    }

    pub fn edges(&self) -> &[PhysEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &PhysEdge {
        &self.edges[e]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.scenario.edges[e].id
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_ids.get(id).copied()
    }

    pub fn node_id(&self, v: usize) -> &str {
        &self.scenario.nodes[v]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_ids.get(id).copied()
    }

    pub fn connector_id(&self, c: usize) -> &str {
        &self.scenario.connectors[c].id
    }

    pub fn connector(&self, c: usize) -> &ConnectorData {
        &self.connectors[c]
    }

    pub fn warehouses(&self) -> &[WarehouseData] {
        &self.warehouses
    }

    /// Warehouse located at physical node `v`, if any.
    pub fn warehouse_at(&self, v: usize) -> Option<usize> {
        self.warehouse_of[v]
    }

    pub fn layered(&self, c: usize) -> &LayeredGraph {
        &self.layered[c]
    }

    pub fn layered_graphs(&self) -> &[LayeredGraph] {
        &self.layered
    }

    /// Largest achievable utility, `Σ_w P(w)·U(w)` over demand warehouses.
    pub fn max_utility(&self) -> f64 {
        self.warehouses
            .iter()
            .filter(|w| w.has_demand())
            .map(|w| w.payoff * w.max_units)
            .sum()
    }

    /// Largest value one unit of any package can add to the objective.
    pub fn unit_value_bound(&self) -> f64 {
        let max_payoff = self
            .warehouses
            .iter()
            .filter(|w| w.has_demand())
            .map(|w| w.payoff)
            .fold(0.0, f64::max);
        let min_demand = self
            .warehouses
            .iter()
            .flat_map(|w| w.demand.iter().copied())
            .filter(|d| *d > 0.0)
            .fold(1.0, f64::min);
        max_payoff / min_demand
    }
}
