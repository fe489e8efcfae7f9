//! Game instance data model, validation, file I/O and instance generators.

mod grid;
mod io;
mod sat;
mod set_cover;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use grid::{generate_grid_world, GridConfig};
pub use io::{load_scenario, save_scenario, ParseError};
pub use sat::{generate_sat_gadget, Cnf};
pub use set_cover::{generate_set_cover_gadget, SetCoverGadget, SetCoverInstance};
pub use validate::{validate_scenario, Severity, Violation};

/// A complete game instance as stored on disk.
///
/// Waiting is modelled by explicit self-loop edges. An edge is interdictable
/// iff it carries an `interdiction_cost`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    pub packages: Vec<Package>,
    pub connectors: Vec<Connector>,
    pub warehouses: Vec<Warehouse>,
    pub budget: f64,
    pub horizon: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interdiction_cost: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Package {
    pub id: String,
    pub unit_weight: f64,
    pub unit_volume: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Connector {
    pub id: String,
    pub initial_location: String,
    pub weight_cap: f64,
    pub volume_cap: f64,
    pub allowed_edges: Vec<AllowedEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllowedEdge {
    pub edge: String,
    pub traversal_time: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Warehouse {
    pub node: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub supply: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub demand: BTreeMap<String, f64>,
    #[serde(default)]
    pub unit_payoff: f64,
    #[serde(default)]
    pub max_units: f64,
}

impl Scenario {
    /// Same instance with a different interdiction budget.
    pub fn with_budget(&self, budget: f64) -> Scenario {
        Scenario {
            budget,
            ..self.clone()
        }
    }

    pub fn with_horizon(&self, horizon: u32) -> Scenario {
        Scenario {
            horizon,
            ..self.clone()
        }
    }

    pub fn interdictable_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.interdiction_cost.is_some())
    }

    pub fn warehouse_at(&self, node: &str) -> Option<&Warehouse> {
        self.warehouses.iter().find(|w| w.node == node)
    }

    pub fn total_supply(&self) -> f64 {
        self.warehouses
            .iter()
            .flat_map(|w| w.supply.values())
            .sum()
    }
}

impl Edge {
    pub fn new(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            tail: tail.into(),
            head: head.into(),
            interdiction_cost: None,
        }
    }

    pub fn with_cost(mut self, cost: f64) -> Self {
        self.interdiction_cost = Some(cost);
        self
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

impl AllowedEdge {
    pub fn new(edge: impl Into<String>, traversal_time: u32) -> Self {
        Self {
            edge: edge.into(),
            traversal_time,
        }
    }
}
