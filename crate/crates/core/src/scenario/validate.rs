use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::Scenario;
use crate::game::Game;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// The scenario cannot be played.
    Error,
    /// Legal, but some layered nodes are dead ends and paths through them are dropped.
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub severity: Severity,
    pub message: String,
}

impl Violation {
    fn error(message: String) -> Self {
        Self {
            severity: Severity::Error,
            message,
        }
    }

    fn warning(message: String) -> Self {
        Self {
            severity: Severity::Warning,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

fn nonneg(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Checks every structural invariant of `s`, then (if those hold) that each
/// connector can leave its start and that no reachable layered node before
/// the horizon is a dead end. An empty result means the scenario is valid.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut err = |m: String| out.push(Violation::error(m));

    let mut nodes = HashSet::new();
    for n in &s.nodes {
        if n.is_empty() {
            err("empty node id".into());
        } else if !nodes.insert(n.as_str()) {
            err(format!("duplicate node id {n:?}"));
        }
    }

    let mut edges = HashMap::new();
    for e in &s.edges {
        if edges.insert(e.id.as_str(), e).is_some() {
            err(format!("duplicate edge id {:?}", e.id));
        }
        for end in [&e.tail, &e.head] {
            if !nodes.contains(end.as_str()) {
                err(format!("edge {:?} references unknown node {end:?}", e.id));
            }
        }
        if let Some(c) = e.interdiction_cost {
            if !positive(c) {
                err(format!("edge {:?} has non-positive interdiction cost {c}", e.id));
            }
        }
    }

    let mut packages = HashSet::new();
    for p in &s.packages {
        if !packages.insert(p.id.as_str()) {
            err(format!("duplicate package id {:?}", p.id));
        }
        if !nonneg(p.unit_weight) || !nonneg(p.unit_volume) {
            err(format!("package {:?} has negative or non-finite size", p.id));
        } else if p.unit_weight == 0.0 && p.unit_volume == 0.0 {
            err(format!("package {:?} has zero weight and zero volume", p.id));
        }
    }

    let mut wh_nodes = HashSet::new();
    for w in &s.warehouses {
        if !nodes.contains(w.node.as_str()) {
            err(format!("warehouse at unknown node {:?}", w.node));
        }
        if !wh_nodes.insert(w.node.as_str()) {
            err(format!("more than one warehouse at node {:?}", w.node));
        }
        for (what, map) in [("supply", &w.supply), ("demand", &w.demand)] {
            for (p, q) in map {
                if !packages.contains(p.as_str()) {
                    err(format!("warehouse {:?} {what} names unknown package {p:?}", w.node));
                }
                if !nonneg(*q) {
                    err(format!("warehouse {:?} {what} of {p:?} is {q}", w.node));
                }
            }
        }
        if !nonneg(w.unit_payoff) {
            err(format!("warehouse {:?} unit_payoff is {}", w.node, w.unit_payoff));
        }
        if !nonneg(w.max_units) {
            err(format!("warehouse {:?} max_units is {}", w.node, w.max_units));
        }
    }

    let mut connectors = HashSet::new();
    for c in &s.connectors {
        if !connectors.insert(c.id.as_str()) {
            err(format!("duplicate connector id {:?}", c.id));
        }
        if !wh_nodes.contains(c.initial_location.as_str()) {
            err(format!(
                "connector {:?} starts at {:?}, which is not a warehouse",
                c.id, c.initial_location
            ));
        }
        if !positive(c.weight_cap) || !positive(c.volume_cap) {
            err(format!("connector {:?} capacities must be positive", c.id));
        }
        let mut seen = HashSet::new();
        for a in &c.allowed_edges {
            if !edges.contains_key(a.edge.as_str()) {
                err(format!("connector {:?} allows unknown edge {:?}", c.id, a.edge));
            }
            if !seen.insert(a.edge.as_str()) {
                err(format!("connector {:?} lists edge {:?} twice", c.id, a.edge));
            }
            if a.traversal_time < 1 {
                err(format!(
                    "connector {:?} edge {:?} has traversal time 0",
                    c.id, a.edge
                ));
            }
        }
    }

    if !nonneg(s.budget) {
        err(format!("budget is {}", s.budget));
    }
    if s.horizon < 1 {
        err("horizon must be at least 1".into());
    }

    if out.iter().any(Violation::is_error) {
        return out;
    }

    let game = Game::index(s.clone());
    for (ci, c) in s.connectors.iter().enumerate() {
        let g = game.layered(ci);
        if g.out_edges(g.root()).is_empty() {
            out.push(Violation::error(format!(
                "connector {:?} has no allowed edge leaving {:?} at t=0",
                c.id, c.initial_location
            )));
            continue;
        }
        let dead: Vec<String> = (0..g.num_nodes())
            .filter(|&v| g.node(v).time < s.horizon && g.out_edges(v).is_empty())
            .map(|v| format!("{}@{}", s.nodes[g.node(v).node], g.node(v).time))
            .collect();
        if !dead.is_empty() {
            out.push(Violation::warning(format!(
                "connector {:?} dead-ends before the horizon at {}",
                c.id,
                dead.join(", ")
            )));
        }
        if !g.completes(g.root()) {
            out.push(Violation::error(format!(
                "connector {:?} has no path reaching t={}",
                c.id, s.horizon
            )));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{load_scenario, AllowedEdge, Edge};

    fn triangle() -> Scenario {
        load_scenario(include_str!("../../tests/data/triangle.json")).unwrap()
    }

    #[test]
    fn triangle_is_valid() {
        assert!(validate_scenario(&triangle()).is_empty());
    }

    #[test]
    fn start_outside_warehouses_is_one_violation() {
        let mut s = triangle();
        s.warehouses.retain(|w| w.node != "B");
        let v = validate_scenario(&s);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].is_error());
        assert!(v[0].message.contains("c2"));
    }

    #[test]
    fn unreachable_demand_is_still_valid() {
        let mut s = triangle();
        s.edges.retain(|e| e.head != "C");
        for c in &mut s.connectors {
            c.allowed_edges.retain(|a| !a.edge.ends_with("->C"));
        }
        assert!(validate_scenario(&s).is_empty());
    }

    #[test]
    fn dead_end_is_a_warning() {
        let mut s = triangle();
        s.nodes.push("D".into());
        s.edges.push(Edge::new("A->D", "A", "D"));
        s.connectors[0].allowed_edges.push(AllowedEdge::new("A->D", 1));
        let v = validate_scenario(&s);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].severity, Severity::Warning);
        assert!(v[0].message.contains("D@1"));
    }

    #[test]
    fn stranded_start_is_an_error() {
        let mut s = triangle();
        s.connectors[1].allowed_edges.retain(|a| !a.edge.starts_with("B->"));
        let v = validate_scenario(&s);
        assert!(v.iter().any(|x| x.is_error() && x.message.contains("c2")), "{v:?}");
    }

    #[test]
    fn structural_breaches_are_reported() {
        let mut s = triangle();
        s.edges[0].interdiction_cost = Some(0.0);
        s.connectors[0].allowed_edges[0].traversal_time = 0;
        s.connectors[0].allowed_edges.push(AllowedEdge::new("nowhere", 1));
        s.warehouses[2].demand.insert("q".into(), 1.0);
        s.budget = -1.0;
        s.horizon = 0;
        let v = validate_scenario(&s);
        assert_eq!(v.len(), 6, "{v:?}");
        assert!(v.iter().all(Violation::is_error));
    }
}
