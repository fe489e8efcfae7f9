use std::collections::BTreeMap;

use super::{AllowedEdge, Connector, Edge, Package, Scenario, Warehouse};
use crate::error::{Error, Result};

/// Universe `0..universe`, a family of subsets and a Red budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
    pub budget: usize,
}

impl SetCoverInstance {
    /// Smallest number of sets covering the universe, by enumeration.
    pub fn min_cover_size(&self) -> Option<usize> {
        let m = self.sets.len();
        (0u64..1 << m)
            .filter(|mask| {
                (0..self.universe).all(|u| {
                    (0..m).any(|j| mask >> j & 1 == 1 && self.sets[j].contains(&u))
                })
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
    }
}

/// Scenario plus, for each universe element, the physical edge sequence of
/// its path through the sets containing it.
#[derive(Clone, Debug)]
pub struct SetCoverGadget {
    pub scenario: Scenario,
    pub element_paths: Vec<Vec<String>>,
}

fn set_in(j: usize) -> String {
    format!("S{}", j + 1)
}

fn set_out(j: usize) -> String {
    format!("S{}'", j + 1)
}

fn edge_id(a: &str, b: &str) -> String {
    if a == b {
        format!("wait@{a}")
    } else {
        format!("{a}->{b}")
    }
}

/// Builds the layered s → S → S' → t gadget in which Red can cut every
/// element path iff `budget` sets cover the universe.
///
/// The horizon is `2·max(n, d) + 1` where `d` is the largest number of sets
/// sharing one element, so every element path fits.
pub fn generate_set_cover_gadget(inst: &SetCoverInstance) -> Result<SetCoverGadget> {
    let n = inst.universe;
    let m = inst.sets.len();
    if n == 0 || m == 0 || inst.sets.iter().any(Vec::is_empty) {
        return Err(Error::InvalidArgument(
            "universe and every set must be nonempty".into(),
        ));
    }
    if let Some(u) = inst.sets.iter().flatten().find(|u| **u >= n) {
        return Err(Error::InvalidArgument(format!("element {u} outside universe 0..{n}")));
    }
    let members: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..m).filter(|j| inst.sets[*j].contains(&u)).collect())
        .collect();
    if let Some(u) = members.iter().position(Vec::is_empty) {
        return Err(Error::InvalidArgument(format!("element {u} is not covered by any set")));
    }
    let depth = members.iter().map(Vec::len).max().unwrap_or(0);
    let horizon = 2 * n.max(depth) + 1;

    let mut nodes = vec!["s".to_string()];
    nodes.extend((0..m).map(set_in));
    nodes.extend((0..m).map(set_out));
    nodes.push("t".into());

    let mut edges = Vec::new();
    for j in 0..m {
        edges.push(Edge::new(edge_id("s", &set_in(j)), "s", set_in(j)));
    }
    for j in 0..m {
        edges.push(Edge::new(edge_id(&set_in(j), &set_out(j)), set_in(j), set_out(j)).with_cost(1.0));
    }
    for j in 0..m {
        for i in 0..m {
            edges.push(Edge::new(edge_id(&set_out(j), &set_in(i)), set_out(j), set_in(i)));
        }
        edges.push(Edge::new(edge_id(&set_out(j), "t"), set_out(j), "t"));
    }
    edges.push(Edge::new(edge_id("t", "t"), "t", "t"));

    let element_paths = members
        .iter()
        .map(|sets| {
            let mut path = Vec::new();
            let mut at = "s".to_string();
            for &j in sets {
                path.push(edge_id(&at, &set_in(j)));
                path.push(edge_id(&set_in(j), &set_out(j)));
                at = set_out(j);
            }
            path.push(edge_id(&at, "t"));
            while path.len() < horizon {
                path.push(edge_id("t", "t"));
            }
            path
        })
        .collect();

    let unit = || BTreeMap::from([("p".to_string(), 1.0)]);
    let scenario = Scenario {
        nodes,
        connectors: vec![Connector {
            id: "c".into(),
            initial_location: "s".into(),
            weight_cap: 1.0,
            volume_cap: 1.0,
            allowed_edges: edges.iter().map(|e| AllowedEdge::new(&e.id, 1)).collect(),
        }],
        edges,
        packages: vec![Package {
            id: "p".into(),
            unit_weight: 1.0,
            unit_volume: 1.0,
        }],
        warehouses: vec![
            Warehouse {
                node: "s".into(),
                supply: unit(),
                ..Warehouse::default()
            },
            Warehouse {
                node: "t".into(),
                demand: unit(),
                unit_payoff: 1.0,
                max_units: 1.0,
                ..Warehouse::default()
            },
        ],
        budget: inst.budget as f64,
        horizon: horizon as u32,
    };
    Ok(SetCoverGadget {
        scenario,
        element_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::validate_scenario;

    #[test]
    fn two_disjoint_sets() {
        let inst = SetCoverInstance {
            universe: 2,
            sets: vec![vec![0], vec![1]],
            budget: 2,
        };
        let g = generate_set_cover_gadget(&inst).unwrap();
        assert_eq!(g.scenario.horizon, 5);
        assert_eq!(g.element_paths.len(), 2);
        assert_eq!(g.element_paths[0][..3], ["s->S1", "S1->S1'", "S1'->t"]);
        assert!(g.element_paths.iter().all(|p| p.len() == 5));
        assert_eq!(g.scenario.interdictable_edges().count(), 2);
        assert!(validate_scenario(&g.scenario).is_empty());
        assert_eq!(inst.min_cover_size(), Some(2));
    }

    #[test]
    fn uncovered_element_is_rejected() {
        let inst = SetCoverInstance {
            universe: 3,
            sets: vec![vec![0], vec![1]],
            budget: 1,
        };
        assert!(generate_set_cover_gadget(&inst).is_err());
    }

    #[test]
    fn deep_membership_extends_horizon() {
        let inst = SetCoverInstance {
            universe: 1,
            sets: vec![vec![0], vec![0], vec![0]],
            budget: 1,
        };
        let g = generate_set_cover_gadget(&inst).unwrap();
        assert_eq!(g.scenario.horizon, 7);
        assert_eq!(g.element_paths[0].len(), 7);
    }
}
