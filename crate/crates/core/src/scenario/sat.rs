use std::collections::BTreeMap;

use super::{AllowedEdge, Connector, Edge, Package, Scenario, Warehouse};
use crate::error::{Error, Result};

/// A CNF formula in DIMACS convention: literal `+i` is variable `i`, `-i`
/// its negation, variables numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        Self { num_vars, clauses }
    }

    /// Number of clauses satisfied by `assignment` (index i is variable i+1).
    pub fn satisfied_by(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| {
                c.iter()
                    .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
            })
            .count()
    }

    /// Maximum number of simultaneously satisfiable clauses, by enumeration.
    pub fn max_satisfiable(&self) -> usize {
        let n = self.num_vars;
        (0u64..1 << n)
            .map(|bits| {
                let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                self.satisfied_by(&a)
            })
            .max()
            .unwrap_or(0)
    }
}

fn link(edges: &mut Vec<Edge>, from: &str, to: &str, cost: f64) -> String {
    let id = if from == to {
        format!("wait@{from}")
    } else {
        format!("{from}->{to}")
    };
    edges.push(Edge::new(&id, from, to).with_cost(cost));
    id
}

fn assign_node(var: usize, positive: bool) -> String {
    format!("x{var}{}", if positive { 'T' } else { 'F' })
}

/// Builds the clause-collection scenario whose game value is the fraction of
/// clauses satisfiable at once.
///
/// An assignment connector walks x1 → x1T|x1F → x2 → … → t, one choice per
/// variable, while each clause connector drops its single package at the
/// assignment node of one of its literals. Red can only afford the loop at t.
pub fn generate_sat_gadget(cnf: &Cnf) -> Result<Scenario> {
    let n = cnf.num_vars;
    let k = cnf.clauses.len();
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("empty formula".into()));
    }
    for (j, c) in cnf.clauses.iter().enumerate() {
        if c.is_empty() || c.len() > 3 {
            return Err(Error::InvalidArgument(format!(
                "clause {} has {} literals; expected 1 to 3",
                j + 1,
                c.len()
            )));
        }
        if let Some(l) = c.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > n) {
            return Err(Error::InvalidArgument(format!(
                "clause {} has literal {l} outside 1..={n}",
                j + 1
            )));
        }
    }

    let mut nodes = Vec::new();
    for i in 1..=n {
        nodes.push(format!("x{i}"));
        nodes.push(assign_node(i, true));
        nodes.push(assign_node(i, false));
    }
    nodes.push("t".into());
    for j in 1..=k {
        nodes.push(format!("C{j}"));
    }

    let mut edges = Vec::new();
    let mut assignment_edges = Vec::new();
    for i in 1..=n {
        let var = format!("x{i}");
        let next = if i < n { format!("x{}", i + 1) } else { "t".into() };
        for pos in [true, false] {
            let a = assign_node(i, pos);
            assignment_edges.push(link(&mut edges, &var, &a, 2.0));
            assignment_edges.push(link(&mut edges, &a, &next, 2.0));
        }
    }
    assignment_edges.push(link(&mut edges, "t", "t", 1.0));

    let mut waits = BTreeMap::new();
    for i in 1..=n {
        for pos in [true, false] {
            let a = assign_node(i, pos);
            let id = link(&mut edges, &a, &a, 2.0);
            waits.insert(a, id);
        }
    }

    let unit = |q: f64| BTreeMap::from([("p".to_string(), q)]);
    let mut connectors = vec![Connector {
        id: "assign".into(),
        initial_location: "x1".into(),
        weight_cap: k as f64,
        volume_cap: k as f64,
        allowed_edges: assignment_edges
            .iter()
            .map(|e| AllowedEdge::new(e, 1))
            .collect(),
    }];
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let c = format!("C{}", j + 1);
        let mut targets: Vec<String> = clause
            .iter()
            .map(|&l| assign_node(l.unsigned_abs() as usize, l > 0))
            .collect();
        targets.sort();
        targets.dedup();
        let mut allowed = Vec::new();
        for a in &targets {
            allowed.push(AllowedEdge::new(link(&mut edges, &c, a, 2.0), 1));
            allowed.push(AllowedEdge::new(&waits[a], 1));
        }
        connectors.push(Connector {
            id: format!("clause{}", j + 1),
            initial_location: c,
            weight_cap: 1.0,
            volume_cap: 1.0,
            allowed_edges: allowed,
        });
    }

    let mut warehouses = vec![
        Warehouse {
            node: "x1".into(),
            ..Warehouse::default()
        },
        Warehouse {
            node: "t".into(),
            demand: unit(k as f64),
            unit_payoff: 1.0,
            max_units: 1.0,
            ..Warehouse::default()
        },
    ];
    for j in 1..=k {
        warehouses.push(Warehouse {
            node: format!("C{j}"),
            supply: unit(1.0),
            ..Warehouse::default()
        });
    }
    for i in 1..=n {
        for pos in [true, false] {
            warehouses.push(Warehouse {
                node: assign_node(i, pos),
                ..Warehouse::default()
            });
        }
    }

    Ok(Scenario {
        nodes,
        edges,
        packages: vec![Package {
            id: "p".into(),
            unit_weight: 1.0,
            unit_volume: 1.0,
        }],
        connectors,
        warehouses,
        budget: 1.0,
        horizon: 2 * n as u32,
    })
}
