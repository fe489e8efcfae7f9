use std::collections::HashMap;
use std::fmt::Write;

use fixedbitset::FixedBitSet;

use crate::game::{Game, PhysEdge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LayeredNode {
    pub node: usize,
    pub time: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LayeredEdge {
    pub tail: usize,
    pub head: usize,
    /// Physical edge this copy traverses.
    pub edge: usize,
}

/// Time-expanded graph of one connector.
///
/// Only nodes reachable from the start at t=0 exist. Node indices follow a
/// topological order (by time, then physical node), so the start is node 0.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    connector: usize,
    horizon: u32,
    nodes: Vec<LayeredNode>,
    lookup: HashMap<(usize, u32), usize>,
    edges: Vec<LayeredEdge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    /// `reach[v]` holds every node reachable from `v`, `v` included.
    reach: Vec<FixedBitSet>,
    completes: Vec<bool>,
}

impl LayeredGraph {
    pub(crate) fn build(
        connector: usize,
        num_phys_nodes: usize,
        phys: &[PhysEdge],
        allowed: &[(usize, u32)],
        origin: usize,
        horizon: u32,
    ) -> Self {
        let mut phys_out: Vec<Vec<(usize, u32)>> = vec![Vec::new(); num_phys_nodes];
        for &(e, m) in allowed {
            phys_out[phys[e].tail].push((e, m));
        }

        let layers = horizon as usize + 1;
        let mut seen = vec![vec![false; num_phys_nodes]; layers];
        seen[0][origin] = true;
        for t in 0..layers {
            for v in 0..num_phys_nodes {
                if !seen[t][v] {
                    continue;
                }
                for &(e, m) in &phys_out[v] {
                    let t2 = t + m as usize;
                    if t2 < layers {
                        seen[t2][phys[e].head] = true;
                    }
                }
            }
        }

        let mut nodes = Vec::new();
        let mut lookup = HashMap::new();
        for (t, row) in seen.iter().enumerate() {
            for (v, &hit) in row.iter().enumerate() {
                if hit {
                    lookup.insert((v, t as u32), nodes.len());
                    nodes.push(LayeredNode {
                        node: v,
                        time: t as u32,
                    });
                }
            }
        }

        let mut edges = Vec::new();
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut in_edges = vec![Vec::new(); nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            for &(e, m) in &phys_out[n.node] {
                let t2 = n.time + m;
                if t2 > horizon {
                    continue;
                }
                let j = lookup[&(phys[e].head, t2)];
                out_edges[i].push(edges.len());
                in_edges[j].push(edges.len());
                edges.push(LayeredEdge {
                    tail: i,
                    head: j,
                    edge: e,
                });
            }
        }

        let mut reach = vec![FixedBitSet::with_capacity(nodes.len()); nodes.len()];
        let mut completes = vec![false; nodes.len()];
        for i in (0..nodes.len()).rev() {
            let mut bits = FixedBitSet::with_capacity(nodes.len());
            bits.insert(i);
            completes[i] = nodes[i].time == horizon;
            for &e in &out_edges[i] {
                let h = edges[e].head;
                bits.union_with(&reach[h]);
                completes[i] |= completes[h];
            }
            reach[i] = bits;
        }

        Self {
            connector,
            horizon,
            nodes,
            lookup,
            edges,
            out_edges,
            in_edges,
            reach,
            completes,
        }
    }

    pub fn connector(&self) -> usize {
        self.connector
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, v: usize) -> LayeredNode {
        self.nodes[v]
    }

    pub fn nodes(&self) -> &[LayeredNode] {
        &self.nodes
    }

    pub fn edge(&self, e: usize) -> LayeredEdge {
        self.edges[e]
    }

    pub fn edges(&self) -> &[LayeredEdge] {
        &self.edges
    }

    pub fn find_node(&self, node: usize, time: u32) -> Option<usize> {
        self.lookup.get(&(node, time)).copied()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Node indices in topological order.
    pub fn topological_order(&self) -> impl Iterator<Item = usize> {
        0..self.nodes.len()
    }

    /// True iff `to` is reachable from `from` (reflexive).
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.reach[from].contains(to)
    }

    /// True iff layer T can be reached from `v`.
    pub fn completes(&self, v: usize) -> bool {
        self.completes[v]
    }

    /// The relation "`later` lies downstream of `earlier`": the head of
    /// `earlier` reaches the tail of `later`. Irreflexive.
    pub fn reachable_between(&self, earlier: usize, later: usize) -> bool {
        earlier != later && self.reaches(self.edges[earlier].head, self.edges[later].tail)
    }

    /// Number of start-to-layer-T paths, by dynamic programming.
    pub fn path_count(&self) -> u128 {
        let mut count = vec![0u128; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            count[i] = if self.nodes[i].time == self.horizon {
                1
            } else {
                self.out_edges[i]
                    .iter()
                    .map(|&e| count[self.edges[e].head])
                    .fold(0u128, u128::saturating_add)
            };
        }
        count.first().copied().unwrap_or(0)
    }

    /// All start-to-layer-T paths as edge sequences, or `None` past `cap`.
    pub fn paths(&self, cap: usize) -> Option<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut stack: Vec<(usize, usize)> = vec![(self.root(), 0)];
        let mut path: Vec<usize> = Vec::new();
        if !self.completes(self.root()) {
            return Some(out);
        }
        while let Some((v, next)) = stack.pop() {
            if self.nodes[v].time == self.horizon {
                if out.len() >= cap {
                    return None;
                }
                out.push(path.clone());
                path.pop();
                continue;
            }
            match self.out_edges[v][next..]
                .iter()
                .position(|&e| self.completes[self.edges[e].head])
            {
                Some(k) => {
                    let e = self.out_edges[v][next + k];
                    stack.push((v, next + k + 1));
                    path.push(e);
                    stack.push((self.edges[e].head, 0));
                }
                None => {
                    path.pop();
                }
            }
        }
        Some(out)
    }

    /// DOT rendering for inspection.
    pub fn to_dot(&self, game: &Game) -> String {
        let name = |v: usize| {
            let n = self.nodes[v];
            format!("{}@{}", game.node_id(n.node), n.time)
        };
        let mut s = format!("digraph \"{}\" {{\n  rankdir=LR;\n", game.connector_id(self.connector));
        for t in 0..=self.horizon {
            let members: Vec<String> = (0..self.nodes.len())
                .filter(|&v| self.nodes[v].time == t)
                .map(|v| format!("\"{}\"", name(v)))
                .collect();
            if !members.is_empty() {
                let _ = writeln!(s, "  {{ rank=same; {} }}", members.join("; "));
            }
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                name(e.tail),
                name(e.head),
                game.edge_id(e.edge)
            );
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::triangle;

    fn edge_names(game: &Game, g: &LayeredGraph) -> Vec<String> {
        let name = |v: usize| format!("{}{}", game.node_id(g.node(v).node), g.node(v).time);
        let mut out: Vec<String> = g
            .edges()
            .iter()
            .map(|e| format!("{}->{}", name(e.tail), name(e.head)))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn triangle_first_connector_unrolls_as_drawn() {
        let game = triangle();
        let g = game.layered(0);
        assert_eq!(
            edge_names(&game, g),
            ["A0->A2", "A0->B1", "A0->C1", "B1->A2", "B1->C2", "C1->A2", "C1->B2"]
        );
        assert_eq!(g.num_nodes(), 6);
        assert_eq!(g.node(g.root()), LayeredNode { node: 0, time: 0 });
    }

    #[test]
    fn unreachable_nodes_are_pruned() {
        let game = triangle();
        let g = game.layered(1);
        let a = game.node_index("A").unwrap();
        let b = game.node_index("B").unwrap();
        assert!(g.find_node(a, 0).is_none());
        assert!(g.find_node(b, 1).is_none());
        assert_eq!(g.node(g.root()), LayeredNode { node: b, time: 0 });
    }

    #[test]
    fn empty_horizon_is_a_single_node() {
        let game = triangle();
        let c = game.connector(0);
        let g = LayeredGraph::build(0, 3, game.edges(), &c.allowed, c.origin, 0);
        assert_eq!(g.num_nodes(), 1);
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.path_count(), 1);
        assert_eq!(g.paths(10).unwrap(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn edges_advance_time_and_indices_are_topological() {
        let game = triangle();
        for g in game.layered_graphs() {
            for e in g.edges() {
                assert!(g.node(e.head).time > g.node(e.tail).time);
                assert!(e.head > e.tail);
            }
        }
    }

    #[test]
    fn downstream_relation() {
        let game = triangle();
        let g = game.layered(0);
        let find = |from: &str, ft: u32, to: &str, tt: u32| {
            let t = g.find_node(game.node_index(from).unwrap(), ft).unwrap();
            let h = g.find_node(game.node_index(to).unwrap(), tt).unwrap();
            (0..g.num_edges()).find(|&e| g.edge(e).tail == t && g.edge(e).head == h).unwrap()
        };
        let a0b1 = find("A", 0, "B", 1);
        let b1c2 = find("B", 1, "C", 2);
        let a0c1 = find("A", 0, "C", 1);
        let c1b2 = find("C", 1, "B", 2);
        assert!(g.reachable_between(a0b1, b1c2));
        assert!(!g.reachable_between(a0b1, c1b2));
        assert!(!g.reachable_between(a0c1, b1c2));
        assert!(!g.reachable_between(b1c2, a0b1));
        assert!(!g.reachable_between(a0b1, a0b1));
    }

    #[test]
    fn path_listing_matches_count() {
        let game = triangle();
        let g = game.layered(0);
        assert_eq!(g.path_count(), 5);
        let paths = g.paths(100).unwrap();
        assert_eq!(paths.len(), 5);
        assert!(g.paths(4).is_none());
    }

    #[test]
    fn dot_names_every_edge() {
        let game = triangle();
        let dot = game.layered(0).to_dot(&game);
        assert!(dot.starts_with("digraph \"c1\""));
        assert!(dot.contains("\"A@0\" -> \"A@2\" [label=\"wait@A\"]"));
        assert_eq!(dot.matches("\" -> \"").count(), 7);
    }
}
