use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Game;

/// Blue pure strategy: one layered path per connector, stored as layered
/// edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogisticsPlan {
    pub paths: Vec<Vec<usize>>,
}

/// Red pure strategy: a set of physical edges, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterdictionPlan {
    edges: Vec<usize>,
}

/// A plan cut at the first interdicted edge of each connector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPlan {
    pub paths: Vec<Vec<usize>>,
    /// Connector crossed an interdicted edge; its final edge delivers nothing.
    pub destroyed: Vec<bool>,
}

/// Human-readable form of a connector path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDescription {
    pub connector: String,
    pub edges: Vec<String>,
}

impl LogisticsPlan {
    pub fn new(paths: Vec<Vec<usize>>) -> Self {
        Self { paths }
    }

    /// Checks the per-connector path invariants against `game`.
    pub fn check(&self, game: &Game) -> Result<()> {
        if self.paths.len() != game.num_connectors() {
            return Err(Error::InfeasiblePlan(format!(
                "{} paths for {} connectors",
                self.paths.len(),
                game.num_connectors()
            )));
        }
        for (c, path) in self.paths.iter().enumerate() {
            let g = game.layered(c);
            let mut at = g.root();
            for &e in path {
                if e >= g.num_edges() || g.edge(e).tail != at {
                    return Err(Error::InfeasiblePlan(format!(
                        "path of connector {:?} does not chain",
                        game.connector_id(c)
                    )));
                }
                at = g.edge(e).head;
            }
            if g.node(at).time != game.horizon() {
                return Err(Error::InfeasiblePlan(format!(
                    "path of connector {:?} stops at t={} before the horizon",
                    game.connector_id(c),
                    g.node(at).time
                )));
            }
        }
        Ok(())
    }

    /// Builds a plan from per-connector physical edge id sequences, each
    /// starting at the connector's origin at t=0.
    pub fn from_edge_ids(game: &Game, paths: &[PathDescription]) -> Result<Self> {
        let mut out = vec![None; game.num_connectors()];
        for p in paths {
            let c = (0..game.num_connectors())
                .find(|&c| game.connector_id(c) == p.connector)
                .ok_or_else(|| Error::InfeasiblePlan(format!("unknown connector {:?}", p.connector)))?;
            let g = game.layered(c);
            let mut at = g.root();
            let mut seq = Vec::with_capacity(p.edges.len());
            for id in &p.edges {
                let pe = game
                    .edge_index(id)
                    .ok_or_else(|| Error::InfeasiblePlan(format!("unknown edge {id:?}")))?;
                let e = g
                    .out_edges(at)
                    .iter()
                    .copied()
                    .find(|&e| g.edge(e).edge == pe)
                    .ok_or_else(|| {
                        Error::InfeasiblePlan(format!(
                            "connector {:?} cannot take {id:?} from {}@{}",
                            p.connector,
                            game.node_id(g.node(at).node),
                            g.node(at).time
                        ))
                    })?;
                seq.push(e);
                at = g.edge(e).head;
            }
            if out[c].replace(seq).is_some() {
                return Err(Error::InfeasiblePlan(format!("connector {:?} listed twice", p.connector)));
            }
        }
        let paths = out
            .into_iter()
            .enumerate()
            .map(|(c, p)| {
                p.ok_or_else(|| {
                    Error::InfeasiblePlan(format!("no path for connector {:?}", game.connector_id(c)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let plan = Self { paths };
        plan.check(game)?;
        Ok(plan)
    }

    pub fn describe(&self, game: &Game) -> Vec<PathDescription> {
        self.paths
            .iter()
            .enumerate()
            .map(|(c, path)| PathDescription {
                connector: game.connector_id(c).to_string(),
                edges: path
                    .iter()
                    .map(|&e| game.edge_id(game.layered(c).edge(e).edge).to_string())
                    .collect(),
            })
            .collect()
    }

    /// Number of layered edges of connector paths that traverse physical edge `e`.
    pub fn uses(&self, game: &Game, e: usize) -> usize {
        self.paths
            .iter()
            .enumerate()
            .map(|(c, p)| p.iter().filter(|&&le| game.layered(c).edge(le).edge == e).count())
            .sum()
    }
}

impl InterdictionPlan {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn cost(&self, game: &Game) -> f64 {
        self.edges
            .iter()
            .map(|&e| game.edge(e).cost.unwrap_or(f64::INFINITY))
            .sum()
    }

    /// All edges interdictable and the total within budget.
    pub fn check(&self, game: &Game) -> Result<()> {
        if let Some(&e) = self.edges.iter().find(|&&e| e >= game.edges().len()) {
            return Err(Error::InfeasiblePlan(format!("edge index {e} out of range")));
        }
        if let Some(&e) = self.edges.iter().find(|&&e| game.edge(e).cost.is_none()) {
            return Err(Error::InfeasiblePlan(format!(
                "edge {:?} is not interdictable",
                game.edge_id(e)
            )));
        }
        let cost = self.cost(game);
        if cost > game.budget() + 1e-9 {
            return Err(Error::InfeasiblePlan(format!(
                "interdiction costs {cost} over budget {}",
                game.budget()
            )));
        }
        Ok(())
    }

    pub fn from_edge_ids<S: AsRef<str>>(game: &Game, ids: &[S]) -> Result<Self> {
        let edges = ids
            .iter()
            .map(|id| {
                game.edge_index(id.as_ref())
                    .ok_or_else(|| Error::InfeasiblePlan(format!("unknown edge {:?}", id.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        let plan = Self::new(edges);
        plan.check(game)?;
        Ok(plan)
    }

    pub fn describe(&self, game: &Game) -> Vec<String> {
        self.edges.iter().map(|&e| game.edge_id(e).to_string()).collect()
    }
}

/// Cuts every connector path at its first edge whose physical edge is in
/// `interdiction`.
pub fn truncate_plan(game: &Game, plan: &LogisticsPlan, interdiction: &InterdictionPlan) -> TruncatedPlan {
    truncate_paths(game, &plan.paths, interdiction)
}

/// [`truncate_plan`] over raw edge sequences, which may themselves be prefixes.
pub fn truncate_paths(game: &Game, paths: &[Vec<usize>], interdiction: &InterdictionPlan) -> TruncatedPlan {
    let mut out = Vec::with_capacity(paths.len());
    let mut destroyed = Vec::with_capacity(paths.len());
    for (c, path) in paths.iter().enumerate() {
        let g = game.layered(c);
        match path.iter().position(|&e| interdiction.contains(g.edge(e).edge)) {
            Some(k) => {
                out.push(path[..=k].to_vec());
                destroyed.push(true);
            }
            None => {
                out.push(path.clone());
                destroyed.push(false);
            }
        }
    }
    TruncatedPlan {
        paths: out,
        destroyed,
    }
}
