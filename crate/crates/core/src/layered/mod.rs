//! Time-expanded layered graphs, plans, truncation and enumeration.

mod enumerate;
mod graph;
mod plan;

pub use enumerate::{enumerate_interdiction_plans, enumerate_logistics_plans};
pub use graph::{LayeredEdge, LayeredGraph, LayeredNode};
pub use plan::{
    truncate_paths, truncate_plan, InterdictionPlan, LogisticsPlan, PathDescription,
    TruncatedPlan,
};

use crate::error::{Error, Result};
use crate::game::Game;

/// Freshly unrolls the layered graph of `connector`.
pub fn unroll(game: &Game, connector: usize) -> LayeredGraph {
    let c = game.connector(connector);
    LayeredGraph::build(
        connector,
        game.scenario().nodes.len(),
        game.edges(),
        &c.allowed,
        c.origin,
        game.horizon(),
    )
}

/// A layered edge named by its connector and index in that connector's graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub connector: usize,
    pub edge: usize,
}

/// Whether `later` is downstream of `earlier`; both must belong to the same
/// connector.
pub fn reachable_between(game: &Game, earlier: EdgeRef, later: EdgeRef) -> Result<bool> {
    if earlier.connector != later.connector {
        return Err(Error::InvalidArgument(format!(
            "edges belong to connectors {:?} and {:?}",
            game.connector_id(earlier.connector),
            game.connector_id(later.connector)
        )));
    }
    Ok(game
        .layered(earlier.connector)
        .reachable_between(earlier.edge, later.edge))
}
