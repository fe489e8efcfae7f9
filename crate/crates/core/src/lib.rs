//! Contested logistics games.
//!
//! Blue routes connectors and packages over per-connector time-expanded
//! graphs and maximizes weighted Leontief demand satisfaction; Red destroys
//! edges under a budget and minimizes it. The crate builds instances,
//! evaluates pure strategy pairs, computes best responses as MILPs and runs a
//! double-oracle loop to an approximate Nash equilibrium.

pub mod baselines;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod layered;
pub mod oracles;
pub mod payoff;
pub mod scenario;

pub use error::{Error, Result};
pub use game::Game;
