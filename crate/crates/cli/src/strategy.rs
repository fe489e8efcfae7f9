//! On-disk form of mixed strategies, with plans named by edge ids.

use anyhow::{bail, Context, Result};
use clgame::layered::{InterdictionPlan, LogisticsPlan, PathDescription};
use clgame::oracles::MixedStrategy;
use clgame::Game;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub blue: Vec<BlueEntry>,
    #[serde(default)]
    pub red: Vec<RedEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlueEntry {
    pub probability: f64,
    pub paths: Vec<PathDescription>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedEntry {
    pub probability: f64,
    pub edges: Vec<String>,
}

impl StrategyFile {
    pub fn new(game: &Game, blue: &MixedStrategy<LogisticsPlan>, red: &MixedStrategy<InterdictionPlan>) -> Self {
        Self {
            blue: blue
                .iter()
                .map(|(plan, p)| BlueEntry {
                    probability: p,
                    paths: plan.describe(game),
                })
                .collect(),
            red: red
                .iter()
                .map(|(plan, p)| RedEntry {
                    probability: p,
                    edges: plan.describe(game),
                })
                .collect(),
        }
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// The Blue mixture, with every plan checked against `game`.
    pub fn blue_mixture(&self, game: &Game) -> Result<MixedStrategy<LogisticsPlan>> {
        if self.blue.is_empty() {
            bail!("strategy file has no Blue plans");
        }
        let plans = self
            .blue
            .iter()
            .enumerate()
            .map(|(i, e)| {
                LogisticsPlan::from_edge_ids(game, &e.paths)
                    .with_context(|| format!("Blue plan {i}"))
                    .map(|plan| (plan, e.probability))
            })
            .collect::<Result<Vec<_>>>()?;
        let (plans, probs) = plans.into_iter().unzip();
        Ok(MixedStrategy::new(plans, probs)?)
    }
}
