//! Subgame equilibria, the double-oracle driver, exploitability and the
//! brute-force reference solver.

mod bruteforce;
mod double_oracle;
mod nash;

pub use bruteforce::{exact_nash_bruteforce, BruteForceNash, EnumerationCaps};
pub use double_oracle::{double_oracle, DoConfig, SolveResult, Termination, TraceRow};
pub use nash::{subgame_nash, SubgameSolution};

use clgame_milp::SolveOptions;

use crate::error::Result;
use crate::game::Game;
use crate::layered::{InterdictionPlan, LogisticsPlan};
use crate::oracles::{red_best_response, BrOptions, MixedStrategy};
use crate::payoff::PayoffEvaluator;

#[derive(Clone, Debug, PartialEq)]
pub struct Exploitability {
    /// Expected utility of the mixture against `red_plan`, from recourse LPs.
    pub value: f64,
    pub red_plan: InterdictionPlan,
    /// Objective reported by the Red oracle.
    pub oracle_value: f64,
}

/// Expected utility of a Blue mixture against an exactly best-responding Red.
pub fn exploitability(
    game: &Game,
    blue: &MixedStrategy<LogisticsPlan>,
    solve: &SolveOptions,
) -> Result<Exploitability> {
    for plan in blue.support() {
        plan.check(game)?;
    }
    let opts = BrOptions {
        solve: solve.clone(),
        ..BrOptions::exact()
    };
    let br = red_best_response(game, blue, &opts)?;
    let eval = PayoffEvaluator::new(game);
    let mut value = 0.0;
    for (plan, x) in blue.iter() {
        value += x * eval.utility(plan, &br.plan)?;
    }
    Ok(Exploitability {
        value,
        red_plan: br.plan,
        oracle_value: br.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::triangle;

    #[test]
    fn equilibrium_mixture_is_not_exploitable_below_the_value() {
        let game = Game::new(triangle().scenario().with_budget(2.0)).unwrap();
        let ne = exact_nash_bruteforce(&game, EnumerationCaps::default()).unwrap();
        let ex = exploitability(&game, &ne.blue, &SolveOptions::default()).unwrap();
        assert!((ex.value - ne.value).abs() < 1e-6);
        assert!((ex.oracle_value - ex.value).abs() < 1e-6);
        for plan in ne.blue.support() {
            let pure = exploitability(&game, &MixedStrategy::pure(plan.clone()), &SolveOptions::default()).unwrap();
            assert!(pure.value <= ne.value + 1e-6);
        }
    }
}
