use crate::error::Result;
use crate::game::Game;
use crate::layered::{enumerate_interdiction_plans, enumerate_logistics_plans, InterdictionPlan, LogisticsPlan};
use crate::oracles::MixedStrategy;
use crate::payoff::{PayoffEvaluator, PayoffMatrix};

use super::subgame_nash;

#[derive(Clone, Copy, Debug)]
pub struct EnumerationCaps {
    pub blue: usize,
    pub red: usize,
    /// Enumerate every feasible interdiction set, not only maximal ones.
    pub include_all_red: bool,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self {
            blue: 50_000,
            red: 5_000,
            include_all_red: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BruteForceNash {
    pub value: f64,
    pub blue: MixedStrategy<LogisticsPlan>,
    pub red: MixedStrategy<InterdictionPlan>,
    pub blue_plans: usize,
    pub red_plans: usize,
    pub lp_solves: usize,
}

/// Equilibrium of the full game matrix over every plan of both players.
pub fn exact_nash_bruteforce(game: &Game, caps: EnumerationCaps) -> Result<BruteForceNash> {
    let blue = enumerate_logistics_plans(game, caps.blue)?;
    let red = enumerate_interdiction_plans(game, caps.red, caps.include_all_red)?;
    let eval = PayoffEvaluator::new(game);
    let matrix = PayoffMatrix::build(&eval, blue, red)?;
    let sub = subgame_nash(matrix.values())?;
    let weights = |p: &[f64]| p.iter().map(|x| if *x > 1e-12 { *x } else { 0.0 }).collect::<Vec<_>>();
    Ok(BruteForceNash {
        value: sub.value,
        blue: MixedStrategy::from_weights(
            matrix.blue_plans().iter().cloned().zip(weights(&sub.blue)),
        )?,
        red: MixedStrategy::from_weights(matrix.red_plans().iter().cloned().zip(weights(&sub.red)))?,
        blue_plans: matrix.rows(),
        red_plans: matrix.cols(),
        lp_solves: eval.lp_solves(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::two_corridor;
    use crate::scenario::{generate_sat_gadget, Cnf};

    #[test]
    fn contradictory_formula_is_worth_half() {
        let cnf = Cnf::new(1, vec![vec![1], vec![-1]]);
        let game = Game::new(generate_sat_gadget(&cnf).unwrap()).unwrap();
        let ne = exact_nash_bruteforce(&game, EnumerationCaps::default()).unwrap();
        assert!((ne.value - 0.5).abs() < 1e-6);
        assert_eq!(ne.red_plans, 2);
    }

    #[test]
    fn expensive_corridor_is_safe_at_unit_budget() {
        let ne = exact_nash_bruteforce(&two_corridor(), EnumerationCaps::default()).unwrap();
        assert!((ne.value - 1.0).abs() < 1e-6);
        assert!(ne.lp_solves <= ne.blue_plans * ne.red_plans);
    }

    #[test]
    fn caps_propagate() {
        let caps = EnumerationCaps {
            blue: 2,
            ..EnumerationCaps::default()
        };
        assert!(matches!(
            exact_nash_bruteforce(&two_corridor(), caps),
            Err(crate::error::Error::CapExceeded { .. })
        ));
    }
}
