use clgame::equilibrium::subgame_nash;
use clgame::layered::{enumerate_interdiction_plans, enumerate_logistics_plans, InterdictionPlan, LogisticsPlan};
use clgame::oracles::{
    blue_best_response, red_best_response, red_inner_dual, red_inner_primal, BrOptions, MixedStrategy,
};
use clgame::payoff::recourse_utility;
use clgame::scenario::{generate_grid_world, GridConfig};
use clgame::Game;
use proptest::prelude::*;

fn grid(seed: u64, horizon: u32, budget: f64) -> Game {
    let cfg = GridConfig {
        uniform_costs: false,
        seed,
        ..GridConfig::new(3, horizon, budget)
    };
    Game::new(generate_grid_world(&cfg).unwrap()).unwrap()
}

fn mixture<P: Clone + Eq + std::hash::Hash>(plans: &[P], picks: &[(usize, f64)]) -> MixedStrategy<P> {
    MixedStrategy::from_weights(picks.iter().map(|&(i, w)| (plans[i % plans.len()].clone(), w))).unwrap()
}

fn picks() -> impl Strategy<Value = Vec<(usize, f64)>> {
    prop::collection::vec((any::<usize>(), 0.05f64..1.0), 1..4)
}

fn u(game: &Game, b: &LogisticsPlan, r: &InterdictionPlan) -> f64 {
    recourse_utility(game, b, r).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn blue_response_beats_every_listed_plan(seed in 0u64..200, budget in 1.0f64..4.0, red_picks in picks()) {
        let game = grid(seed, 3, budget);
        let reds = enumerate_interdiction_plans(&game, 1 << 16, false).unwrap();
        let red = mixture(&reds, &red_picks);
        let br = blue_best_response(&game, &red, &BrOptions::exact()).unwrap();
        let value_of = |b: &LogisticsPlan| red.iter().map(|(r, x)| x * u(&game, b, r)).sum::<f64>();
        prop_assert!((value_of(&br.plan) - br.value).abs() < 1e-6);
        for b in enumerate_logistics_plans(&game, 1 << 16).unwrap().iter().step_by(7) {
            prop_assert!(value_of(b) <= br.value + 1e-6);
        }
    }

    #[test]
    fn red_response_undercuts_every_listed_plan(seed in 0u64..200, budget in 1.0f64..4.0, blue_picks in picks()) {
        let game = grid(seed, 3, budget);
        let blues = enumerate_logistics_plans(&game, 1 << 16).unwrap();
        let blue = mixture(&blues, &blue_picks);
        let br = red_best_response(&game, &blue, &BrOptions::exact()).unwrap();
        let value_of = |r: &InterdictionPlan| blue.iter().map(|(b, x)| x * u(&game, b, r)).sum::<f64>();
        prop_assert!((value_of(&br.plan) - br.value).abs() < 1e-6);
        for r in &enumerate_interdiction_plans(&game, 1 << 16, false).unwrap() {
            prop_assert!(value_of(r) >= br.value - 1e-6);
        }
    }

    #[test]
    fn penalized_inner_lp_equals_truncated_recourse(seed in 0u64..200, blue_picks in picks(), pick in any::<usize>()) {
        let game = grid(seed, 4, 3.0);
        let blues = enumerate_logistics_plans(&game, 1 << 16).unwrap();
        let blue = mixture(&blues, &blue_picks);
        let reds = enumerate_interdiction_plans(&game, 1 << 16, true).unwrap();
        let red = &reds[pick % reds.len()];
        let want: f64 = blue.iter().map(|(b, x)| x * u(&game, b, red)).sum();
        prop_assert!((red_inner_primal(&game, &blue, red).unwrap() - want).abs() < 1e-6);
        prop_assert!((red_inner_dual(&game, &blue, red).unwrap() - want).abs() < 1e-6);
    }

    #[test]
    fn matrix_equilibrium_is_mutually_optimal(values in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 4), 1..5)) {
        let sol = subgame_nash(&values).unwrap();
        prop_assert!((sol.value - sol.red_value).abs() < 1e-7);
        prop_assert!((sol.blue.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!((sol.red.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for row in &values {
            let v: f64 = row.iter().zip(&sol.red).map(|(a, q)| a * q).sum();
            prop_assert!(v <= sol.value + 1e-7);
        }
        for j in 0..values[0].len() {
            let v: f64 = values.iter().zip(&sol.blue).map(|(r, p)| r[j] * p).sum();
            prop_assert!(v >= sol.value - 1e-7);
        }
    }
}
