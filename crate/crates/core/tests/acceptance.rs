//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `cargo test --test acceptance` runs every criterion at the default scale.
//! Extra arguments filter criteria by name; `--full` (or `--ignored`) adds
//! the full-size monotonicity sweep, which takes hours on one core.

use std::time::{Duration, Instant};

use clgame::equilibrium::{double_oracle, exact_nash_bruteforce, exploitability, DoConfig, EnumerationCaps};
use clgame::layered::{enumerate_interdiction_plans, enumerate_logistics_plans, LogisticsPlan, PathDescription};
use clgame::oracles::{red_best_response, red_inner_dual, red_inner_primal, BrOptions, MixedStrategy};
use clgame::payoff::recourse_utility;
use clgame::scenario::{
    generate_grid_world, generate_sat_gadget, generate_set_cover_gadget, load_scenario, Cnf, GridConfig, Scenario,
    SetCoverInstance,
};
use clgame::baselines::{min_overlap_strategy, no_red_optimal, price_of_robustness};
use clgame::Game;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SAT_EPSILON: f64 = 1e-4;
const SAT_TIME: Duration = Duration::from_secs(60);
const SET_COVER_TOL: f64 = 1e-6;
const BRUTE_EPSILON: f64 = 1e-6;
const BRUTE_TIME: Duration = Duration::from_secs(300);
const CUTOFF_TOL: f64 = 1e-8;
const MONOTONE_TOL: f64 = 1e-8;
const MONOTONE_EPSILON: f64 = 1e-9;
const PENALTY_TOL: f64 = 1e-6;
const UKRAINE_ITERATIONS: usize = 10;
const ROBUST_EPSILON: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn grid(n: usize, horizon: u32, budget: f64, uniform: bool, drop: f64, seed: u64) -> Game {
    let cfg = GridConfig {
        uniform_costs: uniform,
        edge_drop_prob: drop,
        seed,
        ..GridConfig::new(n, horizon, budget)
    };
    Game::new(generate_grid_world(&cfg).expect("grid")).expect("valid grid")
}

/// First valid random-cost grid with 10% dropped adjacencies from `seed` on.
fn dropped_grid(n: usize, horizon: u32, budget: f64, seed: u64) -> Game {
    (seed..)
        .find_map(|s| {
            let cfg = GridConfig {
                uniform_costs: false,
                edge_drop_prob: 0.1,
                seed: s,
                ..GridConfig::new(n, horizon, budget)
            };
            Game::new(generate_grid_world(&cfg).ok()?).ok()
        })
        .expect("some seed yields a valid grid")
}

fn small_grid(horizon: u32, budget: f64, seed: u64) -> Game {
    dropped_grid(3, horizon, budget, seed)
}

fn random_cnf(rng: &mut ChaCha8Rng) -> Cnf {
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=4);
    let clauses = (0..k)
        .map(|_| {
            let mut vars: Vec<i32> = (1..=n as i32).collect();
            vars.shuffle(rng);
            let len = rng.gen_range(1..=n.min(3));
            vars[..len]
                .iter()
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    Cnf::new(n, clauses)
}

fn sat_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = 1e-6 + 2.0 * SAT_EPSILON;
    let mut worst_err: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut failures = Vec::new();
    for i in 0..20 {
        let cnf = random_cnf(&mut rng);
        let game = Game::new(generate_sat_gadget(&cnf).unwrap()).unwrap();
        let start = Instant::now();
        let r = double_oracle(&game, &DoConfig::exact(SAT_EPSILON)).unwrap();
        let took = start.elapsed();
        let want = cnf.max_satisfiable() as f64 / cnf.clauses.len() as f64;
        let err = (r.value - want).abs();
        worst_err = worst_err.max(err);
        slowest = slowest.max(took);
        if err > tol || took > SAT_TIME {
            failures.push(format!("#{i} {:?}: {} vs {want} in {took:.1?}", cnf.clauses, r.value));
        }
    }
    outcome(
        failures.is_empty(),
        format!("20 formulas, worst error {worst_err:.2e} (tol {tol:.1e}), slowest {slowest:.1?} {}", failures.join("; ")),
    )
}

fn random_set_cover(rng: &mut ChaCha8Rng) -> SetCoverInstance {
    loop {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=5);
        let sets: Vec<Vec<usize>> = (0..m)
            .map(|_| {
                let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                if s.is_empty() {
                    s.push(rng.gen_range(0..n));
                }
                s
            })
            .collect();
        if (0..n).all(|u| sets.iter().any(|s| s.contains(&u))) {
            return SetCoverInstance {
                universe: n,
                sets,
                budget: rng.gen_range(0..=3),
            };
        }
    }
}

fn set_cover_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = Vec::new();
    let (mut zeros, mut nonzeros) = (0, 0);
    let count = 300;
    for i in 0..count {
        let inst = random_set_cover(&mut rng);
        let gadget = generate_set_cover_gadget(&inst).unwrap();
        let game = Game::new(gadget.scenario).unwrap();
        let plans: Vec<LogisticsPlan> = gadget
            .element_paths
            .iter()
            .map(|edges| {
                let d = PathDescription {
                    connector: "c".into(),
                    edges: edges.clone(),
                };
                LogisticsPlan::from_edge_ids(&game, &[d]).unwrap()
            })
            .collect();
        let blue = MixedStrategy::uniform(plans).unwrap();
        let br = red_best_response(&game, &blue, &BrOptions::exact()).unwrap();
        let brute = enumerate_interdiction_plans(&game, 1 << 16, true)
            .unwrap()
            .iter()
            .map(|r| blue.iter().map(|(b, x)| x * recourse_utility(&game, b, r).unwrap().0).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let covered = inst.min_cover_size().unwrap() <= inst.budget;
        let is_zero = br.value.abs() <= SET_COVER_TOL;
        if is_zero {
            zeros += 1;
        } else {
            nonzeros += 1;
        }
        if is_zero != covered || (br.value - brute).abs() > SET_COVER_TOL {
            failures.push(format!("#{i} {inst:?}: value {} brute {brute}", br.value));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{count} instances ({zeros} coverable, {nonzeros} not) {}", failures.join("; ")),
    )
}

fn do_vs_bruteforce() -> Outcome {
    let tol = 2.0 * BRUTE_EPSILON + 1e-6;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for i in 0..15u64 {
        let horizon = 3 + (i % 2) as u32;
        let budget = 1.0 + (i % 3 / 2) as f64;
        let game = small_grid(horizon, budget, 100 + 10 * i);
        let start = Instant::now();
        let r = double_oracle(&game, &DoConfig::exact(BRUTE_EPSILON)).unwrap();
        let ne = exact_nash_bruteforce(&game, EnumerationCaps::default()).unwrap();
        let took = start.elapsed();
        let err = (r.value - ne.value).abs();
        worst = worst.max(err);
        slowest = slowest.max(took);
        if err > tol || took > BRUTE_TIME {
            failures.push(format!("#{i} T={horizon} b={budget}: {} vs {} in {took:.1?}", r.value, ne.value));
        }
    }
    outcome(
        failures.is_empty(),
        format!("15 grids, worst |DO - brute| {worst:.2e} (tol {tol:.1e}), slowest {slowest:.1?} {}", failures.join("; ")),
    )
}

/// Configuration for 5×5 grids: timed oracles, exact confirmation only at
/// the end.
fn large_grid_config(epsilon: f64) -> DoConfig {
    DoConfig {
        epsilon,
        br_time_limit: Some(1.0),
        exact_every: 0,
        ..DoConfig::exact(epsilon)
    }
}

fn grid_cutoff() -> Outcome {
    let game = grid(5, 10, 4.0, true, 0.0, 0);
    let start = Instant::now();
    let r = double_oracle(&game, &large_grid_config(1e-9)).unwrap();
    outcome(
        r.value.abs() <= CUTOFF_TOL && r.upper_bound.abs() <= CUTOFF_TOL,
        format!(
            "5x5 T=10 budget 4: value {:.3e}, upper bound {:.3e}, {:?} after {} iterations in {:.1?}",
            r.value,
            r.upper_bound,
            r.termination,
            r.iterations,
            start.elapsed()
        ),
    )
}

fn sweep_violations(values: &[f64], non_increasing: bool) -> usize {
    values
        .windows(2)
        .filter(|w| {
            if non_increasing {
                w[1] > w[0] + MONOTONE_TOL
            } else {
                w[1] < w[0] - MONOTONE_TOL
            }
        })
        .count()
}

fn monotone_sweeps(seeds: &[u64], n: usize, budgets: &[f64], base_horizon: u32, horizons: &[u32]) -> Outcome {
    let mut violations = 0;
    let mut rows = Vec::new();
    let cfg = if n > 3 { large_grid_config(MONOTONE_EPSILON) } else { DoConfig::exact(MONOTONE_EPSILON) };
    for &seed in seeds {
        let base = dropped_grid(n, base_horizon, 1.0, seed);
        let solve = |s: Scenario| double_oracle(&Game::new(s).unwrap(), &cfg).unwrap().value;
        let by_budget: Vec<f64> = budgets.iter().map(|&b| solve(base.scenario().with_budget(b))).collect();
        let by_horizon: Vec<f64> = horizons.iter().map(|&t| solve(base.scenario().with_horizon(t))).collect();
        violations += sweep_violations(&by_budget, true) + sweep_violations(&by_horizon, false);
        rows.push(format!("budget {by_budget:.4?} horizon {by_horizon:.4?}"));
        eprintln!("  seed {seed}: {}", rows.last().unwrap());
    }
    outcome(violations == 0, format!("{violations} violations; {}", rows.join(" | ")))
}

fn penalty_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for i in 0..25u64 {
        let game = small_grid(rng.gen_range(2..=4), 3.0, 300 + 7 * i);
        let blues = enumerate_logistics_plans(&game, 1 << 20).unwrap();
        let k = rng.gen_range(1..=3);
        let blue = MixedStrategy::from_weights(
            (0..k).map(|_| (blues[rng.gen_range(0..blues.len())].clone(), rng.gen_range(0.1..1.0))),
        )
        .unwrap();
        let reds = enumerate_interdiction_plans(&game, 1 << 16, true).unwrap();
        let red = &reds[rng.gen_range(0..reds.len())];
        let want: f64 = blue.iter().map(|(b, x)| x * recourse_utility(&game, b, red).unwrap().0).sum();
        let primal = red_inner_primal(&game, &blue, red).unwrap();
        let dual = red_inner_dual(&game, &blue, red).unwrap();
        worst = worst.max((primal - want).abs()).max((dual - want).abs());
    }
    outcome(worst <= PENALTY_TOL, format!("25 triples, worst deviation {worst:.2e} (tol {PENALTY_TOL:.0e})"))
}

fn two_corridor() -> Game {
    Game::new(load_scenario(include_str!("data/two_corridor.json")).unwrap()).unwrap()
}

fn robustness_ordering() -> Outcome {
    let cfg = DoConfig::exact(ROBUST_EPSILON);
    let mut notes = Vec::new();
    let mut pass = true;
    for seed in 0..5u64 {
        let game = small_grid(3, 0.0, 500 + 10 * seed);
        let table = price_of_robustness(game.scenario(), &[0.0, 1.0, 2.0, 3.0], &cfg).unwrap();
        let shortfall = table.diagonal_shortfall();
        pass &= shortfall <= 2.0 * ROBUST_EPSILON;
        notes.push(format!("{shortfall:.1e}"));
    }

    let game = small_grid(3, 2.0, 600);
    let value = double_oracle(&game, &cfg).unwrap().value;
    let (_, free) = no_red_optimal(&game, &cfg.solve).unwrap();
    let mut worst_excess = f64::NEG_INFINITY;
    for frac in [0.25, 0.5, 0.75] {
        for n_str in 1..=3 {
            let h = min_overlap_strategy(&game, frac * free, n_str, &BrOptions::exact()).unwrap();
            let ex = exploitability(&game, &h.strategy, &cfg.solve).unwrap().value;
            worst_excess = worst_excess.max(ex - value);
        }
    }
    pass &= worst_excess <= 2.0 * ROBUST_EPSILON;

    let fixture = two_corridor();
    let ne = double_oracle(&fixture, &cfg).unwrap().value;
    let h = min_overlap_strategy(&fixture, 1.0, 2, &BrOptions::exact()).unwrap();
    let ex = exploitability(&fixture, &h.strategy, &cfg.solve).unwrap().value;
    pass &= ex < ne - 2.0 * ROBUST_EPSILON;
    outcome(
        pass,
        format!(
            "diagonal shortfalls [{}]; heuristic minus NE on 3x3 flags max {worst_excess:.3}; two-corridor heuristic {ex:.3} < NE {ne:.3}",
            notes.join(", ")
        ),
    )
}

fn contested_ukraine() -> Outcome {
    let game = Game::new(load_scenario(include_str!("data/ukraine_like.json")).unwrap()).unwrap();
    let cfg = DoConfig { max_iterations: UKRAINE_ITERATIONS, ..large_grid_config(1e-4) };
    let (_, free) = no_red_optimal(&game, &cfg.solve).unwrap();
    let r = double_oracle(&game, &cfg).unwrap();
    // Any exactly solved Blue reply to a Red mixture bounds the game value.
    let bound = r
        .trace
        .iter()
        .filter(|row| row.blue_exact)
        .map(|row| row.blue_br_value)
        .fold(f64::INFINITY, f64::min);
    outcome(
        bound < free - 1e-6,
        format!("no-Red value {free:.4} vs certified upper bound {bound:.4} after {} iterations", r.iterations),
    )
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let full = args.iter().any(|a| a == "--full" || a == "--ignored" || a == "--include-ignored");
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    rayon::ThreadPoolBuilder::new().num_threads(1).build_global().expect("thread pool");

    type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);
    let mut criteria: Vec<Criterion> = vec![
        ("sat_exactness", Box::new(sat_exactness)),
        ("set_cover_exactness", Box::new(set_cover_exactness)),
        ("do_vs_bruteforce", Box::new(do_vs_bruteforce)),
        ("grid_cutoff", Box::new(grid_cutoff)),
        (
            "monotonicity_reduced",
            Box::new(|| {
                let seeds: Vec<u64> = (1..=10).collect();
                monotone_sweeps(&seeds, 3, &[0.0, 1.0, 2.0, 3.0, 4.0], 3, &[2, 3, 4, 5])
            }),
        ),
        ("penalty_equivalence", Box::new(penalty_equivalence)),
        ("robustness_ordering", Box::new(robustness_ordering)),
        ("contested_ukraine", Box::new(contested_ukraine)),
    ];
    if full {
        criteria.push((
            "monotonicity_full",
            Box::new(|| {
                let seeds: Vec<u64> = (1..=10).collect();
                monotone_sweeps(&seeds, 5, &[0.0, 1.0, 2.0, 3.0, 4.0], 6, &[6, 7, 8, 9, 10])
            }),
        ));
    }

    let mut failed = 0;
    for (name, run) in &criteria {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {name} ({:.1?}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail.trim_end()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
