use clgame_milp::{backend_by_name, solve, Cmp, Model, Sense, SolveOptions, SolveStatus};
use proptest::prelude::*;

#[test]
fn bounded_lp_hits_upper_bound() {
    let mut m = Model::new(Sense::Maximize);
    let x = m.continuous(0.0, 3.0);
    m.set_objective(x, 1.0);
    let out = solve(&m, &SolveOptions::default()).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal);
    assert!((out.value(x) - 3.0).abs() < 1e-9);
    assert!((out.objective.unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn binary_knapsack_picks_heavier_item() {
    let mut m = Model::new(Sense::Maximize);
    let a = m.binary();
    let b = m.binary();
    m.set_objective(a, 2.0);
    m.set_objective(b, 3.0);
    m.constrain([(a, 1.0), (b, 1.0)], Cmp::Le, 1.0);
    let out = solve(&m, &SolveOptions::default()).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal);
    assert!(out.value(a).abs() < 1e-9);
    assert!((out.value(b) - 1.0).abs() < 1e-9);
    assert!((out.objective.unwrap() - 3.0).abs() < 1e-9);
    assert!((out.bound.unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn contradictory_bounds_are_infeasible() {
    let mut m = Model::new(Sense::Minimize);
    let x = m.continuous(f64::NEG_INFINITY, f64::INFINITY);
    m.constrain([(x, 1.0)], Cmp::Le, 0.0);
    m.constrain([(x, 1.0)], Cmp::Ge, 1.0);
    let out = solve(&m, &SolveOptions::default()).unwrap();
    assert_eq!(out.status, SolveStatus::Infeasible);
    assert!(out.values.is_none());
}

#[test]
fn unbounded_lp_is_reported() {
    let mut m = Model::new(Sense::Maximize);
    let x = m.nonneg();
    m.set_objective(x, 1.0);
    let out = solve(&m, &SolveOptions::default()).unwrap();
    assert_eq!(out.status, SolveStatus::Unbounded);
}

#[test]
fn objective_constant_is_included() {
    let mut m = Model::new(Sense::Minimize);
    let x = m.continuous(1.0, 2.0);
    m.set_objective(x, 2.0);
    m.set_objective_constant(5.0);
    let out = solve(&m, &SolveOptions::default()).unwrap();
    assert!((out.objective.unwrap() - 7.0).abs() < 1e-9);
}

#[test]
fn empty_model_is_trivially_optimal() {
    let mut m = Model::new(Sense::Maximize);
    m.set_objective_constant(1.5);
    let out = solve(&m, &SolveOptions::default()).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal);
    assert_eq!(out.objective, Some(1.5));
}

#[test]
fn unknown_backend_is_unavailable() {
    assert!(backend_by_name("gurobi").is_err());
    assert_eq!(backend_by_name("HiGHS").unwrap().name(), "highs");
}

#[test]
fn row_duals_are_shadow_prices() {
    // max 3x + 2y  s.t.  x + y <= 4, x + 3y <= 9, x <= 3
    // optimum x=3, y=1 with duals (2, 0, 1).
    for sense in [Sense::Maximize, Sense::Minimize] {
        let sign = if sense == Sense::Maximize { 1.0 } else { -1.0 };
        let mut m = Model::new(sense);
        let x = m.nonneg();
        let y = m.nonneg();
        m.set_objective(x, 3.0 * sign);
        m.set_objective(y, 2.0 * sign);
        m.constrain([(x, 1.0), (y, 1.0)], Cmp::Le, 4.0);
        m.constrain([(x, 1.0), (y, 3.0)], Cmp::Le, 9.0);
        m.constrain([(x, 1.0)], Cmp::Le, 3.0);
        let out = solve(&m, &SolveOptions::default()).unwrap();
        let duals = out.row_duals.unwrap();
        let expected = [2.0 * sign, 0.0, 1.0 * sign];
        for (d, e) in duals.iter().zip(expected) {
            assert!((d - e).abs() < 1e-9, "{duals:?} vs {expected:?}");
        }
    }
}

#[test]
fn time_limited_mip_reports_consistent_bracket() {
    // Subset-sum style knapsack with many items.
    let mut m = Model::new(Sense::Maximize);
    let weights: Vec<f64> = (0..40).map(|i| 17.0 + ((i * 37) % 23) as f64).collect();
    let vars: Vec<_> = weights
        .iter()
        .map(|w| {
            let v = m.binary();
            m.set_objective(v, *w + 0.5);
            v
        })
        .collect();
    m.constrain(vars.iter().zip(&weights).map(|(v, w)| (*v, *w)), Cmp::Le, 301.0);
    let opts = SolveOptions::default().with_time_limit(Some(0.05));
    let out = solve(&m, &opts).unwrap();
    if out.status.has_solution() {
        assert!(out.objective.unwrap() <= out.bound.unwrap() + 1e-6);
    }
    let full = solve(&m, &SolveOptions::default()).unwrap();
    assert_eq!(full.status, SolveStatus::Optimal);
    if let Some(obj) = out.objective {
        assert!(obj <= full.objective.unwrap() + 1e-6);
    }
    assert!(full.bound.unwrap() >= full.objective.unwrap() - 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Strong duality on random packing LPs: max c'x, Ax <= b, x >= 0 against
    /// the explicitly built dual min b'y, A'y >= c, y >= 0, and against the
    /// reported row duals.
    #[test]
    fn packing_lp_matches_its_dual(
        a in prop::collection::vec(prop::collection::vec(0.1f64..5.0, 3), 4),
        b in prop::collection::vec(1.0f64..10.0, 4),
        c in prop::collection::vec(0.1f64..4.0, 3),
    ) {
        let mut primal = Model::new(Sense::Maximize);
        let xs: Vec<_> = c.iter().map(|&ci| { let v = primal.nonneg(); primal.set_objective(v, ci); v }).collect();
        for (row, &rhs) in a.iter().zip(&b) {
            primal.constrain(xs.iter().zip(row).map(|(v, aij)| (*v, *aij)), Cmp::Le, rhs);
        }
        let p = solve(&primal, &SolveOptions::default()).unwrap();
        prop_assert_eq!(p.status, SolveStatus::Optimal);

        let mut dual = Model::new(Sense::Minimize);
        let ys: Vec<_> = b.iter().map(|&bi| { let v = dual.nonneg(); dual.set_objective(v, bi); v }).collect();
        for (j, &cj) in c.iter().enumerate() {
            dual.constrain(ys.iter().zip(&a).map(|(v, row)| (*v, row[j])), Cmp::Ge, cj);
        }
        let d = solve(&dual, &SolveOptions::default()).unwrap();
        let pv = p.objective.unwrap();
        prop_assert!((pv - d.objective.unwrap()).abs() < 1e-6);

        let duals = p.row_duals.unwrap();
        let by_duals: f64 = duals.iter().zip(&b).map(|(y, bi)| y * bi).sum();
        prop_assert!((pv - by_duals).abs() < 1e-6);
        prop_assert!(duals.iter().all(|y| *y >= -1e-9));
    }
}

#[test]
fn mip_start_does_not_change_the_optimum() {
    let mut m = Model::new(Sense::Maximize);
    let xs: Vec<_> = (0..6).map(|_| m.binary()).collect();
    for (i, x) in xs.iter().enumerate() {
        m.set_objective(*x, 1.0 + i as f64);
    }
    m.constrain(xs.iter().map(|x| (*x, 1.0)), Cmp::Le, 2.0);
    let plain = solve(&m, &SolveOptions::default()).unwrap();
    for start in [vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0], vec![1.0; 6], vec![0.5; 3]] {
        m.set_start(start);
        let out = solve(&m, &SolveOptions::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert!((out.objective.unwrap() - plain.objective.unwrap()).abs() < 1e-9);
        assert!((out.objective.unwrap() - 11.0).abs() < 1e-9);
    }
}
