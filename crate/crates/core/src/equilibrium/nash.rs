use clgame_milp::{solve, Cmp, Model, Sense, SolveOptions, SolveStatus, Var};

use crate::error::{Error, Result};

/// Exact equilibrium of a finite zero-sum matrix game, rows maximizing.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgameSolution {
    /// Row (Blue) mixture.
    pub blue: Vec<f64>,
    /// Column (Red) mixture.
    pub red: Vec<f64>,
    /// Optimum of the row player's LP.
    pub value: f64,
    /// Optimum of the column player's LP.
    pub red_value: f64,
}

fn simplex_lp(values: &[Vec<f64>], rows_maximize: bool) -> Result<(Vec<f64>, f64)> {
    let (n, m) = (values.len(), values[0].len());
    let (k, other) = if rows_maximize { (n, m) } else { (m, n) };
    let sense = if rows_maximize { Sense::Maximize } else { Sense::Minimize };
    let mut model = Model::new(sense);
    let probs: Vec<Var> = (0..k).map(|_| model.continuous(0.0, 1.0)).collect();
    let v = model.continuous(f64::NEG_INFINITY, f64::INFINITY);
    model.set_objective(v, 1.0);
    model.constrain(probs.iter().map(|&x| (x, 1.0)), Cmp::Eq, 1.0);
    for j in 0..other {
        let terms = probs.iter().enumerate().map(|(i, &x)| {
            let a = if rows_maximize { values[i][j] } else { values[j][i] };
            (x, a)
        });
        let cmp = if rows_maximize { Cmp::Ge } else { Cmp::Le };
        model.constrain(terms.chain([(v, -1.0)]), cmp, 0.0);
    }
    let out = solve(&model, &SolveOptions::default())?;
    if out.status != SolveStatus::Optimal {
        return Err(Error::Unsolved {
            context: "matrix game LP",
            status: out.status,
        });
    }
    let mut p: Vec<f64> = probs.iter().map(|&x| out.value(x).max(0.0)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    Ok((p, out.objective.expect("optimal")))
}

/// Solves both players' matrix-game LPs.
pub fn subgame_nash(values: &[Vec<f64>]) -> Result<SubgameSolution> {
    if values.is_empty() || values[0].is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if values.iter().any(|r| r.len() != values[0].len()) {
        return Err(Error::InvalidArgument("ragged payoff matrix".into()));
    }
    let (blue, value) = simplex_lp(values, true)?;
    let (red, red_value) = simplex_lp(values, false)?;
    if (value - red_value).abs() > 1e-8 {
        log::warn!("matrix game LP optima differ: {value} vs {red_value}");
    }
    Ok(SubgameSolution {
        blue,
        red,
        value,
        red_value,
    })
}
