//! `clgame`: solve, generate and analyse contested logistics games.

mod strategy;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use clgame::baselines::{min_overlap_strategy, price_of_robustness};
use clgame::equilibrium::{double_oracle, exploitability, DoConfig, Termination};
use clgame::oracles::BrOptions;
use clgame::scenario::{
    generate_grid_world, load_scenario, save_scenario, validate_scenario, GridConfig, Scenario,
};
use clgame::Game;
use clgame_milp::SolveOptions;
use serde_json::json;

use strategy::StrategyFile;

#[derive(Parser)]
#[command(name = "clgame", version, about = "Contested logistics games: equilibria, baselines and sweeps")]
struct Cli {
    /// Worker threads for parallel work; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an equilibrium with double oracle.
    Solve {
        scenario: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Directory for result.json, trace.csv and strategies.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write an N×N grid-world scenario.
    Gridgen {
        #[arg(value_parser = clap::value_parser!(u64).range(3..))]
        n: u64,
        horizon: u32,
        budget: f64,
        costs: Costs,
        drop_prob: f64,
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Game values and runtimes over budgets × horizons.
    Sweep {
        /// Scenario to vary; grid worlds are generated per seed when absent.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(3..))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Costs::Uniform)]
        costs: Costs,
        #[arg(long, default_value_t = 0.1)]
        drop_prob: f64,
        /// Number of generated instances per cell.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        budgets: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<u32>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exploitability of a Blue mixture against a best-responding Red.
    Eval {
        scenario: PathBuf,
        /// strategies.json as written by `solve`.
        #[arg(long, conflicts_with_all = ["k", "n_str"], required_unless_present = "k")]
        strategy: Option<PathBuf>,
        /// Payoff target of the min-overlap heuristic.
        #[arg(long, requires = "n_str")]
        k: Option<f64>,
        /// Support size of the min-overlap heuristic.
        #[arg(long, requires = "k")]
        n_str: Option<usize>,
        /// Evaluate against this Red budget instead of the scenario's.
        #[arg(long)]
        budget: Option<f64>,
        /// Time limit for the heuristic MILP in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Price-of-robustness table: expected budget × true budget.
    Por {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        budgets: Vec<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        /// CSV output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time-expanded graph of one connector in DOT format.
    Layered {
        scenario: PathBuf,
        #[arg(long)]
        connector: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report structural problems of a scenario file.
    Validate { scenario: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Costs {
    Uniform,
    Random,
}

#[derive(Args, Clone, Debug)]
struct SolverArgs {
    /// Stop once the equilibrium bracket is at most this wide.
    #[arg(long, default_value_t = 1e-2)]
    epsilon: f64,
    /// Per-solve time limit for best responses, in seconds.
    #[arg(long, default_value_t = 5.0)]
    time_limit: f64,
    /// Solve every best response to optimality.
    #[arg(long)]
    exact: bool,
    /// Run both oracles without a time limit every this many iterations (0: never).
    #[arg(long, default_value_t = 10)]
    exact_every: usize,
    #[arg(long, default_value_t = 1000)]
    max_iterations: usize,
    /// Write every best-response model in LP format into this directory.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

impl SolverArgs {
    fn config(&self) -> DoConfig {
        DoConfig {
            epsilon: self.epsilon,
            br_time_limit: (!self.exact).then_some(self.time_limit),
            exact_every: self.exact_every,
            max_iterations: self.max_iterations,
            dump_dir: self.dump_lp.clone(),
            ..DoConfig::default()
        }
    }
}

fn read_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_scenario(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_game(path: &Path) -> Result<Game> {
    Ok(Game::new(read_scenario(path)?)?)
}

fn write_to(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn solve(scenario: &Path, solver: &SolverArgs, out: &Path) -> Result<ExitCode> {
    let game = read_game(scenario)?;
    fs::create_dir_all(out)?;
    let r = double_oracle(&game, &solver.config())?;
    write_json(
        &out.join("result.json"),
        &json!({
            "value": r.value,
            "lower_bound": r.lower_bound,
            "upper_bound": r.upper_bound,
            "gap": r.gap,
            "epsilon": solver.epsilon,
            "termination": r.termination,
            "iterations": r.iterations,
            "seconds": r.seconds,
            "lp_solves": r.lp_solves,
            "blue_support": r.blue.len(),
            "red_support": r.red.len(),
            "trace": r.trace,
        }),
    )?;
    fs::write(out.join("trace.csv"), r.trace_csv())?;
    write_json(&out.join("strategies.json"), &StrategyFile::new(&game, &r.blue, &r.red))?;
    println!(
        "value {:.6} in [{:.6}, {:.6}] after {} iterations ({:.1}s), {:?}",
        r.value, r.lower_bound, r.upper_bound, r.iterations, r.seconds, r.termination
    );
    Ok(match r.termination {
        Termination::Converged => ExitCode::SUCCESS,
        Termination::Cap => ExitCode::from(2),
    })
}

fn grid_config(n: u64, horizon: u32, budget: f64, costs: Costs, drop_prob: f64, seed: u64) -> GridConfig {
    GridConfig {
        uniform_costs: costs == Costs::Uniform,
        edge_drop_prob: drop_prob,
        seed,
        ..GridConfig::new(n as usize, horizon, budget)
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    template: Option<&Path>,
    n: u64,
    costs: Costs,
    drop_prob: f64,
    seeds: u64,
    first_seed: u64,
    budgets: &[f64],
    horizons: &[u32],
    solver: &SolverArgs,
    out: &Path,
) -> Result<()> {
    let template = template.map(read_scenario).transpose()?;
    fs::create_dir_all(out)?;
    let mut heatmap = csv::Writer::from_path(out.join("heatmap.csv"))?;
    let mut runtimes = csv::Writer::from_path(out.join("runtimes.csv"))?;
    let mut instances = csv::Writer::from_path(out.join("instances.csv"))?;
    heatmap.write_record(["budget", "horizon", "mean_value", "stderr_value", "instances"])?;
    runtimes.write_record(["budget", "horizon", "mean_seconds", "stderr_seconds", "instances"])?;
    instances.write_record(["budget", "horizon", "seed", "value", "gap", "termination", "iterations", "seconds"])?;
    let cfg = solver.config();
    let seed_list: Vec<u64> = match template {
        Some(_) => vec![first_seed],
        None => (first_seed..first_seed + seeds).collect(),
    };

    for &budget in budgets {
        for &horizon in horizons {
            let (mut values, mut times) = (Vec::new(), Vec::new());
            for &seed in &seed_list {
                let scenario = match &template {
                    Some(s) => s.with_budget(budget).with_horizon(horizon),
                    None => generate_grid_world(&grid_config(n, horizon, budget, costs, drop_prob, seed))?,
                };
                let game = match Game::new(scenario) {
                    Ok(g) => g,
                    Err(e) => {
                        log::warn!("seed {seed} skipped: {e}");
                        continue;
                    }
                };
                let start = Instant::now();
                let r = double_oracle(&game, &cfg)?;
                let secs = start.elapsed().as_secs_f64();
                instances.write_record([
                    budget.to_string(),
                    horizon.to_string(),
                    seed.to_string(),
                    r.value.to_string(),
                    r.gap.to_string(),
                    format!("{:?}", r.termination).to_lowercase(),
                    r.iterations.to_string(),
                    secs.to_string(),
                ])?;
                instances.flush()?;
                values.push(r.value);
                times.push(secs);
            }
            let (mv, sv) = mean_and_stderr(&values);
            let (mt, st) = mean_and_stderr(&times);
            let count = values.len().to_string();
            heatmap.write_record([budget.to_string(), horizon.to_string(), mv.to_string(), sv.to_string(), count.clone()])?;
            runtimes.write_record([budget.to_string(), horizon.to_string(), mt.to_string(), st.to_string(), count])?;
            heatmap.flush()?;
            runtimes.flush()?;
            println!("budget {budget} horizon {horizon}: mean value {mv:.6}, mean time {mt:.2}s");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn eval(
    scenario: &Path,
    strategy: Option<&Path>,
    k: Option<f64>,
    n_str: Option<usize>,
    budget: Option<f64>,
    time_limit: Option<f64>,
    out: &Path,
) -> Result<()> {
    let mut game = read_game(scenario)?;
    let (blue, source) = match (strategy, k, n_str) {
        (Some(path), _, _) => (StrategyFile::load(path)?.blue_mixture(&game)?, json!({"strategy": path})),
        (None, Some(k), Some(n_str)) => {
            let opts = BrOptions::exact().with_time_limit(time_limit);
            let h = min_overlap_strategy(&game, k, n_str, &opts)?;
            let source = json!({
                "heuristic": {
                    "k": k,
                    "n_str": n_str,
                    "max_overlap": h.max_overlap,
                    "duplicates": h.duplicates,
                    "optimal": h.optimal,
                }
            });
            (h.strategy, source)
        }
        _ => bail!("give either --strategy or both --k and --n-str"),
    };
    if let Some(b) = budget {
        game = Game::new(game.scenario().with_budget(b))?;
    }
    let ex = exploitability(&game, &blue, &SolveOptions::default())?;
    let red_plan = ex.red_plan.describe(&game);
    fs::create_dir_all(out)?;
    write_json(
        &out.join("report.json"),
        &json!({
            "exploitability": ex.value,
            "oracle_value": ex.oracle_value,
            "budget": game.budget(),
            "red_plan": red_plan,
            "blue_support": blue.len(),
            "source": source,
        }),
    )?;
    println!("exploitability {:.6} at budget {}", ex.value, game.budget());
    println!("red best response: {}", if red_plan.is_empty() { "(none)".to_string() } else { red_plan.join(", ") });
    Ok(())
}

fn por(scenario: &Path, budgets: &[f64], solver: &SolverArgs, out: Option<&Path>) -> Result<()> {
    let s = read_scenario(scenario)?;
    let table = price_of_robustness(&s, budgets, &solver.config())?;
    write_to(out, &table.to_csv())?;
    let shortfall = table.diagonal_shortfall();
    let tol = 2.0 * solver.epsilon;
    eprintln!(
        "diagonal dominance: {} (largest shortfall {shortfall:.3e}, tolerance {tol:.1e})",
        if shortfall <= tol { "holds" } else { "violated" }
    );
    Ok(())
}

fn layered(scenario: &Path, connector: &str, out: Option<&Path>) -> Result<()> {
    let game = read_game(scenario)?;
    let c = (0..game.num_connectors())
        .find(|&c| game.connector_id(c) == connector)
        .with_context(|| format!("no connector {connector:?}"))?;
    write_to(out, &game.layered(c).to_dot(&game))
}

fn validate(scenario: &Path) -> Result<ExitCode> {
    let s = read_scenario(scenario)?;
    let violations = validate_scenario(&s);
    for v in &violations {
        println!("{v}");
    }
    if violations.iter().any(|v| v.is_error()) {
        return Ok(ExitCode::FAILURE);
    }
    println!("ok");
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Solve { scenario, solver, out } => solve(&scenario, &solver, &out),
        Command::Gridgen {
            n,
            horizon,
            budget,
            costs,
            drop_prob,
            seed,
            out,
        } => {
            let s = generate_grid_world(&grid_config(n, horizon, budget, costs, drop_prob, seed))?;
            write_to(out.as_deref(), &save_scenario(&s))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            scenario,
            n,
            costs,
            drop_prob,
            seeds,
            first_seed,
            budgets,
            horizons,
            solver,
            out,
        } => {
            sweep(
                scenario.as_deref(),
                n,
                costs,
                drop_prob,
                seeds,
                first_seed,
                &budgets,
                &horizons,
                &solver,
                &out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            scenario,
            strategy,
            k,
            n_str,
            budget,
            time_limit,
            out,
        } => {
            eval(&scenario, strategy.as_deref(), k, n_str, budget, time_limit, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Por {
            scenario,
            budgets,
            solver,
            out,
        } => {
            por(&scenario, &budgets, &solver, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Layered { scenario, connector, out } => {
            layered(&scenario, &connector, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { scenario } => validate(&scenario),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
