use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sitopt::bench::{
    aggregate, channels, read_csv, run_benchmark, write_csv, write_summary_csv, BenchConfig,
};
use sitopt::{
    solve_traced, Error, SolveStatus, SolverConfig, StructuredProblem, TraceEvent,
};

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "sitopt", about = "Global resource-allocation solver and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem described by a JSON file.
    Solve {
        problem: PathBuf,
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma0: f64,
        #[arg(long, default_value_t = 2_000_000)]
        max_nodes: u64,
        /// Stream one JSON record per examined box to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Run a benchmark sweep described by a JSON config.
    Bench {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Aggregate a result CSV into per-(snr, scheme) means and medians.
    Aggregate {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate seeded channel realizations.
    Channels {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 10.0)]
        snr_db: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Io(_)
                | Error::Json(_)
                | Error::Schema(_)
                | Error::BenchConfig(_)
                | Error::Config(_)
                | Error::Validation(_)
                | Error::Dimension { .. } => EXIT_INPUT,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve { problem, eps, eta, gamma0, max_nodes, trace } => {
            let json = std::fs::read_to_string(&problem)?;
            let p = StructuredProblem::from_json(&json)?;
            let cfg = SolverConfig {
                epsilon: eps,
                eta,
                gamma0,
                max_nodes,
                ..SolverConfig::default()
            };
            let stderr = std::io::stderr();
            let mut sink = |e: &TraceEvent| {
                if trace {
                    let mut lock = stderr.lock();
                    let _ = serde_json::to_writer(&mut lock, e);
                    let _ = writeln!(lock);
                }
            };
            let out = solve_traced(&p, &cfg, &mut sink)?;
            println!("status: {}", out.status);
            if let Some(v) = out.objective_value {
                println!("objective: {v}");
            }
            if let Some(inc) = &out.incumbent {
                println!("x: {:?}", inc.x);
                if !inc.xi.is_empty() {
                    println!("xi: {:?}", inc.xi);
                }
            }
            println!("gamma: {}", out.gamma);
            println!("nodes: {}", out.nodes_expanded);
            println!("subproblems: {}", out.subproblems_solved);
            println!("wall_time_s: {}", out.wall_time.as_secs_f64());
            Ok(match out.status {
                SolveStatus::EssentialOptimal => ExitCode::SUCCESS,
                SolveStatus::EssentialInfeasible => ExitCode::from(EXIT_INFEASIBLE),
                SolveStatus::NodeBudgetExceeded => ExitCode::from(EXIT_BUDGET),
            })
        }
        Command::Bench { config, output } => {
            let cfg: BenchConfig =
                serde_json::from_str(&std::fs::read_to_string(&config)?)?;
            let rows = run_benchmark(&cfg)?;
            let path = output
                .or_else(|| cfg.output.clone())
                .ok_or_else(|| Error::BenchConfig("no output path given".into()))?;
            write_csv(&path, &rows)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Aggregate { input, output } => {
            let rows = read_csv(&input)?;
            let summary = aggregate(&rows);
            write_summary_csv(&output, &summary)?;
            println!("wrote {} groups to {}", summary.len(), output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Channels { seed, count, snr_db, output } => {
            let list = channels::generate_channels(seed, count, snr_db);
            channels::write_channel_file(&output, &list)?;
            println!("wrote {} realizations to {}", list.len(), output.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
