use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mehc::harness::{self, ExperimentConfig, MdpSource};
use mehc::io::{self, NamedMdp};
use mehc::solve::{self, CostMatrix};
use mehc::{shaping, Mdp64, Potential64};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mehc", version, about = "Structural parameters, reward shaping and UCRL2 for tabular MDPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diameter, MEHC, optimal gain, bias span and hitting matrices.
    Analyze { mdp: PathBuf },
    /// Applies a potential to the mean rewards.
    Shape {
        mdp: PathBuf,
        #[arg(long)]
        potential: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Runs UCRL2 once per seed and writes regret traces.
    Learn(LearnArgs),
    /// Writes a generated MDP.
    #[command(subcommand)]
    Gen(Gen),
    /// Checks MEHC(shaped) <= 2 MEHC(base) on random instances.
    #[command(name = "sweep-theorem3")]
    SweepTheorem3 {
        #[arg(long)]
        num: usize,
        #[arg(long)]
        states: usize,
        #[arg(long)]
        actions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hitting costs from the solver next to policy enumeration.
    Oracle { mdp: PathBuf },
}

#[derive(Args)]
struct LearnArgs {
    mdp: PathBuf,
    #[arg(long = "T")]
    horizon: u64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Comma-separated seeds; `a..b` expands to a, ..., b-1.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Seeds,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    potential: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    thin: u64,
}

#[derive(Subcommand)]
enum Gen {
    /// Two-state example.
    Toy {
        #[arg(long, default_value_t = 0.11)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        beta: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Random MDP with sparse Dirichlet rows.
    Random {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        actions: usize,
        #[arg(long, default_value_t = 2)]
        branching: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_noncomm: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone)]
struct Seeds(Vec<u64>);

fn parse_seeds(text: &str) -> Result<Seeds, String> {
    let mut seeds = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.parse().map_err(|_| format!("bad seed range `{item}`"))?;
            let b: u64 = b.parse().map_err(|_| format!("bad seed range `{item}`"))?;
            seeds.extend(a..b);
        } else {
            seeds.push(item.parse().map_err(|_| format!("bad seed `{item}`"))?);
        }
    }
    if seeds.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(Seeds(seeds))
}

/// A domain error: its name and message.
struct Failure {
    name: &'static str,
    message: String,
}

macro_rules! failure_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure { name: e.name(), message: e.to_string() }
            }
        }
    )*};
}

failure_from!(
    mehc::MdpError,
    mehc::SolveError,
    mehc::ShapingError,
    mehc::UcrlError,
    io::IoError,
    harness::HarnessError
);

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.message.starts_with(self.name) {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.name, self.message)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { mdp } => {
            let named = io::read_mdp::<f64>(&mdp)?;
            let report = solve::structural_report(&named.mdp)?;
            print_json(&io::report_to_json(&report));
        }
        Command::Shape { mdp, potential, out } => {
            let named = io::read_mdp::<f64>(&mdp)?;
            let phi: Potential64 = io::read_potential(&potential)?;
            let shaped = shaping::apply_potential(&named.mdp, &phi)?;
            io::write_mdp(&out, &NamedMdp { mdp: shaped, ..named })?;
        }
        Command::Learn(args) => {
            let config = ExperimentConfig {
                source: MdpSource::File(args.mdp),
                potential: args.potential,
                horizon: args.horizon,
                delta: args.delta,
                seeds: args.seeds.0,
                out_dir: args.out,
                thin: args.thin,
            };
            let (summary, _) = harness::run_experiment::<f64>(&config)?;
            print_json(&io::experiment_summary_json(&summary));
        }
        Command::Gen(Gen::Toy { alpha, beta, eps, out }) => {
            write_generated(&out, harness::toy_mdp(alpha, beta, eps)?)?;
        }
        Command::Gen(Gen::Random { states, actions, branching, seed, allow_noncomm, out }) => {
            write_generated(&out, harness::random_mdp(states, actions, branching, seed, allow_noncomm)?)?;
        }
        Command::SweepTheorem3 { num, states, actions, seed } => {
            let report = harness::sweep_theorem3(num, states, actions, seed)?;
            print_json(&io::sweep_summary_json(&report));
            if report.violations > 0 {
                eprintln!("{} instance(s) exceed the factor-of-two bound", report.violations);
            }
        }
        Command::Oracle { mdp } => {
            let named = io::read_mdp::<f64>(&mdp)?;
            let m = &named.mdp;
            let time = compare(
                &solve::hitting_time_matrix(m)?,
                &solve::oracle_hitting_cost_matrix(m, solve::unit_cost)?,
            );
            let cost = compare(
                &solve::hitting_cost_matrix(m, solve::reward_gap_cost(m))?,
                &solve::oracle_hitting_cost_matrix(m, solve::reward_gap_cost(m))?,
            );
            let worst = time.1.max(cost.1);
            print_json(&json!({
                "hitting_time": time.0,
                "hitting_cost": cost.0,
                "max_abs_difference": io::number(worst),
            }));
            eprintln!("max |solver - oracle| = {}", mehc::scalar::format_sig(worst));
        }
    }
    Ok(())
}

fn write_generated(out: &Path, mdp: Mdp64) -> Result<(), Failure> {
    io::write_mdp(out, &NamedMdp::with_default_names(mdp))?;
    Ok(())
}

/// Side-by-side matrices and their largest entrywise difference; two
/// infinite entries agree.
fn compare(solver: &CostMatrix<f64>, oracle: &CostMatrix<f64>) -> (Value, f64) {
    let worst = solver
        .values
        .iter()
        .zip(&oracle.values)
        .map(|(&a, &b)| if a == b { 0.0 } else { (a - b).abs() })
        .fold(0.0, f64::max);
    let value = json!({
        "solver": io::matrix_json(solver),
        "oracle": io::matrix_json(oracle),
        "max_abs_difference": io::number(worst),
    });
    (value, worst)
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}
