//! `csp`: generate instances, solve them, and run batch benchmarks.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
//! 3 search capacity exceeded, 4 LP numeric failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use closest_string::bench::{run_bench, to_csv, BenchConfig, Heuristic};
use closest_string::exact::{brute_force_center, branch_and_bound};
use closest_string::lp::{build_csp_lp, lp_lower_bound, solve_lp, Fixings};
use closest_string::rounding::{DEFAULT_RETRIES, DEFAULT_THETA};
use closest_string::{
    algorithm_a, algorithm_b, algorithm_c, generate_uniform, parse_instance, serialize_instance,
    Alphabet, Error, Execution, GeneratorConfig, Instance,
};

#[derive(Parser)]
#[command(name = "csp", version, about = "Closest string solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a uniformly random instance file.
    Gen(GenArgs),
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Run a benchmark batch per (m, n) pair and emit CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "ACGT")]
    alphabet: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    A,
    B,
    C,
    Brute,
    Bnb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "c")]
    alg: Alg,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
    #[arg(long, default_value_t = DEFAULT_RETRIES)]
    retries: usize,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Largest search space `brute` will enumerate.
    #[arg(long, default_value_t = 1 << 24)]
    node_limit: u128,
    /// Time limit in seconds for `bnb`.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    /// Omit wall time so reports are reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
    m_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "100,200,300")]
    n_list: Vec<usize>,
    #[arg(long, default_value = "ACGT")]
    alphabet: String,
    #[arg(long, default_value_t = 3)]
    batch: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// One heuristic out of a, b, c, optionally with bnb.
    #[arg(long, value_delimiter = ',', default_value = "c,bnb")]
    algs: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
    #[arg(long, default_value_t = DEFAULT_RETRIES)]
    retries: usize,
    /// Branch-and-bound limit per instance, in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit_per_instance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave timing columns empty so the CSV is reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Solve the batch on one thread.
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Usage(String),
    Io(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Solver(Error::Capacity { .. }) => 3,
            Failure::Solver(Error::NumericFailure { .. }) => 4,
            Failure::Solver(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Solver(e) => e.to_string(),
        }
    }
}

fn seconds(value: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(value)
        .map_err(|_| Failure::Usage(format!("invalid time limit {value}")))
}

fn alphabet(s: &str) -> Result<Alphabet, Failure> {
    Alphabet::parse(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(args: &GenArgs) -> Result<(), Failure> {
    let inst = generate_uniform(&GeneratorConfig {
        m: args.m,
        n: args.n,
        alphabet: alphabet(&args.alphabet)?,
        seed: args.seed,
    })?;
    write_output(args.out.as_ref(), &serialize_instance(&inst))
}

struct Report {
    center: String,
    objective: usize,
    lp_bound: usize,
    certified: bool,
    millis: Option<f64>,
}

fn root_bound(inst: &Instance) -> Result<usize, Failure> {
    let sol = solve_lp(&build_csp_lp(inst, &Fixings::new())?);
    lp_lower_bound(&sol).map_err(|_| {
        Failure::Solver(Error::NumericFailure {
            iterations: sol.iterations,
            partial: None,
        })
    })
}

fn solve(args: &SolveArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", args.input.display())))?;
    let inst = parse_instance(&text)?;

    let start = Instant::now();
    let report = match args.alg {
        Alg::A | Alg::B | Alg::C => {
            let r = match args.alg {
                Alg::A => algorithm_a(&inst)?,
                Alg::B => algorithm_b(&inst, args.theta)?,
                _ => algorithm_c(&inst, args.theta, args.retries)?,
            };
            Report {
                center: r.center.as_string(),
                objective: r.center.objective,
                lp_bound: r.lp_bound,
                certified: r.exact_certified,
                millis: None,
            }
        }
        Alg::Brute => {
            let r = brute_force_center(&inst, args.node_limit)?;
            Report {
                center: r.center.as_string(),
                objective: r.optimum,
                lp_bound: root_bound(&inst)?,
                certified: r.certified,
                millis: None,
            }
        }
        Alg::Bnb => {
            let r = branch_and_bound(&inst, seconds(args.time_limit)?);
            Report {
                center: r.center.as_string(),
                objective: r.optimum,
                lp_bound: root_bound(&inst)?,
                certified: r.certified,
                millis: None,
            }
        }
    };
    let report = Report {
        millis: (!args.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3),
        ..report
    };

    let rendered = match args.format {
        Format::Json => {
            let value = json!({
                "center": report.center,
                "objective": report.objective,
                "lp_bound": report.lp_bound,
                "certified": report.certified,
                "millis": report.millis,
            });
            format!("{value}\n")
        }
        Format::Text => {
            let millis = report.millis.map(|ms| format!("{ms:.3}")).unwrap_or_else(|| "-".into());
            format!(
                "center: {}\nobjective: {}\nlp_bound: {}\ncertified: {}\nmillis: {millis}\n",
                report.center, report.objective, report.lp_bound, report.certified
            )
        }
    };
    print!("{rendered}");
    Ok(())
}

fn heuristic_and_exact(args: &BenchArgs) -> Result<(Heuristic, bool), Failure> {
    let mut heuristic = None;
    let mut exact = false;
    for alg in &args.algs {
        let h = match alg.trim() {
            "a" => Heuristic::A,
            "b" => Heuristic::B { theta: args.theta },
            "c" => Heuristic::C {
                theta: args.theta,
                retries: args.retries,
            },
            "bnb" => {
                exact = true;
                continue;
            }
            other => return Err(Failure::Usage(format!("unknown algorithm {other:?}"))),
        };
        if heuristic.replace(h).is_some() {
            return Err(Failure::Usage("--algs takes exactly one of a, b, c".into()));
        }
    }
    let heuristic = heuristic.ok_or_else(|| Failure::Usage("--algs needs one of a, b, c".into()))?;
    Ok((heuristic, exact))
}

fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let (heuristic, exact) = heuristic_and_exact(args)?;
    if args.m_list.contains(&0) || args.n_list.contains(&0) {
        return Err(Failure::Usage("m and n must be positive".into()));
    }
    let cfg = BenchConfig {
        m_list: args.m_list.clone(),
        n_list: args.n_list.clone(),
        alphabet: alphabet(&args.alphabet)?,
        batch: args.batch,
        seed: args.seed,
        heuristic,
        exact_time_limit: if exact {
            Some(seconds(args.time_limit_per_instance)?)
        } else {
            None
        },
        exec: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let rows = run_bench(&cfg)?;
    write_output(args.out.as_ref(), &to_csv(&rows, !args.no_timing))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
