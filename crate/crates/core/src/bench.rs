//! Batch benchmark harness producing one summary row per `(m, n)` pair.
//!
//! Per instance it records the fractional and rounded-up root LP value, the
//! heuristic objective, and optionally the branch-and-bound optimum. Rows
//! average over the batch:
//!
//! * `lp_avg` is the mean of `ceil(d_LP)`,
//! * `max_dist_error` is `max |d_heuristic - d_LP|` using the fractional LP value,
//! * timings are wall-clock milliseconds, skipping instance 0 when the batch
//!   has more than one instance.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exact::branch_and_bound;
use crate::exec::Execution;
use crate::instances::{batch_seed, generate_uniform, GeneratorConfig};
use crate::lp::{build_csp_lp, ceil_guarded, solve_lp, Fixings, LpStatus};
use crate::rounding::{algorithm_a, algorithm_b, algorithm_c_with, RoundingResult};
use crate::string::{Alphabet, Instance};

pub const CSV_HEADER: &str = "m,n,batch,lp_avg,alg_avg,exact_avg,max_dist_error,lp_ms,alg_ms,exact_ms";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Heuristic {
    A,
    B { theta: f64 },
    C { theta: f64, retries: usize },
}

impl Heuristic {
    /// Runs the heuristic. Algorithm C restarts run sequentially here so that
    /// batch-level parallelism is the only source of concurrency.
    pub fn run(&self, inst: &Instance) -> Result<RoundingResult> {
        match *self {
            Heuristic::A => algorithm_a(inst),
            Heuristic::B { theta } => algorithm_b(inst, theta),
            Heuristic::C { theta, retries } => {
                algorithm_c_with(inst, theta, retries, Execution::Sequential)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub m_list: Vec<usize>,
    pub n_list: Vec<usize>,
    pub alphabet: Alphabet,
    pub batch: usize,
    pub seed: u64,
    pub heuristic: Heuristic,
    /// Run branch and bound with this per-instance limit.
    pub exact_time_limit: Option<Duration>,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    pub m: usize,
    pub n: usize,
    pub index: usize,
    pub seed: u64,
    pub lp_value: f64,
    pub lp_bound: usize,
    pub objective: usize,
    pub certified: bool,
    /// Certified branch-and-bound optimum; `None` when skipped or timed out.
    pub exact: Option<usize>,
    pub lp_ms: f64,
    pub alg_ms: f64,
    pub exact_ms: Option<f64>,
}

impl InstanceOutcome {
    pub fn dist_error(&self) -> f64 {
        (self.objective as f64 - self.lp_value).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    pub batch: usize,
    pub lp_avg: f64,
    pub alg_avg: f64,
    pub exact_avg: Option<f64>,
    pub max_dist_error: f64,
    pub lp_ms: f64,
    pub alg_ms: f64,
    pub exact_ms: Option<f64>,
    pub instances: Vec<InstanceOutcome>,
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Solves one instance of a batch.
pub fn run_instance(cfg: &BenchConfig, m: usize, n: usize, index: usize) -> Result<InstanceOutcome> {
    let seed = batch_seed(cfg.seed, index);
    let inst = generate_uniform(&GeneratorConfig {
        m,
        n,
        alphabet: cfg.alphabet.clone(),
        seed,
    })?;

    let t0 = Instant::now();
    let root = solve_lp(&build_csp_lp(&inst, &Fixings::new())?);
    let lp_ms = millis(t0.elapsed());
    if root.status != LpStatus::Optimal {
        return Err(Error::NumericFailure {
            iterations: root.iterations,
            partial: None,
        });
    }

    let t0 = Instant::now();
    let result = cfg.heuristic.run(&inst)?;
    let alg_ms = millis(t0.elapsed());

    let (exact, exact_ms) = match cfg.exact_time_limit {
        Some(limit) => {
            let t0 = Instant::now();
            let r = branch_and_bound(&inst, limit);
            let ms = millis(t0.elapsed());
            if r.certified {
                (Some(r.optimum), Some(ms))
            } else {
                (None, None)
            }
        }
        None => (None, None),
    };

    Ok(InstanceOutcome {
        m,
        n,
        index,
        seed,
        lp_value: root.dvalue,
        lp_bound: ceil_guarded(root.dvalue),
        objective: result.center.objective,
        certified: result.exact_certified,
        exact,
        lp_ms,
        alg_ms,
        exact_ms,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Summarises one batch. `instances` must be ordered by index.
pub fn summarize(m: usize, n: usize, instances: Vec<InstanceOutcome>) -> BenchRow {
    let batch = instances.len();
    let timed = if batch > 1 { &instances[1..] } else { &instances[..] };
    let exact_all: Option<Vec<usize>> = instances.iter().map(|o| o.exact).collect();
    let exact_ms_all: Option<Vec<f64>> = timed.iter().map(|o| o.exact_ms).collect();
    BenchRow {
        m,
        n,
        batch,
        lp_avg: mean(instances.iter().map(|o| o.lp_bound as f64)),
        alg_avg: mean(instances.iter().map(|o| o.objective as f64)),
        exact_avg: exact_all.map(|v| mean(v.into_iter().map(|x| x as f64))),
        max_dist_error: instances.iter().map(InstanceOutcome::dist_error).fold(0.0, f64::max),
        lp_ms: mean(timed.iter().map(|o| o.lp_ms)),
        alg_ms: mean(timed.iter().map(|o| o.alg_ms)),
        exact_ms: exact_ms_all.map(|v| mean(v.into_iter())),
        instances,
    }
}

/// Runs every `(m, n)` pair in flag order; instances are spread over `cfg.exec`.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.batch == 0 {
        return Err(Error::InvalidArgument("batch must be at least 1".into()));
    }
    let pairs: Vec<(usize, usize)> = cfg
        .m_list
        .iter()
        .flat_map(|&m| cfg.n_list.iter().map(move |&n| (m, n)))
        .collect();
    let jobs: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(m, n)| (0..cfg.batch).map(move |i| (m, n, i)))
        .collect();
    let outcomes = cfg.exec.map(jobs, |(m, n, i)| run_instance(cfg, m, n, i));
    let mut outcomes = outcomes.into_iter();
    pairs
        .into_iter()
        .map(|(m, n)| {
            let batch = outcomes.by_ref().take(cfg.batch).collect::<Result<Vec<_>>>()?;
            Ok(summarize(m, n, batch))
        })
        .collect()
}

/// Renders rows as CSV. Timing columns are left empty when `timings` is false,
/// which makes the output reproducible byte for byte.
pub fn to_csv(rows: &[BenchRow], timings: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>, prec: usize| v.map(|x| format!("{x:.prec$}")).unwrap_or_default();
    for r in rows {
        let (lp_ms, alg_ms, exact_ms) = if timings {
            (format!("{:.1}", r.lp_ms), format!("{:.1}", r.alg_ms), opt(r.exact_ms, 1))
        } else {
            Default::default()
        };
        let _ = writeln!(
            out,
            "{},{},{},{:.2},{:.2},{},{:.2},{},{},{}",
            r.m,
            r.n,
            r.batch,
            r.lp_avg,
            r.alg_avg,
            opt(r.exact_avg, 2),
            r.max_dist_error,
            lp_ms,
            alg_ms,
            exact_ms
        );
    }
    out
}
