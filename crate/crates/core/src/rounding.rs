//! Iterative rounding of the LP relaxation.
//!
//! * [`algorithm_a`] fixes one position per LP solve: the unfixed position
//!   holding the largest fractional value.
//! * [`algorithm_b`] fixes every unfixed position with a value at or above a
//!   threshold in one go, falling back to the single-argmax rule when no
//!   value qualifies.
//! * [`algorithm_c`] runs B, and unless the result meets the LP ceiling,
//!   restarts B from the least confident argmax fixes with their runner-up
//!   symbol forced, keeping the best center found.
//!
//! Ties are broken by lowest position, then alphabet order.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lp::{ceil_guarded, solve_lp, LpModel, LpStatus};
use crate::string::{CenterString, Instance};

/// Slack applied to threshold comparisons.
const THRESHOLD_SLACK: f64 = 1e-9;
/// Values closer than this are treated as tied in argmax selection.
const TIE_TOL: f64 = 1e-9;

pub const DEFAULT_THETA: f64 = 0.9;
pub const DEFAULT_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Threshold,
    Argmax,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fix {
    pub position: usize,
    pub symbol: char,
    pub value: f64,
    pub branch: Branch,
}

/// One LP solve and the fixes it produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingIteration {
    pub dvalue: f64,
    pub fixes: Vec<Fix>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RoundingTrace {
    /// A position forced before the first LP solve (Algorithm C restarts).
    pub seed_fix: Option<(usize, char)>,
    pub iterations: Vec<RoundingIteration>,
    /// Fractional value of the chosen symbol, for argmax-branch fixes.
    pub first: BTreeMap<usize, f64>,
    /// Runner-up symbol at fix time, for argmax-branch fixes.
    pub second: BTreeMap<usize, char>,
}

impl RoundingTrace {
    pub fn lp_solves(&self) -> usize {
        self.iterations.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingResult {
    pub center: CenterString,
    /// `ceil` of the unfixed relaxation's optimum.
    pub lp_bound: usize,
    /// The unfixed relaxation's fractional optimum.
    pub lp_value: f64,
    /// Trace of the run that produced `center`.
    pub trace: RoundingTrace,
    /// `center.objective == lp_bound`, which proves optimality.
    pub exact_certified: bool,
    /// Rounding runs performed (1 for A and B; 1 + retries attempted for C).
    pub runs: usize,
    /// LP solves across all runs.
    pub lp_solves: usize,
}

#[derive(Debug, Clone, Copy)]
enum Rule {
    Single,
    Threshold(f64),
}

struct Run {
    center: Vec<usize>,
    trace: RoundingTrace,
    root_dvalue: f64,
}

/// Best symbol at a position and the best among the others.
fn ranked(values: &[f64]) -> (usize, f64, Option<usize>) {
    let mut best = 0;
    for (a, &v) in values.iter().enumerate() {
        if v > values[best] + TIE_TOL {
            best = a;
        }
    }
    let mut runner: Option<usize> = None;
    for (a, &v) in values.iter().enumerate() {
        if a == best {
            continue;
        }
        match runner {
            Some(r) if v <= values[r] + TIE_TOL => {}
            _ => runner = Some(a),
        }
    }
    (best, values[best], runner)
}

fn round(inst: &Instance, mut fixed: Vec<Option<usize>>, rule: Rule) -> Result<Run> {
    let sigma = inst.alphabet();
    let mut trace = RoundingTrace {
        seed_fix: fixed
            .iter()
            .enumerate()
            .find_map(|(j, s)| s.map(|a| (j, sigma.symbol(a)))),
        ..RoundingTrace::default()
    };
    let mut root_dvalue = f64::NAN;

    while fixed.iter().any(Option::is_none) {
        let model = LpModel::with_fixed_codes(inst, &fixed)?;
        let sol = solve_lp(&model);
        if sol.status != LpStatus::Optimal {
            return Err(Error::NumericFailure {
                iterations: sol.iterations,
                partial: Some(Box::new(trace)),
            });
        }
        if trace.iterations.is_empty() {
            root_dvalue = sol.dvalue;
        }

        let mut fixes = Vec::new();
        if let Rule::Threshold(theta) = rule {
            for j in 0..inst.n() {
                if fixed[j].is_some() {
                    continue;
                }
                let (a, v, _) = ranked(sol.position(j));
                if v >= theta - THRESHOLD_SLACK {
                    fixes.push(Fix {
                        position: j,
                        symbol: sigma.symbol(a),
                        value: v,
                        branch: Branch::Threshold,
                    });
                    fixed[j] = Some(a);
                }
            }
        }
        if fixes.is_empty() {
            let mut pick: Option<(usize, usize, f64, Option<usize>)> = None;
            for j in (0..inst.n()).filter(|&j| fixed[j].is_none()) {
                let (a, v, runner) = ranked(sol.position(j));
                match pick {
                    Some((_, _, best, _)) if v <= best + TIE_TOL => {}
                    _ => pick = Some((j, a, v, runner)),
                }
            }
            let (j, a, v, runner) = pick.expect("an unfixed position exists");
            fixed[j] = Some(a);
            trace.first.insert(j, v);
            if let Some(r) = runner {
                trace.second.insert(j, sigma.symbol(r));
            }
            fixes.push(Fix {
                position: j,
                symbol: sigma.symbol(a),
                value: v,
                branch: Branch::Argmax,
            });
        }
        trace.iterations.push(RoundingIteration {
            dvalue: sol.dvalue,
            fixes,
        });
    }

    Ok(Run {
        center: fixed.into_iter().map(|a| a.expect("all positions fixed")).collect(),
        trace,
        root_dvalue,
    })
}

fn finish(inst: &Instance, run: Run, lp_value: f64, runs: usize, lp_solves: usize) -> RoundingResult {
    let center = inst.evaluate_codes(&run.center);
    let lp_bound = ceil_guarded(lp_value);
    RoundingResult {
        exact_certified: center.objective == lp_bound,
        center,
        lp_bound,
        lp_value,
        trace: run.trace,
        runs,
        lp_solves,
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.5 && theta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "threshold must lie in (0.5, 1], got {theta}"
        )))
    }
}

/// One position per LP solve; exactly `n` solves.
pub fn algorithm_a(inst: &Instance) -> Result<RoundingResult> {
    let run = round(inst, vec![None; inst.n()], Rule::Single)?;
    let solves = run.trace.lp_solves();
    let lp_value = run.root_dvalue;
    Ok(finish(inst, run, lp_value, 1, solves))
}

/// Batch rounding at threshold `theta` (the usual choice is 0.9).
pub fn algorithm_b(inst: &Instance, theta: f64) -> Result<RoundingResult> {
    check_theta(theta)?;
    let run = round(inst, vec![None; inst.n()], Rule::Threshold(theta))?;
    let solves = run.trace.lp_solves();
    let lp_value = run.root_dvalue;
    Ok(finish(inst, run, lp_value, 1, solves))
}

/// Algorithm B plus up to `retries` restarts from runner-up symbols, with
/// restarts spread over the default [`Execution`].
pub fn algorithm_c(inst: &Instance, theta: f64, retries: usize) -> Result<RoundingResult> {
    algorithm_c_with(inst, theta, retries, Execution::default())
}

pub fn algorithm_c_with(
    inst: &Instance,
    theta: f64,
    retries: usize,
    exec: Execution,
) -> Result<RoundingResult> {
    check_theta(theta)?;
    if retries == 0 {
        return Err(Error::InvalidArgument("retries must be positive".into()));
    }
    let rule = Rule::Threshold(theta);
    let base = round(inst, vec![None; inst.n()], rule)?;
    let lp_value = base.root_dvalue;
    let bound = ceil_guarded(lp_value);
    let mut solves = base.trace.lp_solves();
    let base_objective = inst.evaluate_codes(&base.center).objective;
    if base_objective == bound {
        return Ok(finish(inst, base, lp_value, 1, solves));
    }

    // Least confident argmax fixes first.
    let mut candidates: Vec<(usize, f64, usize)> = base
        .trace
        .second
        .iter()
        .map(|(&j, &c)| {
            let symbol = inst.alphabet().index_of(c).expect("trace symbols are in the alphabet");
            (j, base.trace.first[&j], symbol)
        })
        .collect();
    candidates.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    candidates.truncate(retries);

    let attempts = exec.map(candidates, |(j, _, symbol)| {
        let mut fixed = vec![None; inst.n()];
        fixed[j] = Some(symbol);
        round(inst, fixed, rule)
    });

    let runs = 1 + attempts.len();
    let mut best = base;
    let mut best_objective = base_objective;
    for attempt in attempts {
        let run = attempt?;
        solves += run.trace.lp_solves();
        let objective = inst.evaluate_codes(&run.center).objective;
        if objective < best_objective {
            best_objective = objective;
            best = run;
        }
    }
    Ok(finish(inst, best, lp_value, runs, solves))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(rows: &[&str]) -> Instance {
        Instance::from_strs(rows).unwrap()
    }

    fn every_position_fixed_once(r: &RoundingResult, n: usize) {
        let mut seen = vec![0usize; n];
        if let Some((j, _)) = r.trace.seed_fix {
            seen[j] += 1;
        }
        for it in &r.trace.iterations {
            for fix in &it.fixes {
                seen[fix.position] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1), "{seen:?}");
    }

    #[test]
    fn a_on_complementary_pair() {
        let r = algorithm_a(&inst(&["00", "11"])).unwrap();
        assert_eq!(r.center.objective, 1);
        assert_eq!(r.lp_solves, 2);
        every_position_fixed_once(&r, 2);
    }

    #[test]
    fn a_breaks_ties_by_alphabet() {
        let r = algorithm_a(&inst(&["0", "1"])).unwrap();
        assert_eq!(r.center.as_string(), "0");
        assert_eq!(r.center.objective, 1);
        assert!(r.exact_certified);
        assert_eq!(r.trace.second[&0], '1');
        assert!((r.trace.first[&0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn a_on_identical_strings() {
        let r = algorithm_a(&inst(&["GATC", "GATC", "GATC"])).unwrap();
        assert_eq!(r.center.as_string(), "GATC");
        assert_eq!(r.center.objective, 0);
        assert_eq!(r.lp_solves, 4);
    }

    #[test]
    fn b_fixes_identical_strings_in_one_batch() {
        let r = algorithm_b(&inst(&["ACGTA", "ACGTA"]), 0.9).unwrap();
        assert_eq!(r.lp_solves, 1);
        assert_eq!(r.trace.iterations[0].fixes.len(), 5);
        assert!(r.trace.iterations[0]
            .fixes
            .iter()
            .all(|f| f.branch == Branch::Threshold));
        assert_eq!(r.center.objective, 0);
        assert!(r.trace.first.is_empty());
    }

    #[test]
    fn b_falls_back_to_argmax() {
        let r = algorithm_b(&inst(&["0", "1"]), 0.9).unwrap();
        assert_eq!(r.trace.iterations[0].fixes[0].branch, Branch::Argmax);
        assert_eq!(r.center.as_string(), "0");
        assert_eq!(r.center.objective, 1);
    }

    #[test]
    fn theta_range_checked() {
        let i = inst(&["0", "1"]);
        for bad in [0.4, 0.5, 1.2, f64::NAN] {
            assert!(matches!(algorithm_b(&i, bad), Err(Error::InvalidArgument(_))));
            assert!(matches!(algorithm_c(&i, bad, 8), Err(Error::InvalidArgument(_))));
        }
        assert!(algorithm_b(&i, 1.0).is_ok());
        assert!(matches!(algorithm_c(&i, 0.9, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn c_exits_early_when_certified() {
        let i = inst(&["ACGT", "ACGA", "ACCT"]);
        let b = algorithm_b(&i, 0.9).unwrap();
        assert!(b.exact_certified);
        let c = algorithm_c(&i, 0.9, 8).unwrap();
        assert_eq!(c.runs, 1);
        assert_eq!(c.center, b.center);
        assert_eq!(c.trace, b.trace);
    }

    #[test]
    fn c_sequential_and_parallel_agree() {
        let i = inst(&["0110100", "1011001", "0101110", "1100011", "0011101"]);
        let seq = algorithm_c_with(&i, 0.9, 8, Execution::Sequential).unwrap();
        let par = algorithm_c_with(&i, 0.9, 8, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn ranked_prefers_alphabet_order_on_ties() {
        assert_eq!(ranked(&[0.25, 0.25, 0.5]), (2, 0.5, Some(0)));
        assert_eq!(ranked(&[0.5, 0.5]), (0, 0.5, Some(1)));
        assert_eq!(ranked(&[1.0]), (0, 1.0, None));
    }
}
