//! Exact solvers used as oracles and as the benchmark baseline.
//!
//! Both searches only consider, at each position, the symbols that occur in
//! that column. Swapping an out-of-column symbol for any in-column one never
//! increases a distance, so some optimum always lives in that restricted
//! space.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{build_csp_lp, lp_lower_bound, solve_lp, Fixings, LpStatus};
use crate::string::{CenterString, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proof {
    Enumeration,
    BranchAndBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub center: CenterString,
    pub optimum: usize,
    pub nodes_explored: u64,
    pub proof: Proof,
    /// False when the search stopped on its time limit; `optimum` is then
    /// only the best objective found.
    pub certified: bool,
}

/// Number of column-restricted centers, saturating at `u128::MAX`.
pub fn search_space(inst: &Instance) -> u128 {
    (0..inst.n()).fold(1u128, |acc, j| {
        acc.saturating_mul(inst.column_symbols(j).len() as u128)
    })
}

/// Enumerates every column-restricted center and returns the first optimum
/// in lexicographic (alphabet) order.
pub fn brute_force_center(inst: &Instance, node_limit: u128) -> Result<ExactResult> {
    let required = search_space(inst);
    if required > node_limit {
        return Err(Error::Capacity {
            required,
            limit: node_limit,
        });
    }
    let columns: Vec<Vec<usize>> = (0..inst.n()).map(|j| inst.column_symbols(j)).collect();
    let mut state = Enumerate {
        codes: inst.all_codes(),
        columns: &columns,
        dist: vec![0; inst.m()],
        current: vec![0; inst.n()],
        best: Vec::new(),
        best_objective: usize::MAX,
        leaves: 0,
    };
    state.visit(0);
    let center = inst.evaluate_codes(&state.best);
    Ok(ExactResult {
        optimum: center.objective,
        center,
        nodes_explored: state.leaves,
        proof: Proof::Enumeration,
        certified: true,
    })
}

struct Enumerate<'a> {
    codes: &'a [Vec<usize>],
    columns: &'a [Vec<usize>],
    dist: Vec<usize>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_objective: usize,
    leaves: u64,
}

impl Enumerate<'_> {
    fn visit(&mut self, j: usize) {
        if j == self.current.len() {
            self.leaves += 1;
            let objective = self.dist.iter().copied().max().unwrap_or(0);
            if objective < self.best_objective {
                self.best_objective = objective;
                self.best = self.current.clone();
            }
            return;
        }
        for idx in 0..self.columns[j].len() {
            let a = self.columns[j][idx];
            self.current[j] = a;
            for (d, row) in self.dist.iter_mut().zip(self.codes) {
                *d += usize::from(row[j] != a);
            }
            self.visit(j + 1);
            for (d, row) in self.dist.iter_mut().zip(self.codes) {
                *d -= usize::from(row[j] != a);
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BnbOptions {
    pub time_limit: Option<Duration>,
    /// Solve the root relaxation and stop as soon as the incumbent meets its ceiling.
    pub lp_root_bound: bool,
}

impl Default for BnbOptions {
    fn default() -> Self {
        BnbOptions {
            time_limit: None,
            lp_root_bound: true,
        }
    }
}

/// Depth-first branch and bound with the root LP bound enabled.
pub fn branch_and_bound(inst: &Instance, time_limit: Duration) -> ExactResult {
    branch_and_bound_with(
        inst,
        &BnbOptions {
            time_limit: Some(time_limit),
            lp_root_bound: true,
        },
    )
}

/// Depth-first search over positions in order. A node is pruned as soon as
/// any string's partial mismatch count reaches the incumbent. The initial
/// incumbent is the best input string used as a center.
pub fn branch_and_bound_with(inst: &Instance, opts: &BnbOptions) -> ExactResult {
    let start = Instant::now();
    let m = inst.m();

    let mut best: Vec<usize> = inst.codes(0).to_vec();
    let mut best_objective = usize::MAX;
    for i in 0..m {
        let objective = inst.evaluate_codes(inst.codes(i)).objective;
        if objective < best_objective {
            best_objective = objective;
            best = inst.codes(i).to_vec();
        }
    }

    let lower = if opts.lp_root_bound && best_objective > 0 {
        let sol = solve_lp(&build_csp_lp(inst, &Fixings::new()).expect("unfixed model is valid"));
        if sol.status == LpStatus::Optimal {
            lp_lower_bound(&sol).unwrap_or(0)
        } else {
            0
        }
    } else {
        0
    };

    // Children by descending column frequency, ties to alphabet order.
    let order: Vec<Vec<usize>> = (0..inst.n())
        .map(|j| {
            let mut counts = vec![0usize; inst.alphabet().len()];
            for row in inst.all_codes() {
                counts[row[j]] += 1;
            }
            let mut syms = inst.column_symbols(j);
            syms.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
            syms
        })
        .collect();

    let mut search = Search {
        codes: inst.all_codes(),
        order: &order,
        dist: vec![0; m],
        current: vec![0; inst.n()],
        best,
        best_objective,
        lower,
        nodes: 0,
        deadline: opts.time_limit.map(|t| start + t),
        timed_out: false,
    };
    if search.best_objective > search.lower {
        search.visit(0);
    }

    let center = inst.evaluate_codes(&search.best);
    ExactResult {
        optimum: center.objective,
        center,
        nodes_explored: search.nodes,
        proof: Proof::BranchAndBound,
        certified: !search.timed_out,
    }
}

struct Search<'a> {
    codes: &'a [Vec<usize>],
    order: &'a [Vec<usize>],
    dist: Vec<usize>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_objective: usize,
    lower: usize,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_> {
    fn finished(&self) -> bool {
        self.timed_out || self.best_objective <= self.lower
    }

    fn visit(&mut self, j: usize) {
        self.nodes += 1;
        if self.nodes % 4096 == 1 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out = true;
                }
            }
        }
        if self.finished() {
            return;
        }
        if j == self.current.len() {
            // Every partial count is below the incumbent here.
            self.best_objective = self.dist.iter().copied().max().unwrap_or(0);
            self.best.copy_from_slice(&self.current);
            return;
        }
        for idx in 0..self.order[j].len() {
            let a = self.order[j][idx];
            let mut feasible = true;
            for (d, row) in self.dist.iter_mut().zip(self.codes) {
                if row[j] != a {
                    *d += 1;
                    feasible &= *d < self.best_objective;
                }
            }
            if feasible {
                self.current[j] = a;
                self.visit(j + 1);
            }
            for (d, row) in self.dist.iter_mut().zip(self.codes) {
                *d -= usize::from(row[j] != a);
            }
            if self.finished() {
                return;
            }
        }
    }
}
