//! The LP relaxation of the closest string integer program.
//!
//! Variables are `x(a, j)` for every symbol `a` and position `j`, plus the
//! radius `d`:
//!
//! ```text
//! min d
//!   sum_a x(a, j) = 1                    for every position j
//!   n - sum_j x(s_i[j], j) <= d          for every string i
//!   0 <= x(a, j) <= 1,  d >= 0
//! ```
//!
//! Fixed positions are pinned through their bounds. The solver substitutes
//! pinned variables out before running the simplex, so variable indices stay
//! the same across the re-solves of iterative rounding.

pub mod simplex;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::string::Instance;

pub use simplex::{EPS, PIVOT_TOL};

/// Position to symbol assignments, keyed by 0-based position.
pub type Fixings = BTreeMap<usize, char>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    /// `lhs >= rhs`
    Ge,
}

/// A row of the model: `sum(coef * var) sense rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// The relaxation of one (sub-)instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpModel {
    n: usize,
    k: usize,
    codes: Vec<Vec<usize>>,
    fixed: Vec<Option<usize>>,
}

impl LpModel {
    /// Builds a model from symbol-index fixings, one entry per position.
    pub fn with_fixed_codes(inst: &Instance, fixed: &[Option<usize>]) -> Result<Self> {
        if fixed.len() != inst.n() {
            return Err(Error::InvalidArgument(format!(
                "fixings cover {} positions, instance has {}",
                fixed.len(),
                inst.n()
            )));
        }
        let k = inst.alphabet().len();
        if let Some(bad) = fixed.iter().flatten().find(|&&a| a >= k) {
            return Err(Error::InvalidArgument(format!("symbol index {bad} out of range")));
        }
        Ok(LpModel {
            n: inst.n(),
            k,
            codes: inst.all_codes().to_vec(),
            fixed: fixed.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.codes.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn num_vars(&self) -> usize {
        self.n * self.k + 1
    }

    /// Index of `x(a, j)`.
    pub fn x_var(&self, position: usize, symbol: usize) -> usize {
        position * self.k + symbol
    }

    /// Index of `d`.
    pub fn d_var(&self) -> usize {
        self.n * self.k
    }

    pub fn fixed(&self) -> &[Option<usize>] {
        &self.fixed
    }

    pub fn num_fixed(&self) -> usize {
        self.fixed.iter().flatten().count()
    }

    /// `(lower, upper)` bounds; pinned variables have `lower == upper`.
    pub fn bounds(&self, var: usize) -> (f64, f64) {
        if var == self.d_var() {
            return (0.0, f64::INFINITY);
        }
        let (j, a) = (var / self.k, var % self.k);
        match self.fixed[j] {
            Some(b) if b == a => (1.0, 1.0),
            Some(_) => (0.0, 0.0),
            None => (0.0, 1.0),
        }
    }

    /// All rows: one equality per position, then one `>=` row per string
    /// (`sum_j x(s_i[j], j) + d >= n`).
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut rows = Vec::with_capacity(self.n + self.m());
        for j in 0..self.n {
            rows.push(Constraint {
                terms: (0..self.k).map(|a| (self.x_var(j, a), 1.0)).collect(),
                sense: Sense::Eq,
                rhs: 1.0,
            });
        }
        for row in &self.codes {
            let mut terms: Vec<(usize, f64)> =
                row.iter().enumerate().map(|(j, &a)| (self.x_var(j, a), 1.0)).collect();
            terms.push((self.d_var(), 1.0));
            rows.push(Constraint {
                terms,
                sense: Sense::Ge,
                rhs: self.n as f64,
            });
        }
        rows
    }
}

/// Builds the relaxation of `inst` with `fixed` positions pinned.
pub fn build_csp_lp(inst: &Instance, fixed: &Fixings) -> Result<LpModel> {
    let mut codes = vec![None; inst.n()];
    for (&j, &c) in fixed {
        if j >= inst.n() {
            return Err(Error::InvalidArgument(format!(
                "fixed position {j} outside 0..{}",
                inst.n()
            )));
        }
        let a = inst.alphabet().index_of(c).ok_or_else(|| {
            Error::InvalidArgument(format!("fixed symbol {c:?} not in alphabet"))
        })?;
        codes[j] = Some(a);
    }
    LpModel::with_fixed_codes(inst, &codes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    NumericFailure,
}

/// The fractional optimum of an [`LpModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// `x(a, j)` at index `j * alphabet_size + a`. Empty unless optimal.
    pub values: Vec<f64>,
    pub alphabet_size: usize,
    pub dvalue: f64,
    pub status: LpStatus,
    pub iterations: usize,
}

impl LpSolution {
    pub fn value(&self, position: usize, symbol: usize) -> f64 {
        self.values[position * self.alphabet_size + symbol]
    }

    /// Fractional values at one position, indexed by symbol.
    pub fn position(&self, position: usize) -> &[f64] {
        let k = self.alphabet_size;
        &self.values[position * k..(position + 1) * k]
    }

    fn failed(model: &LpModel, status: LpStatus, iterations: usize) -> Self {
        LpSolution {
            values: Vec::new(),
            alphabet_size: model.k,
            dvalue: f64::NAN,
            status,
            iterations,
        }
    }
}

/// Solves the relaxation with the bounded-variable simplex.
///
/// Starting basis: at every free position the most frequent column symbol
/// (ties to alphabet order) is basic at 1, every string row has its surplus
/// basic, and `d` starts at its upper bound `max_i(unpinned mismatches)`.
pub fn solve_lp(model: &LpModel) -> LpSolution {
    let n = model.n;
    let k = model.k;
    let m = model.m();

    let free: Vec<usize> = (0..n).filter(|&j| model.fixed[j].is_none()).collect();
    let f = free.len();

    // Right-hand side of each string row once pinned positions are constants.
    let rhs: Vec<f64> = model
        .codes
        .iter()
        .map(|row| {
            let matched = (0..n).filter(|&j| model.fixed[j] == Some(row[j])).count();
            (n - matched) as f64
        })
        .collect();
    let d_upper = rhs.iter().copied().fold(0.0, f64::max);

    let rows = f + m;
    let d_col = f * k;
    let cols = d_col + 1 + m;
    let mut a = vec![0.0; rows * cols];
    let mut b = vec![0.0; rows];
    let mut basis = Vec::with_capacity(rows);
    for (p, &j) in free.iter().enumerate() {
        for s in 0..k {
            a[p * cols + p * k + s] = 1.0;
        }
        b[p] = 1.0;
        let mut counts = vec![0usize; k];
        for row in &model.codes {
            counts[row[j]] += 1;
        }
        let best = (0..k).fold(0, |best, s| if counts[s] > counts[best] { s } else { best });
        basis.push(p * k + best);
    }
    for (i, row) in model.codes.iter().enumerate() {
        let r = f + i;
        for (p, &j) in free.iter().enumerate() {
            a[r * cols + p * k + row[j]] = 1.0;
        }
        a[r * cols + d_col] = 1.0;
        a[r * cols + d_col + 1 + i] = -1.0;
        b[r] = rhs[i];
        basis.push(d_col + 1 + i);
    }
    let mut c = vec![0.0; cols];
    c[d_col] = 1.0;
    let mut upper = vec![1.0; cols];
    upper[d_col] = d_upper;
    for u in &mut upper[d_col + 1..] {
        *u = f64::INFINITY;
    }

    let lp = simplex::BoundedLp {
        rows,
        cols,
        a,
        b,
        c,
        lower: vec![0.0; cols],
        upper,
        basis,
        at_upper: vec![d_col],
    };
    let max_iterations = 50 * (rows + cols) + 1000;
    let res = simplex::solve(&lp, max_iterations);
    if res.outcome != simplex::Outcome::Optimal {
        return LpSolution::failed(model, LpStatus::NumericFailure, res.iterations);
    }

    let mut values = vec![0.0; n * k];
    for (j, fixed) in model.fixed.iter().enumerate() {
        if let Some(s) = fixed {
            values[j * k + s] = 1.0;
        }
    }
    for (p, &j) in free.iter().enumerate() {
        values[j * k..(j + 1) * k].copy_from_slice(&res.x[p * k..(p + 1) * k]);
    }
    let sol = LpSolution {
        values,
        alphabet_size: k,
        dvalue: res.x[d_col],
        status: LpStatus::Optimal,
        iterations: res.iterations,
    };
    if verify(model, &sol) {
        sol
    } else {
        LpSolution::failed(model, LpStatus::NumericFailure, res.iterations)
    }
}

/// Checks feasibility within [`EPS`] and that `d` equals the largest string
/// deficit, which holds at any optimum.
fn verify(model: &LpModel, sol: &LpSolution) -> bool {
    let n = model.n as f64;
    if sol.dvalue.is_nan() || sol.dvalue < -EPS {
        return false;
    }
    for j in 0..model.n {
        let sum: f64 = sol.position(j).iter().sum();
        if (sum - 1.0).abs() > EPS {
            return false;
        }
        for (s, &v) in sol.position(j).iter().enumerate() {
            let (lo, hi) = model.bounds(model.x_var(j, s));
            if v < lo - EPS || v > hi + EPS {
                return false;
            }
        }
    }
    let worst = model
        .codes
        .iter()
        .map(|row| n - row.iter().enumerate().map(|(j, &a)| sol.value(j, a)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    worst <= sol.dvalue + EPS && (sol.dvalue - worst.max(0.0)).abs() <= EPS
}

/// Integer lower bound `ceil(dvalue - EPS)` on the closest string radius.
pub fn lp_lower_bound(sol: &LpSolution) -> Result<usize> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::InvalidState(format!(
            "LP status is {:?}, not optimal",
            sol.status
        )));
    }
    Ok(ceil_guarded(sol.dvalue))
}

pub(crate) fn ceil_guarded(value: f64) -> usize {
    (value - EPS).ceil().max(0.0) as usize
}
