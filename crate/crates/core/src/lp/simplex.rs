//! Dense-tableau primal simplex with explicit variable bounds.
//!
//! Solves `min c·x  s.t.  A x = b,  l <= x <= u` starting from a caller
//! supplied primal-feasible basis. Nonbasic variables sit at one of their
//! bounds; a bound flip replaces the pivot whenever the entering variable
//! reaches its opposite bound first.
//!
//! Entering variable: largest reduced cost (Dantzig). After
//! `2 * (rows + cols)` consecutive degenerate pivots the rule switches to
//! Bland's smallest-index rule, both for entering and leaving, until the
//! objective strictly improves again.

/// Feasibility and optimality tolerance.
pub const EPS: f64 = 1e-6;
/// Smallest tableau entry accepted as a pivot.
pub const PIVOT_TOL: f64 = 1e-9;

/// Entries below this magnitude are flushed to zero after each pivot.
const DROP_TOL: f64 = 1e-12;
const RATIO_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
    /// The supplied starting basis was singular or infeasible.
    BadStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// Result of a simplex run. `x` is meaningful only for `Outcome::Optimal`.
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub outcome: Outcome,
    pub x: Vec<f64>,
    pub iterations: usize,
    pub bland_pivots: usize,
}

/// A problem in equality form with a starting basis.
#[derive(Debug, Clone)]
pub struct BoundedLp {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows x cols` constraint matrix.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub lower: Vec<f64>,
    /// `f64::INFINITY` for variables without an upper bound.
    pub upper: Vec<f64>,
    /// Basic variable of each row.
    pub basis: Vec<usize>,
    /// Nonbasic variables starting at their upper bound (the rest start at lower).
    pub at_upper: Vec<usize>,
}

struct Tableau {
    cols: usize,
    /// `(rows + 1) x cols`; the last row holds reduced costs.
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<State>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Tableau {
    fn row(&self, r: usize) -> &[f64] {
        &self.t[r * self.cols..(r + 1) * self.cols]
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.cols + c]
    }

    /// Gauss-Jordan pivot on `(pr, pc)` across all rows including the cost row.
    fn pivot(&mut self, pr: usize, pc: usize) {
        let cols = self.cols;
        let inv = 1.0 / self.at(pr, pc);
        {
            let prow = &mut self.t[pr * cols..(pr + 1) * cols];
            for v in prow.iter_mut() {
                *v *= inv;
                if v.abs() < DROP_TOL {
                    *v = 0.0;
                }
            }
            prow[pc] = 1.0;
        }
        let (head, tail) = self.t.split_at_mut(pr * cols);
        let (prow, rest) = tail.split_at_mut(cols);
        let nz: Vec<usize> = (0..cols).filter(|&j| prow[j] != 0.0).collect();
        let mut eliminate = |row: &mut [f64]| {
            let f = row[pc];
            if f == 0.0 {
                return;
            }
            for &j in &nz {
                let v = row[j] - f * prow[j];
                row[j] = if v.abs() < DROP_TOL { 0.0 } else { v };
            }
            row[pc] = 0.0;
        };
        head.chunks_exact_mut(cols).for_each(&mut eliminate);
        rest.chunks_exact_mut(cols).for_each(&mut eliminate);
    }

    fn value_of_nonbasic(&self, j: usize) -> f64 {
        match self.state[j] {
            State::AtUpper => self.upper[j],
            _ => self.lower[j],
        }
    }
}

/// Runs the simplex method from the given starting basis.
pub fn solve(lp: &BoundedLp, max_iterations: usize) -> SimplexResult {
    solve_with(lp, max_iterations, 2 * (lp.rows + lp.cols))
}

fn solve_with(lp: &BoundedLp, max_iterations: usize, degenerate_limit: usize) -> SimplexResult {
    let rows = lp.rows;
    let cols = lp.cols;
    let fail = |outcome| SimplexResult {
        outcome,
        x: Vec::new(),
        iterations: 0,
        bland_pivots: 0,
    };
    if lp.basis.len() != rows {
        return fail(Outcome::BadStart);
    }

    let mut state = vec![State::AtLower; cols];
    for &j in &lp.at_upper {
        if !lp.upper[j].is_finite() {
            return fail(Outcome::BadStart);
        }
        state[j] = State::AtUpper;
    }
    let mut t = Vec::with_capacity((rows + 1) * cols);
    t.extend_from_slice(&lp.a);
    t.extend_from_slice(&lp.c);
    let mut tab = Tableau {
        cols,
        t,
        beta: vec![0.0; rows],
        basis: lp.basis.clone(),
        state,
        lower: lp.lower.clone(),
        upper: lp.upper.clone(),
    };

    // Right-hand side after moving nonbasic variables to their bounds.
    let mut rhs = lp.b.clone();
    for j in 0..cols {
        if lp.basis.contains(&j) {
            continue;
        }
        let v = tab.value_of_nonbasic(j);
        if v != 0.0 {
            for (r, rv) in rhs.iter_mut().enumerate() {
                *rv -= lp.a[r * cols + j] * v;
            }
        }
    }

    // Bring the starting basis into canonical form, carrying the rhs along.
    for r in 0..rows {
        let pc = tab.basis[r];
        let p = tab.at(r, pc);
        if p.abs() < PIVOT_TOL {
            return fail(Outcome::BadStart);
        }
        let inv = 1.0 / p;
        rhs[r] *= inv;
        for k in 0..rows {
            if k != r {
                let f = tab.at(k, pc);
                if f != 0.0 {
                    rhs[k] -= f * (rhs[r]);
                }
            }
        }
        // rhs[r] already scaled; tableau pivot scales its row and eliminates
        // the column everywhere else, including the cost row.
        tab.pivot(r, pc);
        tab.state[pc] = State::Basic(r);
    }
    for r in 0..rows {
        let j = tab.basis[r];
        if rhs[r] < lp.lower[j] - EPS || rhs[r] > lp.upper[j] + EPS {
            return fail(Outcome::BadStart);
        }
    }
    tab.beta = rhs;

    let mut degenerate_run = 0usize;
    let mut bland_pivots = 0usize;
    let mut iterations = 0usize;

    loop {
        let bland = degenerate_run >= degenerate_limit;

        // Pricing.
        let cost = tab.row(rows);
        let mut entering: Option<(usize, f64)> = None;
        for j in 0..cols {
            let score = match tab.state[j] {
                State::Basic(_) => continue,
                State::AtLower if cost[j] < -EPS => -cost[j],
                State::AtUpper if cost[j] > EPS => cost[j],
                _ => continue,
            };
            if tab.upper[j] - tab.lower[j] <= 0.0 {
                continue;
            }
            match entering {
                None => entering = Some((j, score)),
                Some((_, best)) if !bland && score > best => entering = Some((j, score)),
                _ => {}
            }
            if bland {
                break;
            }
        }
        let Some((e, _)) = entering else {
            break;
        };

        if iterations >= max_iterations {
            return SimplexResult {
                outcome: Outcome::IterationLimit,
                x: Vec::new(),
                iterations,
                bland_pivots,
            };
        }
        iterations += 1;
        if bland {
            bland_pivots += 1;
        }

        let dir = if tab.state[e] == State::AtLower { 1.0 } else { -1.0 };

        // Ratio test. `delta[r]` is the rate of change of basic variable r.
        let mut step = tab.upper[e] - tab.lower[e];
        let mut leave: Option<(usize, bool)> = None; // (row, leaves at upper)
        for r in 0..rows {
            let alpha = tab.at(r, e);
            if alpha.abs() < PIVOT_TOL {
                continue;
            }
            let delta = -dir * alpha;
            let j = tab.basis[r];
            let (limit, to_upper) = if delta < 0.0 {
                ((tab.beta[r] - tab.lower[j]) / -delta, false)
            } else if tab.upper[j].is_finite() {
                ((tab.upper[j] - tab.beta[r]) / delta, true)
            } else {
                continue;
            };
            let limit = limit.max(0.0);
            let better = match leave {
                _ if limit < step - RATIO_TIE => true,
                None => false,
                Some((lr, _)) if limit <= step + RATIO_TIE => {
                    if bland {
                        j < tab.basis[lr]
                    } else {
                        alpha.abs() > tab.at(lr, e).abs()
                    }
                }
                _ => false,
            };
            if better {
                step = limit;
                leave = Some((r, to_upper));
            }
        }
        if !step.is_finite() {
            return SimplexResult {
                outcome: Outcome::Unbounded,
                x: Vec::new(),
                iterations,
                bland_pivots,
            };
        }

        for r in 0..rows {
            let alpha = tab.at(r, e);
            if alpha != 0.0 {
                tab.beta[r] -= dir * alpha * step;
            }
        }
        let entering_value = tab.value_of_nonbasic(e) + dir * step;

        if step <= DROP_TOL {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }

        match leave {
            None => {
                tab.state[e] = if dir > 0.0 { State::AtUpper } else { State::AtLower };
            }
            Some((r, to_upper)) => {
                let out = tab.basis[r];
                tab.state[out] = if to_upper { State::AtUpper } else { State::AtLower };
                tab.pivot(r, e);
                tab.basis[r] = e;
                tab.state[e] = State::Basic(r);
                tab.beta[r] = entering_value;
            }
        }
    }

    let mut x = vec![0.0; cols];
    for (j, xj) in x.iter_mut().enumerate() {
        *xj = match tab.state[j] {
            State::Basic(r) => tab.beta[r].clamp(tab.lower[j], tab.upper[j]),
            _ => tab.value_of_nonbasic(j),
        };
    }
    SimplexResult {
        outcome: Outcome::Optimal,
        x,
        iterations,
        bland_pivots,
    }
}
