//! Solvers for the closest string problem: given `m` strings of length `n`,
//! find a center string minimising the largest Hamming distance to them.
//!
//! The heuristics solve the LP relaxation of the 0-1 integer program with a
//! bounded-variable simplex and round it iteratively, fixing the most
//! confident positions and re-solving until every position is set
//! ([`rounding`]). Exhaustive enumeration and a depth-first branch and bound
//! ([`exact`]) provide exact optima for verification and comparison.
//!
//! With the default `parallel` feature, batch evaluation and Algorithm C
//! restarts run on the rayon pool; disable it for a purely sequential build.

pub mod bench;
pub mod error;
pub mod exact;
pub mod exec;
pub mod instances;
pub mod lp;
pub mod rounding;
pub mod string;

pub use error::{Error, Result};
pub use exact::{brute_force_center, branch_and_bound, ExactResult};
pub use exec::Execution;
pub use instances::{generate_uniform, parse_instance, serialize_instance, GeneratorConfig};
pub use lp::{build_csp_lp, lp_lower_bound, solve_lp, LpModel, LpSolution, LpStatus};
pub use rounding::{algorithm_a, algorithm_b, algorithm_c, RoundingResult, RoundingTrace};
pub use string::{hamming_distance, objective, validate_instance, Alphabet, CenterString, Instance};
