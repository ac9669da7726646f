//! Exact solver for the Pell equations `x² − d·y² = N`, `N ∈ {1, −1, 4, −4}`.
//!
//! * [`cf`] expands `√d` as a periodic continued fraction and generates convergents.
//! * [`pell`] solves the four equations for any non-square `d`.
//! * [`lucas`] evaluates generalized Fibonacci and Lucas sequences.
//! * [`family`] gives closed forms for `d = a²b² − b` and `d = a²b² − 2b`.
//! * [`oracle`] is the brute-force ground truth and grid cross-checker.
//! * [`cli`] is the command-line front end.

pub mod cf;
pub mod cli;
mod error;
pub mod family;
pub mod lucas;
pub mod oracle;
pub mod pell;
mod ring;

pub use cf::{cf_expand, convergents, family1_cf, family2_cf, is_perfect_square, Convergent, SurdExpansion};
pub use error::{PellError, Result};
pub use family::{corollary_solve, family_fundamental, family_solve, nth_quotient_form, Corollary, Family, FamilyParams, Method, Rhs};
pub use lucas::{binet_pair, u_n, v_n, SequenceParams};
pub use oracle::{brute_force, cross_check, Grid, SearchReport};
pub use pell::{
    compose, fundamental_unit, is_solution, nth_solution, nth_solution_four, nth_solution_negative, solve_four, solve_negative_four,
    solve_negative_one, NoSolutionReason, PellSolution, Sign, Solvability,
};
