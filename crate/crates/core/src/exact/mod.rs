//! Exact rational scalars and dense rational matrices.

mod elim;
mod mat;
mod rational;

pub use elim::{echelon, full_rank_factorization, inverse, null_space, rank, solve, Echelon};
pub use mat::Mat;
pub use rational::{format_rational, frac, in_unit_interval, int, is_nonnegative, one, parse_rational, zero, Rational};
