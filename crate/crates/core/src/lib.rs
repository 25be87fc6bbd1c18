//! Consecutive-integer representations and staircase rebuilding.
//!
//! Every positive integer `N` has exactly one representation `a + (a+1) + ... + b`
//! per odd divisor of `N` (see [`runs::enumerate_runs`]). When `N = 1 + 2 + ... + n`
//! is triangular, [`constructor::solve`] splits `{1..n}` into disjoint blocks, one per
//! term `t` of a chosen representation, where each block sums to `t`.
//!
//! [`oracle`] holds an independent verifier and an exhaustive enumerator used to
//! check the constructor, and [`render`] draws both tableaux as text.

pub mod constructor;
pub mod error;
pub mod oracle;
pub mod partition;
pub mod render;
pub mod runs;
pub mod selftest;

pub use constructor::{layer, lemma2_pairs, peel, solve, DifferencePairs, LayerTrace};
pub use error::{Error, Result};
pub use oracle::{count_runs_bruteforce, enumerate_all, verify, EnumerateOptions, VerifyReport};
pub use partition::Partition;
pub use runs::{ConsecutiveRun, Instance};
