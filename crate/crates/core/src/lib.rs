//! Riffle-shuffle sampling and verification toolkit.
//!
//! The crate is organized in layers:
//!
//! * [`perm`] / [`stats`] — permutation and word value types plus the
//!   statistic kernels (descents, inversions, longest alternating
//!   subsequence, local extrema, ranks).
//! * [`rng`] / [`prob`] / [`shuffle`] — seedable, stream-splittable samplers
//!   for every shuffle model: multi-pile riffles (biased or not), the
//!   coupled inverse-shuffle construction, uniform permutations, ordered
//!   top-m-to-random shuffles, pile-size-constrained riffles, and
//!   convolutions of models.
//! * [`moments`] — closed-form means and variances used to standardize
//!   statistics for normality checks.
//! * [`poly`] / [`oracle`] — exact distributions at small deck sizes, by
//!   direct enumeration and by two independent polynomial/DP routes, all in
//!   big-rational arithmetic. These are the ground truth the samplers and
//!   formulas are checked against.
//! * [`analysis`] — the Monte Carlo engine and statistical verdicts:
//!   Kolmogorov distance to the normal, total-variation distances and
//!   bounds, convergence-rate checks, stochastic-dominance checks,
//!   per-sample coupling verification, and a concentration tail check.
//!
//! Everything randomized takes an explicit [`rng::RngStream`], so results
//! are reproducible bit-for-bit given `(master_seed, stream_index)`.

pub mod analysis;
pub mod moments;
pub mod normal;
pub mod oracle;
pub mod perm;
pub mod poly;
pub mod prob;
pub mod rng;
pub mod shuffle;
pub mod stats;

pub use perm::{Permutation, Word};
pub use prob::ProbabilityVector;
pub use rng::RngStream;
pub use shuffle::{CoupledSample, ShuffleModel};
pub use stats::StatisticKind;
