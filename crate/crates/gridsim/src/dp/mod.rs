//! Dynamic-programming kernels built on the grid engine.
//!
//! Each kernel decomposes its recurrence into a divide-and-conquer schedule
//! whose cross-range dependency batches are grids: recursion solves the
//! ranges that feed themselves, and grids push finished values into ranges
//! that still need them. All memory traffic flows through the cache
//! simulator, so the returned reports reflect the schedule, not the host.

pub mod accordion;
pub mod gap;
pub mod knapsack2;
pub mod lws;
pub mod parenthesis;
pub mod rna;
pub mod transpose;

pub use accordion::solve_accordion;
pub use gap::{solve_gap, solve_gap_baseline, GapWeights};
pub use knapsack2::solve_knapsack2;
pub use lws::solve_lws;
pub use parenthesis::solve_parenthesis;
pub use rna::solve_rna;
pub use transpose::transpose_merge;
