//! Cache-oblivious divide-and-conquer kernels over an instrumented
//! ideal-cache simulator, with read/write-asymmetric cost accounting.
//!
//! The crate has four layers:
//!
//! * [`sim`] — a fully associative, exact-LRU cache simulator with
//!   write-back/write-allocate semantics and a stack allocator. Every read
//!   and write of simulated memory flows through it, so transfer counts are
//!   exact, deterministic, and reproducible.
//! * [`grid`] — the k-dimensional grid computation engine: a recursive
//!   divide-and-conquer evaluator whose split rule can be biased against
//!   output writes when writes cost more than reads, plus a buffered
//!   variant that trades extra merge work for a short critical path.
//! * [`dp`] and [`linalg`] — dynamic-programming and linear-algebra kernels
//!   built by composing grid computations: least-weight subsequence, a
//!   two-source edit-style recurrence, a pairing recurrence with 4-index
//!   weights, optimal parenthesization, a two-choice knapsack, an
//!   accordion-fold recurrence; matrix multiplication over two semirings,
//!   all-pairs shortest paths, Gaussian elimination, triangular solve, and
//!   a write-tuned Strassen multiplication.
//! * [`oracle`] — independent brute-force reimplementations of every
//!   kernel, used to cross-check results entry by entry.
//!
//! Supporting modules: [`accounting`] (fork-join work/span arithmetic),
//! [`algebra`] (monoids and semirings), [`rng`] (a small deterministic
//! generator), [`weights`] (weight-function presets), and [`instance`]
//! (problem instance construction).

pub mod accounting;
pub mod algebra;
pub mod dp;
pub mod grid;
pub mod instance;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod sim;
pub mod solve;
pub mod weights;

pub use accounting::DagCost;
pub use algebra::{Monoid, Semiring};
pub use dp::{
    solve_accordion, solve_gap, solve_gap_baseline, solve_knapsack2, solve_lws, solve_parenthesis,
    solve_rna, transpose_merge, GapWeights,
};
pub use grid::{
    choose_split_dim, compute_grid, compute_grid_parallel, predict_q, run_grid, Binding,
    ExecOptions, GridSpec, IndexMap, Mode, SplitPolicy, DEFAULT_BASE_THRESHOLD,
};
pub use instance::{Instance, Kind};
pub use linalg::{
    matmul_accum, matmul_sub_accum, solve_gauss, solve_kleene, solve_strassen, solve_triangular,
    strassen_tile_count,
};
pub use oracle::{cross_check, oracle_eval, OracleResult};
pub use sim::{CacheConfig, CacheSim, CostReport, SimArray, SimError, Transfer, TransferKind};
pub use solve::{solve, solve_on, Solution};
pub use weights::{Weight, WeightPreset};
