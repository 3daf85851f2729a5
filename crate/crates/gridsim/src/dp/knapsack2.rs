//! Two-sequence merge recurrence:
//! `D[i] = min over 0 <= j <= i of A[j] + B[i-j] + w(j, i-j, i)`.
//!
//! Every term reads only the input arrays `A` and `B`, so the whole
//! computation is one dependency-free 2-d grid over cells `(i, j)` with the
//! triangle `j <= i` live. The two input values per cell are not
//! independent — their indices sum to `i` — which skews the projection
//! footprints: a cell box of `ni x nj` cells touches `nj` entries of `A`,
//! `ni + nj` of `B`, and `ni` of `D`.

use crate::accounting::DagCost;
use crate::algebra::Monoid;
use crate::grid::{run_grid, Binding, ExecOptions, GridSpec, IndexMap};
use crate::sim::{CacheSim, SimArray, SimError};
use crate::weights::Weight;

/// Fold the recurrence into `d` (length `n + 1`, pre-filled with `+inf`).
/// `a` and `b` are the two input arrays, also length `n + 1`.
pub fn solve_knapsack2(
    sim: &mut CacheSim,
    a: &SimArray,
    b: &SimArray,
    d: &SimArray,
    w: &Weight,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let m = d.len();
    let w = w.clone();
    let cell = move |vals: &[f64], cell: &[usize]| {
        let (i, j) = (cell[0] as i64, cell[1] as i64);
        vals[0] + vals[1] + w.eval(&[j, i - j, i])
    };
    let live = |cell: &[usize]| cell[1] <= cell[0];
    let spec = GridSpec::new(vec![m, m], Monoid::Min, &cell)
        .with_fullness(&live)
        .with_base_threshold(opts.base_threshold);
    let inputs = [
        Binding::finalized(a.clone(), IndexMap::Axes(vec![1])),
        Binding::finalized(b.clone(), IndexMap::Affine(vec![(vec![1, -1], 0)])),
    ];
    let output = Binding::new(d.clone(), IndexMap::Axes(vec![0]));
    run_grid(sim, &spec, &inputs, &output, opts.policy, opts.mode)
}
