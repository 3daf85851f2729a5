//! Accordion-fold recurrence over `1 <= j < i <= n`:
//!
//! ```text
//! D[i][j] = max over 1 <= k <= j-2 of D[j-1][k] + w(i, j, k)   for j >= 3,
//! ```
//!
//! with column 1 given and column 2 the empty-reduction identity (`-inf`).
//! Task `j` computes all of column `j` from row `j-1`, so the whole solve
//! is a chain of tasks whose reads are rows and whose writes are columns.
//! Two layouts keep both access directions contiguous: tasks read rows of
//! the row-major copy `dr` and write rows of the transposed copy `dc`
//! (a row of `dc` is a column of `D`). A divide-and-conquer schedule over
//! the task range moves finished columns back into `dr` with block
//! transpose-merges: after the first half of the tasks runs, exactly the
//! block the second half will read is transposed, recursively, so each
//! entry migrates once and every access in either layout is stride-1.

use crate::accounting::DagCost;
use crate::algebra::Monoid;
use crate::dp::transpose::transpose_merge;
use crate::grid::{run_grid, Binding, ExecOptions, GridSpec, IndexMap};
use crate::sim::{CacheSim, SimArray, SimError};
use crate::weights::Weight;

/// Solve over pre-initialized dual copies (`dr` row-major, `dc` its
/// transpose): everything `-inf` except columns 1 and 2 of `D` installed
/// and finalized in both layouts. On exit `dc` rows `3..=n` hold the
/// computed columns.
pub fn solve_accordion(
    sim: &mut CacheSim,
    dr: &SimArray,
    dc: &SimArray,
    w: &Weight,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let n = dr.extents()[0] - 1;
    if n < 3 {
        return Ok(DagCost::ZERO);
    }
    rec(sim, dr, dc, w, 3, n, opts)
}

/// Runs tasks `lo..=hi`. Entry invariant: `dr` rows `lo-1..=hi-1` hold
/// (finalized) columns `1..=lo-1` of `D` — everything those tasks read that
/// earlier tasks produced.
fn rec(
    sim: &mut CacheSim,
    dr: &SimArray,
    dc: &SimArray,
    w: &Weight,
    lo: usize,
    hi: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    if lo == hi {
        return task(sim, dr, dc, w, lo, opts);
    }
    let mid = (lo + hi) / 2;
    let a = rec(sim, dr, dc, w, lo, mid, opts)?;
    // Columns lo..=mid are now final in `dc`; the second half of the tasks
    // reads rows mid..=hi-1, so mirror exactly that block into `dr`.
    let t = transpose_merge(
        sim,
        dc,
        (lo, mid + 1),
        (mid, hi),
        dr,
        Monoid::Max,
        opts.base_threshold,
    )?;
    for i in mid..hi {
        for c in lo..=mid {
            sim.mark_finalized(dr, &[i, c])?;
        }
    }
    let b = rec(sim, dr, dc, w, mid + 1, hi, opts)?;
    Ok(a.sequential(t).sequential(b))
}

/// One task: a 2-d grid with cells `(i - j - 1, k - 1)` reading
/// `D[j-1][k]` from `dr` and folding into `D[i][j]` in `dc`.
fn task(
    sim: &mut CacheSim,
    dr: &SimArray,
    dc: &SimArray,
    w: &Weight,
    j: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let n = dr.extents()[0] - 1;
    let wf = w.clone();
    let jj = j as i64;
    let cell = move |vals: &[f64], c: &[usize]| {
        vals[0] + wf.eval(&[jj + 1 + c[0] as i64, jj, 1 + c[1] as i64])
    };
    let spec = GridSpec::new(vec![n - j, j - 2], Monoid::Max, &cell)
        .with_base_threshold(opts.base_threshold);
    let input = Binding::finalized(
        dr.clone(),
        IndexMap::Affine(vec![(vec![0, 0], jj - 1), (vec![0, 1], 1)]),
    );
    let output = Binding::new(
        dc.clone(),
        IndexMap::Affine(vec![(vec![0, 0], jj), (vec![1, 0], jj + 1)]),
    );
    let cost = run_grid(sim, &spec, &[input], &output, opts.policy, opts.mode)?;
    for i in j + 1..=n {
        sim.mark_finalized(dc, &[j, i])?;
    }
    Ok(cost)
}
