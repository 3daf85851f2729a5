//! Least-weight subsequence: `D[j] = min over 0 <= i < j of D[i] + w(i, j)`
//! with `D[0]` given.
//!
//! Divide and conquer on the index range. `task(p, q)` finishes `D[p..=q]`
//! assuming `D[p]` is final and every `D[j]` in the range already holds its
//! partial min over predecessors `i < p`:
//!
//! 1. recurse on the lower half `[p, r]`,
//! 2. run a 2-d grid pushing every finished `D[i]` (`p <= i <= r`) into
//!    every pending `D[j]` (`r < j <= q`),
//! 3. recurse on the upper half `[r+1, q]`.
//!
//! The three phases are sequential; parallelism lives inside the grid.

use crate::accounting::DagCost;
use crate::grid::{run_grid, Binding, ExecOptions, GridSpec, IndexMap};
use crate::sim::{CacheSim, SimArray, SimError};
use crate::weights::Weight;

/// Solve the recurrence in place over `d` (length `n + 1`).
///
/// On entry `d[0]` holds the boundary value and every other entry holds
/// `+inf`; on exit `d[j]` is the optimum ending at `j`.
pub fn solve_lws(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let n = d.len() - 1;
    sim.mark_finalized(d, &[0])?;
    if n == 0 {
        return Ok(DagCost::ZERO);
    }
    task(sim, d, w, 0, n, opts)
}

fn task(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    p: usize,
    q: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    if q - p <= opts.base_threshold {
        let mut cells = 0u64;
        for j in p + 1..=q {
            for i in p..j {
                let di = sim.read_finalized(d, &[i])?;
                let cur = sim.read(d, &[j])?;
                let cand = di + w.eval(&[i as i64, j as i64]);
                sim.write(d, &[j], cur.min(cand))?;
                cells += 1;
            }
            sim.mark_finalized(d, &[j])?;
        }
        return Ok(DagCost::leaf(cells));
    }
    let r = (p + q) / 2;
    let lower = task(sim, d, w, p, r, opts)?;
    let crossed = cross_grid(sim, d, w, p, r, q, opts)?;
    // The grid delivered every term with i <= r into D[r+1], completing it.
    sim.mark_finalized(d, &[r + 1])?;
    let upper = task(sim, d, w, r + 1, q, opts)?;
    Ok(lower.sequential(crossed).sequential(upper))
}

/// Grid over cells `(j, i)` with `r < j <= q`, `p <= i <= r`: folds
/// `D[i] + w(i, j)` into `D[j]`. The source dimension is innermost so each
/// output accumulates in ascending `i` order.
fn cross_grid(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    p: usize,
    r: usize,
    q: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let w = w.clone();
    let (pp, rr) = (p as i64, r as i64);
    let cell = move |vals: &[f64], cell: &[usize]| {
        let j = rr + 1 + cell[0] as i64;
        let i = pp + cell[1] as i64;
        vals[0] + w.eval(&[i, j])
    };
    let spec = GridSpec::new(vec![q - r, r - p + 1], crate::algebra::Monoid::Min, &cell)
        .with_base_threshold(opts.base_threshold);
    let inputs = [Binding::finalized(
        d.clone(),
        IndexMap::Affine(vec![(vec![0, 1], p as i64)]),
    )];
    let output = Binding::new(d.clone(), IndexMap::Affine(vec![(vec![1, 0], r as i64 + 1)]));
    run_grid(sim, &spec, &inputs, &output, opts.policy, opts.mode)
}
