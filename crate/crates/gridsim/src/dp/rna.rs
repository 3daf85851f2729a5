//! Pairing recurrence with a 4-index weight, over `(n+1) x (n+1)`:
//!
//! ```text
//! D[i][j] = min over p < i, q < j of D[p][q] + w(p, q, i, j)   for i, j >= 1,
//! ```
//!
//! with row 0 and column 0 given. Every cell depends on the full dominated
//! rectangle above and to its left, so quadrant recursion works directly on
//! one copy: after the top-left quadrant finishes, one grid pushes it into
//! each sibling; the bottom-right quadrant receives three grids (one per
//! finished quadrant). Each update is a 2-d grid whose first dimension
//! flattens the destination block and whose second flattens the source
//! block; a fullness mask keeps only the dominated `(p, q)` pairs live, and
//! the one-entry-per-pair cost makes total work match the source-pair count
//! of the plain quadruple loop.

use crate::accounting::DagCost;
use crate::algebra::Monoid;
use crate::grid::{run_grid, Binding, ExecOptions, GridSpec, IndexMap};
use crate::sim::{CacheSim, SimArray, SimError};
use crate::weights::Weight;

/// Solve over a pre-initialized matrix: interior `+inf`, boundary row and
/// column holding their given values, finalized. On exit every interior
/// entry is final.
pub fn solve_rna(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let m = d.extents()[0];
    rec(sim, d, w, (0, m), (0, m), opts)
}

fn rec(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    (i0, i1): (usize, usize),
    (j0, j1): (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let s = i1 - i0;
    if s <= opts.base_threshold {
        return base_block(sim, d, w, (i0, i1), (j0, j1));
    }
    let im = i0 + s.div_ceil(2);
    let jm = j0 + s.div_ceil(2);

    let a = rec(sim, d, w, (i0, im), (j0, jm), opts)?;

    let g01 = update(sim, d, w, (i0, im, j0, jm), (i0, im, jm, j1), opts)?;
    let g10 = update(sim, d, w, (i0, im, j0, jm), (im, i1, j0, jm), opts)?;

    let b01 = rec(sim, d, w, (i0, im), (jm, j1), opts)?;
    let b10 = rec(sim, d, w, (im, i1), (j0, jm), opts)?;

    // All three grids accumulate into the same quadrant, so they run (and
    // count) sequentially.
    let h00 = update(sim, d, w, (i0, im, j0, jm), (im, i1, jm, j1), opts)?;
    let h01 = update(sim, d, w, (i0, im, jm, j1), (im, i1, jm, j1), opts)?;
    let h10 = update(sim, d, w, (im, i1, j0, jm), (im, i1, jm, j1), opts)?;

    let e = rec(sim, d, w, (im, i1), (jm, j1), opts)?;

    Ok(a
        .sequential(g01.parallel(g10))
        .sequential(b01.parallel(b10))
        .sequential(h00)
        .sequential(h01)
        .sequential(h10)
        .sequential(e))
}

/// One grid pushing a finished source block into a destination block:
/// cells `(t, s)` pair destination entry `t` (flattened) with source entry
/// `s` (flattened); only pairs with the source strictly above and left of
/// the destination are live.
fn update(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    (si0, si1, sj0, sj1): (usize, usize, usize, usize),
    (ti0, ti1, tj0, tj1): (usize, usize, usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    // Row 0 and column 0 are boundary: they are sources, never destinations.
    let (ti0, tj0) = (ti0.max(1), tj0.max(1));
    let (th, tw) = (ti1.saturating_sub(ti0), tj1.saturating_sub(tj0));
    let (sh, sw) = (si1 - si0, sj1 - sj0);
    if th == 0 || tw == 0 || sh == 0 || sw == 0 {
        return Ok(DagCost::ZERO);
    }
    let dst = d.view(&[ti0, tj0], &[th, tw])?;
    let src = d.view(&[si0, sj0], &[sh, sw])?;

    let decode = move |c: &[usize]| {
        (
            ti0 + c[0] / tw,
            tj0 + c[0] % tw,
            si0 + c[1] / sw,
            sj0 + c[1] % sw,
        )
    };
    let wf = w.clone();
    let cell = move |vals: &[f64], c: &[usize]| {
        let (i, j, p, q) = decode(c);
        vals[0] + wf.eval(&[p as i64, q as i64, i as i64, j as i64])
    };
    let live = move |c: &[usize]| {
        let (i, j, p, q) = decode(c);
        p < i && q < j
    };
    let spec = GridSpec::new(vec![th * tw, sh * sw], Monoid::Min, &cell)
        .with_fullness(&live)
        .with_base_threshold(opts.base_threshold);
    let input = Binding::finalized(src, IndexMap::SplitAxis { axis: 1, inner: sw });
    let output = Binding::new(dst, IndexMap::SplitAxis { axis: 0, inner: tw });
    run_grid(sim, &spec, &[input], &output, opts.policy, opts.mode)
}

/// Finish every interior cell of the region: the accumulated partial covers
/// all sources outside, so only the within-region dominated rectangle
/// remains. Row-major order makes every within-region source final before
/// its consumers.
fn base_block(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    (i0, i1): (usize, usize),
    (j0, j1): (usize, usize),
) -> Result<DagCost, SimError> {
    let mut cells = 0u64;
    for i in i0..i1 {
        for j in j0..j1 {
            if i == 0 || j == 0 {
                continue;
            }
            let mut v = sim.read(d, &[i, j])?;
            for p in i0..i {
                for q in j0..j {
                    let s = sim.read_finalized(d, &[p, q])?;
                    v = v.min(s + w.eval(&[p as i64, q as i64, i as i64, j as i64]));
                    cells += 1;
                }
            }
            sim.write(d, &[i, j], v)?;
            sim.mark_finalized(d, &[i, j])?;
        }
    }
    Ok(DagCost::leaf(cells))
}
