//! Optimal-association recurrence over interval endpoints `0..=n`:
//!
//! ```text
//! D[i][j] = min over i < k < j of D[i][k] + D[k][j] + w(i, k, j)
//! ```
//!
//! for `j >= i + 2`, with `D[i][i+1]` given. The triangle over an endpoint
//! interval splits at its midpoint: the two half-triangles are independent
//! (solved in parallel), the midpoint column contributes one grid over all
//! spanning pairs, and the remaining rectangle — rows from the left half,
//! columns from the right half — is solved by its own quadrant recursion.
//!
//! Every rectangle cell `(i, j)` still needs the split terms `k` between
//! its endpoints: those with `(i, k)` in a finished triangle pair it with a
//! rectangle entry below, and those with `(k, j)` finished pair it with a
//! rectangle entry to the left. Quadrants therefore finish bottom-left
//! first, then the diagonal pair, then top-right, with one 3-d grid per
//! inter-quadrant batch.

use crate::accounting::DagCost;
use crate::algebra::Monoid;
use crate::grid::{run_grid, Binding, ExecOptions, GridSpec, IndexMap};
use crate::sim::{CacheSim, SimArray, SimError};
use crate::weights::Weight;

/// Solve over a pre-initialized matrix: superdiagonal given and finalized,
/// entries above it `+inf`, everything else untouched.
pub fn solve_parenthesis(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let m = d.extents()[0];
    paren(sim, d, w, 0, m - 1, opts)
}

/// Solves the triangle of all intervals within endpoints `[lo, hi]`.
fn paren(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    lo: usize,
    hi: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    if hi - lo < 2 {
        return Ok(DagCost::ZERO);
    }
    if hi - lo <= opts.base_threshold.max(2) {
        return base_triangle(sim, d, w, lo, hi);
    }
    let mid = (lo + hi) / 2;
    let a = paren(sim, d, w, lo, mid, opts)?;
    let b = paren(sim, d, w, mid, hi, opts)?;
    // Every interval crossing the midpoint owes one term to the split at
    // `mid` itself; the rest of its terms live in the rectangle recursion.
    let g = span_grid(sim, d, w, (lo, mid), (mid + 1, hi + 1), (mid, mid + 1), opts)?;
    let r = rect_rec(sim, d, w, (lo, mid - 1), (mid + 1, hi), opts)?;
    Ok(a.parallel(b).sequential(g).sequential(r))
}

/// Solves the rectangle `rows x cols` (closed index ranges): rows are left
/// endpoints from the finished left triangle, columns right endpoints from
/// the finished right triangle. Entry invariant: every split term `k`
/// outside `rows` and `cols` has already been folded into each cell.
fn rect_rec(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    (r0, r1): (usize, usize),
    (c0, c1): (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let (nr, nc) = (r1 - r0 + 1, c1 - c0 + 1);
    if nr.max(nc) <= opts.base_threshold || nr.min(nc) <= 1 {
        return base_rect(sim, d, w, (r0, r1), (c0, c1));
    }
    let rm = r0 + nr.div_ceil(2) - 1;
    let cm = c0 + nc.div_ceil(2) - 1;

    let x10 = rect_rec(sim, d, w, (rm + 1, r1), (c0, cm), opts)?;
    // The finished bottom-left quadrant feeds the one above it (as the
    // below-entry of triangle-paired terms) and the one to its right (as
    // the left-entry of the mirrored pairs).
    let g00 = span_grid(sim, d, w, (r0, rm + 1), (c0, cm + 1), (rm + 1, r1 + 1), opts)?;
    let g11 = span_grid(sim, d, w, (rm + 1, r1 + 1), (cm + 1, c1 + 1), (c0, cm + 1), opts)?;
    let x00 = rect_rec(sim, d, w, (r0, rm), (c0, cm), opts)?;
    let x11 = rect_rec(sim, d, w, (rm + 1, r1), (cm + 1, c1), opts)?;
    // Both diagonal quadrants feed the top-right one; the two grids share
    // the destination, so they run sequentially.
    let ga = span_grid(sim, d, w, (r0, rm + 1), (cm + 1, c1 + 1), (rm + 1, r1 + 1), opts)?;
    let gb = span_grid(sim, d, w, (r0, rm + 1), (cm + 1, c1 + 1), (c0, cm + 1), opts)?;
    let x01 = rect_rec(sim, d, w, (r0, rm), (cm + 1, c1), opts)?;

    Ok(x10
        .sequential(g00.parallel(g11))
        .sequential(x00.parallel(x11))
        .sequential(ga)
        .sequential(gb)
        .sequential(x01))
}

/// One 3-d grid folding `D[i][k] + D[k][j] + w(i, k, j)` into `D[i][j]`
/// over `i` in `rows`, `j` in `cols`, `k` in `ks` (half-open ranges). Both
/// reads are finalized entries; the destination accumulates.
fn span_grid(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    rows: (usize, usize),
    cols: (usize, usize),
    ks: (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    if rows.0 >= rows.1 || cols.0 >= cols.1 || ks.0 >= ks.1 {
        return Ok(DagCost::ZERO);
    }
    let wf = w.clone();
    let (ri, cj, kk) = (rows.0 as i64, cols.0 as i64, ks.0 as i64);
    let cell = move |vals: &[f64], c: &[usize]| {
        let (i, j, k) = (ri + c[0] as i64, cj + c[1] as i64, kk + c[2] as i64);
        vals[0] + vals[1] + wf.eval(&[i, k, j])
    };
    let spec = GridSpec::new(
        vec![rows.1 - rows.0, cols.1 - cols.0, ks.1 - ks.0],
        Monoid::Min,
        &cell,
    )
    .with_base_threshold(opts.base_threshold);
    let left = Binding::finalized(
        d.clone(),
        IndexMap::Affine(vec![(vec![1, 0, 0], ri), (vec![0, 0, 1], kk)]),
    );
    let right = Binding::finalized(
        d.clone(),
        IndexMap::Affine(vec![(vec![0, 0, 1], kk), (vec![0, 1, 0], cj)]),
    );
    let output = Binding::new(
        d.clone(),
        IndexMap::Affine(vec![(vec![1, 0, 0], ri), (vec![0, 1, 0], cj)]),
    );
    run_grid(sim, &spec, &[left, right], &output, opts.policy, opts.mode)
}

/// Classic triangle base: rows bottom-up, columns left-to-right, so both
/// halves of every split term are final when read.
fn base_triangle(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    lo: usize,
    hi: usize,
) -> Result<DagCost, SimError> {
    let mut cells = 0u64;
    for i in (lo..=hi - 2).rev() {
        for j in i + 2..=hi {
            let mut v = sim.read(d, &[i, j])?;
            for k in i + 1..j {
                let left = sim.read_finalized(d, &[i, k])?;
                let right = sim.read_finalized(d, &[k, j])?;
                v = v.min(left + right + w.eval(&[i as i64, k as i64, j as i64]));
                cells += 1;
            }
            sim.write(d, &[i, j], v)?;
            sim.mark_finalized(d, &[i, j])?;
        }
    }
    Ok(DagCost::leaf(cells))
}

/// Rectangle base: rows bottom-up, columns left-to-right. Split terms with
/// `k` in the row range pair a triangle entry with a rectangle entry below;
/// terms with `k` in the column range pair a rectangle entry to the left
/// with a triangle entry. Terms outside both ranges were folded in by the
/// enclosing grids.
fn base_rect(
    sim: &mut CacheSim,
    d: &SimArray,
    w: &Weight,
    (r0, r1): (usize, usize),
    (c0, c1): (usize, usize),
) -> Result<DagCost, SimError> {
    let mut cells = 0u64;
    for i in (r0..=r1).rev() {
        for j in c0..=c1 {
            let mut v = sim.read(d, &[i, j])?;
            for k in i + 1..=r1 {
                let left = sim.read_finalized(d, &[i, k])?;
                let below = sim.read_finalized(d, &[k, j])?;
                v = v.min(left + below + w.eval(&[i as i64, k as i64, j as i64]));
                cells += 1;
            }
            for k in c0..j {
                let left = sim.read_finalized(d, &[i, k])?;
                let right = sim.read_finalized(d, &[k, j])?;
                v = v.min(left + right + w.eval(&[i as i64, k as i64, j as i64]));
                cells += 1;
            }
            sim.write(d, &[i, j], v)?;
            sim.mark_finalized(d, &[i, j])?;
        }
    }
    Ok(DagCost::leaf(cells))
}
