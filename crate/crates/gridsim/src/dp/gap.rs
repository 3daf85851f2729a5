//! Edit-style recurrence with unbounded gaps, over `(n+1) x (n+1)`:
//!
//! ```text
//! D[i][j] = min( min over 0 <= q < j  of D[i][q] + wp(q, j),
//!                min over 0 <= p < i  of D[p][j] + w(p, i),
//!                D[i-1][j-1] + r(i, j) )            for i, j >= 1,
//! D[0][0] = 0,  D[0][j] = w(0, j),  D[i][0] = wp(0, i).
//! ```
//!
//! Horizontal terms scan a row; vertical terms scan a column. To keep both
//! scans contiguous the solver maintains two layouts: `dr` (row-major) and
//! `dc` (the transpose, so a column of `D` is a row of `dc`). Quadrant
//! recursion over square regions:
//!
//! 1. recurse on the top-left quadrant;
//! 2. push its rows rightward (per-row 2-d grids on `dr`) and its columns
//!    downward (per-column 2-d grids on `dc`) — the freshly updated
//!    quadrants are then mirrored into the other layout with a
//!    transpose-merge (min keeps the union of accumulated terms correct in
//!    both copies);
//! 3. recurse on the top-right and bottom-left quadrants in parallel;
//! 4. push both into the bottom-right quadrant (rows from the one, columns
//!    from the other, landing in different layouts), transpose-merge both
//!    ways so the copies agree again;
//! 5. recurse on the bottom-right quadrant.
//!
//! The diagonal term contributes one value per cell and is folded into the
//! base-case loop of the region that owns the cell; the quadrant order
//! guarantees the upper-left diagonal neighbor is always final by then.
//! Base cells write both layouts, so a completed region is final in both.

use crate::accounting::DagCost;
use crate::algebra::Monoid;
use crate::dp::transpose::transpose_merge;
use crate::grid::{run_grid, Binding, ExecOptions, GridSpec, IndexMap};
use crate::sim::{CacheSim, SimArray, SimError};
use crate::weights::Weight;

/// Weight functions of the recurrence: `wp` prices horizontal (within-row)
/// jumps, `w` prices vertical (within-column) jumps, `r` the diagonal step.
pub struct GapWeights<'w> {
    pub w: &'w Weight,
    pub wp: &'w Weight,
    pub r: &'w Weight,
}

/// Solve over pre-initialized dual copies: `dr` row-major, `dc` its
/// transpose. Both must hold `+inf` everywhere except the boundary row and
/// column (finalized in both layouts). On exit both copies hold the full
/// solution.
pub fn solve_gap(
    sim: &mut CacheSim,
    dr: &SimArray,
    dc: &SimArray,
    weights: &GapWeights,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let m = dr.extents()[0];
    rec(sim, dr, dc, weights, (0, m), (0, m), opts)
}

fn rec(
    sim: &mut CacheSim,
    dr: &SimArray,
    dc: &SimArray,
    ws: &GapWeights,
    (i0, i1): (usize, usize),
    (j0, j1): (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let s = i1 - i0;
    if s <= opts.base_threshold {
        return base_block(sim, dr, dc, ws, (i0, i1), (j0, j1));
    }
    // Region shapes drift away from square as uneven halves stack up, so
    // the row-size-driven column midpoint must be clamped to the region.
    let im = i0 + s.div_ceil(2);
    let jm = (j0 + s.div_ceil(2)).min(j1);

    let a = rec(sim, dr, dc, ws, (i0, im), (j0, jm), opts)?;

    // Top-left feeds rightward into the top-right quadrant (rows of `dr`)
    // and downward into the bottom-left quadrant (columns, rows of `dc`).
    let row1 = row_grids(sim, dr, ws, (i0, im), (j0, jm), (jm, j1), opts)?;
    let col1 = col_grids(sim, dc, ws, (j0, jm), (i0, im), (im, i1), opts)?;
    let t1 = transpose_merge(
        sim,
        dr,
        (i0.max(1), im),
        (jm, j1),
        dc,
        Monoid::Min,
        opts.base_threshold,
    )?;
    let t1c = transpose_merge(
        sim,
        dc,
        (j0.max(1), jm),
        (im, i1),
        dr,
        Monoid::Min,
        opts.base_threshold,
    )?;

    let b01 = rec(sim, dr, dc, ws, (i0, im), (jm, j1), opts)?;
    let b10 = rec(sim, dr, dc, ws, (im, i1), (j0, jm), opts)?;

    // Both side quadrants feed the bottom-right one: rows arrive in `dr`,
    // columns in `dc`, then two transpose-merges reunify the copies.
    let row2 = row_grids(sim, dr, ws, (im, i1), (j0, jm), (jm, j1), opts)?;
    let col2 = col_grids(sim, dc, ws, (jm, j1), (i0, im), (im, i1), opts)?;
    let t2 = transpose_merge(
        sim,
        dr,
        (im, i1),
        (jm, j1),
        dc,
        Monoid::Min,
        opts.base_threshold,
    )?;
    let t2c = transpose_merge(
        sim,
        dc,
        (jm, j1),
        (im, i1),
        dr,
        Monoid::Min,
        opts.base_threshold,
    )?;

    let e = rec(sim, dr, dc, ws, (im, i1), (jm, j1), opts)?;

    Ok(a
        .sequential(row1.parallel(col1))
        .sequential(t1.parallel(t1c))
        .sequential(b01.parallel(b10))
        .sequential(row2.parallel(col2))
        .sequential(t2)
        .sequential(t2c)
        .sequential(e))
}

/// One 2-d grid per row `i`: fold `D[i][q] + wp(q, j)` into `D[i][j]` for
/// every source column `q` and destination column `j`. Rows are
/// independent — parallel siblings.
fn row_grids(
    sim: &mut CacheSim,
    dr: &SimArray,
    ws: &GapWeights,
    rows: (usize, usize),
    src: (usize, usize),
    dst: (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let mut cost = DagCost::ZERO;
    let mut first = true;
    for i in rows.0.max(1)..rows.1 {
        let wp = ws.wp.clone();
        let (srclo, dstlo) = (src.0 as i64, dst.0 as i64);
        let cell = move |vals: &[f64], c: &[usize]| {
            vals[0] + wp.eval(&[srclo + c[1] as i64, dstlo + c[0] as i64])
        };
        let spec = GridSpec::new(vec![dst.1 - dst.0, src.1 - src.0], Monoid::Min, &cell)
            .with_base_threshold(opts.base_threshold);
        let input = Binding::finalized(
            dr.clone(),
            IndexMap::Affine(vec![(vec![0, 0], i as i64), (vec![0, 1], src.0 as i64)]),
        );
        let output = Binding::new(
            dr.clone(),
            IndexMap::Affine(vec![(vec![0, 0], i as i64), (vec![1, 0], dst.0 as i64)]),
        );
        let c = run_grid(sim, &spec, &[input], &output, opts.policy, opts.mode)?;
        cost = if first { c } else { cost.parallel(c) };
        first = false;
    }
    Ok(cost)
}

/// One 2-d grid per column `j`, operating on the transposed copy: fold
/// `D[p][j] + w(p, i)` into `D[i][j]` for source rows `p` and destination
/// rows `i`.
fn col_grids(
    sim: &mut CacheSim,
    dc: &SimArray,
    ws: &GapWeights,
    cols: (usize, usize),
    src: (usize, usize),
    dst: (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let mut cost = DagCost::ZERO;
    let mut first = true;
    for j in cols.0.max(1)..cols.1 {
        let w = ws.w.clone();
        let (srclo, dstlo) = (src.0 as i64, dst.0 as i64);
        let cell = move |vals: &[f64], c: &[usize]| {
            vals[0] + w.eval(&[srclo + c[1] as i64, dstlo + c[0] as i64])
        };
        let spec = GridSpec::new(vec![dst.1 - dst.0, src.1 - src.0], Monoid::Min, &cell)
            .with_base_threshold(opts.base_threshold);
        let input = Binding::finalized(
            dc.clone(),
            IndexMap::Affine(vec![(vec![0, 0], j as i64), (vec![0, 1], src.0 as i64)]),
        );
        let output = Binding::new(
            dc.clone(),
            IndexMap::Affine(vec![(vec![0, 0], j as i64), (vec![1, 0], dst.0 as i64)]),
        );
        let c = run_grid(sim, &spec, &[input], &output, opts.policy, opts.mode)?;
        cost = if first { c } else { cost.parallel(c) };
        first = false;
    }
    Ok(cost)
}

/// Base block: finish every cell of the region in row-major order. The
/// accumulated partial already covers all sources outside the region, so
/// only within-region terms and the diagonal remain. Final values land in
/// both layouts.
fn base_block(
    sim: &mut CacheSim,
    dr: &SimArray,
    dc: &SimArray,
    ws: &GapWeights,
    (i0, i1): (usize, usize),
    (j0, j1): (usize, usize),
) -> Result<DagCost, SimError> {
    let mut cells = 0u64;
    for i in i0..i1 {
        for j in j0..j1 {
            if i == 0 || j == 0 {
                continue;
            }
            let mut v = sim.read(dr, &[i, j])?;
            let diag = sim.read_finalized(dr, &[i - 1, j - 1])?;
            v = v.min(diag + ws.r.eval(&[i as i64, j as i64]));
            cells += 1;
            for q in j0..j {
                let h = sim.read_finalized(dr, &[i, q])?;
                v = v.min(h + ws.wp.eval(&[q as i64, j as i64]));
                cells += 1;
            }
            for p in i0..i {
                let u = sim.read_finalized(dc, &[j, p])?;
                v = v.min(u + ws.w.eval(&[p as i64, i as i64]));
                cells += 1;
            }
            sim.write(dr, &[i, j], v)?;
            sim.write(dc, &[j, i], v)?;
            sim.mark_finalized(dr, &[i, j])?;
            sim.mark_finalized(dc, &[j, i])?;
        }
    }
    Ok(DagCost::leaf(cells))
}

/// Single-layout comparison scheme: same quadrant order and base case, but
/// each update phase is one 3-d grid over (rows, destination columns,
/// source columns) — or the column-direction mirror — on the row-major
/// copy alone. Vertical terms therefore read the matrix with stride `n`,
/// paying one line transfer per entry; this is the scheme the dual-layout
/// solver exists to beat.
pub fn solve_gap_baseline(
    sim: &mut CacheSim,
    d: &SimArray,
    weights: &GapWeights,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let m = d.extents()[0];
    rec_baseline(sim, d, weights, (0, m), (0, m), opts)
}

fn rec_baseline(
    sim: &mut CacheSim,
    d: &SimArray,
    ws: &GapWeights,
    (i0, i1): (usize, usize),
    (j0, j1): (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let s = i1 - i0;
    if s <= opts.base_threshold {
        return base_block_single(sim, d, ws, (i0, i1), (j0, j1));
    }
    // Same drift clamp as the dual-layout recursion: uneven halves shrink
    // the column range faster than the row size that drives the midpoint.
    let im = i0 + s.div_ceil(2);
    let jm = (j0 + s.div_ceil(2)).min(j1);

    let a = rec_baseline(sim, d, ws, (i0, im), (j0, jm), opts)?;
    let r1 = row_grid_3d(sim, d, ws, (i0, im), (j0, jm), (jm, j1), opts)?;
    let c1 = col_grid_3d(sim, d, ws, (j0, jm), (i0, im), (im, i1), opts)?;
    let b01 = rec_baseline(sim, d, ws, (i0, im), (jm, j1), opts)?;
    let b10 = rec_baseline(sim, d, ws, (im, i1), (j0, jm), opts)?;
    let r2 = row_grid_3d(sim, d, ws, (im, i1), (j0, jm), (jm, j1), opts)?;
    let c2 = col_grid_3d(sim, d, ws, (jm, j1), (i0, im), (im, i1), opts)?;
    let e = rec_baseline(sim, d, ws, (im, i1), (jm, j1), opts)?;

    Ok(a
        .sequential(r1.parallel(c1))
        .sequential(b01.parallel(b10))
        .sequential(r2)
        .sequential(c2)
        .sequential(e))
}

/// One 3-d grid: cells `(row, dst col, src col)` folding
/// `D[i][q] + wp(q, j)` into `D[i][j]`.
fn row_grid_3d(
    sim: &mut CacheSim,
    d: &SimArray,
    ws: &GapWeights,
    rows: (usize, usize),
    src: (usize, usize),
    dst: (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let r0 = rows.0.max(1);
    if r0 >= rows.1 {
        return Ok(DagCost::ZERO);
    }
    let wp = ws.wp.clone();
    let (srclo, dstlo) = (src.0 as i64, dst.0 as i64);
    let cell = move |vals: &[f64], c: &[usize]| {
        vals[0] + wp.eval(&[srclo + c[2] as i64, dstlo + c[1] as i64])
    };
    let spec = GridSpec::new(
        vec![rows.1 - r0, dst.1 - dst.0, src.1 - src.0],
        Monoid::Min,
        &cell,
    )
    .with_base_threshold(opts.base_threshold);
    let input = Binding::finalized(
        d.clone(),
        IndexMap::Affine(vec![
            (vec![1, 0, 0], r0 as i64),
            (vec![0, 0, 1], src.0 as i64),
        ]),
    );
    let output = Binding::new(
        d.clone(),
        IndexMap::Affine(vec![
            (vec![1, 0, 0], r0 as i64),
            (vec![0, 1, 0], dst.0 as i64),
        ]),
    );
    run_grid(sim, &spec, &[input], &output, opts.policy, opts.mode)
}

/// One 3-d grid: cells `(dst row, col, src row)` folding
/// `D[p][j] + w(p, i)` into `D[i][j]` — the strided direction.
fn col_grid_3d(
    sim: &mut CacheSim,
    d: &SimArray,
    ws: &GapWeights,
    cols: (usize, usize),
    src: (usize, usize),
    dst: (usize, usize),
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let c0 = cols.0.max(1);
    if c0 >= cols.1 {
        return Ok(DagCost::ZERO);
    }
    let w = ws.w.clone();
    let (srclo, dstlo) = (src.0 as i64, dst.0 as i64);
    let cell = move |vals: &[f64], c: &[usize]| {
        vals[0] + w.eval(&[srclo + c[2] as i64, dstlo + c[0] as i64])
    };
    let spec = GridSpec::new(
        vec![dst.1 - dst.0, cols.1 - c0, src.1 - src.0],
        Monoid::Min,
        &cell,
    )
    .with_base_threshold(opts.base_threshold);
    let input = Binding::finalized(
        d.clone(),
        IndexMap::Affine(vec![
            (vec![0, 0, 1], src.0 as i64),
            (vec![0, 1, 0], c0 as i64),
        ]),
    );
    let output = Binding::new(
        d.clone(),
        IndexMap::Affine(vec![
            (vec![1, 0, 0], dst.0 as i64),
            (vec![0, 1, 0], c0 as i64),
        ]),
    );
    run_grid(sim, &spec, &[input], &output, opts.policy, opts.mode)
}

/// Base block reading vertical terms straight down the single copy.
fn base_block_single(
    sim: &mut CacheSim,
    d: &SimArray,
    ws: &GapWeights,
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
            let diag = sim.read_finalized(d, &[i - 1, j - 1])?;
            v = v.min(diag + ws.r.eval(&[i as i64, j as i64]));
            cells += 1;
            for q in j0..j {
                let h = sim.read_finalized(d, &[i, q])?;
                v = v.min(h + ws.wp.eval(&[q as i64, j as i64]));
                cells += 1;
            }
            for p in i0..i {
                let u = sim.read_finalized(d, &[p, j])?;
                v = v.min(u + ws.w.eval(&[p as i64, i as i64]));
                cells += 1;
            }
            sim.write(d, &[i, j], v)?;
            sim.mark_finalized(d, &[i, j])?;
        }
    }
    Ok(DagCost::leaf(cells))
}
