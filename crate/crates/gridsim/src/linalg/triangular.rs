//! Divide-and-conquer triangular solves.
//!
//! The public entry solves `T * X = B` for a lower-triangular `T`,
//! overwriting `B` with `X`. The recursion quarters `T` and splits the
//! right-hand side into column panels: the upper panels are solved first,
//! the lower panels are corrected with a rank-update grid
//! (`B10 -= T10 * X00`), and the corrected panels are solved against the
//! lower-right triangle. Two crate-internal variants cover the needs of
//! the LU factorization: a unit-diagonal forward solve that never touches
//! the diagonal storage, and a mirrored solve of `X * U = B` against an
//! upper-triangular factor.

use crate::accounting::DagCost;
use crate::grid::ExecOptions;
use crate::linalg::matmul::matmul_sub_accum;
use crate::sim::{CacheSim, SimArray, SimError};

/// A pivot magnitude below this is reported as singular rather than
/// divided by.
const PIVOT_EPS: f64 = 1e-12;

/// Solves `T * X = B` in place: `t` is square lower-triangular (entries
/// above the diagonal are ignored), `b` holds the right-hand sides on
/// entry and the solution on return. Fails with
/// [`SimError::SingularPivot`] when a diagonal entry of `t` is too close
/// to zero.
pub fn solve_triangular(
    sim: &mut CacheSim,
    t: &SimArray,
    b: &SimArray,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let (s, rows) = shapes(t, b, 0)?;
    if s != rows {
        return Err(SimError::InvalidConfig(format!(
            "triangle is {0}x{0} but right-hand side has {1} rows",
            s, rows
        )));
    }
    lower_rec(sim, t, b, 0, false, opts)
}

/// Forward solve `L * X = B` where `L` has an implicit unit diagonal; the
/// diagonal storage of `l` is never read, so the triangle may share an
/// array with other factors. Used on the upper-right block of the packed
/// LU factorization.
pub(crate) fn solve_lower_unit(
    sim: &mut CacheSim,
    l: &SimArray,
    b: &SimArray,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    lower_rec(sim, l, b, 0, true, opts)
}

/// Solves `X * U = B` in place for an upper-triangular `u`, overwriting
/// `b` (whose columns match `u`). `col0` offsets the reported index of a
/// singular diagonal entry so errors name positions in the enclosing
/// matrix. Used on the lower-left block of the packed LU factorization.
pub(crate) fn solve_upper_right(
    sim: &mut CacheSim,
    u: &SimArray,
    b: &SimArray,
    col0: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    upper_rec(sim, u, b, col0, opts)
}

fn shapes(t: &SimArray, b: &SimArray, rhs_shared_dim: usize) -> Result<(usize, usize), SimError> {
    let te = t.extents();
    let be = b.extents();
    if te.len() != 2 || te[0] != te[1] || be.len() != 2 {
        return Err(SimError::InvalidConfig(format!(
            "triangular solve requires a square triangle and a matrix, got {:?} and {:?}",
            te, be
        )));
    }
    Ok((te[0], be[rhs_shared_dim]))
}

/// `row0` is the absolute row of `t`'s top-left corner, used only to
/// report singular pivots with their position in the enclosing matrix.
fn lower_rec(
    sim: &mut CacheSim,
    t: &SimArray,
    x: &SimArray,
    row0: usize,
    unit_diag: bool,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let s = t.extents()[0];
    let m = x.extents()[1];
    if m == 0 || s == 0 {
        return Ok(DagCost::ZERO);
    }
    let thr = opts.base_threshold;
    if s <= thr && m <= thr {
        return base_lower(sim, t, x, row0, unit_diag);
    }
    if s <= thr {
        // The triangle is small but the panel is wide: halve the columns.
        let cm = m.div_ceil(2);
        let xl = x.view(&[0, 0], &[s, cm])?;
        let xr = x.view(&[0, cm], &[s, m - cm])?;
        let a = lower_rec(sim, t, &xl, row0, unit_diag, opts)?;
        let b = lower_rec(sim, t, &xr, row0, unit_diag, opts)?;
        return Ok(a.parallel(b));
    }
    let h = s.div_ceil(2);
    let cm = m.div_ceil(2);
    let t00 = t.view(&[0, 0], &[h, h])?;
    let t10 = t.view(&[h, 0], &[s - h, h])?;
    let t11 = t.view(&[h, h], &[s - h, s - h])?;
    let x00 = x.view(&[0, 0], &[h, cm])?;
    let x01 = x.view(&[0, cm], &[h, m - cm])?;
    let x10 = x.view(&[h, 0], &[s - h, cm])?;
    let x11 = x.view(&[h, cm], &[s - h, m - cm])?;

    let top_l = lower_rec(sim, &t00, &x00, row0, unit_diag, opts)?;
    let top_r = lower_rec(sim, &t00, &x01, row0, unit_diag, opts)?;
    let upd_l = matmul_sub_accum(sim, &t10, &x00, &x10, opts)?;
    let upd_r = matmul_sub_accum(sim, &t10, &x01, &x11, opts)?;
    let bot_l = lower_rec(sim, &t11, &x10, row0 + h, unit_diag, opts)?;
    let bot_r = lower_rec(sim, &t11, &x11, row0 + h, unit_diag, opts)?;
    Ok(top_l
        .parallel(top_r)
        .sequential(upd_l.parallel(upd_r))
        .sequential(bot_l.parallel(bot_r)))
}

fn base_lower(
    sim: &mut CacheSim,
    t: &SimArray,
    x: &SimArray,
    row0: usize,
    unit_diag: bool,
) -> Result<DagCost, SimError> {
    let s = t.extents()[0];
    let m = x.extents()[1];
    let mut cells = 0u64;
    for c in 0..m {
        for i in 0..s {
            let mut v = sim.read(x, &[i, c])?;
            for k in 0..i {
                let tik = sim.read(t, &[i, k])?;
                let xkc = sim.read(x, &[k, c])?;
                v -= tik * xkc;
                cells += 1;
            }
            if !unit_diag {
                let piv = sim.read(t, &[i, i])?;
                if piv.abs() < PIVOT_EPS {
                    return Err(SimError::SingularPivot { index: row0 + i, value: piv });
                }
                v /= piv;
                cells += 1;
            }
            sim.write(x, &[i, c], v)?;
        }
    }
    Ok(DagCost::leaf(cells))
}

/// `col0` is the absolute column of `u`'s top-left corner, for pivot
/// reporting. The right-hand side `x` has `u`'s side as its column count.
fn upper_rec(
    sim: &mut CacheSim,
    u: &SimArray,
    x: &SimArray,
    col0: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let s = u.extents()[0];
    let m = x.extents()[0];
    if m == 0 || s == 0 {
        return Ok(DagCost::ZERO);
    }
    let thr = opts.base_threshold;
    if s <= thr && m <= thr {
        return base_upper(sim, u, x, col0);
    }
    if s <= thr {
        let rm = m.div_ceil(2);
        let xt = x.view(&[0, 0], &[rm, s])?;
        let xb = x.view(&[rm, 0], &[m - rm, s])?;
        let a = upper_rec(sim, u, &xt, col0, opts)?;
        let b = upper_rec(sim, u, &xb, col0, opts)?;
        return Ok(a.parallel(b));
    }
    let h = s.div_ceil(2);
    let rm = m.div_ceil(2);
    let u00 = u.view(&[0, 0], &[h, h])?;
    let u01 = u.view(&[0, h], &[h, s - h])?;
    let u11 = u.view(&[h, h], &[s - h, s - h])?;
    let x00 = x.view(&[0, 0], &[rm, h])?;
    let x01 = x.view(&[0, h], &[rm, s - h])?;
    let x10 = x.view(&[rm, 0], &[m - rm, h])?;
    let x11 = x.view(&[rm, h], &[m - rm, s - h])?;

    let left_t = upper_rec(sim, &u00, &x00, col0, opts)?;
    let left_b = upper_rec(sim, &u00, &x10, col0, opts)?;
    let upd_t = matmul_sub_accum(sim, &x00, &u01, &x01, opts)?;
    let upd_b = matmul_sub_accum(sim, &x10, &u01, &x11, opts)?;
    let right_t = upper_rec(sim, &u11, &x01, col0 + h, opts)?;
    let right_b = upper_rec(sim, &u11, &x11, col0 + h, opts)?;
    Ok(left_t
        .parallel(left_b)
        .sequential(upd_t.parallel(upd_b))
        .sequential(right_t.parallel(right_b)))
}

fn base_upper(
    sim: &mut CacheSim,
    u: &SimArray,
    x: &SimArray,
    col0: usize,
) -> Result<DagCost, SimError> {
    let s = u.extents()[0];
    let m = x.extents()[0];
    let mut cells = 0u64;
    for r in 0..m {
        for j in 0..s {
            let mut v = sim.read(x, &[r, j])?;
            for k in 0..j {
                let xrk = sim.read(x, &[r, k])?;
                let ukj = sim.read(u, &[k, j])?;
                v -= xrk * ukj;
                cells += 1;
            }
            let piv = sim.read(u, &[j, j])?;
            if piv.abs() < PIVOT_EPS {
                return Err(SimError::SingularPivot { index: col0 + j, value: piv });
            }
            v /= piv;
            cells += 1;
            sim.write(x, &[r, j], v)?;
        }
    }
    Ok(DagCost::leaf(cells))
}
