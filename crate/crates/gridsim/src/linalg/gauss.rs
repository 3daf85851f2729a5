//! Divide-and-conquer LU factorization without pivoting.
//!
//! The square input is overwritten with its packed factors: the strictly
//! lower part holds the multipliers of a unit-diagonal `L`, the diagonal
//! and upper part hold `U`. The recursion factors the upper-left block,
//! solves the two adjacent panels against that block's triangles, applies
//! a single rank-update grid to the trailing block (`A11 -= A10 * A01`),
//! and recurses on it. Entries that would be eliminated by a zero or
//! near-zero diagonal raise [`SimError::SingularPivot`] with the absolute
//! row index, matching the order a scalar elimination would discover it.

use crate::accounting::DagCost;
use crate::grid::ExecOptions;
use crate::linalg::matmul::matmul_sub_accum;
use crate::linalg::triangular::{solve_lower_unit, solve_upper_right};
use crate::sim::{CacheSim, SimArray, SimError};

const PIVOT_EPS: f64 = 1e-12;

/// Factors the square matrix `a` in place into packed `L` (unit diagonal,
/// stored strictly below) and `U` (diagonal and above). Returns the
/// work/span of the schedule, or [`SimError::SingularPivot`] when the
/// elimination meets a diagonal entry of magnitude below `1e-12`.
pub fn solve_gauss(sim: &mut CacheSim, a: &SimArray, opts: &ExecOptions) -> Result<DagCost, SimError> {
    let ext = a.extents();
    if ext.len() != 2 || ext[0] != ext[1] {
        return Err(SimError::InvalidConfig(format!(
            "factorization requires a square matrix, got extents {:?}",
            ext
        )));
    }
    if ext[0] == 0 {
        return Ok(DagCost::ZERO);
    }
    factor_rec(sim, a, 0, opts)
}

fn factor_rec(
    sim: &mut CacheSim,
    a: &SimArray,
    row0: usize,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let s = a.extents()[0];
    if s <= opts.base_threshold {
        return base_factor(sim, a, row0);
    }
    let h = s.div_ceil(2);
    let a00 = a.view(&[0, 0], &[h, h])?;
    let a01 = a.view(&[0, h], &[h, s - h])?;
    let a10 = a.view(&[h, 0], &[s - h, h])?;
    let a11 = a.view(&[h, h], &[s - h, s - h])?;

    let head = factor_rec(sim, &a00, row0, opts)?;
    // A01 <- L00^-1 * A01 reads only the strict lower part of the block;
    // A10 <- A10 * U00^-1 divides by the diagonal of U00.
    let panel_u = solve_lower_unit(sim, &a00, &a01, opts)?;
    let panel_l = solve_upper_right(sim, &a00, &a10, row0, opts)?;
    let update = matmul_sub_accum(sim, &a10, &a01, &a11, opts)?;
    let tail = factor_rec(sim, &a11, row0 + h, opts)?;
    Ok(head
        .sequential(panel_u.parallel(panel_l))
        .sequential(update)
        .sequential(tail))
}

/// Right-looking elimination of a small block, charging one unit of work
/// per multiplier division and per inner-loop update, in the same order a
/// scalar elimination performs them.
fn base_factor(sim: &mut CacheSim, a: &SimArray, row0: usize) -> Result<DagCost, SimError> {
    let s = a.extents()[0];
    let mut cells = 0u64;
    for k in 0..s {
        let piv = sim.read(a, &[k, k])?;
        if piv.abs() < PIVOT_EPS {
            return Err(SimError::SingularPivot { index: row0 + k, value: piv });
        }
        for i in (k + 1)..s {
            let mult = sim.read(a, &[i, k])? / piv;
            sim.write(a, &[i, k], mult)?;
            cells += 1;
            for j in (k + 1)..s {
                let akj = sim.read(a, &[k, j])?;
                let aij = sim.read(a, &[i, j])?;
                sim.write(a, &[i, j], aij - mult * akj)?;
                cells += 1;
            }
        }
    }
    Ok(DagCost::leaf(cells))
}
