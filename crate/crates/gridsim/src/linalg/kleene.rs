//! All-pairs shortest distances by divide-and-conquer transitive closure.
//!
//! The input is a square matrix of edge weights (`f64::INFINITY` for a
//! missing edge) that is overwritten in place with shortest-path distances.
//! The recursion closes the upper-left quadrant, pushes paths through it
//! into the off-diagonal quadrants with tropical product updates, closes
//! the lower-right quadrant, and propagates paths back. Each product step
//! is a three-dimensional grid computation, so the cache behaviour and the
//! work/span totals follow the grid engine's accounting.

use crate::accounting::DagCost;
use crate::algebra::Semiring;
use crate::grid::ExecOptions;
use crate::linalg::matmul::matmul_accum;
use crate::sim::{CacheSim, SimArray, SimError};

/// Overwrites the square matrix `a` with its tropical closure: after the
/// call, `a[i][j]` holds the weight of the shortest path from `i` to `j`
/// (diagonal entries are expected to start at zero). Returns the combined
/// work/span of the schedule.
pub fn solve_kleene(sim: &mut CacheSim, a: &SimArray, opts: &ExecOptions) -> Result<DagCost, SimError> {
    let ext = a.extents();
    if ext.len() != 2 || ext[0] != ext[1] {
        return Err(SimError::InvalidConfig(format!(
            "closure requires a square matrix, got extents {:?}",
            ext
        )));
    }
    if ext[0] == 0 {
        return Ok(DagCost::ZERO);
    }
    closure_rec(sim, a, opts)
}

fn closure_rec(sim: &mut CacheSim, a: &SimArray, opts: &ExecOptions) -> Result<DagCost, SimError> {
    let s = a.extents()[0];
    if s <= opts.base_threshold {
        return base_closure(sim, a);
    }
    let h = s.div_ceil(2);
    let a00 = a.view(&[0, 0], &[h, h])?;
    let a01 = a.view(&[0, h], &[h, s - h])?;
    let a10 = a.view(&[h, 0], &[s - h, h])?;
    let a11 = a.view(&[h, h], &[s - h, s - h])?;

    // Close the upper-left block, then extend its paths outward.
    let k1 = closure_rec(sim, &a00, opts)?;
    let c2 = matmul_accum(sim, &a00, &a01, &a01, Semiring::Tropical, opts)?;
    let c3 = matmul_accum(sim, &a10, &a00, &a10, Semiring::Tropical, opts)?;
    let c4 = matmul_accum(sim, &a10, &a01, &a11, Semiring::Tropical, opts)?;
    // Close the lower-right block, then propagate its paths back.
    let k5 = closure_rec(sim, &a11, opts)?;
    let c6 = matmul_accum(sim, &a01, &a11, &a01, Semiring::Tropical, opts)?;
    let c7 = matmul_accum(sim, &a11, &a10, &a10, Semiring::Tropical, opts)?;
    let c8 = matmul_accum(sim, &a01, &a10, &a00, Semiring::Tropical, opts)?;

    Ok(k1
        .sequential(c2.parallel(c3))
        .sequential(c4)
        .sequential(k5)
        .sequential(c6.parallel(c7))
        .sequential(c8))
}

/// Closes a small block with the classic relaxation triple loop, charging
/// one unit of work per (k, i, j) relaxation.
fn base_closure(sim: &mut CacheSim, a: &SimArray) -> Result<DagCost, SimError> {
    let s = a.extents()[0];
    let mut cells = 0u64;
    for k in 0..s {
        for i in 0..s {
            for j in 0..s {
                let ik = sim.read(a, &[i, k])?;
                let kj = sim.read(a, &[k, j])?;
                let ij = sim.read(a, &[i, j])?;
                let via = ik + kj;
                if via < ij {
                    sim.write(a, &[i, j], via)?;
                }
                cells += 1;
            }
        }
    }
    Ok(DagCost::leaf(cells))
}
