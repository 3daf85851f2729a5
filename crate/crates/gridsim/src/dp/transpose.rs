//! Cache-oblivious transpose-merge between two 2-d arrays.
//!
//! `dst[c][r] = combine(dst[c][r], src[r][c])` over a rectangular block of
//! `src`. Kernels that keep both row-major and column-major copies of a
//! matrix use this to migrate finished or partially-accumulated values
//! from one layout into the other; folding with the kernel's own monoid
//! (instead of overwriting) makes the merge safe when the two copies hold
//! different subsets of a value's terms.
//!
//! The block is halved along its longer side until both sides fit the base
//! threshold, so every level of a cache holds whole sub-blocks of both
//! layouts — the usual quadrant-recursion transpose, with every element
//! access charged through the simulator. Sibling sub-blocks touch disjoint
//! destination entries and run as parallel siblings in the accounting.

use crate::accounting::DagCost;
use crate::algebra::Monoid;
use crate::sim::{CacheSim, SimArray, SimError};

/// Fold the `src` block `rows x cols` into its mirrored position in `dst`.
/// Ranges are half-open over `src` coordinates.
pub fn transpose_merge(
    sim: &mut CacheSim,
    src: &SimArray,
    rows: (usize, usize),
    cols: (usize, usize),
    dst: &SimArray,
    combine: Monoid,
    base_threshold: usize,
) -> Result<DagCost, SimError> {
    let t = base_threshold.max(1);
    let (r0, r1) = rows;
    let (c0, c1) = cols;
    if r0 >= r1 || c0 >= c1 {
        return Ok(DagCost::ZERO);
    }
    let (h, w) = (r1 - r0, c1 - c0);
    if h <= t && w <= t {
        let mut cells = 0u64;
        for r in r0..r1 {
            for c in c0..c1 {
                let v = sim.read(src, &[r, c])?;
                let cur = sim.read(dst, &[c, r])?;
                sim.write(dst, &[c, r], combine.apply(cur, v))?;
                cells += 1;
            }
        }
        return Ok(DagCost::leaf(cells));
    }
    let (a, b) = if h >= w {
        let rm = r0 + h.div_ceil(2);
        (
            transpose_merge(sim, src, (r0, rm), (c0, c1), dst, combine, t)?,
            transpose_merge(sim, src, (rm, r1), (c0, c1), dst, combine, t)?,
        )
    } else {
        let cm = c0 + w.div_ceil(2);
        (
            transpose_merge(sim, src, (r0, r1), (c0, cm), dst, combine, t)?,
            transpose_merge(sim, src, (r0, r1), (cm, c1), dst, combine, t)?,
        )
    };
    Ok(a.parallel(b))
}
