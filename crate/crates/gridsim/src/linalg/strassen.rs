//! Seven-product recursive matrix multiplication with a write-aware
//! outer tiling.
//!
//! `C = A * B` is computed by cutting the output into `r x r` square
//! tiles and accumulating each tile from `r` tile products, every product
//! computed by the seven-product recursion into a scratch matrix that is
//! folded into the tile and released. The recursion itself halves the
//! operands, forms the seven classic operand combinations in scratch
//! space, and folds the products back into the output quadrants.
//!
//! The tile count `r` grows with the relative cost of writes: expensive
//! writes favour replacing levels of the seven-product recursion (whose
//! scratch matrices are written and flushed) with classic eight-product
//! tiling over views that allocates nothing. Under the symmetric policy
//! `r = 1` and the whole multiplication is one recursion.
//!
//! Work is charged only for scalar multiplications in the base case;
//! operand additions move data (and are charged as traffic by the cache
//! simulation) but perform no semiring multiplications.

use crate::accounting::DagCost;
use crate::grid::{ExecOptions, SplitPolicy};
use crate::sim::{CacheSim, SimArray, SimError};

/// Exponent relating the write-cost factor to the preferred tile count:
/// `log base 7 of 4`.
fn tile_exponent() -> f64 {
    (4.0f64).ln() / (7.0f64).ln()
}

/// Power of two nearest to `x` (ties resolve downward).
fn nearest_pow2(x: f64) -> usize {
    if x <= 1.0 {
        return 1;
    }
    let lo = 1usize << (x.log2().floor() as u32);
    let hi = lo << 1;
    if x - lo as f64 <= hi as f64 - x {
        lo
    } else {
        hi
    }
}

/// Number of tiles per side for a given policy and matrix side.
pub fn strassen_tile_count(policy: SplitPolicy, n: usize) -> usize {
    let r = match policy {
        SplitPolicy::Classic => 1,
        SplitPolicy::Asymmetric { write_cost } => nearest_pow2(write_cost.powf(tile_exponent())),
    };
    r.clamp(1, n.max(1))
}

/// Computes `c = a * b` for square power-of-two matrices, overwriting the
/// zero-initialized `c`. Work counts scalar multiplications only.
pub fn solve_strassen(
    sim: &mut CacheSim,
    a: &SimArray,
    b: &SimArray,
    c: &SimArray,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let n = square_side(a)?;
    if square_side(b)? != n || square_side(c)? != n {
        return Err(SimError::InvalidConfig(
            "seven-product multiply requires three matrices of the same side".into(),
        ));
    }
    if n == 0 {
        return Ok(DagCost::ZERO);
    }
    if !n.is_power_of_two() {
        return Err(SimError::InvalidConfig(format!(
            "seven-product multiply requires a power-of-two side, got {}",
            n
        )));
    }
    let r = strassen_tile_count(opts.policy, n);
    let ts = n / r;
    let mut tiles = Vec::with_capacity(r * r);
    for ti in 0..r {
        for tj in 0..r {
            let c_tile = c.view(&[ti * ts, tj * ts], &[ts, ts])?;
            let mut chain = DagCost::ZERO;
            for tk in 0..r {
                let a_tile = a.view(&[ti * ts, tk * ts], &[ts, ts])?;
                let b_tile = b.view(&[tk * ts, tj * ts], &[ts, ts])?;
                let scratch = sim.alloc(&[ts, ts])?;
                let prod = product_rec(sim, &a_tile, &b_tile, &scratch, opts)?;
                fold(sim, &scratch, 1.0, &c_tile)?;
                sim.release(&scratch)?;
                chain = chain.sequential(prod);
            }
            tiles.push(chain);
        }
    }
    Ok(DagCost::parallel_all(tiles))
}

fn square_side(m: &SimArray) -> Result<usize, SimError> {
    let ext = m.extents();
    if ext.len() != 2 || ext[0] != ext[1] {
        return Err(SimError::InvalidConfig(format!(
            "expected a square matrix, got extents {:?}",
            ext
        )));
    }
    Ok(ext[0])
}

/// Overwrites `out` (zero on entry) with `a * b` by the seven-product
/// recursion; all scratch space is released before returning.
fn product_rec(
    sim: &mut CacheSim,
    a: &SimArray,
    b: &SimArray,
    out: &SimArray,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let s = a.extents()[0];
    if s <= opts.base_threshold {
        return base_multiply(sim, a, b, out);
    }
    let h = s / 2;
    let qa = quadrants(a, h)?;
    let qb = quadrants(b, h)?;
    let qo = quadrants(out, h)?;
    // (operand specs, fold targets): each product is formed from either a
    // quadrant view or a freshly built sum/difference, then folded into
    // the listed output quadrants with the given signs.
    let mut products = Vec::with_capacity(7);
    let specs: [(Operand, Operand, &[(usize, f64)]); 7] = [
        (Operand::Sum(0, 3, 1.0), Operand::Sum(0, 3, 1.0), &[(0, 1.0), (3, 1.0)]),
        (Operand::Sum(2, 3, 1.0), Operand::View(0), &[(2, 1.0), (3, -1.0)]),
        (Operand::View(0), Operand::Sum(1, 3, -1.0), &[(1, 1.0), (3, 1.0)]),
        (Operand::View(3), Operand::Sum(2, 0, -1.0), &[(0, 1.0), (2, 1.0)]),
        (Operand::Sum(0, 1, 1.0), Operand::View(3), &[(0, -1.0), (1, 1.0)]),
        (Operand::Sum(2, 0, -1.0), Operand::Sum(0, 1, 1.0), &[(3, 1.0)]),
        (Operand::Sum(1, 3, -1.0), Operand::Sum(2, 3, 1.0), &[(0, 1.0)]),
    ];
    for (a_spec, b_spec, folds) in specs {
        let (ta, a_op) = build_operand(sim, &qa, a_spec, h)?;
        let (tb, b_op) = build_operand(sim, &qb, b_spec, h)?;
        let scratch = sim.alloc(&[h, h])?;
        let prod = product_rec(sim, &a_op, &b_op, &scratch, opts)?;
        for &(target, sign) in folds {
            fold(sim, &scratch, sign, &qo[target])?;
        }
        sim.release(&scratch)?;
        if let Some(t) = tb {
            sim.release(&t)?;
        }
        if let Some(t) = ta {
            sim.release(&t)?;
        }
        products.push(prod);
    }
    Ok(DagCost::parallel_all(products))
}

enum Operand {
    /// Use the quadrant at this index directly.
    View(usize),
    /// Build `q[first] + sign * q[second]` in scratch space.
    Sum(usize, usize, f64),
}

fn quadrants(m: &SimArray, h: usize) -> Result<[SimArray; 4], SimError> {
    Ok([
        m.view(&[0, 0], &[h, h])?,
        m.view(&[0, h], &[h, h])?,
        m.view(&[h, 0], &[h, h])?,
        m.view(&[h, h], &[h, h])?,
    ])
}

fn build_operand(
    sim: &mut CacheSim,
    q: &[SimArray; 4],
    spec: Operand,
    h: usize,
) -> Result<(Option<SimArray>, SimArray), SimError> {
    match spec {
        Operand::View(i) => Ok((None, q[i].clone())),
        Operand::Sum(first, second, sign) => {
            let t = sim.alloc(&[h, h])?;
            for i in 0..h {
                for j in 0..h {
                    let x = sim.read(&q[first], &[i, j])?;
                    let y = sim.read(&q[second], &[i, j])?;
                    sim.write(&t, &[i, j], x + sign * y)?;
                }
            }
            Ok((Some(t.clone()), t))
        }
    }
}

/// `dst += sign * src`, charged as traffic but free of work.
fn fold(sim: &mut CacheSim, src: &SimArray, sign: f64, dst: &SimArray) -> Result<(), SimError> {
    let ext = src.extents().to_vec();
    for i in 0..ext[0] {
        for j in 0..ext[1] {
            let s = sim.read(src, &[i, j])?;
            let d = sim.read(dst, &[i, j])?;
            sim.write(dst, &[i, j], d + sign * s)?;
        }
    }
    Ok(())
}

/// Direct multiplication of a base block; one unit of work per scalar
/// multiplication.
fn base_multiply(
    sim: &mut CacheSim,
    a: &SimArray,
    b: &SimArray,
    out: &SimArray,
) -> Result<DagCost, SimError> {
    let s = a.extents()[0];
    let mut cells = 0u64;
    for i in 0..s {
        for j in 0..s {
            let mut acc = 0.0;
            for k in 0..s {
                let x = sim.read(a, &[i, k])?;
                let y = sim.read(b, &[k, j])?;
                acc += x * y;
                cells += 1;
            }
            sim.write(out, &[i, j], acc)?;
        }
    }
    Ok(DagCost::leaf(cells))
}
