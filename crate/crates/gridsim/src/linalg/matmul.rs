//! Semiring matrix multiplication as a single 3-d grid.

use crate::accounting::DagCost;
use crate::algebra::Semiring;
use crate::grid::{run_grid, Binding, ExecOptions, GridSpec, IndexMap};
use crate::sim::{CacheSim, SimArray, SimError};

/// Accumulate `c ⊕= a ⊗ b` over `semiring`, where `a` is `n×p`, `b` is
/// `p×m`, and `c` is `n×m`.
///
/// `c` must already hold the caller's initial values (the additive identity
/// for a plain product). Grid cell `(i, j, l)` reads `a[i][l]` and
/// `b[l][j]` and folds their product into `c[i][j]`; the accumulation
/// dimension `l` is innermost, so every output entry collects its terms in
/// ascending `l` order regardless of split policy.
pub fn matmul_accum(
    sim: &mut CacheSim,
    a: &SimArray,
    b: &SimArray,
    c: &SimArray,
    semiring: Semiring,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let (an, ap) = dims2(a)?;
    let (bp, bm) = dims2(b)?;
    let (cn, cm) = dims2(c)?;
    if ap != bp || an != cn || bm != cm {
        return Err(SimError::InvalidConfig(format!(
            "matmul shape mismatch: {}x{} * {}x{} -> {}x{}",
            an, ap, bp, bm, cn, cm
        )));
    }
    let cell = move |vals: &[f64], _cell: &[usize]| semiring.mul(vals[0], vals[1]);
    let spec = GridSpec::new(vec![an, bm, ap], semiring.add_monoid(), &cell)
        .with_base_threshold(opts.base_threshold);
    let inputs = [
        Binding::finalized(a.clone(), IndexMap::Axes(vec![0, 2])),
        Binding::finalized(b.clone(), IndexMap::Axes(vec![2, 1])),
    ];
    let output = Binding::new(c.clone(), IndexMap::Axes(vec![0, 1]));
    run_grid(sim, &spec, &inputs, &output, opts.policy, opts.mode)
}

/// Numeric rank-update `c -= a * b`, the Schur-complement step shared by
/// the factorization and triangular-solve kernels. Same grid shape as
/// [`matmul_accum`], with each product negated before accumulation.
pub fn matmul_sub_accum(
    sim: &mut CacheSim,
    a: &SimArray,
    b: &SimArray,
    c: &SimArray,
    opts: &ExecOptions,
) -> Result<DagCost, SimError> {
    let (an, ap) = dims2(a)?;
    let (bp, bm) = dims2(b)?;
    let (cn, cm) = dims2(c)?;
    if ap != bp || an != cn || bm != cm {
        return Err(SimError::InvalidConfig(format!(
            "matmul shape mismatch: {}x{} * {}x{} -> {}x{}",
            an, ap, bp, bm, cn, cm
        )));
    }
    let cell = move |vals: &[f64], _cell: &[usize]| -(vals[0] * vals[1]);
    let spec = GridSpec::new(vec![an, bm, ap], crate::algebra::Monoid::Add, &cell)
        .with_base_threshold(opts.base_threshold);
    let inputs = [
        Binding::finalized(a.clone(), IndexMap::Axes(vec![0, 2])),
        Binding::finalized(b.clone(), IndexMap::Axes(vec![2, 1])),
    ];
    let output = Binding::new(c.clone(), IndexMap::Axes(vec![0, 1]));
    run_grid(sim, &spec, &inputs, &output, opts.policy, opts.mode)
}

fn dims2(a: &SimArray) -> Result<(usize, usize), SimError> {
    let e = a.extents();
    if e.len() != 2 {
        return Err(SimError::InvalidConfig(format!(
            "expected a 2-d array, got {} dims",
            e.len()
        )));
    }
    Ok((e[0], e[1]))
}
