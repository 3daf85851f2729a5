//! Instance dispatcher: allocates simulated storage for an instance, runs
//! the matching kernel, and returns the outputs plus the full cost report.

use crate::accounting::DagCost;
use crate::algebra::Semiring;
use crate::grid::ExecOptions;
use crate::instance::Instance;
use crate::sim::{advance, CacheConfig, CacheSim, CostReport, SimArray, SimError};

/// A solved instance: output values (row-major, with `shape` matching the
/// reference evaluator's layout for the same kind), the cache/work report,
/// and how many non-degenerate grids the kernel launched.
#[derive(Debug, Clone)]
pub struct Solution {
    pub values: Vec<f64>,
    pub shape: Vec<usize>,
    pub report: CostReport,
    pub grid_invocations: u64,
}

/// Solve `inst` on a fresh simulator with the given cache geometry.
pub fn solve(inst: &Instance, cache: CacheConfig, opts: &ExecOptions) -> Result<Solution, SimError> {
    let mut sim = CacheSim::new(cache);
    solve_on(&mut sim, inst, opts)
}

/// Solve `inst` on an existing simulator (so callers can enable tracing or
/// dependency checking first). Flushes dirty lines at the end; counters
/// accumulate if the simulator is reused.
pub fn solve_on(
    sim: &mut CacheSim,
    inst: &Instance,
    opts: &ExecOptions,
) -> Result<Solution, SimError> {
    let grids_before = sim.grid_invocations();
    let (values, shape, cost) = run_kernel(sim, inst, opts)?;
    sim.set_dag_costs(cost.work, cost.span);
    let report = sim.flush_and_report();
    Ok(Solution {
        values,
        shape,
        report,
        grid_invocations: sim.grid_invocations() - grids_before,
    })
}

fn run_kernel(
    sim: &mut CacheSim,
    inst: &Instance,
    opts: &ExecOptions,
) -> Result<(Vec<f64>, Vec<usize>, DagCost), SimError> {
    match inst {
        Instance::Lws { n, w, d0 } => {
            let d = sim.alloc(&[n + 1])?;
            sim.poke(&d, &[0], *d0)?;
            for j in 1..=*n {
                sim.poke(&d, &[j], f64::INFINITY)?;
            }
            sim.mark_persistent();
            let cost = crate::dp::solve_lws(sim, &d, w, opts)?;
            Ok((peek_all(sim, &d)?, vec![n + 1], cost))
        }
        Instance::Matmul { n, a, b, tropical } => {
            let sa = alloc_input(sim, &[*n, *n], a)?;
            let sb = alloc_input(sim, &[*n, *n], b)?;
            let sc = sim.alloc(&[*n, *n])?;
            let semiring = if *tropical { Semiring::Tropical } else { Semiring::Numeric };
            if *tropical {
                fill(sim, &sc, f64::INFINITY)?;
            }
            sim.mark_persistent();
            let cost = crate::linalg::matmul_accum(sim, &sa, &sb, &sc, semiring, opts)?;
            Ok((peek_all(sim, &sc)?, vec![*n, *n], cost))
        }
        Instance::Knapsack2 { n, a, b, w } => {
            let sa = alloc_input(sim, &[n + 1], a)?;
            let sb = alloc_input(sim, &[n + 1], b)?;
            let d = sim.alloc(&[n + 1])?;
            fill(sim, &d, f64::INFINITY)?;
            sim.mark_persistent();
            let cost = crate::dp::solve_knapsack2(sim, &sa, &sb, &d, w, opts)?;
            Ok((peek_all(sim, &d)?, vec![n + 1], cost))
        }
        Instance::Accordion { n, w, col1 } => {
            let m = n + 1;
            let dr = sim.alloc(&[m, m])?;
            let dc = sim.alloc(&[m, m])?;
            fill(sim, &dr, f64::NEG_INFINITY)?;
            fill(sim, &dc, f64::NEG_INFINITY)?;
            for i in 2..=*n {
                sim.poke(&dr, &[i, 1], col1[i])?;
                sim.poke(&dc, &[1, i], col1[i])?;
                sim.mark_finalized(&dr, &[i, 1])?;
                sim.mark_finalized(&dc, &[1, i])?;
                if i >= 3 {
                    // Column 2 keeps the empty-reduction identity.
                    sim.mark_finalized(&dr, &[i, 2])?;
                    sim.mark_finalized(&dc, &[2, i])?;
                }
            }
            sim.mark_persistent();
            let cost = crate::dp::solve_accordion(sim, &dr, &dc, w, opts)?;
            // Reassemble the reference layout: zeros outside the strictly
            // lower triangle, the given column 1, computed columns from the
            // transposed copy.
            let mut values = vec![0.0; m * m];
            for i in 2..=*n {
                values[i * m + 1] = col1[i];
            }
            for j in 2..=*n {
                for i in j + 1..=*n {
                    values[i * m + j] = sim.peek(&dc, &[j, i])?;
                }
            }
            Ok((values, vec![m, m], cost))
        }
        Instance::Parenthesis { n, w, init } => {
            let m = n + 1;
            let d = sim.alloc(&[m, m])?;
            for i in 0..*n {
                sim.poke(&d, &[i, i + 1], init[i])?;
                sim.mark_finalized(&d, &[i, i + 1])?;
                for j in i + 2..m {
                    sim.poke(&d, &[i, j], f64::INFINITY)?;
                }
            }
            sim.mark_persistent();
            let cost = crate::dp::solve_parenthesis(sim, &d, w, opts)?;
            Ok((peek_all(sim, &d)?, vec![m, m], cost))
        }
        Instance::Rna { n, w, top, left } => {
            let m = n + 1;
            let d = sim.alloc(&[m, m])?;
            fill(sim, &d, f64::INFINITY)?;
            for j in 0..=*n {
                sim.poke(&d, &[0, j], top[j])?;
            }
            for i in 1..=*n {
                sim.poke(&d, &[i, 0], left[i])?;
            }
            for t in 0..m {
                sim.mark_finalized(&d, &[0, t])?;
                sim.mark_finalized(&d, &[t, 0])?;
            }
            sim.mark_persistent();
            let cost = crate::dp::solve_rna(sim, &d, w, opts)?;
            Ok((peek_all(sim, &d)?, vec![m, m], cost))
        }
        Instance::Gap { n, w, wp, r } => {
            let m = n + 1;
            let dr = sim.alloc(&[m, m])?;
            let dc = sim.alloc(&[m, m])?;
            init_gap_boundary(sim, &dr, &dc, *n, w, wp)?;
            sim.mark_persistent();
            let ws = crate::dp::GapWeights { w, wp, r };
            let cost = crate::dp::solve_gap(sim, &dr, &dc, &ws, opts)?;
            Ok((peek_all(sim, &dr)?, vec![m, m], cost))
        }
        Instance::Kleene { n, adj } => {
            let a = alloc_input(sim, &[*n, *n], adj)?;
            sim.mark_persistent();
            let cost = crate::linalg::solve_kleene(sim, &a, opts)?;
            Ok((peek_all(sim, &a)?, vec![*n, *n], cost))
        }
        Instance::Gauss { n, a } => {
            // Pad to a power of two with an identity block so every split is
            // even; the padding eliminates to itself and is not extracted.
            let p = n.next_power_of_two().max(1);
            let pa = sim.alloc(&[p, p])?;
            for i in 0..*n {
                for j in 0..*n {
                    sim.poke(&pa, &[i, j], a[i * n + j])?;
                }
            }
            for i in *n..p {
                sim.poke(&pa, &[i, i], 1.0)?;
            }
            sim.mark_finalized_all(&pa)?;
            sim.mark_persistent();
            let cost = crate::linalg::solve_gauss(sim, &pa, opts)?;
            let out = pa.view(&[0, 0], &[*n, *n])?;
            Ok((peek_all(sim, &out)?, vec![*n, *n], cost))
        }
        Instance::Triangular { n, t, b } => {
            let st = alloc_input(sim, &[*n, *n], t)?;
            let sb = alloc_input(sim, &[*n, *n], b)?;
            sim.mark_persistent();
            let cost = crate::linalg::solve_triangular(sim, &st, &sb, opts)?;
            Ok((peek_all(sim, &sb)?, vec![*n, *n], cost))
        }
        Instance::Strassen { n, a, b } => {
            let sa = alloc_input(sim, &[*n, *n], a)?;
            let sb = alloc_input(sim, &[*n, *n], b)?;
            let sc = sim.alloc(&[*n, *n])?;
            sim.mark_persistent();
            let cost = crate::linalg::solve_strassen(sim, &sa, &sb, &sc, opts)?;
            Ok((peek_all(sim, &sc)?, vec![*n, *n], cost))
        }
    }
}

/// Install the gap recurrence's boundary into both layouts (`dr` row-major,
/// `dc` transposed): interior `+inf`, `D[0][0] = 0`, `D[0][j] = w(0, j)`,
/// `D[i][0] = wp(0, i)`, boundary finalized in both copies.
fn init_gap_boundary(
    sim: &mut CacheSim,
    dr: &SimArray,
    dc: &SimArray,
    n: usize,
    w: &crate::weights::Weight,
    wp: &crate::weights::Weight,
) -> Result<(), SimError> {
    fill(sim, dr, f64::INFINITY)?;
    fill(sim, dc, f64::INFINITY)?;
    sim.poke(dr, &[0, 0], 0.0)?;
    sim.poke(dc, &[0, 0], 0.0)?;
    for j in 1..=n {
        let v = w.eval(&[0, j as i64]);
        sim.poke(dr, &[0, j], v)?;
        sim.poke(dc, &[j, 0], v)?;
    }
    for i in 1..=n {
        let v = wp.eval(&[0, i as i64]);
        sim.poke(dr, &[i, 0], v)?;
        sim.poke(dc, &[0, i], v)?;
    }
    for t in 0..=n {
        sim.mark_finalized(dr, &[0, t])?;
        sim.mark_finalized(dr, &[t, 0])?;
        sim.mark_finalized(dc, &[0, t])?;
        sim.mark_finalized(dc, &[t, 0])?;
    }
    Ok(())
}

/// Allocate an array, install `data` row-major without charging transfers,
/// and mark every entry finalized (instance inputs are read-only).
fn alloc_input(
    sim: &mut CacheSim,
    extents: &[usize],
    data: &[f64],
) -> Result<SimArray, SimError> {
    let arr = sim.alloc(extents)?;
    debug_assert_eq!(arr.len(), data.len());
    let mut idx = vec![0usize; extents.len()];
    let mut pos = 0;
    loop {
        sim.poke(&arr, &idx, data[pos])?;
        pos += 1;
        if !advance(&mut idx, extents) {
            break;
        }
    }
    sim.mark_finalized_all(&arr)?;
    Ok(arr)
}

/// Set every entry of `arr` to `value` without charging transfers.
fn fill(sim: &mut CacheSim, arr: &SimArray, value: f64) -> Result<(), SimError> {
    let extents = arr.extents().to_vec();
    let mut idx = vec![0usize; extents.len()];
    loop {
        sim.poke(arr, &idx, value)?;
        if !advance(&mut idx, &extents) {
            return Ok(());
        }
    }
}

/// Copy an array out of the simulator (row-major) without charging
/// transfers.
fn peek_all(sim: &CacheSim, arr: &SimArray) -> Result<Vec<f64>, SimError> {
    let extents = arr.extents().to_vec();
    let mut out = Vec::with_capacity(arr.len());
    let mut idx = vec![0usize; extents.len()];
    loop {
        out.push(sim.peek(arr, &idx)?);
        if !advance(&mut idx, &extents) {
            return Ok(out);
        }
    }
}
