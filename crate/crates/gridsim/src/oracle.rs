//! Independent brute-force reference implementations.
//!
//! Every function here evaluates its recurrence with plain nested loops in
//! textbook dependency order: no divide-and-conquer, no simulator, no code
//! shared with the solvers. That independence is the point — when a solver
//! and its oracle agree entry for entry on randomized instances, both would
//! have to contain a matching bug for the comparison to pass.
//!
//! Sizes are capped ([`Kind::oracle_cap`]) because the loops are quadratic
//! to quartic; the caps keep full randomized sweeps within a test budget.

use crate::instance::Instance;
use crate::sim::SimError;
use crate::weights::Weight;

/// A reference evaluation: the output values (row-major with `shape`) and
/// how many recurrence terms the loops evaluated.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub values: Vec<f64>,
    pub shape: Vec<usize>,
    pub elapsed_cells: u64,
}

/// Evaluates `inst` by brute force. Errors if `n` exceeds the kind's cap.
pub fn oracle_eval(inst: &Instance) -> Result<OracleResult, SimError> {
    let cap = inst.kind().oracle_cap();
    if inst.n() > cap {
        return Err(SimError::ReferenceCap { n: inst.n(), cap });
    }
    Ok(match inst {
        Instance::Lws { n, w, d0 } => lws(*n, w, *d0),
        Instance::Gap { n, w, wp, r } => gap(*n, w, wp, r),
        Instance::Rna { n, w, top, left } => rna(*n, w, top, left),
        Instance::Parenthesis { n, w, init } => parenthesis(*n, w, init),
        Instance::Knapsack2 { n, a, b, w } => knapsack2(*n, a, b, w),
        Instance::Accordion { n, w, col1 } => accordion(*n, w, col1),
        Instance::Matmul { n, a, b, tropical } => matmul(*n, a, b, *tropical),
        Instance::Kleene { n, adj } => kleene(*n, adj),
        Instance::Gauss { n, a } => gauss(*n, a)?,
        Instance::Triangular { n, t, b } => triangular(*n, t, b)?,
        Instance::Strassen { n, a, b } => matmul(*n, a, b, false),
    })
}

/// Compares solver output against the oracle: exact for integer-valued
/// kinds, within `1e-9` relative tolerance for the float-valued ones.
/// Reports the first mismatching coordinate.
pub fn cross_check(inst: &Instance, values: &[f64], shape: &[usize]) -> Result<(), SimError> {
    let reference = oracle_eval(inst)?;
    if shape != reference.shape {
        return Err(SimError::Mismatch {
            coord: vec![],
            got: values.len() as f64,
            expected: reference.values.len() as f64,
        });
    }
    let float_kind = inst.kind().float_valued();
    for (pos, (&got, &expected)) in values.iter().zip(&reference.values).enumerate() {
        let ok = if float_kind {
            (got - expected).abs() <= 1e-9 * (1.0 + expected.abs())
        } else {
            got == expected || (got.is_infinite() && expected.is_infinite() && got.signum() == expected.signum())
        };
        if !ok {
            return Err(SimError::Mismatch {
                coord: unflatten(pos, shape),
                got,
                expected,
            });
        }
    }
    Ok(())
}

fn unflatten(mut pos: usize, shape: &[usize]) -> Vec<usize> {
    let mut coord = vec![0; shape.len()];
    for d in (0..shape.len()).rev() {
        coord[d] = pos % shape[d];
        pos /= shape[d];
    }
    coord
}

fn lws(n: usize, w: &Weight, d0: f64) -> OracleResult {
    let mut d = vec![0.0; n + 1];
    let mut cells = 0u64;
    d[0] = d0;
    for j in 1..=n {
        let mut best = f64::INFINITY;
        for i in 0..j {
            best = best.min(d[i] + w.eval(&[i as i64, j as i64]));
            cells += 1;
        }
        d[j] = best;
    }
    OracleResult { values: d, shape: vec![n + 1], elapsed_cells: cells }
}

fn gap(n: usize, w: &Weight, wp: &Weight, r: &Weight) -> OracleResult {
    let m = n + 1;
    let mut d = vec![0.0; m * m];
    let mut cells = 0u64;
    for j in 1..=n {
        d[j] = w.eval(&[0, j as i64]);
    }
    for i in 1..=n {
        d[i * m] = wp.eval(&[0, i as i64]);
    }
    for i in 1..=n {
        for j in 1..=n {
            let mut best = d[(i - 1) * m + (j - 1)] + r.eval(&[i as i64, j as i64]);
            cells += 1;
            for q in 0..j {
                best = best.min(d[i * m + q] + wp.eval(&[q as i64, j as i64]));
                cells += 1;
            }
            for p in 0..i {
                best = best.min(d[p * m + j] + w.eval(&[p as i64, i as i64]));
                cells += 1;
            }
            d[i * m + j] = best;
        }
    }
    OracleResult { values: d, shape: vec![m, m], elapsed_cells: cells }
}

fn rna(n: usize, w: &Weight, top: &[f64], left: &[f64]) -> OracleResult {
    let m = n + 1;
    let mut d = vec![0.0; m * m];
    let mut cells = 0u64;
    for j in 0..=n {
        d[j] = top[j];
    }
    for i in 1..=n {
        d[i * m] = left[i];
    }
    for i in 1..=n {
        for j in 1..=n {
            let mut best = f64::INFINITY;
            for p in 0..i {
                for q in 0..j {
                    best = best.min(
                        d[p * m + q] + w.eval(&[p as i64, q as i64, i as i64, j as i64]),
                    );
                    cells += 1;
                }
            }
            d[i * m + j] = best;
        }
    }
    OracleResult { values: d, shape: vec![m, m], elapsed_cells: cells }
}

fn parenthesis(n: usize, w: &Weight, init: &[f64]) -> OracleResult {
    let m = n + 1;
    let mut d = vec![0.0; m * m];
    let mut cells = 0u64;
    for i in 0..n {
        d[i * m + i + 1] = init[i];
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut best = f64::INFINITY;
            for k in i + 1..j {
                best = best.min(
                    d[i * m + k] + d[k * m + j] + w.eval(&[i as i64, k as i64, j as i64]),
                );
                cells += 1;
            }
            d[i * m + j] = best;
        }
    }
    OracleResult { values: d, shape: vec![m, m], elapsed_cells: cells }
}

/// Exhaustively enumerates every grouping tree of the chain `i..j` (no
/// memoization — each of the Catalan-many trees is costed independently)
/// and returns the cheapest total. Cross-checks the DP loop for tiny `n`.
pub fn parenthesis_enumerate(n: usize, w: &Weight, init: &[f64]) -> f64 {
    fn go(i: usize, j: usize, w: &Weight, init: &[f64]) -> f64 {
        if j == i + 1 {
            return init[i];
        }
        let mut best = f64::INFINITY;
        for k in i + 1..j {
            let cost = go(i, k, w, init)
                + go(k, j, w, init)
                + w.eval(&[i as i64, k as i64, j as i64]);
            best = best.min(cost);
        }
        best
    }
    go(0, n, w, init)
}

fn knapsack2(n: usize, a: &[f64], b: &[f64], w: &Weight) -> OracleResult {
    let mut d = vec![0.0; n + 1];
    let mut cells = 0u64;
    for i in 0..=n {
        let mut best = f64::INFINITY;
        for j in 0..=i {
            best = best.min(a[j] + b[i - j] + w.eval(&[j as i64, (i - j) as i64, i as i64]));
            cells += 1;
        }
        d[i] = best;
    }
    OracleResult { values: d, shape: vec![n + 1], elapsed_cells: cells }
}

fn accordion(n: usize, w: &Weight, col1: &[f64]) -> OracleResult {
    let m = n + 1;
    let mut d = vec![0.0; m * m];
    let mut cells = 0u64;
    for i in 2..=n {
        d[i * m + 1] = col1[i];
    }
    for j in 2..=n {
        for i in j + 1..=n {
            let mut best = f64::NEG_INFINITY;
            for k in 1..j - 1 {
                best = best.max(
                    d[(j - 1) * m + k] + w.eval(&[i as i64, j as i64, k as i64]),
                );
                cells += 1;
            }
            d[i * m + j] = best;
        }
    }
    OracleResult { values: d, shape: vec![m, m], elapsed_cells: cells }
}

fn matmul(n: usize, a: &[f64], b: &[f64], tropical: bool) -> OracleResult {
    let mut c = vec![if tropical { f64::INFINITY } else { 0.0 }; n * n];
    let mut cells = 0u64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = c[i * n + j];
            for l in 0..n {
                if tropical {
                    acc = acc.min(a[i * n + l] + b[l * n + j]);
                } else {
                    acc += a[i * n + l] * b[l * n + j];
                }
                cells += 1;
            }
            c[i * n + j] = acc;
        }
    }
    OracleResult { values: c, shape: vec![n, n], elapsed_cells: cells }
}

fn kleene(n: usize, adj: &[f64]) -> OracleResult {
    let mut dist = adj.to_vec();
    let mut cells = 0u64;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i * n + k] + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
                cells += 1;
            }
        }
    }
    OracleResult { values: dist, shape: vec![n, n], elapsed_cells: cells }
}

fn gauss(n: usize, a: &[f64]) -> Result<OracleResult, SimError> {
    let mut m = a.to_vec();
    let mut cells = 0u64;
    for k in 0..n {
        let piv = m[k * n + k];
        if piv.abs() < 1e-12 {
            return Err(SimError::SingularPivot { index: k, value: piv });
        }
        for i in k + 1..n {
            m[i * n + k] /= piv;
            cells += 1;
            let mult = m[i * n + k];
            for j in k + 1..n {
                m[i * n + j] -= mult * m[k * n + j];
                cells += 1;
            }
        }
    }
    Ok(OracleResult { values: m, shape: vec![n, n], elapsed_cells: cells })
}

fn triangular(n: usize, t: &[f64], b: &[f64]) -> Result<OracleResult, SimError> {
    let mut x = b.to_vec();
    let mut cells = 0u64;
    for i in 0..n {
        if t[i * n + i].abs() < 1e-12 {
            return Err(SimError::SingularPivot { index: i, value: t[i * n + i] });
        }
    }
    for j in 0..n {
        for i in 0..n {
            let mut s = x[i * n + j];
            for k in 0..i {
                s -= t[i * n + k] * x[k * n + j];
                cells += 1;
            }
            x[i * n + j] = s / t[i * n + i];
            cells += 1;
        }
    }
    Ok(OracleResult { values: x, shape: vec![n, n], elapsed_cells: cells })
}
