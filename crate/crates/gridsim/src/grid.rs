//! The k-dimensional grid computation engine.
//!
//! A grid computation is a k-dimensional lattice of unit-cost cells. Each
//! non-empty cell reads one entry from each bound input array, applies the
//! cell function, and accumulates the result into one output entry under a
//! commutative monoid. Arrays are *projections*: each is indexed by a map
//! from cell coordinates that ignores at least one dimension, and by
//! convention dimension k (the last) never appears in the output's map —
//! halving it yields two subtasks that accumulate into the same output
//! entries.
//!
//! The engine evaluates a grid by divide-and-conquer. At every step it
//! halves one dimension, chosen as the argmax of `extent_d * x_d`:
//!
//! * classic policy: `x_d = 1` — always the largest extent;
//! * asymmetric policy: `x_k = write_cost^-(k-1)/k`, other `x_d = 1` — the
//!   output-free dimension must be `write_cost^(k-1)/k` times longer before
//!   it is split, which shrinks input ranges faster than output ranges and
//!   trades cheap re-reads for fewer writes.
//!
//! Halving a dimension that appears in the output's map partitions the
//! output, so those halves run as parallel siblings. Halving the
//! output-free dimension comes in two flavors selected by [`Mode`]:
//!
//! * [`Mode::Sequential`] — the halves run one after another sharing the
//!   output array;
//! * [`Mode::Parallel`] — two temporary buffers covering the subtask's
//!   output footprint are stack-allocated, the halves run as parallel
//!   siblings writing disjoint buffers, and both buffers are merged into
//!   the output with the monoid before being released.
//!
//! The recursion bottoms out when every range extent is at most the base
//! threshold; base cells are evaluated in lexicographic order. Split
//! choices depend only on range extents and the policy — never on cache
//! parameters — so the recursion tree is identical at every cache size.
//!
//! Work/span accounting: a base block of `c` non-empty cells contributes
//! `c` to both; parallel siblings take the span maximum; sequential halves
//! add spans; a merge of `m` buffer entries adds `m` work and a balanced
//! reduction tree of `ceil(log2 m) + 1` span.

use crate::accounting::DagCost;
use crate::algebra::Monoid;
use crate::sim::{advance, CacheSim, SimArray, SimError};

/// How to choose the dimension to halve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitPolicy {
    /// Halve the largest extent.
    Classic,
    /// Demote the output-free dimension by `write_cost^-(k-1)/k`.
    Asymmetric {
        /// The write/read cost ratio the policy balances against (>= 1).
        write_cost: f64,
    },
}

/// Whether splits of the output-free dimension sequence the halves or give
/// each half a private temporary buffer and merge afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

/// Default base-case threshold: recurse until every range extent is at most
/// this. A cache-parameter-independent constant; 8 keeps base blocks of a
/// 2-d or 3-d grid within a few cache lines at typical line sizes without
/// drowning the measurement in recursion overhead.
pub const DEFAULT_BASE_THRESHOLD: usize = 8;

/// How a kernel's grids (and its own quadrant recursions) execute: the
/// split policy, the output-dimension flavor, and the base threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecOptions {
    pub policy: SplitPolicy,
    pub mode: Mode,
    pub base_threshold: usize,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions {
            policy: SplitPolicy::Classic,
            mode: Mode::Sequential,
            base_threshold: DEFAULT_BASE_THRESHOLD,
        }
    }
}

impl ExecOptions {
    pub fn with_policy(mut self, policy: SplitPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_base_threshold(mut self, t: usize) -> Self {
        self.base_threshold = t.max(1);
        self
    }
}

/// Maps a cell's grid coordinates to coordinates of a bound array.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexMap {
    /// Array coordinate d = cell coordinate `axes[d]` — plain projections
    /// (drop some dimensions, possibly reorder the rest).
    Axes(Vec<usize>),
    /// Array coordinate d = `dot(coeffs, cell) + offset` per row — skewed
    /// projections such as the anti-diagonal `i - j`.
    Affine(Vec<(Vec<i64>, i64)>),
    /// Two array coordinates unpacked from one cell coordinate:
    /// `(cell[axis] / inner, cell[axis] % inner)` — lets a 2-d array serve
    /// as one flattened grid dimension of extent `outer * inner`.
    SplitAxis { axis: usize, inner: usize },
}

impl IndexMap {
    /// Applies the map to one cell coordinate vector, writing the array
    /// coordinates into `out`.
    pub fn apply(&self, cell: &[usize], out: &mut Vec<usize>) -> Result<(), SimError> {
        out.clear();
        match self {
            IndexMap::Axes(axes) => {
                for &a in axes {
                    out.push(cell[a]);
                }
            }
            IndexMap::Affine(rows) => {
                for (coeffs, offset) in rows {
                    let mut v = *offset;
                    for (d, &c) in coeffs.iter().enumerate() {
                        v += c * cell[d] as i64;
                    }
                    if v < 0 {
                        return Err(SimError::OutOfBounds {
                            index: cell.to_vec(),
                            extents: vec![],
                        });
                    }
                    out.push(v as usize);
                }
            }
            IndexMap::SplitAxis { axis, inner } => {
                out.push(cell[*axis] / inner);
                out.push(cell[*axis] % inner);
            }
        }
        Ok(())
    }

    /// Smallest and largest array coordinates reachable from the cell range
    /// `[lo, hi)` (per array dimension, inclusive bounds). Sizes the
    /// temporary buffers of buffered output-dimension splits.
    fn image_box(&self, lo: &[usize], hi: &[usize]) -> (Vec<usize>, Vec<usize>) {
        match self {
            IndexMap::Axes(axes) => {
                let mins = axes.iter().map(|&a| lo[a]).collect();
                let maxs = axes.iter().map(|&a| hi[a] - 1).collect();
                (mins, maxs)
            }
            IndexMap::Affine(rows) => {
                let mut mins = Vec::with_capacity(rows.len());
                let mut maxs = Vec::with_capacity(rows.len());
                for (coeffs, offset) in rows {
                    let mut vmin = *offset;
                    let mut vmax = *offset;
                    for (d, &c) in coeffs.iter().enumerate() {
                        if c >= 0 {
                            vmin += c * lo[d] as i64;
                            vmax += c * (hi[d] - 1) as i64;
                        } else {
                            vmin += c * (hi[d] - 1) as i64;
                            vmax += c * lo[d] as i64;
                        }
                    }
                    mins.push(vmin.max(0) as usize);
                    maxs.push(vmax.max(0) as usize);
                }
                (mins, maxs)
            }
            IndexMap::SplitAxis { axis, inner } => {
                let (l, h) = (lo[*axis], hi[*axis] - 1);
                // The outer coordinate is monotone; the inner coordinate
                // spans the whole modulus unless the range stays inside one
                // stripe.
                if l / inner == h / inner {
                    (vec![l / inner, l % inner], vec![h / inner, h % inner])
                } else {
                    (vec![l / inner, 0], vec![h / inner, inner - 1])
                }
            }
        }
    }
}

/// One array participating in a grid: the storage view, the cell-to-array
/// coordinate map, and (for inputs) whether reads must check that entries
/// were finalized by the producing phase of the kernel.
#[derive(Debug, Clone)]
pub struct Binding {
    pub array: SimArray,
    pub map: IndexMap,
    /// Subtracted from mapped coordinates before indexing `array`; lets a
    /// temporary buffer stand in for a box of the real output.
    pub sub: Vec<usize>,
    pub check_final: bool,
}

impl Binding {
    /// Binds `array` through `map` with no offset and no finalized-read
    /// checking.
    pub fn new(array: SimArray, map: IndexMap) -> Self {
        Binding { array, map, sub: Vec::new(), check_final: false }
    }

    /// Same, but reads fail under dependency checking unless the entry was
    /// marked finalized.
    pub fn finalized(array: SimArray, map: IndexMap) -> Self {
        Binding { array, map, sub: Vec::new(), check_final: true }
    }

    fn locate(&self, cell: &[usize], scratch: &mut Vec<usize>) -> Result<(), SimError> {
        self.map.apply(cell, scratch)?;
        if !self.sub.is_empty() {
            for (c, s) in scratch.iter_mut().zip(&self.sub) {
                *c -= s;
            }
        }
        Ok(())
    }
}

/// The shape and per-cell behavior of one grid computation.
///
/// `cell` receives the bound input entries (in binding order) and the cell's
/// coordinates relative to the grid's own origin; `fullness` masks cells out
/// entirely (`None` means every cell is live).
pub struct GridSpec<'a> {
    pub extents: Vec<usize>,
    pub combine: Monoid,
    pub cell: &'a dyn Fn(&[f64], &[usize]) -> f64,
    pub fullness: Option<&'a dyn Fn(&[usize]) -> bool>,
    pub base_threshold: usize,
}

impl<'a> GridSpec<'a> {
    /// A full grid with the default base threshold.
    pub fn new(
        extents: Vec<usize>,
        combine: Monoid,
        cell: &'a dyn Fn(&[f64], &[usize]) -> f64,
    ) -> Self {
        GridSpec {
            extents,
            combine,
            cell,
            fullness: None,
            base_threshold: DEFAULT_BASE_THRESHOLD,
        }
    }

    /// Adds a cell mask.
    pub fn with_fullness(mut self, fullness: &'a dyn Fn(&[usize]) -> bool) -> Self {
        self.fullness = Some(fullness);
        self
    }

    /// Overrides the base-case threshold.
    pub fn with_base_threshold(mut self, t: usize) -> Self {
        self.base_threshold = t.max(1);
        self
    }
}

/// Picks the dimension to halve: argmax of `extent_d * x_d` over dimensions
/// of extent at least 2, ties broken toward the smallest index. Under the
/// asymmetric policy the last dimension's score is scaled by
/// `write_cost^-(k-1)/k`; the classic policy scores every dimension by bare
/// extent.
pub fn choose_split_dim(extents: &[usize], policy: SplitPolicy) -> Option<usize> {
    let k = extents.len();
    let last_scale = match policy {
        SplitPolicy::Classic => 1.0,
        SplitPolicy::Asymmetric { write_cost } => {
            write_cost.powf(-((k as f64 - 1.0) / k as f64))
        }
    };
    let mut best: Option<(usize, f64)> = None;
    for (d, &n) in extents.iter().enumerate() {
        if n < 2 {
            continue;
        }
        let x = if d == k - 1 { last_scale } else { 1.0 };
        let score = n as f64 * x;
        match best {
            Some((_, s)) if score <= s => {}
            _ => best = Some((d, score)),
        }
    }
    best.map(|(d, _)| d)
}

/// Closed-form transfer-count predictor for a k-d grid of `cells` cells:
/// `cells / (B * M^(1/(k-1)))`, scaled by `write_cost^(1/k)` under the
/// asymmetric policy. No hidden constant — meant for ratio and slope
/// comparisons against measured counts, not point equality.
pub fn predict_q(
    k: usize,
    cells: f64,
    cache_entries: usize,
    line_entries: usize,
    write_cost: f64,
    asymmetric: bool,
) -> f64 {
    let m = cache_entries as f64;
    let b = line_entries as f64;
    let base = cells / (b * m.powf(1.0 / (k as f64 - 1.0)));
    if asymmetric {
        write_cost.powf(1.0 / k as f64) * base
    } else {
        base
    }
}

/// Runs one grid computation through the simulator, returning its work/span
/// cost. The caller composes the returned [`DagCost`] with the rest of its
/// computation and installs the total via [`CacheSim::set_dag_costs`].
pub fn run_grid(
    sim: &mut CacheSim,
    spec: &GridSpec,
    inputs: &[Binding],
    output: &Binding,
    policy: SplitPolicy,
    mode: Mode,
) -> Result<DagCost, SimError> {
    if spec.extents.is_empty() {
        return Err(SimError::InvalidConfig(
            "grid must have at least one dimension".into(),
        ));
    }
    if spec.extents.iter().any(|&n| n == 0) {
        // A degenerate grid has no cells and costs nothing.
        return Ok(DagCost::ZERO);
    }
    sim.note_grid_invocation();
    let lo = vec![0usize; spec.extents.len()];
    let hi = spec.extents.clone();
    let mut run = GridRun {
        sim,
        spec,
        inputs,
        policy,
        mode,
        coord: Vec::new(),
        values: Vec::new(),
    };
    run.recurse(&lo, &hi, output)
}

/// Run a single grid with the sequential engine on `sim`, install its
/// work/span totals, and flush dirty lines; returns the full cost report.
///
/// Convenience wrapper for measuring one grid in isolation. Kernels that
/// chain several grids call [`run_grid`] directly and aggregate costs
/// themselves.
pub fn compute_grid(
    sim: &mut CacheSim,
    spec: &GridSpec,
    inputs: &[Binding],
    output: &Binding,
    policy: SplitPolicy,
) -> Result<crate::sim::CostReport, SimError> {
    let cost = run_grid(sim, spec, inputs, output, policy, Mode::Sequential)?;
    sim.set_dag_costs(cost.work, cost.span);
    Ok(sim.flush_and_report())
}

/// Like [`compute_grid`], but the innermost dimension splits through
/// temporary half-size buffers so the two halves run as parallel siblings.
pub fn compute_grid_parallel(
    sim: &mut CacheSim,
    spec: &GridSpec,
    inputs: &[Binding],
    output: &Binding,
    policy: SplitPolicy,
) -> Result<crate::sim::CostReport, SimError> {
    let cost = run_grid(sim, spec, inputs, output, policy, Mode::Parallel)?;
    sim.set_dag_costs(cost.work, cost.span);
    Ok(sim.flush_and_report())
}

struct GridRun<'a, 'b> {
    sim: &'b mut CacheSim,
    spec: &'b GridSpec<'a>,
    inputs: &'b [Binding],
    policy: SplitPolicy,
    mode: Mode,
    // Reused scratch to avoid per-cell allocation.
    coord: Vec<usize>,
    values: Vec<f64>,
}

impl<'a, 'b> GridRun<'a, 'b> {
    fn recurse(
        &mut self,
        lo: &[usize],
        hi: &[usize],
        output: &Binding,
    ) -> Result<DagCost, SimError> {
        let k = lo.len();
        let extents: Vec<usize> = (0..k).map(|d| hi[d] - lo[d]).collect();
        if extents.iter().all(|&n| n <= self.spec.base_threshold) {
            return self.base(lo, hi, output);
        }
        // Some extent exceeds the threshold (hence is at least 2), so a
        // splittable dimension always exists.
        let d = choose_split_dim(&extents, self.policy).expect("splittable dimension");
        let mid = lo[d] + extents[d].div_ceil(2);
        let mut hi_a = hi.to_vec();
        hi_a[d] = mid;
        let mut lo_b = lo.to_vec();
        lo_b[d] = mid;
        if d + 1 < k {
            // The split partitions the output: the halves are parallel
            // siblings on disjoint output entries.
            let ca = self.recurse(lo, &hi_a, output)?;
            let cb = self.recurse(&lo_b, hi, output)?;
            return Ok(ca.parallel(cb));
        }
        // Output-free dimension: both halves accumulate into the same
        // output entries.
        match self.mode {
            Mode::Sequential => {
                let ca = self.recurse(lo, &hi_a, output)?;
                let cb = self.recurse(&lo_b, hi, output)?;
                Ok(ca.sequential(cb))
            }
            Mode::Parallel => self.buffered_split(lo, hi, &hi_a, &lo_b, output),
        }
    }

    /// Buffered split of the output-free dimension: run each half into its
    /// own temporary buffer covering the subtask's output footprint, then
    /// merge both buffers into the output and release them.
    fn buffered_split(
        &mut self,
        lo: &[usize],
        hi: &[usize],
        hi_a: &[usize],
        lo_b: &[usize],
        output: &Binding,
    ) -> Result<DagCost, SimError> {
        let (box_lo, box_hi) = output.map.image_box(lo, hi);
        let box_extents: Vec<usize> =
            box_lo.iter().zip(&box_hi).map(|(&l, &h)| h - l + 1).collect();
        let entries: usize = box_extents.iter().product();
        let identity = self.spec.combine.identity();

        let temp_a = self.sim.alloc(&box_extents)?;
        self.fill_identity(&temp_a, identity)?;
        let temp_b = self.sim.alloc(&box_extents)?;
        self.fill_identity(&temp_b, identity)?;

        // Each buffer stands in for the output's image box: same map,
        // origin shifted to the box corner.
        let bind_a = Binding {
            array: temp_a.clone(),
            map: output.map.clone(),
            sub: box_lo.clone(),
            check_final: false,
        };
        let bind_b = Binding {
            array: temp_b.clone(),
            map: output.map.clone(),
            sub: box_lo.clone(),
            check_final: false,
        };
        let ca = self.recurse(lo, hi_a, &bind_a)?;
        let cb = self.recurse(lo_b, hi, &bind_b)?;

        // Merge both buffers into the parent output under the monoid.
        let mut idx = vec![0usize; box_extents.len()];
        let mut out_coord = Vec::new();
        loop {
            let va = self.sim.read(&temp_a, &idx)?;
            let vb = self.sim.read(&temp_b, &idx)?;
            out_coord.clear();
            out_coord.extend(idx.iter().zip(&box_lo).map(|(&i, &l)| i + l));
            if !output.sub.is_empty() {
                for (c, s) in out_coord.iter_mut().zip(&output.sub) {
                    *c -= s;
                }
            }
            let old = self.sim.read(&output.array, &out_coord)?;
            let merged = self
                .spec
                .combine
                .apply(self.spec.combine.apply(old, va), vb);
            self.sim.write(&output.array, &out_coord, merged)?;
            if !advance(&mut idx, &box_extents) {
                break;
            }
        }

        self.sim.release(&temp_b)?;
        self.sim.release(&temp_a)?;
        Ok(ca.parallel(cb).merge(2 * entries as u64))
    }

    fn fill_identity(&mut self, arr: &SimArray, identity: f64) -> Result<(), SimError> {
        // Buffers must start at the monoid identity. The fill bypasses the
        // cache: allocation hands back conceptually-fresh memory, and
        // charging a write pass here would bill the allocation itself
        // rather than the computation.
        if identity == 0.0 {
            return Ok(()); // allocation already zero-fills
        }
        let mut idx = vec![0usize; arr.extents().len()];
        loop {
            self.sim.poke(arr, &idx, identity)?;
            if !advance(&mut idx, arr.extents()) {
                return Ok(());
            }
        }
    }

    fn base(
        &mut self,
        lo: &[usize],
        hi: &[usize],
        output: &Binding,
    ) -> Result<DagCost, SimError> {
        let k = lo.len();
        let inputs = self.inputs;
        let spec = self.spec;
        let mut cell = lo.to_vec();
        let mut live_cells = 0u64;
        loop {
            let full = match spec.fullness {
                Some(f) => f(&cell),
                None => true,
            };
            if full {
                live_cells += 1;
                self.values.clear();
                for binding in inputs {
                    binding.locate(&cell, &mut self.coord)?;
                    let v = if binding.check_final && self.sim.dep_check_enabled() {
                        self.sim.read_finalized(&binding.array, &self.coord)?
                    } else {
                        self.sim.read(&binding.array, &self.coord)?
                    };
                    self.values.push(v);
                }
                let g = (spec.cell)(&self.values, &cell);
                output.locate(&cell, &mut self.coord)?;
                let old = self.sim.read(&output.array, &self.coord)?;
                let new = spec.combine.apply(old, g);
                self.sim.write(&output.array, &self.coord, new)?;
            }
            // Advance the odometer within [lo, hi).
            let mut d = k;
            loop {
                if d == 0 {
                    return Ok(DagCost::leaf(live_cells));
                }
                d -= 1;
                cell[d] += 1;
                if cell[d] < hi[d] {
                    break;
                }
                cell[d] = lo[d];
            }
        }
    }
}
