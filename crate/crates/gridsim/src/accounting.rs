//! Work/span accounting for fork-join computations.
//!
//! Every recursive engine in this crate reports its cost as a [`DagCost`]:
//! `work` is the total number of element operations, `span` the length of
//! the longest dependency chain when independent branches run in parallel.
//! Costs compose three ways:
//!
//! * [`DagCost::leaf`] — a straight-line block of `c` operations,
//! * [`DagCost::parallel`] — branches that run concurrently: work adds,
//!   span takes the maximum,
//! * [`DagCost::sequential`] — branches one after another: both add.
//!
//! Combining `m` partial results costs `m` extra element operations of work
//! but only a balanced reduction tree of depth `ceil(log2 m) + 1` of span;
//! [`DagCost::merge`] applies that surcharge.

/// Work and span totals of one computation DAG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DagCost {
    /// Total element operations.
    pub work: u64,
    /// Element operations on the critical path.
    pub span: u64,
}

impl DagCost {
    /// A computation that does nothing.
    pub const ZERO: DagCost = DagCost { work: 0, span: 0 };

    /// A straight-line block of `c` operations.
    pub fn leaf(c: u64) -> DagCost {
        DagCost { work: c, span: c }
    }

    /// This computation followed by `next`.
    pub fn sequential(self, next: DagCost) -> DagCost {
        DagCost { work: self.work + next.work, span: self.span + next.span }
    }

    /// This computation alongside `other`, both starting together.
    pub fn parallel(self, other: DagCost) -> DagCost {
        DagCost { work: self.work + other.work, span: self.span.max(other.span) }
    }

    /// Surcharge for combining `m` per-entry partial results after the
    /// branches that produced them have joined: `m` operations of work,
    /// `ceil(log2 m) + 1` of span (a balanced reduction tree).
    pub fn merge(self, m: u64) -> DagCost {
        if m == 0 {
            return self;
        }
        let depth = m.next_power_of_two().trailing_zeros() as u64 + 1;
        DagCost { work: self.work + m, span: self.span + depth }
    }

    /// Folds costs of branches that all run concurrently.
    pub fn parallel_all(costs: impl IntoIterator<Item = DagCost>) -> DagCost {
        costs.into_iter().fold(DagCost::ZERO, DagCost::parallel)
    }

    /// Folds costs of branches that run one after another.
    pub fn sequential_all(costs: impl IntoIterator<Item = DagCost>) -> DagCost {
        costs.into_iter().fold(DagCost::ZERO, DagCost::sequential)
    }
}
