//! Combining operators shared by the kernels.
//!
//! Every kernel accumulates cell results into its output through a
//! commutative monoid: `min` for the optimization recurrences, `max` for
//! accordion folding, `+` for numeric linear algebra. The linear-algebra
//! kernels additionally pick one of two semirings — ordinary `(+, ×)`
//! arithmetic or the tropical `(min, +)` algebra used for shortest paths —
//! sharing a single code path so both produce identical access patterns.

/// A commutative, associative combining operator with an identity.
///
/// The identities double as "empty reduction" results: a cell range with no
/// valid terms leaves the identity in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monoid {
    /// Minimum; identity +∞.
    Min,
    /// Maximum; identity −∞.
    Max,
    /// Addition; identity 0.
    Add,
}

impl Monoid {
    /// The operator's identity element.
    pub fn identity(&self) -> f64 {
        match self {
            Monoid::Min => f64::INFINITY,
            Monoid::Max => f64::NEG_INFINITY,
            Monoid::Add => 0.0,
        }
    }

    /// Applies the operator.
    pub fn apply(&self, a: f64, b: f64) -> f64 {
        match self {
            Monoid::Min => a.min(b),
            Monoid::Max => a.max(b),
            Monoid::Add => a + b,
        }
    }
}

/// The two matrix algebras the linear-algebra kernels run over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semiring {
    /// Ordinary arithmetic: add = `+` (zero 0), multiply = `×` (one 1).
    Numeric,
    /// Tropical algebra: add = `min` (zero +∞), multiply = `+` (one 0).
    /// Matrix powers over it compute shortest path lengths.
    Tropical,
}

impl Semiring {
    /// The additive monoid (the accumulation operator of a product).
    pub fn add_monoid(&self) -> Monoid {
        match self {
            Semiring::Numeric => Monoid::Add,
            Semiring::Tropical => Monoid::Min,
        }
    }

    /// Additive identity; annihilates multiplication in both algebras
    /// (0 × x = 0; +∞ + x = +∞).
    pub fn zero(&self) -> f64 {
        self.add_monoid().identity()
    }

    /// Multiplicative identity.
    pub fn one(&self) -> f64 {
        match self {
            Semiring::Numeric => 1.0,
            Semiring::Tropical => 0.0,
        }
    }

    /// The multiplication operator.
    pub fn mul(&self, a: f64, b: f64) -> f64 {
        match self {
            Semiring::Numeric => a * b,
            Semiring::Tropical => a + b,
        }
    }
}
