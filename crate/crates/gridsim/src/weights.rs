//! Weight-function presets shared by the DP kernels, the oracles, and the
//! CLI.
//!
//! A weight function maps an index tuple (2, 3, or 4 indices depending on
//! the recurrence) to a value. All presets are pure — the same indices
//! always yield the same value — so a solver and an oracle evaluating the
//! same preset see identical weights at every term.
//!
//! The *gap* of an index tuple, used by the `linear` and `quadratic`
//! presets, is the spread the recurrences pay for:
//!
//! * 2 indices `(i, j)` → `j - i`
//! * 3 indices `(i, k, j)` → `j - i` (last minus first)
//! * 4 indices `(p, q, i, j)` → `(i - p) + (j - q)` (pairwise spread)

use crate::rng::Rng;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

/// A named weight generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightPreset {
    /// Weight = index gap.
    Linear,
    /// Weight = squared index gap.
    Quadratic,
    /// Integers uniform in `[0, range)`, keyed purely from (seed, indices).
    Random { seed: u64, range: u64 },
    /// The same value everywhere.
    Constant(f64),
}

impl WeightPreset {
    /// The gap of an index tuple (see module docs).
    pub fn gap(indices: &[i64]) -> i64 {
        match indices.len() {
            2 => indices[1] - indices[0],
            3 => indices[2] - indices[0],
            4 => (indices[2] - indices[0]) + (indices[3] - indices[1]),
            _ => indices.last().copied().unwrap_or(0) - indices.first().copied().unwrap_or(0),
        }
    }

    /// Evaluates the preset at one index tuple.
    pub fn eval(&self, indices: &[i64]) -> f64 {
        match *self {
            WeightPreset::Linear => Self::gap(indices) as f64,
            WeightPreset::Quadratic => {
                let g = Self::gap(indices) as f64;
                g * g
            }
            WeightPreset::Random { seed, range } => {
                // Key the generator from the exact index tuple so the value
                // is a pure function of (seed, indices), independent of
                // evaluation order.
                let mut h = seed;
                for &v in indices {
                    h = Rng::new(h ^ (v as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)).next_u64();
                }
                (h % range.max(1)) as f64
            }
            WeightPreset::Constant(c) => c,
        }
    }
}

/// A weight function: either a named preset or an arbitrary pure function
/// supplied by a caller (matrix-chain dimensions, character-match costs,
/// and similar structured cases that no preset expresses).
#[derive(Clone)]
pub enum Weight {
    Preset(WeightPreset),
    Custom(Rc<dyn Fn(&[i64]) -> f64>),
}

impl Weight {
    /// Wraps a pure function as a weight.
    pub fn custom(f: impl Fn(&[i64]) -> f64 + 'static) -> Weight {
        Weight::Custom(Rc::new(f))
    }

    pub fn eval(&self, indices: &[i64]) -> f64 {
        match self {
            Weight::Preset(p) => p.eval(indices),
            Weight::Custom(f) => f(indices),
        }
    }
}

impl From<WeightPreset> for Weight {
    fn from(p: WeightPreset) -> Weight {
        Weight::Preset(p)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Preset(p) => write!(f, "Weight({p})"),
            Weight::Custom(_) => write!(f, "Weight(custom)"),
        }
    }
}

impl fmt::Display for WeightPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightPreset::Linear => write!(f, "linear"),
            WeightPreset::Quadratic => write!(f, "quadratic"),
            WeightPreset::Random { seed, range } => write!(f, "random({seed},{range})"),
            WeightPreset::Constant(c) => write!(f, "constant({c})"),
        }
    }
}

impl FromStr for WeightPreset {
    type Err = String;

    /// Parses `linear`, `quadratic`, `random(seed,range)`, `constant(c)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "linear" => return Ok(WeightPreset::Linear),
            "quadratic" => return Ok(WeightPreset::Quadratic),
            _ => {}
        }
        let parse_args = |name: &str| -> Option<&str> {
            s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
        };
        if let Some(args) = parse_args("random") {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if parts.len() == 2 {
                let seed = parts[0].parse::<u64>().map_err(|e| format!("bad seed: {e}"))?;
                let range = parts[1].parse::<u64>().map_err(|e| format!("bad range: {e}"))?;
                if range == 0 {
                    return Err("random range must be positive".into());
                }
                return Ok(WeightPreset::Random { seed, range });
            }
            return Err(format!("random wants (seed,range), got `{args}`"));
        }
        if let Some(args) = parse_args("constant") {
            let c = args.trim().parse::<f64>().map_err(|e| format!("bad constant: {e}"))?;
            return Ok(WeightPreset::Constant(c));
        }
        Err(format!(
            "unknown weight preset `{s}` (want linear, quadratic, random(seed,range), constant(c))"
        ))
    }
}
