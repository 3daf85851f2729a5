//! Problem-instance construction shared by solvers, oracles, and the CLI.
//!
//! An [`Instance`] is a complete, self-contained description of one problem:
//! the kind, the size, and every weight function, boundary value, and input
//! matrix the recurrence needs. Solvers and oracles both consume instances,
//! so a cross-check compares two evaluations of exactly the same problem.
//!
//! [`Instance::generate`] builds the canonical instance for a
//! `(kind, n, preset, seed)` tuple. Generation is deterministic: the same
//! tuple always yields the same instance, which keeps CSV output and test
//! failures reproducible.

use crate::rng::Rng;
use crate::weights::{Weight, WeightPreset};
use std::fmt;
use std::str::FromStr;

/// Every kernel the library ships, under its command-line name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Lws,
    Gap,
    Rna,
    Parenthesis,
    Knapsack2,
    Accordion,
    Matmul,
    MatmulTropical,
    Kleene,
    Gauss,
    Triangular,
    Strassen,
}

impl Kind {
    pub const ALL: [Kind; 12] = [
        Kind::Lws,
        Kind::Gap,
        Kind::Rna,
        Kind::Parenthesis,
        Kind::Knapsack2,
        Kind::Accordion,
        Kind::Matmul,
        Kind::MatmulTropical,
        Kind::Kleene,
        Kind::Gauss,
        Kind::Triangular,
        Kind::Strassen,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Lws => "lws",
            Kind::Gap => "gap",
            Kind::Rna => "rna",
            Kind::Parenthesis => "parenthesis",
            Kind::Knapsack2 => "knapsack2",
            Kind::Accordion => "accordion",
            Kind::Matmul => "matmul",
            Kind::MatmulTropical => "matmul-tropical",
            Kind::Kleene => "kleene",
            Kind::Gauss => "gauss",
            Kind::Triangular => "triangular",
            Kind::Strassen => "strassen",
        }
    }

    /// Grid dimensionality of the kernel's dominant grid computations; the
    /// `k` that parameterizes transfer-count predictions.
    pub fn grid_k(&self) -> usize {
        match self {
            Kind::Lws | Kind::Gap | Kind::Rna | Kind::Knapsack2 | Kind::Accordion => 2,
            Kind::Parenthesis
            | Kind::Matmul
            | Kind::MatmulTropical
            | Kind::Kleene
            | Kind::Gauss
            | Kind::Triangular
            | Kind::Strassen => 3,
        }
    }

    /// Largest size the brute-force oracle will accept. The quartic-cost
    /// pairing recurrence gets a lower cap than the quadratic/cubic kinds.
    pub fn oracle_cap(&self) -> usize {
        match self {
            Kind::Rna => 48,
            _ => 128,
        }
    }

    /// Whether results are float-valued (compared within tolerance) rather
    /// than exact integers.
    pub fn float_valued(&self) -> bool {
        matches!(self, Kind::Gauss | Kind::Triangular)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown kind `{}` (want one of {})", s, names.join(", "))
            })
    }
}

/// One fully specified problem.
///
/// Output conventions (shared verbatim by solver and oracle so results are
/// comparable elementwise):
///
/// * `Lws` — vector `D[0..=n]`, `D[0]` given.
/// * `Gap` — matrix `(n+1)x(n+1)`; row 0 and column 0 are the boundary.
/// * `Rna` — matrix `(n+1)x(n+1)`; row 0 and column 0 are the boundary.
/// * `Parenthesis` — matrix `(n+1)x(n+1)`; entries above the first
///   superdiagonal computed, `D[i][i+1]` given, everything at or below the
///   diagonal stays 0.
/// * `Knapsack2` — vector `D[0..=n]`.
/// * `Accordion` — matrix `(n+1)x(n+1)` over `1 <= j < i <= n`: column 1 is
///   the given boundary, column 2 is the empty-reduction identity
///   (`-inf`), columns 3.. computed; everything else stays 0.
/// * `Matmul`/`MatmulTropical`/`Strassen` — the `n x n` product matrix.
/// * `Kleene` — the `n x n` shortest-distance matrix.
/// * `Gauss` — packed LU factors in place (`U` on and above the diagonal,
///   multipliers below).
/// * `Triangular` — `X` with `T X = B`.
#[derive(Debug, Clone)]
pub enum Instance {
    Lws {
        n: usize,
        w: Weight,
        d0: f64,
    },
    Gap {
        n: usize,
        /// Column-direction weight: `D[p][j] + w(p, i)` terms.
        w: Weight,
        /// Row-direction weight: `D[i][q] + wp(q, j)` terms.
        wp: Weight,
        /// Diagonal replacement weight: `D[i-1][j-1] + r(i, j)`.
        r: Weight,
    },
    Rna {
        n: usize,
        w: Weight,
        /// Boundary row: `top[j] = D[0][j]`, with `top[0] = D[0][0]`.
        top: Vec<f64>,
        /// Boundary column: `left[i] = D[i][0]` for `i >= 1`.
        left: Vec<f64>,
    },
    Parenthesis {
        n: usize,
        w: Weight,
        /// `init[i] = D[i][i+1]` for `0 <= i < n`.
        init: Vec<f64>,
    },
    Knapsack2 {
        n: usize,
        a: Vec<f64>,
        b: Vec<f64>,
        w: Weight,
    },
    Accordion {
        n: usize,
        w: Weight,
        /// `col1[i] = D[i][1]` for `2 <= i <= n`; index 0 and 1 unused.
        col1: Vec<f64>,
    },
    Matmul {
        n: usize,
        a: Vec<f64>,
        b: Vec<f64>,
        tropical: bool,
    },
    Kleene {
        n: usize,
        /// Row-major adjacency: diagonal 0, absent edges `+inf`.
        adj: Vec<f64>,
    },
    Gauss {
        n: usize,
        a: Vec<f64>,
    },
    Triangular {
        n: usize,
        /// Lower-triangular with nonzero diagonal, row-major.
        t: Vec<f64>,
        b: Vec<f64>,
    },
    Strassen {
        n: usize,
        a: Vec<f64>,
        b: Vec<f64>,
    },
}

fn int_matrix(rng: &mut Rng, n: usize, lo: i64, hi: i64) -> Vec<f64> {
    (0..n * n).map(|_| rng.next_range(lo, hi) as f64).collect()
}

impl Instance {
    /// The canonical instance for `(kind, n, preset, seed)`.
    ///
    /// DP kinds draw their weight functions from `preset` (the gap-based
    /// presets also shape the boundary so the classic closed-form cases
    /// come out exactly); matrix kinds ignore `preset` and draw integer
    /// entries from the seed.
    pub fn generate(kind: Kind, n: usize, preset: WeightPreset, seed: u64) -> Instance {
        let mut rng = Rng::new(seed);
        match kind {
            Kind::Lws => Instance::Lws { n, w: preset.into(), d0: 0.0 },
            Kind::Gap => {
                // Independent streams for the three weight roles when the
                // preset is randomized; deterministic presets repeat.
                let (w, wp, r) = match preset {
                    WeightPreset::Random { seed, range } => (
                        WeightPreset::Random { seed, range },
                        WeightPreset::Random { seed: seed.wrapping_add(1), range },
                        WeightPreset::Random { seed: seed.wrapping_add(2), range },
                    ),
                    p => (p, p, p),
                };
                Instance::Gap { n, w: w.into(), wp: wp.into(), r: r.into() }
            }
            Kind::Rna => {
                let mut top = vec![0.0; n + 1];
                let mut left = vec![0.0; n + 1];
                for j in 1..=n {
                    top[j] = preset.eval(&[0, j as i64]);
                    left[j] = preset.eval(&[0, j as i64]);
                }
                Instance::Rna { n, w: preset.into(), top, left }
            }
            Kind::Parenthesis => Instance::Parenthesis {
                n,
                w: preset.into(),
                init: vec![0.0; n],
            },
            Kind::Knapsack2 => {
                let a = (0..=n).map(|j| preset.eval(&[0, j as i64])).collect();
                let b = (0..=n).map(|m| preset.eval(&[1, 1 + m as i64])).collect();
                Instance::Knapsack2 { n, a, b, w: preset.into() }
            }
            Kind::Accordion => Instance::Accordion { n, w: preset.into(), col1: vec![0.0; n + 1] },
            Kind::Matmul | Kind::MatmulTropical => Instance::Matmul {
                n,
                a: int_matrix(&mut rng, n, 0, 10),
                b: int_matrix(&mut rng, n, 0, 10),
                tropical: kind == Kind::MatmulTropical,
            },
            Kind::Kleene => {
                let mut adj = vec![f64::INFINITY; n * n];
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            adj[i * n + j] = 0.0;
                        } else if rng.next_u64() % 2 == 0 {
                            adj[i * n + j] = rng.next_range(1, 10) as f64;
                        }
                    }
                }
                Instance::Kleene { n, adj }
            }
            Kind::Gauss => {
                let mut a = int_matrix(&mut rng, n, 0, 10);
                // Force strict diagonal dominance so elimination without
                // pivoting is well-conditioned.
                for i in 0..n {
                    let row_sum: f64 = (0..n)
                        .filter(|&j| j != i)
                        .map(|j| a[i * n + j].abs())
                        .sum();
                    a[i * n + i] = row_sum + 1.0 + rng.next_range(0, 4) as f64;
                }
                Instance::Gauss { n, a }
            }
            Kind::Triangular => {
                let mut t = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..i {
                        t[i * n + j] = rng.next_range(-4, 5) as f64;
                    }
                    t[i * n + i] = 1.0;
                }
                let b = int_matrix(&mut rng, n, 0, 10);
                Instance::Triangular { n, t, b }
            }
            Kind::Strassen => Instance::Strassen {
                n,
                a: int_matrix(&mut rng, n, -9, 10),
                b: int_matrix(&mut rng, n, -9, 10),
            },
        }
    }

    /// An elimination instance whose every intermediate value is exactly
    /// representable: `A = L U` with small-integer unit-lower `L` and
    /// integer `U` whose diagonal is a power of two, so every division in
    /// the factorization is exact in binary floating point. Used to compare
    /// evaluation orders bit for bit.
    pub fn gauss_exact(n: usize, seed: u64) -> Instance {
        let mut rng = Rng::new(seed);
        let mut l = vec![0.0; n * n];
        let mut u = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                l[i * n + j] = rng.next_range(-3, 4) as f64;
            }
            l[i * n + i] = 1.0;
            u[i * n + i] = [1.0, 2.0, 4.0][rng.next_range(0, 3) as usize];
            for j in i + 1..n {
                u[i * n + j] = rng.next_range(-3, 4) as f64;
            }
        }
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += l[i * n + k] * u[k * n + j];
                }
                a[i * n + j] = s;
            }
        }
        Instance::Gauss { n, a }
    }

    /// A triangular-solve instance with a unit diagonal and integer
    /// entries: the solution is an integer matrix and every arithmetic step
    /// is exact, so evaluation orders can be compared bit for bit.
    pub fn triangular_exact(n: usize, seed: u64) -> Instance {
        let mut rng = Rng::new(seed);
        let mut t = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                t[i * n + j] = rng.next_range(-2, 3) as f64;
            }
            t[i * n + i] = 1.0;
        }
        let b = int_matrix(&mut rng, n, -5, 6);
        Instance::Triangular { n, t, b }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Instance::Lws { .. } => Kind::Lws,
            Instance::Gap { .. } => Kind::Gap,
            Instance::Rna { .. } => Kind::Rna,
            Instance::Parenthesis { .. } => Kind::Parenthesis,
            Instance::Knapsack2 { .. } => Kind::Knapsack2,
            Instance::Accordion { .. } => Kind::Accordion,
            Instance::Matmul { tropical, .. } => {
                if *tropical {
                    Kind::MatmulTropical
                } else {
                    Kind::Matmul
                }
            }
            Instance::Kleene { .. } => Kind::Kleene,
            Instance::Gauss { .. } => Kind::Gauss,
            Instance::Triangular { .. } => Kind::Triangular,
            Instance::Strassen { .. } => Kind::Strassen,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Lws { n, .. }
            | Instance::Gap { n, .. }
            | Instance::Rna { n, .. }
            | Instance::Parenthesis { n, .. }
            | Instance::Knapsack2 { n, .. }
            | Instance::Accordion { n, .. }
            | Instance::Matmul { n, .. }
            | Instance::Kleene { n, .. }
            | Instance::Gauss { n, .. }
            | Instance::Triangular { n, .. }
            | Instance::Strassen { n, .. } => *n,
        }
    }
}
