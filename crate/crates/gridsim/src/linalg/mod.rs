//! Linear-algebra kernels built on the grid engine: semiring matrix
//! multiplication, transitive closure, LU factorization, triangular solves,
//! and a write-lean seven-product multiply.

pub mod gauss;
pub mod kleene;
pub mod matmul;
pub mod strassen;
pub mod triangular;

pub use gauss::solve_gauss;
pub use kleene::solve_kleene;
pub use matmul::{matmul_accum, matmul_sub_accum};
pub use strassen::{solve_strassen, strassen_tile_count};
pub use triangular::solve_triangular;
