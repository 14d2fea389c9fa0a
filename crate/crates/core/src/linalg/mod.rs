//! Sparse symmetric linear algebra: storage, mat-vec, Jacobi-scaled CG and
//! dense oracles for checking it.

mod cg;
mod condition;
pub mod dense;
mod precond;
mod sparse;

pub use cg::{cg_solve, default_max_iter, SolveReport};
pub use condition::{
    estimate_condition_number, extreme_eigenvalues, ConditionMethod, PD_RELATIVE_FLOOR,
};
pub use dense::{dense_solve_oracle, symmetric_eigenvalues, DenseMatrix};
pub use precond::{build_jacobi, DiagPreconditioner};
pub use sparse::{SparseSymMatrix, SymAssembler};

/// `A x` for a [`SparseSymMatrix`].
pub fn matvec(a: &SparseSymMatrix, x: &[f64]) -> crate::Result<Vec<f64>> {
    a.matvec(x)
}
