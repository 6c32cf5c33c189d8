//! Numeric kernels: dense solves and linear programming.

pub mod dense;
pub mod simplex;

pub use dense::{solve_dense, DenseLinearSystem};
pub use simplex::{lp_solve, LinearProgram, LpSolution, RelOp, Sense};

use crate::error::Result;
use crate::geometry::ParamSet;

/// Exact maximum of `constant + gradient . p` over a parameter set.
/// Boxes are handled by corner selection per gradient sign, vertex lists by
/// a scan, and general H-polytopes by one simplex call.
pub fn lp_max_affine_over_vertices(
    gradient: &[f64],
    constant: f64,
    set: &ParamSet,
) -> Result<f64> {
    set.max_affine(gradient, constant)
}
