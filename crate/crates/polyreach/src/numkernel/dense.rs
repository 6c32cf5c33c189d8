//! Dense square linear systems via Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Pivot magnitudes below this are treated as numerically singular.
pub const PIVOT_TOL: f64 = 1e-12;

/// Square system `matrix * x = rhs`.
#[derive(Debug, Clone)]
pub struct DenseLinearSystem {
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl DenseLinearSystem {
    pub fn new(matrix: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let k = rhs.len();
        if matrix.len() != k || matrix.iter().any(|row| row.len() != k) {
            return Err(Error::DimensionMismatch(
                "dense system must be square with matching right-hand side".into(),
            ));
        }
        if matrix.iter().flatten().any(|v| !v.is_finite())
            || rhs.iter().any(|v| !v.is_finite())
        {
            return Err(Error::InvalidInput("dense system entries must be finite".into()));
        }
        Ok(DenseLinearSystem { matrix, rhs })
    }
}

/// Solve by elimination with partial pivoting (largest-magnitude pivot, ties
/// to the lowest row index). Errors with [`Error::SingularSystem`] when a
/// pivot falls below [`PIVOT_TOL`].
pub fn solve_dense(sys: &DenseLinearSystem) -> Result<Vec<f64>> {
    let k = sys.rhs.len();
    let mut a = sys.matrix.clone();
    let mut b = sys.rhs.clone();
    for col in 0..k {
        let mut pivot_row = col;
        let mut pivot_mag = a[col][col].abs();
        for row in (col + 1)..k {
            let mag = a[row][col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag < PIVOT_TOL {
            return Err(Error::SingularSystem);
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            b.swap(pivot_row, col);
        }
        let pivot = a[col][col];
        for row in (col + 1)..k {
            let factor = a[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..k {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for col in (0..k).rev() {
        let mut acc = b[col];
        for c in (col + 1)..k {
            acc -= a[col][c] * x[c];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}
