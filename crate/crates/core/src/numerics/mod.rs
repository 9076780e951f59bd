//! Small dense complex linear algebra, Newton root-finding, and 1-D
//! minimization kernels shared by the analysis modules.

mod eig;
mod minimize;
mod newton;

pub use eig::eig_complex;
pub use minimize::minimize_1d;
pub use newton::{newton_complex, newton_complex_fd, RootResult};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix used throughout the spectral computations.
pub type CMatrix = DMatrix<Complex64>;

/// Determinant of a square complex matrix. Closed forms for q = 1, 2,
/// LU with partial pivoting above that.
pub fn det_complex(m: &CMatrix) -> Complex64 {
    debug_assert_eq!(m.nrows(), m.ncols());
    match m.nrows() {
        0 => Complex64::new(1.0, 0.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.clone().lu().determinant(),
    }
}

/// Frobenius norm of a complex matrix.
pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Check that all entries are finite, rejecting the matrix otherwise.
pub fn require_finite(m: &CMatrix, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{what} contains non-finite entries"
        )))
    }
}
