use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CMatrix;

/// Nonlinear right-hand sides attached to a [`LocalModel`], dispatched
/// without boxing so the simulator's inner loop stays branch-predictable.
#[derive(Debug, Clone, PartialEq)]
pub enum Dynamics {
    /// f(x) = Jx, h(x) = Hx: the variational equation itself.
    Linear,
    /// Stuart-Landau normal form z' = (α+iβ)z − |z|²z in real coordinates
    /// (x, y) = (Re z, Im z), with identity coupling h(z) = z.
    StuartLandau { alpha: f64, beta: f64 },
}

/// A node's local dynamics: dimension q, equilibrium Jacobian J, coupling
/// Jacobian H, and the nonlinear maps f, h used for direct simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalModel {
    q: usize,
    j_real: DMatrix<f64>,
    h_real: DMatrix<f64>,
    j: CMatrix,
    h: CMatrix,
    dynamics: Dynamics,
}

impl LocalModel {
    /// A purely linear model: f(x) = Jx and h(x) = Hx.
    pub fn linear(j: DMatrix<f64>, h: DMatrix<f64>) -> Result<Self> {
        Self::build(j, h, Dynamics::Linear)
    }

    pub(crate) fn build(j: DMatrix<f64>, h: DMatrix<f64>, dynamics: Dynamics) -> Result<Self> {
        if j.nrows() != j.ncols() || h.nrows() != h.ncols() || j.nrows() != h.nrows() {
            return Err(Error::invalid(
                "J and H must be square matrices of the same dimension",
            ));
        }
        let q = j.nrows();
        if q == 0 {
            return Err(Error::invalid("local model needs dimension q >= 1"));
        }
        if j.iter().chain(h.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("J and H must have finite entries"));
        }
        let det_h = h.clone().lu().determinant();
        if det_h.abs() <= 1e-12 {
            return Err(Error::invalid(format!(
                "coupling Jacobian H is singular (|det H| = {:.3e} <= 1e-12)",
                det_h.abs()
            )));
        }
        let model = Self {
            q,
            j: CMatrix::from_fn(q, q, |r, c| Complex64::new(j[(r, c)], 0.0)),
            h: CMatrix::from_fn(q, q, |r, c| Complex64::new(h[(r, c)], 0.0)),
            j_real: j,
            h_real: h,
            dynamics,
        };
        let mut h0 = vec![0.0; q];
        model.h_rhs(&vec![0.0; q], &mut h0);
        if h0.iter().any(|v| v.abs() > 1e-12) {
            return Err(Error::invalid(
                "coupling function must vanish at the origin: h(0) = 0",
            ));
        }
        Ok(model)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Equilibrium Jacobian J as a complex matrix.
    pub fn j(&self) -> &CMatrix {
        &self.j
    }

    /// Coupling Jacobian H as a complex matrix.
    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn j_real(&self) -> &DMatrix<f64> {
        &self.j_real
    }

    pub fn h_real(&self) -> &DMatrix<f64> {
        &self.h_real
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    /// Local vector field f(x), written into `out`.
    pub fn f_rhs(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.q);
        debug_assert_eq!(out.len(), self.q);
        match self.dynamics {
            Dynamics::Linear => mat_vec(&self.j_real, x, out),
            Dynamics::StuartLandau { alpha, beta } => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                out[0] = (alpha - r2) * x[0] - beta * x[1];
                out[1] = beta * x[0] + (alpha - r2) * x[1];
            }
        }
    }

    /// Coupling function h(x), written into `out`.
    pub fn h_rhs(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.q);
        debug_assert_eq!(out.len(), self.q);
        match self.dynamics {
            Dynamics::Linear | Dynamics::StuartLandau { .. } => mat_vec(&self.h_real, x, out),
        }
    }
}

fn mat_vec(m: &DMatrix<f64>, x: &[f64], out: &mut [f64]) {
    for r in 0..m.nrows() {
        let mut acc = 0.0;
        for c in 0..m.ncols() {
            acc += m[(r, c)] * x[c];
        }
        out[r] = acc;
    }
}
