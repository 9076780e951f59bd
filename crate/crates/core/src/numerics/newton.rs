use num_complex::Complex64;

/// Outcome of a Newton iteration on a complex scalar function.
///
/// Failure is data: a seed that diverges or stalls comes back with
/// `converged = false` rather than an error, so callers can launch large seed
/// batches and keep whatever lands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: Complex64,
    /// |F(root)|, re-evaluated at the returned point.
    pub residual: f64,
    pub iterations: usize,
    /// True iff the residual met the requested tolerance within the
    /// iteration budget.
    pub converged: bool,
}

/// Magnitude beyond which an iterate is declared divergent.
const DIVERGENCE_RADIUS: f64 = 1e12;

/// Newton's method for F(z) = 0 in the complex plane.
///
/// Pass the analytic derivative when one is available; with `None` the
/// derivative is approximated by a central difference with step
/// 1e-7·max(1, |z|), which is accurate for the holomorphic functions this
/// crate feeds in.
pub fn newton_complex<F, D>(
    f: F,
    df: Option<D>,
    z0: Complex64,
    tol: f64,
    max_iter: usize,
) -> RootResult
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let mut z = z0;
    let mut fz = f(z);
    let mut iterations = 0;

    if !fz.is_finite() || !z.is_finite() {
        return RootResult {
            root: z,
            residual: f64::INFINITY,
            iterations,
            converged: false,
        };
    }

    while iterations < max_iter {
        if fz.norm() <= tol {
            return RootResult {
                root: z,
                residual: fz.norm(),
                iterations,
                converged: true,
            };
        }
        let dfz = match &df {
            Some(d) => d(z),
            None => {
                let h = 1e-7 * z.norm().max(1.0);
                (f(z + h) - f(z - h)) / (2.0 * h)
            }
        };
        if !dfz.is_finite() || dfz.norm() < 1e-300 {
            break;
        }
        z -= fz / dfz;
        iterations += 1;
        if !z.is_finite() || z.norm() > DIVERGENCE_RADIUS {
            return RootResult {
                root: z,
                residual: f64::INFINITY,
                iterations,
                converged: false,
            };
        }
        fz = f(z);
        if !fz.is_finite() {
            break;
        }
    }

    let residual = if fz.is_finite() {
        fz.norm()
    } else {
        f64::INFINITY
    };
    RootResult {
        root: z,
        residual,
        iterations,
        converged: residual <= tol,
    }
}

/// `newton_complex` without an analytic derivative.
pub fn newton_complex_fd<F>(f: F, z0: Complex64, tol: f64, max_iter: usize) -> RootResult
where
    F: Fn(Complex64) -> Complex64,
{
    newton_complex(&f, None::<fn(Complex64) -> Complex64>, z0, tol, max_iter)
}
