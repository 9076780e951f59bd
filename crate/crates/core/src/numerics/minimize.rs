use crate::error::{Error, Result};

const GRID_SAMPLES: usize = 512;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimize a continuous function on [lo, hi].
///
/// A uniform scan with at least 512 samples locates the best basin (functions
/// of interest here have several), then golden-section search refines the
/// surrounding bracket until its width drops below `tol`. Returns
/// (argmin, min).
pub fn minimize_1d<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::invalid(format!(
            "minimize_1d needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid("minimize_1d needs finite bounds"));
    }

    let n = GRID_SAMPLES;
    let step = (hi - lo) / n as f64;
    let mut best_idx = 0;
    let mut best_val = f64::INFINITY;
    for i in 0..=n {
        let x = lo + step * i as f64;
        let v = f(x);
        if v < best_val {
            best_val = v;
            best_idx = i;
        }
    }
    if !best_val.is_finite() {
        return Err(Error::numerical(
            "minimize_1d: objective not finite anywhere on the scan grid",
        ));
    }

    // Bracket one grid cell on each side of the best sample.
    let mut a = lo + step * best_idx.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_idx + 1) as f64).min(hi);

    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol.max(f64::EPSILON * (a.abs() + b.abs())) {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    let fm = f(xm);
    // The refined point can only improve on the grid sample; keep whichever won.
    if fm <= best_val {
        Ok((xm, fm))
    } else {
        Ok((lo + step * best_idx as f64, best_val))
    }
}
