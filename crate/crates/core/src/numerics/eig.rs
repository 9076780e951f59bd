use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

const MAX_DIM: usize = 64;

/// Eigenvalues of a dense complex matrix, sorted by (real, imaginary).
///
/// Closed forms for q <= 2; Hessenberg reduction followed by a shifted QR
/// iteration for larger matrices. Dimension is capped at 64: every matrix in
/// this crate is a local-model block, not a network-sized operator.
pub fn eig_complex(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::invalid("eigenvalue problem needs a square matrix"));
    }
    if m.nrows() > MAX_DIM {
        return Err(Error::invalid(format!(
            "dense eigensolver is limited to dimension {MAX_DIM}, got {}",
            m.nrows()
        )));
    }
    super::require_finite(m, "eigenvalue input")?;

    let mut eigs = match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)]],
        2 => eig2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]).to_vec(),
        _ => qr_eigenvalues(hessenberg(m.clone()))?,
    };
    eigs.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite eigenvalues always compare")
    });
    Ok(eigs)
}

/// Roots of the characteristic polynomial of a 2x2 block.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 2] {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    [(tr + disc) * 0.5, (tr - disc) * 0.5]
}

/// Reduce to upper Hessenberg form by Householder reflections.
fn hessenberg(mut h: CMatrix) -> CMatrix {
    let n = h.nrows();
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating column k below the subdiagonal.
        let mut norm_sq = 0.0;
        for i in (k + 1)..n {
            norm_sq += h[(i, k)].norm_sqr();
        }
        let pivot = h[(k + 1, k)];
        let norm = norm_sq.sqrt();
        if norm <= 1e-300 {
            continue;
        }
        let phase = if pivot.norm() > 0.0 {
            pivot / pivot.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq <= 1e-300 {
            continue;
        }
        // Left multiply: rows k+1..n of columns k..n.
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, i) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * h[(i, j)];
            }
            let scale = 2.0 * dot / v_norm_sq;
            for (idx, i) in (k + 1..n).enumerate() {
                let delta = scale * v[idx];
                h[(i, j)] -= delta;
            }
        }
        // Right multiply: columns k+1..n of all rows.
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, j) in (k + 1..n).enumerate() {
                dot += h[(i, j)] * v[idx];
            }
            let scale = 2.0 * dot / v_norm_sq;
            for (idx, j) in (k + 1..n).enumerate() {
                let delta = scale * v[idx].conj();
                h[(i, j)] -= delta;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

/// Shifted explicit QR iteration with deflation on an upper Hessenberg matrix.
fn qr_eigenvalues(mut h: CMatrix) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut stall = 0usize;
    let mut sweeps = 0usize;
    let max_sweeps = 60 * n;

    while hi > 0 {
        if sweeps > max_sweeps {
            return Err(Error::numerical(
                "QR iteration failed to converge on all eigenvalues",
            ));
        }
        // Deflate converged trailing entries.
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            hi = 0;
            continue;
        }
        let tail = h[(hi - 1, hi - 2)].norm();
        let local = h[(hi - 2, hi - 2)].norm() + h[(hi - 1, hi - 1)].norm();
        if tail <= f64::EPSILON * local.max(1e-300) {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            stall = 0;
            continue;
        }
        if hi == 2 {
            let [e1, e2] = eig2(h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]);
            eigs.push(e1);
            eigs.push(e2);
            hi = 0;
            continue;
        }
        // Find the start of the active irreducible block.
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= f64::EPSILON * diag.max(1e-300) {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if hi - lo == 2 {
            let [e1, e2] = eig2(
                h[(lo, lo)],
                h[(lo, lo + 1)],
                h[(lo + 1, lo)],
                h[(lo + 1, lo + 1)],
            );
            eigs.push(e1);
            eigs.push(e2);
            hi = lo;
            stall = 0;
            continue;
        }

        // Wilkinson shift from the trailing 2x2 of the active block, with an
        // exceptional perturbation when progress stalls.
        let shift = if stall > 0 && stall % 12 == 0 {
            h[(hi - 1, hi - 1)] + Complex64::new(1.0, 0.3) * h[(hi - 1, hi - 2)].norm()
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_sweep(&mut h, lo, hi, shift);
        sweeps += 1;
        stall += 1;
    }
    Ok(eigs)
}

fn wilkinson_shift(h: &CMatrix, hi: usize) -> Complex64 {
    let [e1, e2] = eig2(
        h[(hi - 2, hi - 2)],
        h[(hi - 2, hi - 1)],
        h[(hi - 1, hi - 2)],
        h[(hi - 1, hi - 1)],
    );
    let d = h[(hi - 1, hi - 1)];
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit QR step on the active block: H - shift = QR, then H <- RQ + shift.
fn qr_sweep(h: &mut CMatrix, lo: usize, hi: usize, shift: Complex64) {
    let n = h.ncols();
    for i in lo..hi {
        h[(i, i)] -= shift;
    }
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo - 1);
    for k in lo..hi - 1 {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        // Apply from the left to rows k, k+1.
        for j in k..n {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c * a + s * b;
            h[(k + 1, j)] = -s.conj() * a + c * b;
        }
        rotations.push((c, s));
    }
    for (k, (c, s)) in (lo..hi - 1).zip(rotations) {
        // Apply the conjugate transpose from the right to columns k, k+1.
        let top = (k + 2).min(hi);
        for i in 0..top {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = c * a + s.conj() * b;
            h[(i, k + 1)] = -s * a + c * b;
        }
    }
    for i in lo..hi {
        h[(i, i)] += shift;
    }
    // Re-zero entries below the subdiagonal that roundoff may have touched.
    for k in lo..hi.saturating_sub(2) {
        for i in (k + 2)..hi {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Complex Givens rotation (c real, s complex) zeroing g in (f, g).
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let r = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / r;
    let s = (f / fn_) * g.conj() / r;
    (c, s)
}
