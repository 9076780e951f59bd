use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Network;
use crate::error::{Error, Result};
use crate::numerics::CMatrix;

/// Condition-number ceiling for certifying an eigenvector basis.
const DIAG_COND_LIMIT: f64 = 1e8;

/// Eigen-structure of the graph Laplacian L = D_in − A.
#[derive(Debug, Clone)]
pub struct LaplacianSpectrum {
    /// All n eigenvalues, sorted by ascending modulus (ties by re, then im).
    /// The first entry is the structural zero from vanishing row sums.
    pub eigenvalues: Vec<Complex64>,
    /// Spectral radius: the largest eigenvalue modulus.
    pub rho_l: f64,
    /// Largest (in-)degree.
    pub g_max: usize,
    /// True iff an eigenvector basis with condition number below 1e8 was
    /// found. Analyses that rely on diagonalizing L must refuse the network
    /// when this is false.
    pub diagonalizable: bool,
}

/// Dense Laplacian assembled in integer arithmetic, so row sums are exactly
/// zero before any floating-point work.
pub fn laplacian_matrix(net: &Network) -> DMatrix<f64> {
    let n = net.n();
    let mut l = vec![0i64; n * n];
    for &(s, t) in net.edges() {
        l[t * n + t] += 1; // in-degree on the diagonal
        l[t * n + s] -= 1; // adjacency entry (row = target, col = source)
    }
    DMatrix::from_fn(n, n, |i, j| l[i * n + j] as f64)
}

/// Full eigen-decomposition of the Laplacian.
///
/// Undirected networks use a symmetric solver (orthonormal basis, always
/// diagonalizable). Directed networks use a general dense solve for the
/// eigenvalues plus inverse iteration for an eigenvector basis, whose
/// condition number certifies the `diagonalizable` flag.
pub fn laplacian_spectrum(net: &Network) -> Result<LaplacianSpectrum> {
    let l = laplacian_matrix(net);
    let g_max = net.g_max();

    let (mut eigenvalues, diagonalizable) = if net.directed() {
        directed_eigen(&l)?
    } else {
        symmetric_eigen(&l)?
    };

    eigenvalues.sort_by(|a, b| {
        (a.norm(), a.re, a.im)
            .partial_cmp(&(b.norm(), b.re, b.im))
            .expect("finite eigenvalues always compare")
    });
    let rho_l = eigenvalues.last().map(|z| z.norm()).unwrap_or(0.0);
    Ok(LaplacianSpectrum {
        eigenvalues,
        rho_l,
        g_max,
        diagonalizable,
    })
}

fn residual_tolerance(rho_l: f64) -> f64 {
    1e-8 * rho_l.max(1.0)
}

fn symmetric_eigen(l: &DMatrix<f64>) -> Result<(Vec<Complex64>, bool)> {
    let eig = l.clone().symmetric_eigen();
    let rho = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let tol = residual_tolerance(rho);
    for k in 0..eig.eigenvalues.len() {
        let v = eig.eigenvectors.column(k);
        let residual = (l * v - eig.eigenvalues[k] * v).norm();
        if residual > tol {
            return Err(Error::numerical(format!(
                "symmetric Laplacian eigenpair residual {residual:.3e} exceeds {tol:.3e}"
            )));
        }
    }
    let eigenvalues = eig
        .eigenvalues
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    Ok((eigenvalues, true))
}

fn directed_eigen(l: &DMatrix<f64>) -> Result<(Vec<Complex64>, bool)> {
    let n = l.nrows();
    let eigenvalues: Vec<Complex64> = l
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    let rho = eigenvalues.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let tol = residual_tolerance(rho);

    let lc = CMatrix::from_fn(n, n, |i, j| Complex64::new(l[(i, j)], 0.0));
    let mut basis = CMatrix::zeros(n, n);
    let mut ok = true;
    for (k, &mu) in eigenvalues.iter().enumerate() {
        match inverse_iteration(&lc, mu, k as u64) {
            Some(v) => {
                let residual = (&lc * &v - &v * mu).norm();
                if residual > tol {
                    ok = false;
                }
                basis.set_column(k, &v);
            }
            None => {
                ok = false;
            }
        }
    }
    if ok {
        ok = condition_estimate(&basis).map_or(false, |c| c < DIAG_COND_LIMIT);
    }
    Ok((eigenvalues, ok))
}

/// A few rounds of shifted inverse iteration from a seeded random start.
/// Returns a unit eigenvector candidate, or None if the shifted solve breaks
/// down.
fn inverse_iteration(l: &CMatrix, mu: Complex64, index: u64) -> Option<DVector<Complex64>> {
    let n = l.nrows();
    let shift = mu + Complex64::new(1e-10 * mu.norm().max(1.0), 0.0);
    let shifted = l - CMatrix::identity(n, n) * shift;
    let lu = shifted.lu();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1A6_0000 ^ index);
    let mut v = DVector::from_fn(n, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..5 {
        let next = lu.solve(&v)?;
        let norm = next.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        v = next / Complex64::new(norm, 0.0);
    }
    Some(v)
}

/// One-norm condition estimate via explicit inversion; fine at the dense
/// sizes where directed spectra are computed.
fn condition_estimate(v: &CMatrix) -> Option<f64> {
    let inv = v.clone().lu().try_inverse()?;
    Some(one_norm(v) * one_norm(&inv))
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral radius of an undirected Laplacian without a dense solve.
///
/// Lanczos with full reorthogonalization on the sparse matrix; intended for
/// ensemble sweeps where n reaches a few thousand and only ρ_L is needed.
/// Small networks (n ≤ 128) fall through to the dense symmetric solver.
pub fn rho_l_lanczos(net: &Network, tol: f64) -> Result<f64> {
    if net.directed() {
        return Err(Error::invalid(
            "Lanczos spectral radius is defined for undirected networks only",
        ));
    }
    let n = net.n();
    if n <= 128 {
        return Ok(laplacian_spectrum(net)?.rho_l);
    }

    // Sparse structure: in-neighbor lists plus degree diagonal.
    let deg: Vec<f64> = net.in_degrees().into_iter().map(|d| d as f64).collect();
    let mut neighbors = vec![Vec::new(); n];
    for &(s, t) in net.edges() {
        neighbors[t].push(s);
    }
    let matvec = |x: &DVector<f64>| -> DVector<f64> {
        DVector::from_fn(n, |i, _| {
            deg[i] * x[i] - neighbors[i].iter().map(|&j| x[j]).sum::<f64>()
        })
    };

    let mut rng = ChaCha8Rng::seed_from_u64(net.seed().unwrap_or(0) ^ 0x9E37_79B9_7F4A_7C15);
    let mut q = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
    q /= q.norm();

    let max_iter = (n - 1).min(300);
    let mut qs: Vec<DVector<f64>> = vec![q.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut prev_top = f64::NAN;
    let mut stable = 0;

    for k in 0..max_iter {
        let mut w = matvec(&qs[k]);
        let alpha = qs[k].dot(&w);
        alphas.push(alpha);
        w -= &qs[k] * alpha;
        if k > 0 {
            w -= &qs[k - 1] * betas[k - 1];
        }
        // Full reorthogonalization keeps the basis clean enough to trust the
        // Ritz values at tight tolerances.
        for qi in &qs {
            let c = qi.dot(&w);
            w -= qi * c;
        }
        let beta = w.norm();

        let top = top_ritz(&alphas, &betas);
        if (top - prev_top).abs() <= tol * top.max(1.0) && k >= 20 {
            stable += 1;
            if stable >= 3 {
                return Ok(top);
            }
        } else {
            stable = 0;
        }
        prev_top = top;

        if beta <= 1e-12 {
            // Invariant subspace reached: Ritz values are exact in it.
            return Ok(top);
        }
        betas.push(beta);
        qs.push(w / beta);
    }
    Err(Error::numerical(format!(
        "Lanczos did not stabilize the spectral radius within {max_iter} iterations"
    )))
}

/// Largest eigenvalue of the symmetric tridiagonal (alphas, betas).
fn top_ritz(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    t.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::NEG_INFINITY, |m, &v| m.max(v))
}
