//! Fixed-step method-of-steps core: classical Runge–Kutta with the delayed
//! state read from the stored grid.
//!
//! The step h divides the delay exactly, so delayed values at stage offsets
//! 0 and h land on grid points and are exact reads. The half-step stage reads
//! the two-point cubic Hermite interpolant of the enclosing past segment,
//! built from stored states and derivatives. Derivative discontinuities of a
//! constant-history DDE sit at multiples of τ, which are grid points, so
//! every step integrates a smooth piece and fourth-order behavior survives.

/// Truncation record when the state leaves the finite ball.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BlowUp {
    pub t: f64,
}

/// Integrate ẋ(t) = F(t, x(t), x(t−τ)) from a constant history.
///
/// - `n_delay`: steps per delay, h = τ/n_delay.
/// - `steps`: total steps; the run covers [0, steps·h].
/// - `observe` is called at every grid point, including t = 0.
/// - `rhs(t, x, x_delayed, out)` writes ẋ into `out`.
///
/// Returns a [`BlowUp`] if a state goes non-finite (that state is not
/// observed) or its max-norm exceeds `blow_up_threshold` (observed, then
/// truncated).
pub(crate) fn integrate_dde<F>(
    dim: usize,
    tau: f64,
    n_delay: usize,
    steps: usize,
    history: &[f64],
    blow_up_threshold: f64,
    mut observe: impl FnMut(usize, f64, &[f64]),
    mut rhs: F,
) -> Option<BlowUp>
where
    F: FnMut(f64, &[f64], &[f64], &mut [f64]),
{
    debug_assert_eq!(history.len(), dim);
    let h = tau / n_delay as f64;
    let ring = n_delay + 1;
    let slot = move |g: usize| (g % ring) * dim;

    // Ring buffers over the last `ring` grid points, flattened row-major.
    // A slot is rewritten only once its grid point has aged out of the delay
    // horizon, so every read below sees live data.
    let mut states = vec![0.0; ring * dim];
    let mut derivs = vec![0.0; ring * dim];
    states[0..dim].copy_from_slice(history);

    let mut x = history.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];
    let mut xd_mid = vec![0.0; dim];
    let mut xd_grid = vec![0.0; dim];

    observe(0, 0.0, &x);

    for i in 0..steps {
        let t = i as f64 * h;
        let g0 = i as i64 - n_delay as i64; // grid index of t − τ

        // Stage 1: delayed value at t − τ, a grid point (or the history).
        if g0 < 0 {
            xd_grid.copy_from_slice(history);
        } else {
            let s = slot(g0 as usize);
            xd_grid.copy_from_slice(&states[s..s + dim]);
        }
        rhs(t, &x, &xd_grid, &mut k1);
        let sd = slot(i);
        derivs[sd..sd + dim].copy_from_slice(&k1);

        // Stages 2-3: delayed value at t − τ + h/2. In the history (t ≤ 0)
        // the interpolant is the constant; afterwards it is the midpoint of
        // the cubic Hermite on the enclosing segment.
        if g0 < 0 {
            xd_mid.copy_from_slice(history);
        } else {
            let (a, b) = (slot(g0 as usize), slot(g0 as usize + 1));
            for c in 0..dim {
                let (y0, y1) = (states[a + c], states[b + c]);
                let (d0, d1) = (derivs[a + c], derivs[b + c]);
                xd_mid[c] = 0.5 * (y0 + y1) + h * (d0 - d1) / 8.0;
            }
        }
        for c in 0..dim {
            stage[c] = x[c] + 0.5 * h * k1[c];
        }
        rhs(t + 0.5 * h, &stage, &xd_mid, &mut k2);
        for c in 0..dim {
            stage[c] = x[c] + 0.5 * h * k2[c];
        }
        rhs(t + 0.5 * h, &stage, &xd_mid, &mut k3);

        // Stage 4: delayed value at t − τ + h, again a grid point.
        if g0 + 1 < 0 {
            xd_grid.copy_from_slice(history);
        } else {
            let s = slot((g0 + 1) as usize);
            xd_grid.copy_from_slice(&states[s..s + dim]);
        }
        for c in 0..dim {
            stage[c] = x[c] + h * k3[c];
        }
        rhs(t + h, &stage, &xd_grid, &mut k4);

        for c in 0..dim {
            x[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }

        let t_next = (i + 1) as f64 * h;
        if x.iter().any(|v| !v.is_finite()) {
            return Some(BlowUp { t: t_next });
        }
        let s = slot(i + 1);
        states[s..s + dim].copy_from_slice(&x);
        observe(i + 1, t_next, &x);
        if x.iter().any(|v| v.abs() > blow_up_threshold) {
            return Some(BlowUp { t: t_next });
        }
    }
    None
}
