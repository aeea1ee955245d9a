//! Normalized fixed-point iteration (Petviashvili scheme) for the surface
//! trace at small to moderate amplitude, used to manufacture an initial
//! iterate good enough for Newton.
//!
//! Dropping the exponentially small corrections `q → c`, `h → 1` and the
//! mean-level mode, the dynamic condition becomes a balance between a
//! positive-definite linear operator and a quadratic-plus-cubic
//! nonlinearity, diagonal in the cosine basis:
//!
//! ```text
//!   L ŷ_j = N̂_j,   L_j = 2(c²λ_j − 1),   λ_j = k_j coth(k_j)
//!   N[Y]  = −c²(X'² + Y'²) + 2Y(2X' + X'² + Y'²),   X' = Σ λ_j ŷ_j cos(…)
//! ```
//!
//! Supercriticality (c > 1) makes every L_j strictly positive, so the
//! stabilized update ŷ ← S²·L⁻¹N̂ with S = ⟨Y, LY⟩/⟨Y, N[Y]⟩ contracts onto
//! the nontrivial solution instead of collapsing to zero. Products are
//! formed on a doubled grid to keep the quadratic terms alias-free. An
//! outer secant on c then matches the crest height to the requested
//! amplitude; the match is left loose (0.1%) on purpose — Newton enforces
//! it exactly afterwards.

use crate::spectral::CosineGrid;

/// Result of the fixed-point stage: a Newton-ready iterate.
pub(crate) struct FixedPointOutcome {
    /// Even modes with ŷ₀ = 0 (mean level handled by Newton).
    pub yhat: Vec<f64>,
    /// Speed at which the crest height matched the target.
    pub c: f64,
    /// Total inner iterations across all outer secant steps.
    pub iterations: usize,
    /// Whether the final inner run met its stagnation tolerance.
    pub converged: bool,
}

/// coth(x) for x > 0: 1 + 2e⁻²ˣ/(1−e⁻²ˣ).
fn coth(x: f64) -> f64 {
    let e = (-2.0 * x).exp();
    1.0 + 2.0 * e / (1.0 - e)
}

/// Cosine coefficients of the classical first-order solitary profile
/// a·sech²(ξ·√(3a)/2) on the collocation grid: the universal seed.
pub(crate) fn kdv_modes(grid: &CosineGrid, a: f64) -> Vec<f64> {
    let beta = (3.0 * a / 4.0).sqrt();
    let samples: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&xi| a / (beta * xi).cosh().powi(2))
        .collect();
    let mut yhat = grid.cos_analysis(&samples);
    yhat[0] = 0.0;
    yhat
}

/// One inner run at fixed speed. Returns (modes, crest height, iterations,
/// stagnated-below-tolerance).
fn iterate_at_speed(
    grid: &CosineGrid,
    padded: &CosineGrid,
    lambda: &[f64],
    c: f64,
    seed: &[f64],
    max_iter: usize,
) -> (Vec<f64>, f64, usize, bool) {
    let n = grid.intervals();
    let np = padded.intervals();
    let c2 = c * c;
    let linear: Vec<f64> = (0..=n)
        .map(|j| if j == 0 { 1.0 } else { 2.0 * (c2 * lambda[j] - 1.0) })
        .collect();

    let mut yhat = seed.to_vec();
    let mut converged = false;
    let mut used = 0;
    for it in 0..max_iter {
        used = it + 1;
        // Alias-free evaluation of the nonlinearity on the doubled grid.
        let mut cy = vec![0.0; np + 1];
        let mut cx = vec![0.0; np + 1];
        let mut cyp = vec![0.0; np + 1];
        for j in 1..=n {
            cy[j] = yhat[j];
            cx[j] = yhat[j] * lambda[j];
            cyp[j] = -yhat[j] * grid.wavenumber(j);
        }
        let y = padded.cos_synthesis(&cy);
        let xp = padded.cos_synthesis(&cx);
        let yp = padded.sin_synthesis(&cyp);
        let nvals: Vec<f64> = (0..=np)
            .map(|i| {
                let grad = xp[i] * xp[i] + yp[i] * yp[i];
                -c2 * grad + 2.0 * y[i] * (2.0 * xp[i] + grad)
            })
            .collect();
        let nhat_full = padded.cos_analysis(&nvals);

        // Stabilizer from the energy-type pairing ⟨Y, ·⟩ over j ≥ 1.
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 1..=n {
            num += yhat[j] * linear[j] * yhat[j];
            den += yhat[j] * nhat_full[j];
        }
        if !(den.abs() > 1e-300) {
            return (yhat, 0.0, used, false);
        }
        let s = num / den;
        let s2 = s * s;

        let mut next = vec![0.0; n + 1];
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for j in 1..=n {
            next[j] = s2 * nhat_full[j] / linear[j];
            diff = diff.max((next[j] - yhat[j]).abs());
            scale = scale.max(next[j].abs());
        }
        yhat = next;
        if diff <= 1e-11 * scale.max(1e-300) {
            converged = true;
            break;
        }
    }
    let crest: f64 = yhat.iter().skip(1).sum();
    (yhat, crest, used, converged)
}

/// Finds modes and speed whose crest height matches `a` to 0.1%, starting
/// from the first-order profile and adjusting c by a secant.
pub(crate) fn petviashvili_amplitude(
    n: usize,
    half_length: f64,
    a: f64,
    max_inner: usize,
) -> FixedPointOutcome {
    let grid = CosineGrid::new(n, half_length);
    let padded = CosineGrid::new(2 * n, half_length);
    let lambda: Vec<f64> = (0..=n)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                let k = grid.wavenumber(j);
                k * coth(k)
            }
        })
        .collect();

    let mut total = 0usize;
    let mut c = (1.0 + a).sqrt();
    let mut seed = kdv_modes(&grid, a);
    let (mut yhat, mut crest, used, mut inner_ok) =
        iterate_at_speed(&grid, &padded, &lambda, c, &seed, max_inner);
    total += used;

    // Secant on G(c) = crest(c) − a; first step from the first-order slope
    // da/dc ≈ 2c.
    let mut prev = (c, crest - a);
    if (crest - a).abs() > 1e-3 * a {
        c -= (crest - a) / (2.0 * c);
        for _ in 0..12 {
            seed.copy_from_slice(&yhat);
            let (yh, cr, used, ok) =
                iterate_at_speed(&grid, &padded, &lambda, c, &seed, max_inner);
            total += used;
            yhat = yh;
            crest = cr;
            inner_ok = ok;
            let err = crest - a;
            if err.abs() <= 1e-3 * a || !err.is_finite() {
                break;
            }
            let slope = (err - prev.1) / (c - prev.0);
            prev = (c, err);
            let step = if slope.abs() > 1e-12 { err / slope } else { err / (2.0 * c) };
            c = (c - step).clamp(1.0 + 1e-9, 1.4);
        }
    }

    let converged = inner_ok && (crest - a).abs() <= 1e-3 * a && crest.is_finite();
    FixedPointOutcome { yhat, c, iterations: total, converged }
}

// ───────────────────────────────────────────────────────────────────────────
