//! Small numerical utilities that the physics modules share: Gauss–Legendre
//! quadrature nodes, bracketed scalar root finding, the linearized decay-rate
//! relation for supercritical flow, and least-squares line fitting.

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
/// iteration from the Chebyshev-like initial guess; weights follow from the
/// derivative. Accurate to machine precision for the orders used here
/// (n ≤ 1024).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "quadrature order must be at least 2");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess for the i-th root (descending).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrates `f` over `[a, b]` with an `n`-node Gauss–Legendre rule.
pub fn gauss_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Bisection on a bracketing interval. `f(lo)` and `f(hi)` must have opposite
/// signs; the returned point satisfies `|f| ≈ 0` to the bracket width `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo).abs() < tol {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Exponential decay rate μ of the far field of a supercritical steady wave.
///
/// Linearizing the free-surface problem about still water and demanding
/// solutions `∝ e^{-μ|x|}` gives
///
/// ```text
/// c² μ = g · tan(μ d),   0 < μ d < π/2,
/// ```
/// which has exactly one root for `c² > g·d` (the supercritical regime).
/// This is the oscillatory dispersion relation `c²k = g·tanh(kd)` continued
/// to imaginary wavenumber `k = iμ`: for a supercritical speed the `tanh`
/// form itself has no positive root, which is precisely why the wave decays
/// instead of radiating. In the small-amplitude limit
/// `μ → √(3a/d³)` matching the sech² profile decay.
pub fn decay_rate(speed_sq: f64, gravity: f64, depth: f64) -> Option<f64> {
    if !(speed_sq > gravity * depth) {
        return None; // Subcritical or critical flow has no decaying mode.
    }
    let f = |mu: f64| speed_sq * mu - gravity * (mu * depth).tan();
    // f(0+) > 0 and f → -∞ as μd → π/2.
    let lo = 1e-12 / depth;
    let mut hi = std::f64::consts::FRAC_PI_2 / depth * (1.0 - 1e-12);
    // Pull the upper end in until the bracket is clean (tan blows up there).
    while f(hi) > 0.0 {
        hi *= 0.999_999;
        if hi < lo {
            return None;
        }
    }
    bisect(f, lo, hi, 1e-15 / depth)
}

/// Least-squares straight-line fit `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points to fit a line");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
