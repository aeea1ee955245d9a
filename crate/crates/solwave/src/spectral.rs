//! Cosine/sine pseudo-spectral transforms on a uniform half-period grid.
//!
//! The wave is even about the crest, so every surface quantity lives in a
//! cosine series on `ξ ∈ [0, L]`:
//!
//! ```text
//! f(ξ_i) = Σ_{j=0}^{N} f̂_j cos(π i j / N),   ξ_i = i L / N,  i = 0..N,
//! ```
//!
//! with wavenumbers `k_j = j π / L`. Derivatives are sine series on the same
//! nodes. Both directions are computed through a single complex FFT of length
//! `2N` on the even (respectively odd) periodic extension, so analysis and
//! synthesis are exact inverses up to rounding.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Transform plan for a fixed resolution `N` and half-length `L`.
pub struct CosineGrid {
    n: usize,
    l: f64,
    fft: Arc<dyn Fft<f64>>,
}

impl CosineGrid {
    pub fn new(n: usize, l: f64) -> Self {
        assert!(n >= 2, "grid needs at least two intervals");
        assert!(l > 0.0, "half-length must be positive");
        let fft = FftPlanner::new().plan_fft_forward(2 * n);
        Self { n, l, fft }
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn half_length(&self) -> f64 {
        self.l
    }

    /// Collocation nodes `ξ_i = i L / N`, including both endpoints.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.l / self.n as f64
    }

    /// Wavenumber of mode `j`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        j as f64 * std::f64::consts::PI / self.l
    }

    fn run(&self, buf: &mut [Complex64]) {
        let mut scratch = vec![Complex64::default(); self.fft.get_inplace_scratch_len()];
        self.fft.process_with_scratch(buf, &mut scratch);
    }

    /// Node values → cosine coefficients (`N+1` of each).
    pub fn cos_analysis(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(values.len(), n + 1);
        let mut buf = vec![Complex64::default(); 2 * n];
        for (i, v) in values.iter().enumerate() {
            buf[i] = Complex64::new(*v, 0.0);
        }
        for i in 1..n {
            buf[2 * n - i] = Complex64::new(values[i], 0.0);
        }
        self.run(&mut buf);
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = buf[0].re / (2 * n) as f64;
        for (j, c) in coeffs.iter_mut().enumerate().take(n).skip(1) {
            *c = buf[j].re / n as f64;
        }
        coeffs[n] = buf[n].re / (2 * n) as f64;
        coeffs
    }

    /// Cosine coefficients → node values.
    pub fn cos_synthesis(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(coeffs.len(), n + 1);
        let mut buf = vec![Complex64::default(); 2 * n];
        buf[0] = Complex64::new(2.0 * n as f64 * coeffs[0], 0.0);
        buf[n] = Complex64::new(2.0 * n as f64 * coeffs[n], 0.0);
        for j in 1..n {
            let v = Complex64::new(n as f64 * coeffs[j], 0.0);
            buf[j] = v;
            buf[2 * n - j] = v;
        }
        self.run(&mut buf);
        let scale = 1.0 / (2 * n) as f64;
        (0..=n).map(|i| buf[i].re * scale).collect()
    }

    /// Sine coefficients → node values: `g_i = Σ_{j=1}^{N-1} b_j sin(πij/N)`.
    ///
    /// `b[0]` is ignored and `b[N]`, if present, contributes nothing at the
    /// nodes (`sin(πi) = 0`). Endpoint values are exactly zero.
    pub fn sin_synthesis(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert!(b.len() == n + 1 || b.len() == n);
        let mut buf = vec![Complex64::default(); 2 * n];
        for j in 1..n {
            let v = Complex64::new(0.0, n as f64 * b[j]);
            buf[j] = v;
            buf[2 * n - j] = v.conj();
        }
        self.run(&mut buf);
        let scale = 1.0 / (2 * n) as f64;
        let mut out: Vec<f64> = (0..=n).map(|i| buf[i].re * scale).collect();
        out[0] = 0.0;
        out[n] = 0.0;
        out
    }
}
