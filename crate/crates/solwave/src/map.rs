//! Conformal map from a reference strip onto the (nondimensional) fluid
//! domain, and its inversion.
//!
//! The fluid region `{-1 < y < η(x)}` is the image of the strip
//! `ζ = ξ + iσ, -h ≤ σ ≤ 0` under
//!
//! ```text
//! z(ζ) = ζ + i·ŷ₀ + Σ_{j≥1} [ ŷ_j sin(k_j(ζ+ih)) - b_j cos(k_j(ζ+ih)) ] / sinh(k_j h),
//! ```
//!
//! with `k_j = jπ/L`. The surface `σ = 0` maps onto `y = η(x)` with trace
//! `Y(ξ) = Σ ŷ_j cos(k_j ξ) + Σ b_j sin(k_j ξ)`, and the bottom `σ = -h` maps
//! onto the flat bed `y = -1` exactly, provided `h = 1 + ŷ₀` (the conformal
//! depth differs from the physical depth by the mean of the trace). A
//! symmetric wave has `b ≡ 0`; the sine channel exists so that deliberately
//! asymmetric perturbations can be represented and detected downstream.
//!
//! Because the flow region is a strip in both planes, the complex potential
//! of the relative flow is linear in `ζ`, so every field quantity reduces to
//! evaluations of `z_ζ` and `z_ζζ`. Numerically the terms are rewritten as
//!
//! ```text
//! sin(k_j(ζ+ih))/sinh(k_j h) = -i (A^j - B^j) / (1 - q^j)
//! cos(k_j(ζ+ih))/sinh(k_j h) =    (A^j + B^j) / (1 - q^j)
//! A = e^{isζ - 2sh},  B = e^{-isζ},  q = e^{-2sh},  s = π/L,
//! ```
//!
//! where `|A| ≤ e^{-sh} < 1` and `|B| ≤ 1` everywhere in the closed strip, so
//! the running-product evaluation is overflow-free and stable for thousands
//! of modes.

use num_complex::Complex64;
use twofloat::TwoFloat;

/// Value of the map and its first two ζ-derivatives at one point.
///
/// `w = z − ζ` is the periodic part of the map, accumulated directly from
/// the mode sum rather than by subtraction, so it carries no cancellation
/// error even where `|ζ| ≫ |w|`. Use it whenever a small harmonic quantity
/// must be resolved to near machine precision.
#[derive(Debug, Clone, Copy)]
pub struct MapJet {
    pub z: Complex64,
    pub w: Complex64,
    pub dz: Complex64,
    pub d2z: Complex64,
}

/// Spectral representation of the strip-to-fluid conformal map.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    l: f64,
    h: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl ConformalMap {
    /// `cos[j]` are the even surface modes (j = 0..=N); `sin` may be empty
    /// (symmetric wave) or carry odd modes with `sin[0]` unused.
    pub fn new(l: f64, h: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        assert!(l > 0.0 && h > 0.0);
        assert!(!cos.is_empty());
        assert!(sin.is_empty() || sin.len() == cos.len());
        Self { l, h, cos, sin }
    }

    /// Half-length of the strip; also the physical half-length, since the
    /// sine factors vanish at `ξ = ±L` and the trace is pinned there.
    pub fn half_length(&self) -> f64 {
        self.l
    }

    /// Conformal strip depth `h = 1 + ŷ₀`.
    pub fn conformal_depth(&self) -> f64 {
        self.h
    }

    pub fn cos_modes(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_modes(&self) -> &[f64] {
        &self.sin
    }

    /// Map jet at a strip point. `ζ = ξ + iσ` with `σ ∈ [-h, 0]`.
    pub fn jet(&self, zeta: Complex64) -> MapJet {
        let s = std::f64::consts::PI / self.l;
        let n = self.cos.len() - 1;
        // A, B, q as in the module docs; running powers start at j = 1.
        let xi = zeta.re;
        let sigma = zeta.im;
        let unit = Complex64::from_polar(1.0, s * xi);
        let a1 = unit * (-s * sigma - 2.0 * s * self.h).exp();
        let b1 = unit.conj() * (s * sigma).exp();
        let q1 = (-2.0 * s * self.h).exp();

        let mut apow = Complex64::new(1.0, 0.0);
        let mut bpow = Complex64::new(1.0, 0.0);
        let mut qpow = 1.0f64;

        let mut w = Complex64::new(0.0, self.cos[0]);
        let mut dz = Complex64::new(1.0, 0.0);
        let mut d2z = Complex64::new(0.0, 0.0);

        for j in 1..=n {
            apow *= a1;
            bpow *= b1;
            qpow *= q1;
            let denom = 1.0 - qpow;
            let sin_term = Complex64::new(0.0, -1.0) * (apow - bpow) / denom;
            let cos_term = (apow + bpow) / denom;
            let k = s * j as f64;
            let yc = self.cos[j];
            let ys = if self.sin.is_empty() { 0.0 } else { self.sin[j] };
            w += yc * sin_term - ys * cos_term;
            dz += k * (yc * cos_term + ys * sin_term);
            d2z += k * k * (ys * cos_term - yc * sin_term);
        }
        MapJet { z: zeta + w, w, dz, d2z }
    }

    /// Physical abscissa `x_s(ξ)` and surface trace `Y(ξ)`, in that order.
    pub fn surface(&self, xi: f64) -> (f64, f64) {
        let jet = self.jet(Complex64::new(xi, 0.0));
        (jet.z.re, jet.z.im)
    }

    /// Solves `x_s(ξ) = x` on the surface by Newton iteration (the abscissa
    /// is strictly increasing for a valid map). Returns `ξ`.
    pub fn surface_xi_for_x(&self, x: f64) -> Option<f64> {
        let mut xi = x.clamp(-self.l, self.l);
        // The residual `x_s(ξ) − x` bottoms out near ulp(|x|); a tolerance
        // proportional to |x| (not to L) keeps the inversion machine-tight
        // near the crest, where downstream consumers difference the result.
        let scale = x.abs().max(1.0);
        let atol = 4e-15 * scale;
        let mut best = (f64::INFINITY, xi);
        for _ in 0..60 {
            let jet = self.jet(Complex64::new(xi, 0.0));
            let err = jet.z.re - x;
            if err.abs() < best.0 {
                best = (err.abs(), xi);
            }
            if err.abs() <= atol {
                return Some(xi);
            }
            let slope = jet.dz.re;
            if !(slope > 0.0) {
                return None; // folded or degenerate surface
            }
            xi = (xi - err / slope).clamp(-self.l, self.l);
        }
        // Rounding can floor the residual slightly above `atol`; accept the
        // best iterate when it is already far below any physical tolerance.
        (best.0 <= 1e-12 * scale).then_some(best.1)
    }

    /// Inverts the map: finds `ζ` in the closed strip with `z(ζ) = x + iy`.
    ///
    /// The initial guess places `ξ` from the surface inversion of `x` and
    /// `σ` from the linear interpolation of the fluid column onto the strip.
    pub fn invert(&self, x: f64, y: f64) -> Option<Complex64> {
        let xi0 = self.surface_xi_for_x(x)?;
        let eta = self.jet(Complex64::new(xi0, 0.0)).z.im;
        let column = eta + 1.0;
        if !(column > 0.0) {
            return None;
        }
        let frac = ((eta - y) / column).clamp(0.0, 1.0);
        let mut zeta = Complex64::new(xi0, -self.h * frac);
        let target = Complex64::new(x, y);
        let scale = target.norm().max(1.0);
        let atol = 4e-15 * scale;
        let mut best = (f64::INFINITY, zeta);
        for _ in 0..100 {
            let jet = self.jet(zeta);
            let err = jet.z - target;
            if err.norm() < best.0 {
                best = (err.norm(), zeta);
            }
            if err.norm() <= atol {
                return Some(zeta);
            }
            if jet.dz.norm() < 1e-14 {
                return None;
            }
            zeta -= err / jet.dz;
            // Keep the iterate inside the closed strip; the solution lies
            // there and the map is only meaningful there.
            zeta = Complex64::new(
                zeta.re.clamp(-self.l, self.l),
                zeta.im.clamp(-self.h, 0.0),
            );
        }
        (best.0 <= 1e-12 * scale).then_some(best.1)
    }

    /// Map jet evaluated in double-double arithmetic.
    ///
    /// A centered finite-difference Laplacian of the pressure divides by h²,
    /// which amplifies the f64 round-off of each evaluation (a few ulps of
    /// the O(1) intermediates) to ~1e-9 at h = 1e-3 — the same size as the
    /// h²-truncation being measured. Carrying the synthesis in double-double
    /// keeps stencil differences exact to ~1e-28, so refinement studies see
    /// pure truncation error. `d2z` stays in f64: it only feeds smooth O(1)
    /// quantities that are never differenced.
    ///
    /// Modes whose remaining total contribution is below 1e-26 are skipped;
    /// the result is exact to that level, far below any stencil's needs.
    pub(crate) fn jet_precise(&self, zeta: Complex64) -> PreciseJet {
        let one = TwoFloat::from(1.0);
        let s = twofloat::consts::PI / self.l;
        let n = self.cos.len() - 1;
        let xi = zeta.re;
        let sigma = zeta.im;

        let (sin_t, cos_t) = (s * xi).sin_cos();
        let ea = (-(s * (sigma + 2.0 * self.h))).exp();
        let eb = (s * sigma).exp();
        let a1 = Cdd { re: cos_t * ea, im: sin_t * ea };
        let b1 = Cdd { re: cos_t * eb, im: -sin_t * eb };
        let q1 = (-(s * (2.0 * self.h))).exp();

        // Truncation index: suffix weight of the remaining modes, with the
        // mode factors bounded by (|A|+|B|)/(1−q) ≤ 2/(1−q₁).
        let factor_bound = 2.0 / (1.0 - q1.hi());
        let mut cut = 1usize;
        let mut suffix = 0.0f64;
        for j in (1..=n).rev() {
            let ys = if self.sin.is_empty() { 0.0 } else { self.sin[j].abs() };
            let k = std::f64::consts::PI / self.l * j as f64;
            suffix += (self.cos[j].abs() + ys) * (1.0 + k + k * k) * factor_bound;
            if suffix > 1e-26 {
                cut = j;
                break;
            }
        }

        let mut apow = Cdd { re: one, im: TwoFloat::from(0.0) };
        let mut bpow = apow;
        let mut qpow = one;
        let mut w = Cdd { re: TwoFloat::from(0.0), im: TwoFloat::from(self.cos[0]) };
        let mut dz = Cdd { re: one, im: TwoFloat::from(0.0) };
        let mut d2z = Complex64::new(0.0, 0.0);

        for j in 1..=cut.min(n) {
            apow = apow.mul(a1);
            bpow = bpow.mul(b1);
            qpow = qpow * q1;
            let inv = dd_recip(one - qpow);
            let diff = apow.sub(bpow);
            let sum = apow.add(bpow);
            // −i·(apow − bpow)/denom and (apow + bpow)/denom.
            let sin_term = Cdd { re: diff.im * inv, im: -(diff.re * inv) };
            let cos_term = sum.scale(inv);
            let k = s * (j as f64);
            let yc = self.cos[j];
            let ys = if self.sin.is_empty() { 0.0 } else { self.sin[j] };
            w = w.add(sin_term.scale_f64(yc)).sub(cos_term.scale_f64(ys));
            dz = dz.add(
                cos_term
                    .scale_f64(yc)
                    .add(sin_term.scale_f64(ys))
                    .scale(k),
            );
            let kf = k.hi();
            let st = sin_term.to_complex();
            let ct = cos_term.to_complex();
            d2z += kf * kf * (ys * ct - yc * st);
        }
        PreciseJet { w_re: w.re, w_im: w.im, dz_re: dz.re, dz_im: dz.im, d2z }
    }
}

/// Reciprocal accurate to double-double precision.
///
/// `TwoFloat`'s own `recip`/`Div` round at f64 granularity, which makes their
/// output jump by ~1 ulp between neighbouring arguments — fatal for stencils
/// that difference the result far below f64 round-off. One Newton step from
/// the f64 seed restores a smooth, fully accurate reciprocal.
pub(crate) fn dd_recip(x: TwoFloat) -> TwoFloat {
    let seed = TwoFloat::from(x.hi().recip());
    seed * (TwoFloat::from(2.0) - x * seed)
}

/// Double-double map jet: `w = z − ζ` and `z_ζ` carried as two-f64 values,
/// `z_ζζ` in plain f64.
pub(crate) struct PreciseJet {
    pub w_re: TwoFloat,
    pub w_im: TwoFloat,
    pub dz_re: TwoFloat,
    pub dz_im: TwoFloat,
    pub d2z: Complex64,
}

/// Complex number with double-double components; just enough operations for
/// the mode recurrences of [`ConformalMap::jet_precise`].
#[derive(Clone, Copy)]
struct Cdd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Cdd {
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re - o.re, im: self.im - o.im }
    }
    fn scale(self, k: TwoFloat) -> Cdd {
        Cdd { re: self.re * k, im: self.im * k }
    }
    fn scale_f64(self, k: f64) -> Cdd {
        Cdd { re: self.re * k, im: self.im * k }
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.hi(), self.im.hi())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_map() -> ConformalMap {
        // A plausibly decaying even spectrum; h = 1 + ŷ₀.
        let n = 48;
        let cos: Vec<f64> = (0..=n)
            .map(|j| if j == 0 { 0.01 } else { 0.05 * (-(j as f64) * 0.25).exp() })
            .collect();
        let h = 1.0 + cos[0];
        ConformalMap::new(12.0, h, cos, Vec::new())
    }

    #[test]
    fn trivial_map_is_the_identity() {
        let m = ConformalMap::new(40.0, 1.0, vec![0.0; 65], Vec::new());
        let zeta = Complex64::new(3.7, -0.4);
        let jet = m.jet(zeta);
        assert!((jet.z - zeta).norm() < 1e-15);
        assert!((jet.dz - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(jet.d2z.norm() < 1e-15);
        let back = m.invert(3.7, -0.4).unwrap();
        assert!((back - zeta).norm() < 1e-12);
    }

    #[test]
    fn stable_form_matches_direct_trigonometry() {
        // The exp-ratio evaluation must agree with the textbook expression
        // sin(k(ζ+ih))/sinh(kh) computed naively (valid at moderate k·h).
        let m = sample_map();
        let h = m.conformal_depth();
        let s = std::f64::consts::PI / m.half_length();
        let zeta = Complex64::new(1.3, -0.62);
        let mut z = zeta + Complex64::new(0.0, m.cos_modes()[0]);
        let mut dz = Complex64::new(1.0, 0.0);
        for (j, &c) in m.cos_modes().iter().enumerate().skip(1) {
            let k = s * j as f64;
            if k * h > 300.0 {
                break;
            }
            let arg = k * (zeta + Complex64::new(0.0, h));
            z += c * arg.sin() / (k * h).sinh();
            dz += c * k * arg.cos() / (k * h).sinh();
        }
        let jet = m.jet(zeta);
        assert!((jet.z - z).norm() < 1e-12, "z: {} vs {}", jet.z, z);
        assert!((jet.dz - dz).norm() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let m = sample_map();
        let zeta = Complex64::new(2.1, -0.35);
        let j0 = m.jet(zeta);
        let d = 1e-6;
        let dx = Complex64::new(d, 0.0);
        let fd1 = (m.jet(zeta + dx).z - m.jet(zeta - dx).z) / (2.0 * d);
        assert!((fd1 - j0.dz).norm() < 1e-8);
        // Second difference needs a larger step to stay above rounding.
        let d = 1e-4;
        let dx = Complex64::new(d, 0.0);
        let fd2 = (m.jet(zeta + dx).z - 2.0 * j0.z + m.jet(zeta - dx).z) / (d * d);
        assert!((fd2 - j0.d2z).norm() < 1e-6 * j0.d2z.norm().max(1.0));
    }

    #[test]
    fn bed_maps_to_constant_depth() {
        let m = sample_map();
        let h = m.conformal_depth();
        for i in 0..25 {
            let xi = -12.0 + i as f64;
            let jet = m.jet(Complex64::new(xi, -h));
            // Im z = -h + ŷ₀ = -1 on the whole bottom of the strip.
            assert!((jet.z.im + 1.0).abs() < 1e-13, "xi={xi}: {}", jet.z.im);
            // The bed image is a streamline: dz is real there.
            assert!(jet.dz.im.abs() < 1e-13);
        }
    }

    #[test]
    fn surface_trace_is_the_cosine_series() {
        let m = sample_map();
        let s = std::f64::consts::PI / m.half_length();
        for xi in [0.0, 0.9, 4.4, 11.0] {
            let (_, y) = m.surface(xi);
            let direct: f64 = m
                .cos_modes()
                .iter()
                .enumerate()
                .map(|(j, c)| c * (s * j as f64 * xi).cos())
                .sum();
            assert!((y - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn inversion_round_trips_interior_points() {
        let m = sample_map();
        for &(xi, sigma) in &[(0.0, -0.5), (3.3, -0.05), (-7.1, -0.93), (11.9, -0.4)] {
            let zeta = Complex64::new(xi, sigma * m.conformal_depth() / 1.01);
            let jet = m.jet(zeta);
            let back = m.invert(jet.z.re, jet.z.im).unwrap();
            assert!(
                (back - zeta).norm() < 1e-11,
                "({xi},{sigma}): {back} vs {zeta}"
            );
        }
    }

    #[test]
    fn sine_channel_breaks_evenness() {
        let n = 16;
        let cos: Vec<f64> = (0..=n).map(|j| if j == 1 { 0.02 } else { 0.0 }).collect();
        let mut sin = vec![0.0; n + 1];
        sin[2] = 0.005;
        let m = ConformalMap::new(10.0, 1.0, cos, sin);
        let (_, y_plus) = m.surface(1.0);
        let (_, y_minus) = m.surface(-1.0);
        assert!((y_plus - y_minus).abs() > 1e-3);
    }
}
