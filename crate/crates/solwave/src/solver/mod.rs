//! Solver front end: computes steady solitary waves for a requested
//! amplitude or Froude number and evaluates governing-equation residuals on
//! probe grids independent of the collocation grid.
//!
//! Strategy, in order of application:
//!
//! 1. a normalized fixed-point iteration builds an iterate at the anchor
//!    amplitude min(a, 0.35) from the first-order profile,
//! 2. damped Newton on the exact collocation system polishes it to the
//!    requested tolerance,
//! 3. amplitudes above the anchor are reached by continuation in steps of
//!    0.1 (0.05 above 0.5), re-polishing at every rung,
//! 4. unless the caller pins the half-length, it starts at 40 depths and
//!    doubles until the surface tail is below 1e−10 of the amplitude.
//!
//! Everything internal runs in the nondimensional system g = d = 1;
//! requests and solutions carry dimensional quantities.

mod petviashvili;
mod system;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Environment, ModelError};
use crate::solution::{ScaledWave, SolveDiagnostics, SolutionError, WaveSolution};
use petviashvili::petviashvili_amplitude;
use system::{newton, BoxState, BoxSystem};

/// Default ratio a/d above which solving is refused: close to the limiting
/// wave the surface loses smoothness and the smooth-wave machinery (and its
/// guarantees) no longer applies.
pub const DEFAULT_AMPLITUDE_CAP: f64 = 0.79;

/// Relative surface-tail size the half-length doubling drives down to.
const TAIL_TARGET: f64 = 1e-10;

/// Spectral tail ratio above which a truncation warning is attached.
const SPECTRAL_TAIL_WARN: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("amplitude must be positive, got {amplitude}")]
    AmplitudeOutOfRange { amplitude: f64 },
    #[error(
        "froude number {froude} is subcritical: solitary waves exist only for \
         speeds strictly above the critical speed sqrt(g*d) (F > 1)"
    )]
    FroudeSubcritical { froude: f64 },
    #[error("amplitude/depth ratio {ratio:.4} exceeds the configured cap {cap}")]
    AmplitudeCapExceeded { ratio: f64, cap: f64 },
    #[error(
        "amplitude and froude targets conflict: amplitude {amplitude} implies \
         froude {froude_implied:.8}, requested {froude_requested:.8}"
    )]
    InputConflict {
        amplitude: f64,
        froude_requested: f64,
        froude_implied: f64,
    },
    #[error("modes must be a power of two >= 64, got {modes}")]
    InvalidResolution { modes: usize },
    #[error("invalid solver input: {0}")]
    InvalidInput(String),
    #[error("invalid environment: {0}")]
    Environment(#[from] ModelError),
    #[error(
        "{stage} failed to converge after {iterations} iterations \
         (residual {residual:.3e}, target {target:.3e})"
    )]
    NoConvergence {
        stage: &'static str,
        iterations: usize,
        residual: f64,
        target: f64,
    },
    #[error("solve failed at amplitude {amplitude}: {source}")]
    AtAmplitude {
        amplitude: f64,
        #[source]
        source: Box<SolverError>,
    },
    #[error("solution assembly failed: {0}")]
    Internal(#[from] SolutionError),
}

/// What the solve should hit: a crest elevation, a Froude number, or both
/// (amplitude is solved for; the Froude number is then cross-checked to
/// 1e−6 and a conflict is an error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverTarget {
    Amplitude(f64),
    Froude(f64),
    Both { amplitude: f64, froude: f64 },
}

/// A complete, serializable description of one solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RequestFile", into = "RequestFile")]
pub struct SolveRequest {
    pub env: Environment,
    pub target: SolverTarget,
    /// Spectral intervals N; must be a power of two ≥ 64.
    pub modes: usize,
    /// Truncation half-length (length units). `None` = 40·d, auto-doubled.
    pub half_length: Option<f64>,
    /// Nondimensional residual tolerance.
    pub tol: f64,
    /// Maximum allowed a/d.
    pub amplitude_cap: f64,
}

impl SolveRequest {
    pub fn new(env: Environment, target: SolverTarget) -> Self {
        SolveRequest {
            env,
            target,
            modes: 512,
            half_length: None,
            tol: 1e-12,
            amplitude_cap: DEFAULT_AMPLITUDE_CAP,
        }
    }

    pub fn with_modes(mut self, modes: usize) -> Self {
        self.modes = modes;
        self
    }

    pub fn with_half_length(mut self, half_length: f64) -> Self {
        self.half_length = Some(half_length);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_amplitude_cap(mut self, cap: f64) -> Self {
        self.amplitude_cap = cap;
        self
    }

    fn validate(&self) -> Result<(), SolverError> {
        if !self.modes.is_power_of_two() || self.modes < 64 {
            return Err(SolverError::InvalidResolution { modes: self.modes });
        }
        if !(self.tol.is_finite() && self.tol > 0.0 && self.tol <= 1e-3) {
            return Err(SolverError::InvalidInput(format!(
                "tol must lie in (0, 1e-3], got {}",
                self.tol
            )));
        }
        if let Some(l) = self.half_length {
            if !(l.is_finite() && l > 0.0) {
                return Err(SolverError::InvalidInput(format!(
                    "half_length must be finite and positive, got {l}"
                )));
            }
        }
        if !(self.amplitude_cap.is_finite() && self.amplitude_cap > 0.0) {
            return Err(SolverError::InvalidInput(format!(
                "amplitude_cap must be finite and positive, got {}",
                self.amplitude_cap
            )));
        }
        Ok(())
    }
}

/// Flat JSON form: `{gravity, depth, p_atm?, amplitude?|froude?, modes?,
/// half_length?, tol?, amplitude_cap?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RequestFile {
    gravity: f64,
    depth: f64,
    #[serde(default)]
    p_atm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    froude: Option<f64>,
    #[serde(default = "default_modes")]
    modes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    half_length: Option<f64>,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_cap")]
    amplitude_cap: f64,
}

fn default_modes() -> usize {
    512
}

fn default_tol() -> f64 {
    1e-12
}

fn default_cap() -> f64 {
    DEFAULT_AMPLITUDE_CAP
}

impl TryFrom<RequestFile> for SolveRequest {
    type Error = SolverError;

    fn try_from(file: RequestFile) -> Result<Self, SolverError> {
        let env = Environment::new(file.gravity, file.depth, file.p_atm)?;
        let target = match (file.amplitude, file.froude) {
            (Some(a), None) => SolverTarget::Amplitude(a),
            (None, Some(f)) => SolverTarget::Froude(f),
            (Some(a), Some(f)) => SolverTarget::Both { amplitude: a, froude: f },
            (None, None) => {
                return Err(SolverError::InvalidInput(
                    "request must specify amplitude or froude".into(),
                ))
            }
        };
        Ok(SolveRequest {
            env,
            target,
            modes: file.modes,
            half_length: file.half_length,
            tol: file.tol,
            amplitude_cap: file.amplitude_cap,
        })
    }
}

impl From<SolveRequest> for RequestFile {
    fn from(req: SolveRequest) -> Self {
        let (amplitude, froude) = match req.target {
            SolverTarget::Amplitude(a) => (Some(a), None),
            SolverTarget::Froude(f) => (None, Some(f)),
            SolverTarget::Both { amplitude, froude } => (Some(amplitude), Some(froude)),
        };
        RequestFile {
            gravity: req.env.gravity,
            depth: req.env.depth,
            p_atm: req.env.p_atm,
            amplitude,
            froude,
            modes: req.modes,
            half_length: req.half_length,
            tol: req.tol,
            amplitude_cap: req.amplitude_cap,
        }
    }
}

// ───────────────────────────────────────────────────────────────────────────
// First-order (weakly nonlinear) solitary profile: initial guess and
// small-amplitude oracle.

/// η(x) = a·sech²(x·√(3a/(4d³))), c = √(g(d+a)).
#[derive(Debug, Clone, Copy)]
pub struct KdvProfile {
    amplitude: f64,
    speed: f64,
    decay: f64,
}

impl KdvProfile {
    pub fn surface(&self, x: f64) -> f64 {
        let s = (self.decay * x).cosh();
        self.amplitude / (s * s)
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Spatial decay rate of √η (η itself decays at twice this rate).
    pub fn decay(&self) -> f64 {
        self.decay
    }
}

/// First-order profile for 0 < a ≤ 0.2·d; beyond that the asymptotics are
/// not credible even as a seed and the request is refused.
pub fn kdv_profile(amplitude: f64, env: &Environment) -> Result<KdvProfile, SolverError> {
    let d = env.depth;
    if !(amplitude > 0.0) || amplitude > 0.2 * d {
        return Err(SolverError::AmplitudeOutOfRange { amplitude });
    }
    Ok(KdvProfile {
        amplitude,
        speed: (env.gravity * (d + amplitude)).sqrt(),
        decay: (3.0 * amplitude / (4.0 * d * d * d)).sqrt(),
    })
}

// ───────────────────────────────────────────────────────────────────────────
// Core solve machinery (nondimensional).

struct StageTally {
    fixed_point_iterations: usize,
    fixed_point_converged: bool,
    newton_iterations: usize,
    final_residual: f64,
    ladder: Vec<f64>,
}

/// Continuation rungs from `anchor` to `target`: 0.1 apart below 0.5,
/// 0.05 apart above. Includes `target`, excludes `anchor`.
fn amplitude_ladder(anchor: f64, target: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut cur = anchor;
    let eps = 1e-12;
    while (cur - target).abs() > eps {
        let ascending = target > cur;
        let size = if ascending {
            if cur + 0.1 <= 0.5 + eps {
                0.1
            } else {
                0.05
            }
        } else if cur > 0.5 + eps {
            0.05
        } else {
            0.1
        };
        cur = if ascending {
            (cur + size).min(target)
        } else {
            (cur - size).max(target)
        };
        out.push(cur);
    }
    out
}

/// Solve at fixed resolution and half-length. `warm` must live on the same
/// grid; it replaces the fixed-point stage entirely.
fn solve_fixed_length(
    n: usize,
    l: f64,
    a: f64,
    tol: f64,
    warm: Option<&ScaledWave>,
) -> Result<(BoxState, StageTally), SolverError> {
    let (mut state, anchor, fp_iterations, fp_converged) = match warm {
        Some(w) => (
            BoxState { yhat: w.cosine_modes.clone(), c: w.speed },
            w.amplitude,
            0,
            true,
        ),
        None => {
            let anchor = a.min(0.35);
            let fp = petviashvili_amplitude(n, l, anchor, 200);
            (BoxState { yhat: fp.yhat, c: fp.c }, anchor, fp.iterations, fp.converged)
        }
    };

    let mut ladder = if warm.is_none() {
        let mut rungs = vec![anchor];
        rungs.extend(amplitude_ladder(anchor, a));
        rungs
    } else {
        amplitude_ladder(anchor, a)
    };
    if ladder.is_empty() {
        ladder.push(a);
    }

    let mut tally = StageTally {
        fixed_point_iterations: fp_iterations,
        fixed_point_converged: fp_converged,
        newton_iterations: 0,
        final_residual: f64::INFINITY,
        ladder: Vec::new(),
    };
    let mut sys = BoxSystem::new(n, l, a);
    for &rung in &ladder {
        sys.set_amplitude(rung);
        let out = newton(&sys, &mut state, tol, 50)?;
        tally.newton_iterations += out.iterations;
        tally.final_residual = out.residual;
        tally.ladder.push(rung);
    }
    Ok((state, tally))
}

/// Full nondimensional solve: fixed-point seed, Newton continuation, and
/// (unless pinned) half-length doubling until the tail is buried.
fn solve_scaled(
    a: f64,
    n: usize,
    half_length: Option<f64>,
    tol: f64,
    warm: Option<&ScaledWave>,
) -> Result<(ScaledWave, SolveDiagnostics), SolverError> {
    let pinned = half_length.is_some();
    let mut l = half_length
        .or_else(|| warm.map(|w| w.half_length))
        .unwrap_or(40.0);
    let mut doublings = 0usize;
    let mut warnings: Vec<String> = Vec::new();

    loop {
        let warm_here = warm.filter(|w| {
            w.cosine_modes.len() == n + 1 && w.half_length == l && w.sine_modes.is_empty()
        });
        let (state, tally) = solve_fixed_length(n, l, a, tol, warm_here)?;
        let sys = BoxSystem::new(n, l, a);
        let quantities = sys.surface_quantities(&state);
        let spatial_tail = sys.spatial_tail(&quantities);

        let lead = state.yhat.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tail_start = ((0.95 * n as f64).ceil() as usize).min(n);
        let spectral_tail = state.yhat[tail_start..]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            / lead.max(f64::MIN_POSITIVE);

        // Doubling the domain helps only while the tail is limited by
        // truncation. Once the spectral floor dominates it, a longer domain
        // lowers the resolved wavenumber range and makes the wave worse, so
        // stop and report instead.
        let truncation_limited = spectral_tail <= 0.1 * spatial_tail;
        if !pinned && spatial_tail >= TAIL_TARGET && truncation_limited && doublings < 4 {
            l *= 2.0;
            doublings += 1;
            continue;
        }
        if spatial_tail >= TAIL_TARGET {
            warnings.push(format!(
                "surface tail {spatial_tail:.2e} of the amplitude remains at \
                 half-length {l}; increase the half-length for a cleaner tail"
            ));
        }
        if !tally.fixed_point_converged {
            warnings.push("fixed-point stage stagnated before Newton".into());
        }

        if spectral_tail > SPECTRAL_TAIL_WARN {
            warnings.push(format!(
                "spectral tail is {spectral_tail:.2e} of the leading mode \
                 (target 1e-8); increase modes"
            ));
        }

        let crest: f64 = state.yhat.iter().sum();
        let scaled = ScaledWave {
            half_length: l,
            conformal_depth: 1.0 + state.yhat[0],
            speed: state.c,
            flux_density: quantities.q,
            amplitude: crest,
            tolerance: tol,
            cosine_modes: state.yhat,
            sine_modes: Vec::new(),
        };
        let diagnostics = SolveDiagnostics {
            converged: tally.final_residual <= 10.0 * tol,
            fixed_point_iterations: tally.fixed_point_iterations,
            newton_iterations: tally.newton_iterations,
            final_residual: tally.final_residual,
            spectral_tail_ratio: spectral_tail,
            spatial_tail,
            half_length_doublings: doublings,
            continuation_steps: tally.ladder,
            warnings,
        };
        return Ok((scaled, diagnostics));
    }
}

fn solve_for_froude(
    froude: f64,
    n: usize,
    half_length: Option<f64>,
    tol: f64,
    cap: f64,
) -> Result<(ScaledWave, SolveDiagnostics), SolverError> {
    if !(froude > 1.0) {
        return Err(SolverError::FroudeSubcritical { froude });
    }
    // First-order speed relation F = √(1+a) seeds both the starting
    // amplitude and the first secant slope da/dF = 2c.
    let mut a = (froude * froude - 1.0).clamp(1e-6, cap);
    let mut warm: Option<(ScaledWave, SolveDiagnostics)> = None;
    let mut prev: Option<(f64, f64)> = None;
    let mut cap_strikes = 0;
    let mut last_err = f64::INFINITY;
    for _ in 0..25 {
        let (scaled, diag) = solve_scaled(a, n, half_length, tol, warm.as_ref().map(|w| &w.0))?;
        let err = scaled.speed - froude;
        last_err = err.abs();
        if err.abs() <= 1e-10 {
            return Ok((scaled, diag));
        }
        let step = match prev {
            Some((a_prev, err_prev))
                if (a - a_prev).abs() > 0.0 && (err - err_prev).abs() > 0.0 =>
            {
                err * (a - a_prev) / (err - err_prev)
            }
            _ => err * 2.0 * scaled.speed,
        };
        prev = Some((a, err));
        warm = Some((scaled, diag));
        let next = a - step;
        if next > cap {
            cap_strikes += 1;
            if cap_strikes >= 2 {
                return Err(SolverError::AmplitudeCapExceeded { ratio: next, cap });
            }
        }
        if !next.is_finite() {
            break;
        }
        a = next.clamp(1e-9, cap);
    }
    Err(SolverError::NoConvergence {
        stage: "froude matching",
        iterations: 25,
        residual: last_err,
        target: 1e-10,
    })
}

/// Computes a steady solitary wave per the request. See the module docs for
/// the staging; the returned solution is immutable and self-describing.
pub fn solve_wave(request: &SolveRequest) -> Result<WaveSolution, SolverError> {
    request.validate()?;
    let env = request.env;
    let d = env.depth;
    let l_nd = request.half_length.map(|v| v / d);
    let cap = request.amplitude_cap;

    let (scaled, diagnostics) = match request.target {
        SolverTarget::Amplitude(a_dim) => {
            let a = a_dim / d;
            if !(a > 0.0) {
                return Err(SolverError::AmplitudeOutOfRange { amplitude: a_dim });
            }
            if a > cap {
                return Err(SolverError::AmplitudeCapExceeded { ratio: a, cap });
            }
            solve_scaled(a, request.modes, l_nd, request.tol, None)?
        }
        SolverTarget::Froude(froude) => {
            solve_for_froude(froude, request.modes, l_nd, request.tol, cap)?
        }
        SolverTarget::Both { amplitude: a_dim, froude } => {
            let a = a_dim / d;
            if !(a > 0.0) {
                return Err(SolverError::AmplitudeOutOfRange { amplitude: a_dim });
            }
            if a > cap {
                return Err(SolverError::AmplitudeCapExceeded { ratio: a, cap });
            }
            if !(froude > 1.0) {
                return Err(SolverError::FroudeSubcritical { froude });
            }
            let (scaled, diag) = solve_scaled(a, request.modes, l_nd, request.tol, None)?;
            if (scaled.speed - froude).abs() > 1e-6 {
                return Err(SolverError::InputConflict {
                    amplitude: a_dim,
                    froude_requested: froude,
                    froude_implied: scaled.speed,
                });
            }
            (scaled, diag)
        }
    };
    Ok(WaveSolution::from_scaled(env, scaled, diagnostics)?)
}

/// Solves an ascending list of amplitudes, each solve warm-started from the
/// previous solution. The whole list is validated against the default cap
/// before any work happens.
pub fn continue_amplitude(
    env: &Environment,
    amplitudes: &[f64],
    modes: usize,
    tol: f64,
) -> Result<Vec<WaveSolution>, SolverError> {
    let probe_request = SolveRequest::new(*env, SolverTarget::Amplitude(1.0))
        .with_modes(modes)
        .with_tol(tol);
    probe_request.validate()?;
    for pair in amplitudes.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(SolverError::InvalidInput(format!(
                "amplitude list must be strictly ascending, got {} after {}",
                pair[1], pair[0]
            )));
        }
    }
    for &a_dim in amplitudes {
        let a = a_dim / env.depth;
        if !(a > 0.0) {
            return Err(SolverError::AmplitudeOutOfRange { amplitude: a_dim });
        }
        if a > DEFAULT_AMPLITUDE_CAP {
            return Err(SolverError::AmplitudeCapExceeded {
                ratio: a,
                cap: DEFAULT_AMPLITUDE_CAP,
            });
        }
    }

    let mut out = Vec::with_capacity(amplitudes.len());
    let mut warm: Option<ScaledWave> = None;
    for &a_dim in amplitudes {
        let a = a_dim / env.depth;
        let (scaled, diag) =
            solve_scaled(a, modes, None, tol, warm.as_ref()).map_err(|e| {
                SolverError::AtAmplitude { amplitude: a_dim, source: Box::new(e) }
            })?;
        warm = Some(scaled.clone());
        out.push(WaveSolution::from_scaled(*env, scaled, diag)?);
    }
    Ok(out)
}

// ───────────────────────────────────────────────────────────────────────────
// Independent residual evaluation.

/// Probe-grid density for [`residuals`]. All lengths nondimensional.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeSpec {
    /// Surface samples over (−Λ, Λ), placed off the collocation nodes.
    pub surface_samples: usize,
    /// Interior points for the harmonicity check.
    pub interior_samples: usize,
    /// Depth samples along the truncation boundary column.
    pub depth_samples: usize,
    /// Step of the five-point-per-axis interior stencil, in depths.
    pub fd_step: f64,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            surface_samples: 2048,
            interior_samples: 200,
            depth_samples: 17,
            fd_step: 8e-3,
        }
    }
}

impl ProbeSpec {
    /// Same probe layout at twice the sampling density (re-evaluation
    /// cross-check).
    pub fn doubled(&self) -> Self {
        ProbeSpec {
            surface_samples: 2 * self.surface_samples,
            interior_samples: 2 * self.interior_samples,
            depth_samples: 2 * self.depth_samples - 1,
            fd_step: self.fd_step,
        }
    }
}

/// Max-norm residuals of the governing system on probe grids, in the
/// nondimensional system g = d = 1. All entries are ≥ 0; smaller is better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// max |Δψ| at interior probes (background-subtracted stencil).
    pub laplace_residual: f64,
    /// max |½|∇ψ|² + gy − c²/2| on the free surface.
    pub bernoulli_surface_residual: f64,
    /// max |v − (u−c)·η_x| on the free surface.
    pub kinematic_surface_residual: f64,
    /// max |v| on the bed.
    pub bed_residual: f64,
    /// |η(Λ)| + max over depth of (|u| + |v|) at x = Λ.
    pub decay_residual: f64,
}

/// Evaluates the governing-system residuals on probe grids deliberately
/// offset from the solver's collocation nodes, so the numbers measure the
/// solution rather than the discretization's self-consistency.
pub fn residuals(sol: &WaveSolution, probe: &ProbeSpec) -> ResidualReport {
    let scaled = sol.scaled();
    let map = scaled.map();
    let c = scaled.speed;
    let q = scaled.flux_density;
    let l = scaled.half_length;
    let h = scaled.conformal_depth;
    let half_c2 = 0.5 * c * c;

    // Free surface: dynamic and kinematic conditions at shifted abscissae.
    let m = probe.surface_samples.max(4);
    let mut bernoulli = 0.0f64;
    let mut kinematic = 0.0f64;
    for i in 0..m {
        let xi = -l + (i as f64 + 0.5) * (2.0 * l) / m as f64;
        let jet = map.jet(Complex64::new(xi, 0.0));
        let y = jet.z.im;
        let grad_sq = q * q / jet.dz.norm_sqr();
        bernoulli = bernoulli.max((0.5 * grad_sq + y - half_c2).abs());
        let wp = -q / jet.dz; // (u−c) − iv
        let slope = jet.dz.im / jet.dz.re;
        kinematic = kinematic.max((-wp.im - wp.re * slope).abs());
    }

    // Bed impermeability.
    let mb = (probe.surface_samples / 2).max(4);
    let mut bed = 0.0f64;
    for i in 0..mb {
        let xi = (i as f64 + 0.5) * l / mb as f64;
        let jet = map.jet(Complex64::new(xi, -h));
        let wp = -q / jet.dz;
        bed = bed.max(wp.im.abs());
    }

    // Interior harmonicity. ψ + q·y is harmonic iff ψ is; evaluating the
    // periodic part w = z − ζ directly keeps the sampled values free of the
    // cancellation that would otherwise drown the stencil in round-off.
    let psi_tilde = |x: f64, y: f64| -> Option<f64> {
        let zeta = map.invert(x, y)?;
        Some(q * map.jet(zeta).w.im)
    };
    let step = probe.fd_step;
    let mut laplace = 0.0f64;
    const F1: f64 = 0.754_877_666_246_692_8; // plastic-constant lattice
    const F2: f64 = 0.569_840_290_998_053_2;
    for k in 0..probe.interior_samples {
        let t = k as f64 + 1.0;
        let f1 = (0.5 + t * F1).fract();
        let f2 = (0.5 + t * F2).fract();
        let x = (f1 - 0.5) * 0.9 * l;
        let eta = match map.surface_xi_for_x(x) {
            Some(xi) => map.jet(Complex64::new(xi, 0.0)).z.im,
            None => {
                laplace = f64::INFINITY;
                continue;
            }
        };
        let margin = 3.0 * step;
        let (lo, hi) = (-1.0 + margin, eta - margin);
        if !(hi > lo) {
            continue; // column too shallow for the stencil
        }
        let y = lo + f2 * (hi - lo);
        let offsets = [
            (0.0, 0.0),
            (-2.0, 0.0),
            (-1.0, 0.0),
            (1.0, 0.0),
            (2.0, 0.0),
            (0.0, -2.0),
            (0.0, -1.0),
            (0.0, 1.0),
            (0.0, 2.0),
        ];
        let mut vals = [0.0f64; 9];
        let mut ok = true;
        for (slot, (dx, dy)) in vals.iter_mut().zip(offsets) {
            match psi_tilde(x + dx * step, y + dy * step) {
                Some(v) => *slot = v,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            laplace = f64::INFINITY;
            continue;
        }
        // Fourth-order five-point formula per axis, center shared.
        let residual = (-(vals[1] + vals[4] + vals[5] + vals[8])
            + 16.0 * (vals[2] + vals[3] + vals[6] + vals[7])
            - 60.0 * vals[0])
            / (12.0 * step * step);
        laplace = laplace.max(residual.abs());
    }

    // Decay at the truncation boundary.
    let kd = probe.depth_samples.max(2);
    let mut velocity = 0.0f64;
    for k in 0..kd {
        let sigma = -h * k as f64 / (kd - 1) as f64;
        let jet = map.jet(Complex64::new(l, sigma));
        let wp = -q / jet.dz;
        let u = c + wp.re;
        velocity = velocity.max(u.abs() + wp.im.abs());
    }
    let eta_l = map.jet(Complex64::new(l, 0.0)).z.im.abs();

    ResidualReport {
        laplace_residual: laplace,
        bernoulli_surface_residual: bernoulli,
        kinematic_surface_residual: kinematic,
        bed_residual: bed,
        decay_residual: eta_l + velocity,
    }
}

// ───────────────────────────────────────────────────────────────────────────
