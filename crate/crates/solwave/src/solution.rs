//! Converged solitary-wave solutions: the data a solver run produces, the
//! dimensional quantities derived from it, and its serialized form.
//!
//! A solution is stored in the nondimensional system `g = d = 1` as the
//! cosine spectrum of the surface trace in the conformal variable, together
//! with the wave speed and the strip flux density. Everything else — the
//! dimensional speed, the Bernoulli constant, the mass flux, the field
//! values — is derived from these few numbers, so a serialized solution is
//! small and fully reproducible.
//!
//! ```text
//!   surface trace   Y(ξ) = Σ_j ŷ_j cos(jπξ/Λ)   (+ b_j sin(jπξ/Λ) only in
//!                                                deliberately asymmetric
//!                                                diagnostic variants)
//!   strip depth     h = 1 + ŷ₀        (bed maps exactly to y = −1)
//!   potential       w(ζ) = −q ζ,  ψ = −q σ,  q = c·x_ξ(Λ)
//!   mass flux       m = ψ(bed) = q h > 0
//!   Bernoulli       C = c²/2 + P_atm
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::ConformalMap;
use crate::model::{critical_speed, Environment, Scaling};

/// Problems constructing or deserializing a solution document.
#[derive(Debug, Error)]
pub enum SolutionError {
    #[error("invalid solution data: {0}")]
    Invalid(String),
    #[error("malformed solution document: {0}")]
    Format(#[from] serde_json::Error),
}

/// Iteration and truncation diagnostics attached to a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// Whether the final residual met the requested tolerance.
    pub converged: bool,
    /// Normalized fixed-point iterations spent on the initial regime.
    pub fixed_point_iterations: usize,
    /// Newton iterations spent polishing (all continuation stages summed).
    pub newton_iterations: usize,
    /// Max-norm of the collocation residual at exit (nondimensional).
    pub final_residual: f64,
    /// max |ŷ_j| over the last 5% of modes, relative to the largest |ŷ_j|.
    pub spectral_tail_ratio: f64,
    /// max |Y(ξ)| over ξ ∈ [0.95Λ, Λ], in units of the amplitude.
    pub spatial_tail: f64,
    /// How many times the half-length was doubled to bury the tail.
    pub half_length_doublings: usize,
    /// Amplitude ladder walked by continuation (nondimensional a values).
    pub continuation_steps: Vec<f64>,
    /// Human-readable anomalies (e.g. truncation warnings).
    pub warnings: Vec<String>,
}

impl SolveDiagnostics {
    /// Diagnostics for a state constructed in closed form (nothing iterated).
    pub(crate) fn exact() -> Self {
        SolveDiagnostics {
            converged: true,
            fixed_point_iterations: 0,
            newton_iterations: 0,
            final_residual: 0.0,
            spectral_tail_ratio: 0.0,
            spatial_tail: 0.0,
            half_length_doublings: 0,
            continuation_steps: Vec::new(),
            warnings: Vec::new(),
        }
    }
}

/// Nondimensional (g = d = 1) core of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct ScaledWave {
    /// Conformal (= physical) half-length Λ in depths.
    pub half_length: f64,
    /// Strip depth h = 1 + ŷ₀.
    pub conformal_depth: f64,
    /// Wave speed c in units of √(gd); equals the Froude number.
    pub speed: f64,
    /// Flux density q = m/h of the strip potential w = −qζ.
    pub flux_density: f64,
    /// Crest elevation a = Y(0) in depths.
    pub amplitude: f64,
    /// Residual tolerance the solve was run at.
    pub tolerance: f64,
    /// Even surface modes ŷ_0..ŷ_N.
    pub cosine_modes: Vec<f64>,
    /// Odd surface modes; empty for a genuine (symmetric) wave.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sine_modes: Vec<f64>,
}

impl ScaledWave {
    pub(crate) fn map(&self) -> ConformalMap {
        ConformalMap::new(
            self.half_length,
            self.conformal_depth,
            self.cosine_modes.clone(),
            self.sine_modes.clone(),
        )
    }

    fn validate(&self) -> Result<(), SolutionError> {
        let finite = self.half_length.is_finite()
            && self.conformal_depth.is_finite()
            && self.speed.is_finite()
            && self.flux_density.is_finite()
            && self.amplitude.is_finite()
            && self.cosine_modes.iter().all(|v| v.is_finite())
            && self.sine_modes.iter().all(|v| v.is_finite());
        if !finite {
            return Err(SolutionError::Invalid(
                "non-finite value in solution data".into(),
            ));
        }
        if !(self.half_length > 0.0) || !(self.conformal_depth > 0.0) {
            return Err(SolutionError::Invalid(
                "half-length and strip depth must be positive".into(),
            ));
        }
        if self.cosine_modes.is_empty() {
            return Err(SolutionError::Invalid("empty surface spectrum".into()));
        }
        if !self.sine_modes.is_empty() && self.sine_modes.len() != self.cosine_modes.len() {
            return Err(SolutionError::Invalid(
                "odd-mode vector length must match the even-mode vector".into(),
            ));
        }
        if !(self.speed > 1.0) {
            return Err(SolutionError::Invalid(format!(
                "wave speed must be supercritical (F > 1), got F = {}",
                self.speed
            )));
        }
        Ok(())
    }
}

/// Dimensional summary block embedded in the JSON document. Redundant with
/// the scaled core (it is recomputed on load) but convenient for readers.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct WaveSummary {
    amplitude: f64,
    speed: f64,
    froude: f64,
    mass_flux: f64,
    bernoulli_constant: f64,
    half_length: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SolutionFile {
    environment: Environment,
    wave: WaveSummary,
    scaled: ScaledWave,
    diagnostics: SolveDiagnostics,
}

/// A converged steady solitary wave over a flat bed.
///
/// Immutable after construction; all accessors are pure and return
/// dimensional quantities unless stated otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SolutionFile", try_from = "SolutionFile")]
pub struct WaveSolution {
    env: Environment,
    scaled: ScaledWave,
    diagnostics: SolveDiagnostics,
}

impl From<WaveSolution> for SolutionFile {
    fn from(sol: WaveSolution) -> Self {
        let wave = WaveSummary {
            amplitude: sol.amplitude(),
            speed: sol.speed(),
            froude: sol.froude(),
            mass_flux: sol.mass_flux(),
            bernoulli_constant: sol.bernoulli_constant(),
            half_length: sol.half_length(),
        };
        SolutionFile {
            environment: sol.env,
            wave,
            scaled: sol.scaled,
            diagnostics: sol.diagnostics,
        }
    }
}

impl TryFrom<SolutionFile> for WaveSolution {
    type Error = SolutionError;

    fn try_from(file: SolutionFile) -> Result<Self, SolutionError> {
        Environment::new(file.environment.gravity, file.environment.depth, file.environment.p_atm)
            .map_err(|e| SolutionError::Invalid(e.to_string()))?;
        WaveSolution::from_scaled(file.environment, file.scaled, file.diagnostics)
    }
}

impl WaveSolution {
    pub(crate) fn from_scaled(
        env: Environment,
        scaled: ScaledWave,
        diagnostics: SolveDiagnostics,
    ) -> Result<Self, SolutionError> {
        scaled.validate()?;
        Ok(WaveSolution { env, scaled, diagnostics })
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn diagnostics(&self) -> &SolveDiagnostics {
        &self.diagnostics
    }

    pub fn is_converged(&self) -> bool {
        self.diagnostics.converged
    }

    pub(crate) fn scaled(&self) -> &ScaledWave {
        &self.scaled
    }

    /// Nondimensional conformal map of the fluid domain (g = d = 1 units).
    pub fn conformal_map(&self) -> ConformalMap {
        self.scaled.map()
    }

    /// Crest elevation a = η(0).
    pub fn amplitude(&self) -> f64 {
        self.scaled.amplitude * self.env.depth
    }

    /// Wave speed c (> √(gd)).
    pub fn speed(&self) -> f64 {
        self.scaled.speed * critical_speed(&self.env)
    }

    /// Froude number F = c/√(gd).
    pub fn froude(&self) -> f64 {
        self.scaled.speed
    }

    /// Truncation half-length Λ of the computed domain.
    pub fn half_length(&self) -> f64 {
        self.scaled.half_length * self.env.depth
    }

    /// Relative mass flux m = ψ(x, −d) > 0.
    pub fn mass_flux(&self) -> f64 {
        let scaling = Scaling::from_env(&self.env);
        scaling.unscale_flux(self.scaled.flux_density * self.scaled.conformal_depth)
    }

    /// Bernoulli constant C = c²/2 + P_atm.
    pub fn bernoulli_constant(&self) -> f64 {
        0.5 * self.speed() * self.speed() + self.env.p_atm
    }

    /// Number of spectral intervals N (modes run 0..=N).
    pub fn modes(&self) -> usize {
        self.scaled.cosine_modes.len() - 1
    }

    /// Even surface modes ŷ_0..ŷ_N of the nondimensional trace.
    pub fn surface_spectrum(&self) -> &[f64] {
        &self.scaled.cosine_modes
    }

    /// Residual tolerance the solve was run at (nondimensional).
    pub fn tolerance(&self) -> f64 {
        self.scaled.tolerance
    }

    /// Uniform stream (flat surface, u = v = 0 in the fixed frame) moving at
    /// the given supercritical speed: the exact zero-amplitude limit, useful
    /// as a degenerate fixture.
    pub fn still_water(env: Environment, speed: f64) -> Result<Self, SolutionError> {
        let f = speed / critical_speed(&env);
        if !(f > 1.0) {
            return Err(SolutionError::Invalid(format!(
                "still-water fixture requires a supercritical speed, got F = {f}"
            )));
        }
        let scaled = ScaledWave {
            half_length: 40.0,
            conformal_depth: 1.0,
            speed: f,
            flux_density: f,
            amplitude: 0.0,
            tolerance: 0.0,
            cosine_modes: vec![0.0; 65],
            sine_modes: Vec::new(),
        };
        WaveSolution::from_scaled(env, scaled, SolveDiagnostics::exact())
    }

    /// Copy with an odd surface mode injected at the dominant even mode's
    /// index, of relative size `rel` times the largest even coefficient.
    /// Breaks the x ↦ −x symmetry on purpose: a negative control for
    /// symmetry-sensitive checks. The result is flagged in `warnings`.
    pub fn with_injected_asymmetry(&self, rel: f64) -> Self {
        let cos = &self.scaled.cosine_modes;
        let (j_peak, peak) = cos
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, v)| (j, v.abs()))
            .fold((1, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let mut sin = if self.scaled.sine_modes.is_empty() {
            vec![0.0; cos.len()]
        } else {
            self.scaled.sine_modes.clone()
        };
        sin[j_peak] += rel * if peak > 0.0 { peak } else { 1.0 };
        let mut out = self.clone();
        out.scaled.sine_modes = sin;
        out.diagnostics
            .warnings
            .push(format!("odd mode {j_peak} injected at relative size {rel:e}"));
        out
    }

    /// Surface spectrum as CSV with header `mode,coefficient`.
    pub fn spectrum_csv(&self) -> String {
        let mut out = String::from("mode,coefficient\n");
        for (j, v) in self.scaled.cosine_modes.iter().enumerate() {
            out.push_str(&format!("{j},{v:.16e}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, SolutionError> {
        Ok(serde_json::from_str(text)?)
    }
}

// ───────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Environment {
        Environment::new(9.81, 1.0, 0.0).unwrap()
    }

    fn sample() -> WaveSolution {
        let n = 64;
        let cos: Vec<f64> = (0..=n)
            .map(|j| if j == 0 { 0.004 } else { 0.02 * (-(j as f64) * 0.3).exp() })
            .collect();
        let scaled = ScaledWave {
            half_length: 40.0,
            conformal_depth: 1.0 + cos[0],
            speed: 1.12,
            flux_density: 1.12,
            amplitude: cos.iter().skip(1).sum::<f64>() + cos[0],
            tolerance: 1e-12,
            cosine_modes: cos,
            sine_modes: Vec::new(),
        };
        WaveSolution::from_scaled(env(), scaled, SolveDiagnostics::exact()).unwrap()
    }

    #[test]
    fn dimensional_accessors_scale_correctly() {
        let sol = sample();
        // c = F·√(gd), m = q·h·√(g d³), C = c²/2 + P_atm.
        let root_gd = (9.81f64).sqrt();
        assert!((sol.speed() - 1.12 * root_gd).abs() < 1e-14);
        assert!((sol.froude() - 1.12).abs() < 1e-15);
        let m = 1.12 * (1.0 + 0.004) * (9.81f64).sqrt();
        assert!((sol.mass_flux() - m).abs() < 1e-12);
        assert!(sol.mass_flux() > 0.0);
        let c = sol.speed();
        assert!((sol.bernoulli_constant() - 0.5 * c * c).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_preserves_the_solution() {
        let sol = sample();
        let text = sol.to_json();
        let back = WaveSolution::from_json(&text).unwrap();
        assert_eq!(sol, back);
        // The document embeds a human-readable dimensional block.
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(doc["wave"]["froude"].as_f64().unwrap() > 1.0);
        assert!(doc["environment"]["gravity"].as_f64().unwrap() == 9.81);
    }

    #[test]
    fn deserialization_rejects_subcritical_or_corrupt_documents() {
        let sol = sample();
        let text = sol.to_json().replace("\"speed\": 1.12", "\"speed\": 0.9");
        assert!(WaveSolution::from_json(&text).is_err());
        assert!(WaveSolution::from_json("{\"not\": \"a solution\"}").is_err());
    }

    #[test]
    fn still_water_is_flat_and_supercritical() {
        let sw = WaveSolution::still_water(env(), 1.2 * (9.81f64).sqrt()).unwrap();
        assert_eq!(sw.amplitude(), 0.0);
        assert!(sw.froude() > 1.0);
        assert!(sw.is_converged());
        assert!(WaveSolution::still_water(env(), 0.9 * (9.81f64).sqrt()).is_err());
    }

    #[test]
    fn injected_asymmetry_adds_an_odd_mode_and_a_warning() {
        let sol = sample();
        let bent = sol.with_injected_asymmetry(1e-3);
        assert!(!bent.scaled().sine_modes.is_empty());
        let max_sin = bent.scaled().sine_modes.iter().cloned().fold(0.0, f64::max);
        assert!(max_sin > 0.0);
        assert_eq!(bent.diagnostics().warnings.len(), 1);
        // The original is untouched (pure copy).
        assert!(sol.scaled().sine_modes.is_empty());
    }

    #[test]
    fn spectrum_csv_has_header_and_one_row_per_mode() {
        let sol = sample();
        let csv = sol.spectrum_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "mode,coefficient");
        assert_eq!(lines.len(), 1 + sol.modes() + 1);
        assert!(lines[1].starts_with("0,"));
    }
}
