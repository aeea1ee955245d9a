//! Effective run configuration and its merge rules.
//!
//! Every run is described by one [`RunConfig`]. Values come from three layers,
//! weakest first: built-in defaults, an optional `--config` JSON file, and
//! command-line flags. The resolved configuration is echoed into every output
//! artifact, so a run is reproducible from any of its artifacts alone.

use serde::{Deserialize, Serialize};
use solwave::VerifyConfig;

/// Where field dumps go: CSV, JSON, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
    pub fn wants_json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

/// The fully resolved configuration of a run. Serializable and echoed into
/// every artifact; identical configurations produce byte-identical artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    // Environment.
    pub gravity: f64,
    pub depth: f64,
    pub p_atm: f64,
    // Solver target and knobs. Exactly one of `amplitude`/`froude` must be
    // set for `solve`; `sweep` uses `amplitudes` instead.
    pub amplitude: Option<f64>,
    pub froude: Option<f64>,
    pub modes: usize,
    pub half_length: Option<f64>,
    pub tol: f64,
    pub amplitude_cap: Option<f64>,
    // Field-dump grid: stations × nodes over [−span, span]; `None` span
    // means the full computed half-length.
    pub grid_span: Option<f64>,
    pub grid_stations: usize,
    pub grid_nodes: usize,
    // Sweep amplitudes (crest elevations, length units) and the synthetic
    // gauge-noise level used for its height-bound column (0 = noiseless).
    pub amplitudes: Vec<f64>,
    pub noise_sigma: f64,
    pub tail_fraction: f64,
    pub seed: u64,
    // Artifact plumbing.
    pub format: OutputFormat,
    pub out_dir: Option<String>,
    // Verifier densities and tolerances, fully resolved.
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            gravity: 9.81,
            depth: 1.0,
            p_atm: 0.0,
            amplitude: None,
            froude: None,
            modes: 512,
            half_length: None,
            tol: 1e-12,
            amplitude_cap: None,
            grid_span: None,
            grid_stations: 201,
            grid_nodes: 41,
            amplitudes: Vec::new(),
            noise_sigma: 0.0,
            tail_fraction: 0.1,
            seed: 0,
            format: OutputFormat::Csv,
            out_dir: None,
            verify: VerifyConfig::default(),
        }
    }
}

/// Partial configuration as read from a `--config` JSON file. Every field is
/// optional; unknown keys are rejected so typos fail loudly.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfigFile {
    pub gravity: Option<f64>,
    pub depth: Option<f64>,
    pub p_atm: Option<f64>,
    pub amplitude: Option<f64>,
    pub froude: Option<f64>,
    pub modes: Option<usize>,
    pub half_length: Option<f64>,
    pub tol: Option<f64>,
    pub amplitude_cap: Option<f64>,
    pub grid_span: Option<f64>,
    pub grid_stations: Option<usize>,
    pub grid_nodes: Option<usize>,
    pub amplitudes: Option<Vec<f64>>,
    pub noise_sigma: Option<f64>,
    pub tail_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub out_dir: Option<String>,
    pub verify: Option<VerifyOverrides>,
}

macro_rules! take {
    ($into:expr, $from:expr; $($field:ident),+ $(,)?) => {
        $(if let Some(v) = $from.$field { $into.$field = v; })+
    };
}

macro_rules! take_opt {
    ($into:expr, $from:expr; $($field:ident),+ $(,)?) => {
        $(if $from.$field.is_some() { $into.$field = $from.$field; })+
    };
}

impl RunConfigFile {
    /// Lays the file's values over `base`; unset fields keep the base value.
    pub fn apply(self, base: &mut RunConfig) {
        take!(*base, self; gravity, depth, p_atm, modes, tol, grid_stations,
              grid_nodes, amplitudes, noise_sigma, tail_fraction, seed, format);
        take_opt!(*base, self; amplitude, froude, half_length, amplitude_cap,
                  grid_span, out_dir);
        if let Some(v) = self.verify {
            v.apply(&mut base.verify);
        }
    }
}

/// Partial verifier settings for the config file; unset fields keep the
/// resolved defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyOverrides {
    pub grid_stations: Option<usize>,
    pub grid_nodes: Option<usize>,
    pub monotonicity_points: Option<usize>,
    pub hopf_points: Option<usize>,
    pub symmetry_stations: Option<usize>,
    pub bernoulli_points: Option<usize>,
    pub flux_stations: Option<usize>,
    pub superharmonic_stations: Option<usize>,
    pub superharmonic_nodes: Option<usize>,
    pub fd_step: Option<f64>,
    pub noise_floor: Option<f64>,
    pub noise_band: Option<f64>,
    pub decay_magnitude: Option<f64>,
    pub rate_tolerance: Option<f64>,
    pub symmetry_tolerance: Option<f64>,
    pub bernoulli_tolerance: Option<f64>,
    pub flux_tolerance: Option<f64>,
    pub laplacian_tolerance: Option<f64>,
}

impl VerifyOverrides {
    pub fn apply(self, base: &mut VerifyConfig) {
        take!(*base, self; grid_stations, grid_nodes, monotonicity_points,
              hopf_points, symmetry_stations, bernoulli_points, flux_stations,
              superharmonic_stations, superharmonic_nodes, fd_step,
              noise_floor, noise_band, decay_magnitude, rate_tolerance,
              symmetry_tolerance, bernoulli_tolerance, flux_tolerance,
              laplacian_tolerance);
    }
}
