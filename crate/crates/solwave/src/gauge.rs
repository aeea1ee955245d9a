//! Wave-height estimation from bed-pressure records.
//!
//! A pressure gauge lying on the bed sees the total pressure `P(x, -d)` (per
//! unit density). Far from the crest the record settles onto the hydrostatic
//! value `P_∞ = P_atm + g·d`; under the crest it peaks. The difference
//! bounds the crest elevation from below:
//!
//! ```text
//! h_lb = (max P(x, -d) - P_∞) / g  <  η(0)
//! ```
//!
//! The inequality is strict for every non-trivial wave, so `h_lb` is a
//! rigorous under-estimate of the wave height no matter how the record was
//! sampled. Only two functionals of the record enter — its maximum and its
//! asymptotic level — which makes the bound insensitive to the abscissa:
//! a stationary gauge's time series gives the same answer as a spatial
//! snapshot, and adding a constant offset to the gauge calibration cancels
//! exactly.
//!
//! `P_∞` is estimated by the median of the two tail ends of the record (a
//! configurable fraction of samples from each side). The median is robust
//! to asymmetric capture windows and to occasional outliers, and under
//! additive noise of deviation `σ` it concentrates around the hydrostatic
//! value at the usual `σ/√n` rate.

use crate::fields::{FieldError, FieldEvaluator};
use crate::model::Environment;
use crate::solution::WaveSolution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum number of samples a trace must carry: fewer leave no room to
/// separate a tail estimate from a peak.
pub const MIN_SAMPLES: usize = 8;

/// Fraction of samples taken from each end of the record when estimating
/// the asymptotic pressure.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.1;

/// Flag attached when the record's maximum is attained only at its first or
/// last sample, so the true peak may lie outside the captured window.
pub const FLAG_PEAK_AT_BOUNDARY: &str =
    "peak may be uncaptured: the maximum sits at the trace boundary";

/// Flag attached when noise pushed the sample maximum below the asymptotic
/// estimate; the bound is clamped to zero in that case.
pub const FLAG_NEGATIVE_BOUND: &str =
    "negative bound: sample maximum fell below the asymptotic estimate; clamped to 0";

/// Errors raised while building traces or estimating bounds from them.
#[derive(Debug, Error)]
pub enum GaugeError {
    /// Fewer than [`MIN_SAMPLES`] samples.
    #[error("trace has {samples} samples; at least {MIN_SAMPLES} are required")]
    TraceTooShort { samples: usize },
    /// Abscissae must increase strictly.
    #[error("trace abscissae must increase strictly; sample {index} does not")]
    NonIncreasingAbscissa { index: usize },
    /// Every abscissa and pressure must be a finite number.
    #[error("trace sample {index} is not finite")]
    NonFiniteSample { index: usize },
    /// Tail fraction outside the admissible interval.
    #[error("tail fraction must lie in (0, 0.5], got {value}")]
    InvalidTailFraction { value: f64 },
    /// Malformed trace file or incompatible trace operation.
    #[error("invalid trace input: {0}")]
    InputFormat(String),
    /// Frame conversion of a time record needs a positive wave speed.
    #[error("frame conversion requires a finite positive speed, got {speed}")]
    InvalidSpeed { speed: f64 },
    /// Synthetic noise level must be finite and non-negative.
    #[error("noise level must be finite and non-negative, got {sigma}")]
    InvalidNoise { sigma: f64 },
    /// Field evaluation failed while generating a synthetic trace.
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// What the abscissa of a trace measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbscissaKind {
    /// Position along the bed (a spatial snapshot).
    Space,
    /// Time at a stationary gauge.
    Time,
}

impl AbscissaKind {
    fn column_name(self) -> &'static str {
        match self {
            AbscissaKind::Space => "x",
            AbscissaKind::Time => "t",
        }
    }
}

/// Where a trace came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceSource {
    /// Generated from a computed wave by [`synth_trace`].
    Synthetic,
    /// Parsed from an external record.
    File,
}

/// An ordered record of bed-pressure samples together with the physical
/// setting it was measured in.
///
/// Pressures are per unit density (velocity-squared units), matching the
/// rest of the crate. Invariants enforced at construction: at least
/// [`MIN_SAMPLES`] samples, strictly increasing abscissae, all values
/// finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTrace {
    abscissa: Vec<f64>,
    pressure: Vec<f64>,
    kind: AbscissaKind,
    env: Environment,
    source: TraceSource,
    noise_level: Option<f64>,
}

impl GaugeTrace {
    /// Builds a trace from parallel abscissa/pressure arrays, validating
    /// the trace invariants.
    pub fn new(
        kind: AbscissaKind,
        abscissa: Vec<f64>,
        pressure: Vec<f64>,
        env: Environment,
        source: TraceSource,
        noise_level: Option<f64>,
    ) -> Result<Self, GaugeError> {
        if abscissa.len() != pressure.len() {
            return Err(GaugeError::InputFormat(format!(
                "abscissa and pressure lengths differ: {} vs {}",
                abscissa.len(),
                pressure.len()
            )));
        }
        if abscissa.len() < MIN_SAMPLES {
            return Err(GaugeError::TraceTooShort { samples: abscissa.len() });
        }
        for (i, (&a, &p)) in abscissa.iter().zip(&pressure).enumerate() {
            if !(a.is_finite() && p.is_finite()) {
                return Err(GaugeError::NonFiniteSample { index: i });
            }
            if i > 0 && a <= abscissa[i - 1] {
                return Err(GaugeError::NonIncreasingAbscissa { index: i });
            }
        }
        Ok(Self { abscissa, pressure, kind, env, source, noise_level })
    }

    /// Parses a trace from CSV text with header `x,pressure` (spatial
    /// snapshot) or `t,pressure` (stationary gauge). Lines starting with
    /// `#` and blank lines are ignored; any other header is rejected.
    pub fn from_csv(text: &str, env: Environment) -> Result<Self, GaugeError> {
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(i, line)| (i + 1, line.trim()))
            .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

        let (_, header) = rows
            .next()
            .ok_or_else(|| GaugeError::InputFormat("empty trace file".into()))?;
        let columns: Vec<&str> = header.split(',').map(str::trim).collect();
        let kind = match columns.as_slice() {
            ["x", "pressure"] => AbscissaKind::Space,
            ["t", "pressure"] => AbscissaKind::Time,
            _ => {
                return Err(GaugeError::InputFormat(format!(
                    "unrecognized header {header:?}; expected `x,pressure` or `t,pressure`"
                )))
            }
        };

        let mut abscissa = Vec::new();
        let mut pressure = Vec::new();
        for (line_no, row) in rows {
            let fields: Vec<&str> = row.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(GaugeError::InputFormat(format!(
                    "line {line_no}: expected two comma-separated values, got {row:?}"
                )));
            }
            let parse = |field: &str| {
                field.parse::<f64>().map_err(|e| {
                    GaugeError::InputFormat(format!("line {line_no}: {field:?}: {e}"))
                })
            };
            abscissa.push(parse(fields[0])?);
            pressure.push(parse(fields[1])?);
        }
        Self::new(kind, abscissa, pressure, env, TraceSource::File, None)
    }

    /// Renders the trace as CSV with its matching header. Values are
    /// written with enough digits to round-trip exactly.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},pressure\n", self.kind.column_name());
        for (a, p) in self.abscissa.iter().zip(&self.pressure) {
            out.push_str(&format!("{a:.16e},{p:.16e}\n"));
        }
        out
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    /// A trace is never empty; kept for idiomatic pairing with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sample abscissae (positions or times).
    pub fn abscissae(&self) -> &[f64] {
        &self.abscissa
    }

    /// Sample pressures, per unit density.
    pub fn pressures(&self) -> &[f64] {
        &self.pressure
    }

    /// What the abscissa measures.
    pub fn kind(&self) -> AbscissaKind {
        self.kind
    }

    /// Physical setting of the record.
    pub fn env(&self) -> &Environment {
        &self.env
    }

    /// Provenance tag.
    pub fn source(&self) -> TraceSource {
        self.source
    }

    /// Noise deviation used when the trace was synthesized, if known.
    pub fn noise_level(&self) -> Option<f64> {
        self.noise_level
    }

    /// Converts a stationary gauge's time record into a spatial snapshot
    /// using `x = -c·(t - t₀)`: the wave form travels rigidly at speed `c`,
    /// so the gauge sweeps the profile right-to-left. The samples are
    /// reversed to restore increasing abscissae.
    ///
    /// The height bound itself does not require this conversion — it uses
    /// only the maximum and the tail level, both frame-independent — so the
    /// conversion exists for plotting and cross-checks.
    pub fn space_frame(&self, speed: f64) -> Result<GaugeTrace, GaugeError> {
        if self.kind != AbscissaKind::Time {
            return Err(GaugeError::InputFormat(
                "trace abscissae are already spatial".into(),
            ));
        }
        if !(speed.is_finite() && speed > 0.0) {
            return Err(GaugeError::InvalidSpeed { speed });
        }
        let t0 = self.abscissa[0];
        let abscissa: Vec<f64> =
            self.abscissa.iter().rev().map(|t| -speed * (t - t0)).collect();
        let pressure: Vec<f64> = self.pressure.iter().rev().copied().collect();
        GaugeTrace::new(
            AbscissaKind::Space,
            abscissa,
            pressure,
            self.env,
            self.source,
            self.noise_level,
        )
    }

    /// Estimates the asymptotic bed pressure with the default tail
    /// fraction. See [`Self::p_infinity_estimate_with`].
    pub fn p_infinity_estimate(&self) -> Result<f64, GaugeError> {
        self.p_infinity_estimate_with(DEFAULT_TAIL_FRACTION)
    }

    /// Estimates the asymptotic bed pressure as the median of the pooled
    /// first and last `tail_fraction` of samples (two-sided tail).
    ///
    /// `tail_fraction` must lie in `(0, 0.5]`; at least one sample is taken
    /// from each end. Using both ends keeps the estimate honest when the
    /// record is captured asymmetrically, and the median shrugs off
    /// occasional outliers that would bias a mean.
    pub fn p_infinity_estimate_with(&self, tail_fraction: f64) -> Result<f64, GaugeError> {
        let per_side = self.tail_count(tail_fraction)?;
        let n = self.len();
        let mut tail: Vec<f64> = Vec::with_capacity(2 * per_side);
        tail.extend_from_slice(&self.pressure[..per_side]);
        tail.extend_from_slice(&self.pressure[n - per_side..]);
        tail.sort_by(|a, b| a.partial_cmp(b).expect("finite by invariant"));
        let m = tail.len();
        Ok(if m % 2 == 1 {
            tail[m / 2]
        } else {
            0.5 * (tail[m / 2 - 1] + tail[m / 2])
        })
    }

    /// Number of tail samples taken per side for a given fraction.
    pub fn tail_count(&self, tail_fraction: f64) -> Result<usize, GaugeError> {
        if !(tail_fraction.is_finite() && tail_fraction > 0.0 && tail_fraction <= 0.5) {
            return Err(GaugeError::InvalidTailFraction { value: tail_fraction });
        }
        let per_side = ((tail_fraction * self.len() as f64).floor() as usize).max(1);
        Ok(per_side.min(self.len() / 2))
    }

    /// Lower bound on the crest elevation with the default tail fraction.
    /// See [`Self::height_lower_bound_with`].
    pub fn height_lower_bound(&self) -> Result<HeightBound, GaugeError> {
        self.height_lower_bound_with(DEFAULT_TAIL_FRACTION)
    }

    /// Computes the rigorous lower bound on the crest elevation,
    ///
    /// ```text
    /// h_lb = (max_sample - p_infinity_estimate) / g,
    /// ```
    ///
    /// clamped at zero. For a noiseless record of a genuine wave the bound
    /// is strictly positive and strictly below the true crest elevation.
    ///
    /// Flags attached to the result:
    /// - [`FLAG_PEAK_AT_BOUNDARY`] when the maximum is attained only at the
    ///   first or last sample — the window may have missed the crest, so
    ///   the bound (still valid) is likely far from sharp;
    /// - [`FLAG_NEGATIVE_BOUND`] when the maximum fell below the tail
    ///   estimate (possible only through noise or a degenerate record); the
    ///   bound is reported as exactly zero.
    pub fn height_lower_bound_with(&self, tail_fraction: f64) -> Result<HeightBound, GaugeError> {
        let p_inf = self.p_infinity_estimate_with(tail_fraction)?;
        let tail_fraction_used =
            self.tail_count(tail_fraction)? as f64 / self.len() as f64;

        let mut p_max = f64::NEG_INFINITY;
        let mut interior_max = f64::NEG_INFINITY;
        for (i, &p) in self.pressure.iter().enumerate() {
            p_max = p_max.max(p);
            if i > 0 && i + 1 < self.len() {
                interior_max = interior_max.max(p);
            }
        }

        let mut flags = Vec::new();
        if interior_max < p_max {
            flags.push(FLAG_PEAK_AT_BOUNDARY.to_string());
        }
        let raw = (p_max - p_inf) / self.env.gravity;
        let h_lb = if raw < 0.0 {
            flags.push(FLAG_NEGATIVE_BOUND.to_string());
            0.0
        } else {
            raw
        };
        Ok(HeightBound { h_lb, p_max_bed: p_max, p_inf, tail_fraction: tail_fraction_used, flags })
    }
}

/// Result of the bed-pressure height estimate.
///
/// Serializes to JSON with keys `h_lb`, `p_max_bed`, `p_inf`,
/// `tail_fraction`, `flags`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightBound {
    /// Lower bound on the crest elevation (length units), never negative.
    pub h_lb: f64,
    /// Peak bed pressure seen in the record, per unit density.
    pub p_max_bed: f64,
    /// Estimated asymptotic bed pressure, per unit density.
    pub p_inf: f64,
    /// Tail fraction actually used per side (after rounding to whole
    /// samples).
    pub tail_fraction: f64,
    /// Caveats attached to the estimate; empty for a clean record.
    pub flags: Vec<String>,
}

impl HeightBound {
    /// Pretty JSON rendering with stable key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("height bound serializes")
    }

    /// Whether the record's maximum sat on the window boundary.
    pub fn peak_at_boundary(&self) -> bool {
        self.flags.iter().any(|f| f == FLAG_PEAK_AT_BOUNDARY)
    }

    /// Whether the raw bound was negative and clamped to zero.
    pub fn negative_bound(&self) -> bool {
        self.flags.iter().any(|f| f == FLAG_NEGATIVE_BOUND)
    }
}

/// Samples the total bed pressure of a computed wave at the given stations
/// and adds independent zero-mean Gaussian noise of deviation `sigma`
/// (skipped entirely when `sigma == 0`). The result is deterministic for a
/// fixed `seed`.
///
/// Stations must be strictly increasing and lie within the computed
/// half-length; [`MIN_SAMPLES`] applies as for any trace.
pub fn synth_trace(
    sol: &WaveSolution,
    stations: &[f64],
    sigma: f64,
    seed: u64,
) -> Result<GaugeTrace, GaugeError> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(GaugeError::InvalidNoise { sigma });
    }
    let fields = FieldEvaluator::new(sol);
    let bed = -sol.env().depth;
    let mut pressure = Vec::with_capacity(stations.len());
    for &x in stations {
        pressure.push(fields.total_pressure(x, bed)?);
    }
    if sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, sigma)
            .map_err(|_| GaugeError::InvalidNoise { sigma })?;
        for p in &mut pressure {
            *p += normal.sample(&mut rng);
        }
    }
    GaugeTrace::new(
        AbscissaKind::Space,
        stations.to_vec(),
        pressure,
        *sol.env(),
        TraceSource::Synthetic,
        Some(sigma),
    )
}
