//! Physical setting shared by every stage: fluid environment, characteristic
//! scales, and the truncated geometry on which waves are computed and checked.
//!
//! Conventions used throughout the crate:
//!
//! ```text
//! y = 0      undisturbed free-surface level (still water)
//! y = η(x)   free surface of the wave, η → 0 as |x| → ∞
//! y = -d     flat impermeable bed
//! ```
//!
//! Pressure is always per unit density (the density is normalized to 1), so
//! `P`, `p` and the Bernoulli constant carry units of velocity squared.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while constructing the physical setting.
#[derive(Debug, Error)]
pub enum ModelError {
    /// Environment parameters must describe a real fluid column.
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
    /// Geometry parameters must describe a non-empty truncated domain.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

/// Ambient physical parameters of the water column.
///
/// Constructed directly from a JSON object with keys `gravity`, `depth` and
/// `p_atm` (the latter defaults to zero when omitted).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Gravitational acceleration g (> 0).
    pub gravity: f64,
    /// Undisturbed fluid depth d (> 0).
    pub depth: f64,
    /// Constant atmospheric pressure at the free surface, per unit density.
    #[serde(default)]
    pub p_atm: f64,
}

impl Environment {
    /// Builds an environment, validating that it describes a real fluid.
    pub fn new(gravity: f64, depth: f64, p_atm: f64) -> Result<Self, ModelError> {
        if !(gravity.is_finite() && gravity > 0.0) {
            return Err(ModelError::InvalidEnvironment(format!(
                "gravity must be finite and positive, got {gravity}"
            )));
        }
        if !(depth.is_finite() && depth > 0.0) {
            return Err(ModelError::InvalidEnvironment(format!(
                "depth must be finite and positive, got {depth}"
            )));
        }
        if !p_atm.is_finite() {
            return Err(ModelError::InvalidEnvironment(format!(
                "atmospheric pressure must be finite, got {p_atm}"
            )));
        }
        Ok(Self { gravity, depth, p_atm })
    }

    /// Parses an environment from a JSON object with keys
    /// `gravity`, `depth`, `p_atm`.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let env: Environment = serde_json::from_str(text)
            .map_err(|e| ModelError::InvalidEnvironment(format!("JSON parse: {e}")))?;
        Self::new(env.gravity, env.depth, env.p_atm)
    }

    /// Characteristic scales of this environment.
    pub fn scaling(&self) -> Scaling {
        Scaling::from_env(self)
    }
}

/// Speed of infinitesimal long waves, `√(g·d)`.
///
/// Solitary waves travel strictly faster than this; the ratio `c / √(g·d)`
/// is the Froude number and exceeds 1 for every non-trivial wave.
pub fn critical_speed(env: &Environment) -> f64 {
    (env.gravity * env.depth).sqrt()
}

/// Characteristic scales mapping dimensional quantities onto the internal
/// nondimensional system in which `g = d = 1`.
///
/// Per unit density the four scales are:
///
/// ```text
/// length    d
/// time      sqrt(d / g)
/// velocity  sqrt(g * d)
/// pressure  g * d        (velocity squared; density is 1)
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub length: f64,
    pub time: f64,
    pub velocity: f64,
    pub pressure: f64,
}

impl Scaling {
    pub fn from_env(env: &Environment) -> Self {
        let g = env.gravity;
        let d = env.depth;
        Scaling {
            length: d,
            time: (d / g).sqrt(),
            velocity: (g * d).sqrt(),
            pressure: g * d,
        }
    }

    /// Dimensional length → nondimensional.
    pub fn scale_length(&self, x: f64) -> f64 {
        x / self.length
    }
    /// Nondimensional length → dimensional.
    pub fn unscale_length(&self, x: f64) -> f64 {
        x * self.length
    }
    pub fn scale_velocity(&self, u: f64) -> f64 {
        u / self.velocity
    }
    pub fn unscale_velocity(&self, u: f64) -> f64 {
        u * self.velocity
    }
    pub fn scale_pressure(&self, p: f64) -> f64 {
        p / self.pressure
    }
    pub fn unscale_pressure(&self, p: f64) -> f64 {
        p * self.pressure
    }
    /// Mass flux per unit density scales as velocity × length.
    pub fn unscale_flux(&self, m: f64) -> f64 {
        m * self.velocity * self.length
    }
    pub fn scale_flux(&self, m: f64) -> f64 {
        m / (self.velocity * self.length)
    }
}

/// A point in the physical (dimensional) fluid plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalPoint {
    pub x: f64,
    pub y: f64,
}

impl PhysicalPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Truncated computational geometry associated with a solved wave.
///
/// The wave is symmetric about the crest line `x = 0`, so checks run on the
/// half domain `0 ≤ x ≤ Λ`. The broken line `L` descends the crest line from
/// the crest to the bed corner `(0, -d)` and then follows the bed out to the
/// truncation; the dynamic pressure is expected to decrease strictly along it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainGeometry {
    /// Truncation half-length Λ (> 0): the domain is `|x| ≤ Λ`.
    pub truncation: f64,
    /// Crest height η(0) above the undisturbed level.
    pub crest_height: f64,
    /// Undisturbed depth d.
    pub depth: f64,
    /// Whether checks exploit symmetry and run on `x ≥ 0` only.
    pub half_domain: bool,
}

impl DomainGeometry {
    pub fn new(
        truncation: f64,
        crest_height: f64,
        depth: f64,
        half_domain: bool,
    ) -> Result<Self, ModelError> {
        if !(truncation.is_finite() && truncation > 0.0) {
            return Err(ModelError::InvalidGeometry(format!(
                "truncation must be positive, got {truncation}"
            )));
        }
        if !(depth.is_finite() && depth > 0.0) {
            return Err(ModelError::InvalidGeometry(format!(
                "depth must be positive, got {depth}"
            )));
        }
        if !crest_height.is_finite() || crest_height < 0.0 {
            return Err(ModelError::InvalidGeometry(format!(
                "crest height must be non-negative, got {crest_height}"
            )));
        }
        Ok(Self { truncation, crest_height, depth, half_domain })
    }

    /// Sample points along the broken line `L`: first down the crest line
    /// from `(0, η(0))` to the corner `(0, -d)` (`n_vertical` points), then
    /// along the bed from the corner out to `(Λ, -d)` (`n_horizontal` points).
    /// The corner is shared, appearing exactly once.
    pub fn broken_line(&self, n_vertical: usize, n_horizontal: usize) -> Vec<PhysicalPoint> {
        let mut pts = Vec::with_capacity(n_vertical + n_horizontal.saturating_sub(1));
        let top = self.crest_height;
        let bot = -self.depth;
        for i in 0..n_vertical {
            let t = i as f64 / (n_vertical - 1).max(1) as f64;
            pts.push(PhysicalPoint::new(0.0, top + t * (bot - top)));
        }
        for i in 1..n_horizontal {
            let t = i as f64 / (n_horizontal - 1).max(1) as f64;
            pts.push(PhysicalPoint::new(t * self.truncation, bot));
        }
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn critical_speed_matches_shallow_water_values() {
        // √(9.81·1) and √(9.81·4).
        let e1 = Environment::new(9.81, 1.0, 0.0).unwrap();
        let e4 = Environment::new(9.81, 4.0, 0.0).unwrap();
        assert!((critical_speed(&e1) - 3.1321).abs() < 5e-5);
        assert!((critical_speed(&e4) - 6.2642).abs() < 5e-5);
        assert_eq!(critical_speed(&e4), 2.0 * critical_speed(&e1));
    }

    #[test]
    fn scales_for_standard_gravity() {
        let env = Environment::new(9.81, 1.0, 0.0).unwrap();
        let s = env.scaling();
        assert!((s.time - 0.3193).abs() < 5e-5);
        assert_eq!(s.length, 1.0);
        assert_eq!(s.pressure, 9.81);
        // Consistency among the scales themselves.
        assert!((s.velocity - s.length / s.time).abs() < 1e-12);
        assert!((s.pressure - s.velocity * s.velocity).abs() < 1e-12);
        // Two-metre column: velocity scale √(9.81·2) = √19.62.
        let env2 = Environment::new(9.81, 2.0, 0.0).unwrap();
        assert!((env2.scaling().velocity - 4.4294).abs() < 5e-5);
        // Unit gravity and depth give the identity scaling.
        let unit = Environment::new(1.0, 1.0, 0.0).unwrap().scaling();
        assert_eq!((unit.length, unit.time, unit.velocity, unit.pressure), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn environment_rejects_unphysical_parameters() {
        assert!(Environment::new(0.0, 1.0, 0.0).is_err());
        assert!(Environment::new(9.81, -1.0, 0.0).is_err());
        assert!(Environment::new(f64::NAN, 1.0, 0.0).is_err());
        assert!(Environment::new(9.81, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn environment_parses_json_keys_and_defaults_p_atm() {
        let env = Environment::from_json(r#"{"gravity": 9.81, "depth": 2.0}"#).unwrap();
        assert_eq!(env.p_atm, 0.0);
        assert_eq!(env.depth, 2.0);
        let env =
            Environment::from_json(r#"{"gravity": 9.81, "depth": 2.0, "p_atm": 101.3}"#).unwrap();
        assert_eq!(env.p_atm, 101.3);
        assert!(Environment::from_json(r#"{"gravity": -1, "depth": 2.0}"#).is_err());
        assert!(Environment::from_json("not json").is_err());
    }

    #[test]
    fn broken_line_shares_the_corner_once() {
        let geom = DomainGeometry::new(40.0, 0.3, 1.0, true).unwrap();
        let pts = geom.broken_line(5, 9);
        assert_eq!(pts.len(), 5 + 9 - 1);
        assert_eq!(pts[0], PhysicalPoint::new(0.0, 0.3));
        assert_eq!(pts[4], PhysicalPoint::new(0.0, -1.0));
        assert_eq!(pts[5].y, -1.0);
        assert_eq!(pts.last().unwrap(), &PhysicalPoint::new(40.0, -1.0));
        // Corner appears exactly once.
        let corners = pts
            .iter()
            .filter(|p| p.x == 0.0 && p.y == -1.0)
            .count();
        assert_eq!(corners, 1);
    }

    proptest! {
        // Nondimensionalize → redimensionalize is the identity to 1e-14
        // relative accuracy, for any physically valid environment.
        #[test]
        fn scaling_roundtrip_is_identity(
            g in 0.1f64..50.0,
            d in 0.05f64..100.0,
            u in -30.0f64..30.0,
            p in -1e4f64..1e4,
            x in -1e3f64..1e3,
        ) {
            let env = Environment::new(g, d, 0.0).unwrap();
            let s = env.scaling();
            let back_u = s.unscale_velocity(s.scale_velocity(u));
            let back_p = s.unscale_pressure(s.scale_pressure(p));
            let back_x = s.unscale_length(s.scale_length(x));
            prop_assert!((back_u - u).abs() <= 1e-14 * u.abs().max(1.0));
            prop_assert!((back_p - p).abs() <= 1e-14 * p.abs().max(1.0));
            prop_assert!((back_x - x).abs() <= 1e-14 * x.abs().max(1.0));
        }
    }
}
