//! Numerical laboratory for steady solitary gravity waves on water of finite
//! depth, built around the stream-function formulation of the irrotational
//! Euler equations in a frame moving with the wave.
//!
//! The crate is organised as a pipeline:
//!
//! * [`model`] — physical environment (gravity, depth, atmospheric pressure),
//!   nondimensional scaling, and the truncated half-domain geometry used by
//!   the checks.
//! * [`solver`] — computes the wave itself: a pseudo-spectral collocation
//!   method in conformal variables (Petviashvili fixed point at small
//!   steepness, Newton with an analytically assembled Jacobian above, with
//!   amplitude continuation), plus independent residual audits.
//! * [`fields`] — reconstructs surface elevation, velocities, stream
//!   function, total and dynamic pressure anywhere in the fluid from a
//!   converged wave.
//! * [`verify`] — checks the qualitative structure of the dynamic pressure
//!   (crest maximum, interior positivity, boundary monotonicity, decay,
//!   superharmonicity, boundary-derivative signs, symmetry) with explicit
//!   margins and an honest noise floor.
//! * [`gauge`] — the measurement side: wave-height lower bounds recovered
//!   from bed-pressure gauge records, with seeded synthetic traces for
//!   calibration.
//!
//! All internal computation is nondimensional (`g = d = 1`); dimensional
//! quantities appear only at the API boundary.

pub mod fields;
pub mod gauge;
pub mod map;
pub mod model;
pub mod numeric;
pub mod solution;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use fields::{FieldError, FieldEvaluator, FieldGrid, FieldSample, GridSpec};
pub use gauge::{synth_trace, AbscissaKind, GaugeError, GaugeTrace, HeightBound, TraceSource};
pub use model::{critical_speed, DomainGeometry, Environment, PhysicalPoint, Scaling};
pub use solution::{SolutionError, SolveDiagnostics, WaveSolution};
pub use solver::{
    continue_amplitude, kdv_profile, residuals, solve_wave, KdvProfile, ProbeSpec,
    ResidualReport, SolveRequest, SolverError, SolverTarget, DEFAULT_AMPLITUDE_CAP,
};
pub use verify::{
    verify_all, Finding, PropertyId, Status, VerificationReport, Verifier, VerifyConfig,
    VerifyError,
};
