//! Discrete-event model of a circular metro line in which dwell and run
//! times respond to passenger demand.
//!
//! The crate has four layers:
//!
//! - [`maxplus`] — the (max, +) semiring, matrices over it, and event graphs
//!   with exact maximum-cycle-ratio computation (policy iteration, with a
//!   Karp-style fallback and a brute-force enumeration oracle).
//! - [`line`] — the physical line: per-segment bounds, passenger demand,
//!   derived headway/dwell bounds, and the structural checks that guarantee
//!   the controlled dynamics stay linear.
//! - [`dynamics`] — event-by-event simulation of departure times under the
//!   safe-separation constraint and a pluggable travel-time law.
//! - [`analytics`] — the closed-form asymptotic headway/frequency, traffic
//!   phase classification, and parameter sweeps.
//!
//! Scalar-generic pieces live behind the traits in [`scalar`]; concrete
//! aliases for the common instantiations are exported at the crate root.

pub mod analytics;
pub mod config;
pub mod dynamics;
pub mod line;
pub mod maxplus;
pub mod scalar;
pub mod synth;

pub use analytics::{Phase, PhaseResult, SweepGrid};
pub use dynamics::{ControlLaw, Perturbation, Simulator, TrajectoryLog};
pub use line::{DemandMatrix, DerivedParams, LineConfig, SegmentSpec, Theorem1Report};
pub use maxplus::{EventGraph, Trop, TropMatrix};

/// Exact rational scalar used wherever cycle ratios must be computed
/// without rounding. Every finite `f64` converts into it exactly.
pub type Rational = num_rational::BigRational;

/// Times are plain IEEE doubles, in seconds.
pub type Seconds = f64;

/// Max-plus scalar over seconds.
pub type Tropical = Trop<f64>;

/// Max-plus scalar over `f32`, for callers that trade precision for size.
pub type TropicalF32 = Trop<f32>;

/// Max-plus scalar over exact rationals.
pub type TropicalExact = Trop<Rational>;

/// Square max-plus matrix over seconds.
pub type TropicalMatrix = TropMatrix<f64>;
