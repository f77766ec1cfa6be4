//! Binary event detection at a fusion center that receives one report and one
//! stochastic trust observation from each robot, when an unknown and possibly
//! majority subset of the robots is malicious.
//!
//! Detectors:
//! - [`two_stage`]: trust-threshold classification followed by standard
//!   fusion, with thresholds optimized against the worst-case attack.
//! - [`aglrt`]: a generalized likelihood ratio test over trust vectors and
//!   the attacker's error probability, plus prior-aware and
//!   cardinality-constrained variants.
//! - [`baselines`]: oracle, oblivious and reputation-based references.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*F64` aliases
//! cover the common case.

pub mod aglrt;
pub mod baselines;
pub mod error;
pub mod model;
pub mod scalar;
pub mod sim;
pub mod two_stage;

pub use error::{Error, Result};
pub use model::{AttackModel, Decision, Hypothesis, NetworkObservation, SensorModel, TrustModel};
pub use scalar::Real;

pub type SensorModelF64 = SensorModel<f64>;
pub type SensorModelF32 = SensorModel<f32>;
pub type TrustModelF64 = TrustModel<f64>;
pub type TrustModelF32 = TrustModel<f32>;
pub type AttackModelF64 = AttackModel<f64>;
pub type AttackModelF32 = AttackModel<f32>;
pub type DecisionF64 = Decision<f64>;
pub type DecisionF32 = Decision<f32>;
pub type ScenarioConfigF64 = sim::ScenarioConfig<f64>;
pub type ScenarioConfigF32 = sim::ScenarioConfig<f32>;
pub type TwoStageThresholdsF64 = two_stage::TwoStageThresholds<f64>;
pub type TwoStageThresholdsF32 = two_stage::TwoStageThresholds<f32>;
