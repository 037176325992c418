//! Decentralized detection of an uncooperative target with a wireless sensor
//! network.
//!
//! Each sensor observes `y_k = θ·g(x_T, x_k) + w_k`, quantizes it to one bit
//! against a threshold `τ_k` and reports the bit over a binary symmetric
//! channel with bit-error probability `P_e,k`. The fusion center decides
//! between `θ = 0` and `θ ≠ 0` with the target position `x_T` unknown.
//!
//! The crate provides:
//!
//! * [`noise`]: symmetric unimodal noise families (Gaussian, Laplace,
//!   generalized Gaussian, Cauchy).
//! * [`scene`]: network geometry, attenuation, measurement generation,
//!   one-bit quantization and channel flips.
//! * [`fusion`]: exact log-likelihood, score, Fisher information and the GLR
//!   and generalized Rao statistics over a search grid.
//! * [`quantizer`]: per-sensor threshold design.
//! * [`asymptotics`]: non-centrality parameters and chi-square machinery for
//!   clairvoyant performance predictions.
//! * [`montecarlo`]: reproducible threshold calibration, detection
//!   probability estimation and the standard sweeps.
//! * [`validation`]: exact-enumeration oracles used by the `validate` command.

pub mod asymptotics;
pub mod error;
pub mod fusion;
pub mod montecarlo;
pub mod noise;
pub mod quantizer;
pub mod rng;
pub mod scene;
pub mod special;
pub mod validation;

pub use asymptotics::AsymptoticPrediction;
pub use error::{Error, Result};
pub use fusion::{GridSpec, StatisticResult};
pub use montecarlo::{Calibration, McConfig, McResult, PdEstimate, Rule, TargetDraw};
pub use noise::{NoiseFamily, NoiseModel};
pub use quantizer::ThresholdDesign;
pub use scene::{BitReport, Point, Region, Scene, TargetState};
