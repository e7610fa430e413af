//! Configuration-driven experiment runner for the projection filter.

pub mod common;
pub mod config;
pub mod experiments;

pub use config::{BijectionKind, ExperimentConfig, ExperimentKind, QuadratureSpec, VariantSpec};
pub use experiments::{run_cubic_sensor, run_linear_check, run_sir, run_vdp, CubicSummary, LinearSummary, ParticleComparison};
