//! Projection filtering on exponential families with adaptive quadrature.
//!
//! The filter represents the conditional density as
//! `p(x) = exp(c(x)ᵀθ - ψ(θ))` with polynomial statistics `c`, evaluates
//! `ψ` and its derivatives by quadrature on nodes moved by a Gaussian
//! bijection, and integrates the parameter dynamics of the projected
//! Kushner–Stratonovich equation.

pub mod autodiff;
pub mod baselines;
pub mod bijection;
pub mod error;
pub mod expfam;
pub mod filter;
pub mod metrics;
pub mod model;
pub mod polyalg;
pub mod quadrature;

pub use bijection::{Bijection, GaussianBijection, GaussianVariant, StaticBijection};
pub use error::{Error, Result};
pub use expfam::{CgfResult, ExpFamily};
pub use filter::{FilterState, ProjectionFilter, RunOutput, StepRecord};
pub use model::ModelSpec;
pub use polyalg::{CoefficientDecomposition, MultiIndex, SparsePolynomial};
pub use quadrature::{QuadratureGrid, RuleFamily};
