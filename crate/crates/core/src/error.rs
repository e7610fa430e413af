use thiserror::Error;

/// Errors raised by the filtering library.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("polynomial text parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A polynomial required by the filter equation is not in span{1, c} or span{1, c̃}.
    #[error("{what} is not representable by the family statistics: offending monomial {monomial}")]
    SpanFailure { what: String, monomial: String },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature rule unavailable: {0}")]
    UnsupportedRule(String),

    #[error("eigen-solver did not converge")]
    NoConvergence,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite integrand at quadrature node {node}")]
    NonFiniteIntegrand { node: usize },

    #[error("quadrature sum is not positive ({0:e}); bijection does not cover the density")]
    NonPositiveSum(f64),

    #[error("Fisher metric not positive definite after jitter {jitter:e}")]
    FisherNotPositiveDefinite { jitter: f64 },

    #[error("statistic {0} missing from the extended statistics")]
    MissingMonomial(String),

    #[error("bijection collapsed: all covariance eigenvalues at the floor")]
    BijectionCollapse,

    #[error("filter diverged at step {step}: {source}")]
    Divergence {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("boundary density {value:e} exceeds tolerance at step {step}")]
    BoundaryMass { step: usize, value: f64 },

    #[error("negative density {value:e} at step {step}")]
    NegativeDensity { step: usize, value: f64 },

    #[error("particle weights degenerate at step {step}")]
    WeightDegeneracy { step: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("overflow evaluating density on grid")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
