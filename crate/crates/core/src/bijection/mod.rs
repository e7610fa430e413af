//! Bijections from the quadrature domain to the state space.
//!
//! * [`StaticBijection`]: componentwise `atanh` on the hypercube.
//! * [`GaussianBijection`] with [`GaussianVariant::ErfHypercube`]:
//!   `φ(x̃) = μ + √2 Tᵀ Λ^{1/2} erf⁻¹(x̃)`, whose Jacobian determinant is
//!   `1 / (2^d q_ξ(φ(x̃)))` for the Gaussian `q_ξ = N(μ, Σ)`.
//! * [`GaussianBijection`] with [`GaussianVariant::HermiteAffine`]:
//!   `φ(x̃) = μ + √2 Tᵀ Λ^{1/2} x̃` on `R^d`, used with Gauss–Hermite grids.
//!
//! Here `Σ = Tᵀ diag(Λ) T` with `T` orthogonal.

mod linalg;
mod moment;
mod special;

pub use linalg::sym_eigen;
pub use moment::{match_bijection, moment_match_from_family, picard_update, PicardReport};
pub(crate) use moment::rebuild;
pub use special::{erf, erf_inv, erfc};

use std::f64::consts::{LN_2, PI};

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::quadrature::Domain;

/// Relative eigenvalue floor applied when building a Gaussian bijection.
pub const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianVariant {
    ErfHypercube,
    HermiteAffine,
}

impl GaussianVariant {
    pub fn domain(self) -> Domain {
        match self {
            GaussianVariant::ErfHypercube => Domain::Hypercube,
            GaussianVariant::HermiteAffine => Domain::RealSpace,
        }
    }
}

/// Gaussian-based bijection parametrized by `ξ = (μ, Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBijection {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    t_rot: DMatrix<f64>,
    lambda: DVector<f64>,
    variant: GaussianVariant,
    /// `√2 Tᵀ Λ^{1/2}`
    scale: DMatrix<f64>,
    /// `(d/2) log 2 + ½ Σ log Λᵢ`
    log_det_affine: f64,
}

impl GaussianBijection {
    /// Builds the bijection from a mean and covariance. The covariance is
    /// symmetrized and its eigenvalues floored at `EIGEN_FLOOR · max Λ`.
    pub fn new(mu: DVector<f64>, sigma: DMatrix<f64>, variant: GaussianVariant) -> Result<Self> {
        let d = mu.len();
        check_dim(d, sigma.nrows())?;
        check_dim(d, sigma.ncols())?;
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite bijection mean".into()));
        }
        let (t_rot, mut lambda) = sym_eigen(&sigma)?;
        let top = lambda.max();
        if !(top > 0.0) || !top.is_finite() {
            return Err(Error::BijectionCollapse);
        }
        let floor = EIGEN_FLOOR * top;
        for l in lambda.iter_mut() {
            if *l < floor {
                *l = floor;
            }
        }
        let sigma = t_rot.transpose() * DMatrix::from_diagonal(&lambda) * &t_rot;
        let scale = t_rot.transpose() * DMatrix::from_diagonal(&lambda.map(|l| (2.0 * l).sqrt()));
        let log_det_affine = 0.5 * d as f64 * LN_2 + 0.5 * lambda.iter().map(|l| l.ln()).sum::<f64>();
        Ok(Self { mu, sigma, t_rot, lambda, variant, scale, log_det_affine })
    }

    pub fn standard(dim: usize, variant: GaussianVariant) -> Self {
        Self::new(DVector::zeros(dim), DMatrix::identity(dim, dim), variant).expect("identity covariance is valid")
    }

    /// Same mean, covariance scaled by `factor`.
    pub fn widened(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidArgument(format!("spread factor {factor} must be positive")));
        }
        Self::new(self.mu.clone(), &self.sigma * factor, self.variant)
    }

    pub fn with_variant(&self, variant: GaussianVariant) -> Self {
        Self { variant, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.t_rot
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.lambda
    }

    pub fn variant(&self) -> GaussianVariant {
        self.variant
    }

    /// `φ_ξ(x̃)` and `log |det ∂φ_ξ/∂x̃|`.
    pub fn forward(&self, x_tilde: &[f64]) -> Result<(Vec<f64>, f64)> {
        let d = self.dim();
        check_dim(d, x_tilde.len())?;
        let (z, log_det) = match self.variant {
            GaussianVariant::HermiteAffine => (x_tilde.to_vec(), self.log_det_affine),
            GaussianVariant::ErfHypercube => {
                let z = x_tilde.iter().map(|&t| erf_inv(t)).collect::<Result<Vec<_>>>()?;
                // -log(2^d q(φ)) = -d log 2 + (d/2) log 2π + ½ Σ log Λ + Σ zᵢ²
                let quad: f64 = z.iter().map(|v| v * v).sum();
                let log_det = -(d as f64) * LN_2 + 0.5 * d as f64 * (2.0 * PI).ln()
                    + 0.5 * self.lambda.iter().map(|l| l.ln()).sum::<f64>()
                    + quad;
                (z, log_det)
            }
        };
        let zv = DVector::from_vec(z);
        let x = &self.mu + &self.scale * zv;
        Ok((x.as_slice().to_vec(), log_det))
    }

    /// Inverse map: `ζ_ξ(x) = erf(Λ^{-1/2} T (x - μ) / √2)` or its affine analogue.
    pub fn inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let dx = DVector::from_column_slice(x) - &self.mu;
        let r = &self.t_rot * dx;
        Ok(r.iter()
            .zip(self.lambda.iter())
            .map(|(&ri, &l)| {
                let z = ri / (2.0 * l).sqrt();
                match self.variant {
                    GaussianVariant::ErfHypercube => erf(z),
                    GaussianVariant::HermiteAffine => z,
                }
            })
            .collect())
    }

    /// `log q_ξ(x)` for the Gaussian `N(μ, Σ)`.
    pub fn log_density(&self, x: &[f64]) -> f64 {
        let d = self.dim() as f64;
        let dx = DVector::from_column_slice(x) - &self.mu;
        let r = &self.t_rot * dx;
        let maha: f64 = r.iter().zip(self.lambda.iter()).map(|(v, l)| v * v / l).sum();
        -0.5 * d * (2.0 * PI).ln() - 0.5 * self.lambda.iter().map(|l| l.ln()).sum::<f64>() - 0.5 * maha
    }
}

/// Fixed bijection `φ(x̃) = atanh(x̃)` componentwise on the hypercube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StaticBijection;

impl StaticBijection {
    pub fn forward(&self, x_tilde: &[f64]) -> Result<(Vec<f64>, f64)> {
        let mut log_det = 0.0;
        let mut x = Vec::with_capacity(x_tilde.len());
        for &t in x_tilde {
            if !(t.abs() < 1.0) {
                return Err(Error::Domain(format!("static bijection argument {t} outside (-1, 1)")));
            }
            x.push(t.atanh());
            log_det -= (1.0 - t * t).ln();
        }
        Ok((x, log_det))
    }
}

/// Any bijection usable by the integrator.
#[derive(Debug, Clone, PartialEq)]
pub enum Bijection {
    Static(StaticBijection),
    Gaussian(GaussianBijection),
}

impl Bijection {
    pub fn forward(&self, x_tilde: &[f64]) -> Result<(Vec<f64>, f64)> {
        match self {
            Bijection::Static(b) => b.forward(x_tilde),
            Bijection::Gaussian(b) => b.forward(x_tilde),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Bijection::Static(_) => Domain::Hypercube,
            Bijection::Gaussian(b) => b.variant.domain(),
        }
    }

    pub fn gaussian(&self) -> Option<&GaussianBijection> {
        match self {
            Bijection::Gaussian(b) => Some(b),
            Bijection::Static(_) => None,
        }
    }
}

impl From<GaussianBijection> for Bijection {
    fn from(b: GaussianBijection) -> Self {
        Bijection::Gaussian(b)
    }
}

impl From<StaticBijection> for Bijection {
    fn from(b: StaticBijection) -> Self {
        Bijection::Static(b)
    }
}
