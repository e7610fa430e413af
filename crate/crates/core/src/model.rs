//! Polynomial state-space models `dx = f(x)dt + ρ(x)dW`, `dy = h(x)dt + dV`.

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::polyalg::{CompiledPolynomial, SparsePolynomial};

/// Model with polynomial drift, diffusion and observation function.
///
/// The observation noise covariance is the identity; models with another
/// noise level are rescaled before construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    dim: usize,
    drift: Vec<SparsePolynomial>,
    /// `d × d_w`, row-major.
    diffusion: Vec<Vec<SparsePolynomial>>,
    noise_cov: DMatrix<f64>,
    obs: Vec<SparsePolynomial>,
}

impl ModelSpec {
    pub fn new(
        drift: Vec<SparsePolynomial>,
        diffusion: Vec<Vec<SparsePolynomial>>,
        noise_cov: DMatrix<f64>,
        obs: Vec<SparsePolynomial>,
    ) -> Result<Self> {
        let dim = drift.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("model needs at least one state".into()));
        }
        check_dim(dim, diffusion.len())?;
        let dw = noise_cov.nrows();
        check_dim(dw, noise_cov.ncols())?;
        for row in &diffusion {
            check_dim(dw, row.len())?;
        }
        for p in drift.iter().chain(diffusion.iter().flatten()).chain(&obs) {
            check_dim(dim, p.dim())?;
        }
        if (&noise_cov - noise_cov.transpose()).amax() > 1e-12 * noise_cov.amax().max(1.0) {
            return Err(Error::InvalidArgument("noise covariance not symmetric".into()));
        }
        Ok(Self { dim, drift, diffusion, noise_cov, obs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn noise_dim(&self) -> usize {
        self.noise_cov.nrows()
    }

    pub fn obs_dim(&self) -> usize {
        self.obs.len()
    }

    pub fn drift(&self) -> &[SparsePolynomial] {
        &self.drift
    }

    pub fn diffusion(&self) -> &[Vec<SparsePolynomial>] {
        &self.diffusion
    }

    pub fn noise_cov(&self) -> &DMatrix<f64> {
        &self.noise_cov
    }

    pub fn obs(&self) -> &[SparsePolynomial] {
        &self.obs
    }

    /// Polynomial matrix `a = ρ Q ρᵀ` (`d × d`, row-major).
    pub fn diffusion_matrix(&self) -> Vec<Vec<SparsePolynomial>> {
        let d = self.dim;
        let dw = self.noise_dim();
        let mut out = vec![vec![SparsePolynomial::zero(d); d]; d];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for k in 0..dw {
                    for l in 0..dw {
                        let q = self.noise_cov[(k, l)];
                        if q != 0.0 {
                            let term = &(&self.diffusion[i][k] * &self.diffusion[j][l]) * &SparsePolynomial::constant(d, q);
                            *entry = &*entry + &term;
                        }
                    }
                }
            }
        }
        out
    }

    /// `hᵀh` as a polynomial.
    pub fn obs_energy(&self) -> SparsePolynomial {
        self.obs
            .iter()
            .fold(SparsePolynomial::zero(self.dim), |acc, h| &acc + &(h * h))
    }

    /// Returns a copy with `h` multiplied by `factor`.
    pub fn with_obs_scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for h in &mut out.obs {
            *h = h.scale(factor);
        }
        out
    }

    /// The same model in coordinates `z = (x - shift) / scale`.
    pub fn standardized(&self, shift: &[f64], scale: &[f64]) -> Result<Self> {
        check_dim(self.dim, shift.len())?;
        check_dim(self.dim, scale.len())?;
        if scale.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidArgument("standardizing scales must be positive".into()));
        }
        let sub = |p: &SparsePolynomial| p.affine_substitute(shift, scale);
        let drift = self.drift.iter().zip(scale).map(|(f, s)| Ok(sub(f)?.scale(1.0 / s))).collect::<Result<Vec<_>>>()?;
        let diffusion = self
            .diffusion
            .iter()
            .zip(scale)
            .map(|(row, s)| row.iter().map(|r| Ok(sub(r)?.scale(1.0 / s))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let obs = self.obs.iter().map(sub).collect::<Result<Vec<_>>>()?;
        Self::new(drift, diffusion, self.noise_cov.clone(), obs)
    }

    /// Fast evaluators for simulation. State and noise dimensions are limited to 8.
    pub fn compile(&self) -> CompiledModel {
        assert!(self.dim <= 8 && self.noise_dim() <= 8, "compiled models support up to 8 dimensions");
        let chol = self.noise_cov.clone().cholesky().map(|c| c.l());
        let sqrt_q = chol.unwrap_or_else(|| {
            let eig = self.noise_cov.clone().symmetric_eigen();
            let root = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
            &eig.eigenvectors * DMatrix::from_diagonal(&root)
        });
        CompiledModel {
            dim: self.dim,
            drift: self.drift.iter().map(CompiledPolynomial::new).collect(),
            diffusion: self.diffusion.iter().flatten().map(CompiledPolynomial::new).collect(),
            sqrt_q,
            obs: self.obs.iter().map(CompiledPolynomial::new).collect(),
        }
    }
}

/// Flattened evaluators of a [`ModelSpec`].
#[derive(Debug, Clone)]
pub struct CompiledModel {
    dim: usize,
    drift: Vec<CompiledPolynomial>,
    diffusion: Vec<CompiledPolynomial>,
    sqrt_q: DMatrix<f64>,
    obs: Vec<CompiledPolynomial>,
}

impl CompiledModel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn noise_dim(&self) -> usize {
        self.sqrt_q.nrows()
    }

    pub fn obs_dim(&self) -> usize {
        self.obs.len()
    }

    /// One Euler–Maruyama step driven by standard normal draws `z` (length `d_w`).
    pub fn em_step(&self, x: &mut [f64], dt: f64, z: &[f64]) {
        let dw = self.noise_dim();
        let sdt = dt.sqrt();
        let mut dwv = [0.0f64; 8];
        let dwv = &mut dwv[..dw];
        for (k, slot) in dwv.iter_mut().enumerate() {
            *slot = sdt * (0..=k).map(|l| self.sqrt_q[(k, l)] * z[l]).sum::<f64>();
        }
        let mut incr = [0.0f64; 8];
        for i in 0..self.dim {
            let mut v = self.drift[i].eval(x) * dt;
            for (k, w) in dwv.iter().enumerate() {
                v += self.diffusion[i * dw + k].eval(x) * w;
            }
            incr[i] = v;
        }
        for i in 0..self.dim {
            x[i] += incr[i];
        }
    }

    pub fn obs_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, h) in out.iter_mut().zip(&self.obs) {
            *o = h.eval(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffusion_matrix_of_sir_noise() {
        let x1x2 = SparsePolynomial::from_terms(2, [(vec![1, 1], 0.2)]).unwrap();
        let model = ModelSpec::new(
            vec![SparsePolynomial::zero(2), SparsePolynomial::zero(2)],
            vec![vec![-&x1x2], vec![x1x2.clone()]],
            DMatrix::identity(1, 1),
            vec![SparsePolynomial::var(2, 1)],
        )
        .unwrap();
        let a = model.diffusion_matrix();
        let sq = SparsePolynomial::from_terms(2, [(vec![2, 2], 0.04)]).unwrap();
        let close = |p: &SparsePolynomial, q: &SparsePolynomial| (p - q).terms().all(|(_, c)| c.abs() < 1e-15);
        assert!(close(&a[0][0], &sq));
        assert!(close(&a[1][1], &sq));
        assert!(close(&a[0][1], &-&sq));
        assert_eq!(a[0][1], a[1][0]);
    }

    #[test]
    fn standardized_model_is_the_same_process() {
        let x = SparsePolynomial::var(1, 0);
        let f = &(&x * &x) * &x;
        let model = ModelSpec::new(vec![f.clone()], vec![vec![x.clone()]], DMatrix::identity(1, 1), vec![&x * &x]).unwrap();
        let z = model.standardized(&[0.5], &[0.1]).unwrap();
        for v in [-3.0, 0.0, 2.0] {
            let xv = 0.5 + 0.1 * v;
            assert!((z.drift()[0].eval(&[v]) - xv * xv * xv / 0.1).abs() < 1e-12);
            assert!((z.diffusion()[0][0].eval(&[v]) - xv / 0.1).abs() < 1e-12);
            assert!((z.obs()[0].eval(&[v]) - xv * xv).abs() < 1e-12);
        }
        assert!(model.standardized(&[0.0], &[0.0]).is_err());
    }

    #[test]
    fn rejects_inconsistent_shapes() {
        let x = SparsePolynomial::var(1, 0);
        assert!(ModelSpec::new(vec![x.clone()], vec![vec![x.clone()]], DMatrix::identity(2, 2), vec![]).is_err());
        assert!(ModelSpec::new(vec![x.clone()], vec![], DMatrix::identity(1, 1), vec![]).is_err());
        let y = SparsePolynomial::var(2, 0);
        assert!(ModelSpec::new(vec![x.clone()], vec![vec![x]], DMatrix::identity(1, 1), vec![y]).is_err());
    }
}
