use nalgebra::{DMatrix, DVector};

use super::GaussianBijection;
use crate::error::{check_dim, Error, Result};
use crate::expfam::{ExpFamily, NodeSet};
use crate::polyalg::MultiIndex;
use crate::quadrature::QuadratureGrid;

/// Mean and covariance read from the `xᵢ` and `xᵢxⱼ` entries of `η̃`.
pub fn moment_match_from_family(eta_ext: &DVector<f64>, family: &ExpFamily) -> Result<(DVector<f64>, DMatrix<f64>)> {
    check_dim(family.m_ext(), eta_ext.len())?;
    let d = family.dim();
    let lookup = |k: MultiIndex| -> Result<f64> {
        let (pos, scale) = family.position(&k).ok_or_else(|| Error::MissingMonomial(k.to_string()))?;
        Ok(eta_ext[pos] / scale)
    };
    let mut mu = DVector::zeros(d);
    for i in 0..d {
        mu[i] = lookup(MultiIndex::unit(d, i))?;
    }
    let mut sigma = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut e = vec![0u32; d];
            e[i] += 1;
            e[j] += 1;
            let v = lookup(MultiIndex::new(e))? - mu[i] * mu[j];
            sigma[(i, j)] = v;
            sigma[(j, i)] = v;
        }
    }
    Ok((mu, sigma))
}

/// One Picard step `ξ ← F_N(ξ)`: moment-match `p_θ` using nodes placed by
/// `bij_in` with its covariance multiplied by `spread`.
///
/// Returns the new bijection and the residual `max(‖Δμ‖∞, ‖ΔΣ‖∞ / tr Σ)`.
pub fn picard_update(
    theta: &[f64],
    family: &ExpFamily,
    bij_in: &GaussianBijection,
    grid: &QuadratureGrid,
    spread: f64,
) -> Result<(GaussianBijection, f64)> {
    check_dim(family.m(), theta.len())?;
    let placed = if spread == 1.0 { bij_in.clone() } else { bij_in.widened(spread)? };
    let nodes = NodeSet::new(family, &placed.into(), grid)?;
    let eta_ext = nodes.extended_mean(theta)?;
    rebuild(&eta_ext, family, bij_in)
}

/// New bijection from extended expectations, with the fixed-point residual against `bij_in`.
pub(crate) fn rebuild(eta_ext: &DVector<f64>, family: &ExpFamily, bij_in: &GaussianBijection) -> Result<(GaussianBijection, f64)> {
    let (mu, sigma) = moment_match_from_family(eta_ext, family)?;
    let out = GaussianBijection::new(mu, sigma, bij_in.variant())?;
    Ok((out.clone(), residual(bij_in, &out)))
}

fn residual(old: &GaussianBijection, new: &GaussianBijection) -> f64 {
    let dmu = (new.mu() - old.mu()).amax();
    let dsig = (new.sigma() - old.sigma()).amax() / new.sigma().trace();
    dmu.max(dsig)
}

/// Outcome of a standalone Picard iteration.
#[derive(Debug, Clone)]
pub struct PicardReport {
    pub bijection: GaussianBijection,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

impl PicardReport {
    pub fn converged(&self, tol: f64) -> bool {
        self.residuals.last().is_some_and(|r| *r < tol)
    }
}

/// Iterates [`picard_update`] until the residual drops below `tol` or `max_iter` is reached.
pub fn match_bijection(
    theta: &[f64],
    family: &ExpFamily,
    bij0: &GaussianBijection,
    grid: &QuadratureGrid,
    spread: f64,
    tol: f64,
    max_iter: usize,
) -> Result<PicardReport> {
    let mut bij = bij0.clone();
    let mut residuals = Vec::new();
    for it in 1..=max_iter {
        let (next, r) = picard_update(theta, family, &bij, grid, spread)?;
        bij = next;
        residuals.push(r);
        log::trace!("picard iteration {it}: residual {r:e}");
        if r < tol {
            return Ok(PicardReport { bijection: bij, iterations: it, residuals });
        }
    }
    Ok(PicardReport { bijection: bij, iterations: max_iter, residuals })
}
