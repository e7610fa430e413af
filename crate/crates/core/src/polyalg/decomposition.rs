use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use super::{MultiIndex, SparsePolynomial};
use crate::error::{check_dim, Error, Result};
use crate::expfam::ExpFamily;
use crate::model::ModelSpec;

/// `ℒ[φ] = Σᵢ fᵢ ∂ᵢφ + ½ Σᵢⱼ aᵢⱼ ∂ᵢ∂ⱼφ`.
pub fn generator_apply(f: &[SparsePolynomial], a: &[Vec<SparsePolynomial>], phi: &SparsePolynomial) -> Result<SparsePolynomial> {
    let d = phi.dim();
    check_dim(d, f.len())?;
    check_dim(d, a.len())?;
    let mut out = SparsePolynomial::zero(d);
    for i in 0..d {
        check_dim(d, a[i].len())?;
        let di = phi.diff(i)?;
        out = out.checked_add(&f[i].checked_mul(&di)?)?;
        for j in 0..d {
            if a[i][j].is_zero() {
                continue;
            }
            let dij = di.diff(j)?;
            out = out.checked_add(&a[i][j].checked_mul(&dij)?.scale(0.5))?;
        }
    }
    Ok(out)
}

/// Constant-coefficient form of the filter equation for a family `c̃ = [c; c_h]`:
///
/// ```text
/// ℒ[c] - ½(hᵀh)c = a₀ + A₀ c̃
/// ½ hᵀh          = b₀ + b_hᵀ c̃
/// h              = λ₀ + λᵀ c
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientDecomposition {
    /// The family extended with `c_h`.
    pub family: ExpFamily,
    pub a0: DVector<f64>,
    /// `m × (m + m_h)`.
    pub a0_ext: DMatrix<f64>,
    pub b0: f64,
    pub b_h: DVector<f64>,
    /// `m × d_y`; column `k` holds the coefficients of `h_k` on `c`.
    pub lambda: DMatrix<f64>,
    pub lambda0: DVector<f64>,
}

impl CoefficientDecomposition {
    /// Re-expands `a₀ + A₀c̃` row by row.
    pub fn drift_polynomials(&self) -> Result<Vec<SparsePolynomial>> {
        let d = self.family.dim();
        (0..self.family.m())
            .map(|j| {
                let row: Vec<f64> = self.a0_ext.row(j).iter().copied().collect();
                expand(d, self.a0[j], &row, self.family.extended())
            })
            .collect()
    }

    /// Re-expands `b₀ + b_hᵀc̃`.
    pub fn energy_polynomial(&self) -> Result<SparsePolynomial> {
        expand(self.family.dim(), self.b0, self.b_h.as_slice(), self.family.extended())
    }

    /// Re-expands `λ₀ + λᵀc`.
    pub fn obs_polynomials(&self) -> Result<Vec<SparsePolynomial>> {
        let d = self.family.dim();
        (0..self.lambda.ncols())
            .map(|k| {
                let col: Vec<f64> = self.lambda.column(k).iter().copied().collect();
                expand(d, self.lambda0[k], &col, self.family.stats())
            })
            .collect()
    }
}

fn expand(dim: usize, constant: f64, coeffs: &[f64], basis: &[SparsePolynomial]) -> Result<SparsePolynomial> {
    let mut p = SparsePolynomial::constant(dim, constant);
    for (c, s) in coeffs.iter().zip(basis) {
        if *c != 0.0 {
            p = p.checked_add(&s.scale(*c))?;
        }
    }
    Ok(p)
}

/// Reads `p` on `span{1, basis}`; `basis` is indexed through `family` positions below `limit`.
fn read_span(p: &SparsePolynomial, family: &ExpFamily, limit: usize, what: &str) -> Result<(f64, Vec<f64>)> {
    let mut constant = 0.0;
    let mut coeffs = vec![0.0; limit];
    for (k, c) in p.terms() {
        if k.is_constant() {
            constant = c;
            continue;
        }
        match family.position(k) {
            Some((pos, scale)) if pos < limit => coeffs[pos] = c / scale,
            _ => return Err(Error::SpanFailure { what: what.to_string(), monomial: k.to_string() }),
        }
    }
    Ok((constant, coeffs))
}

/// Builds the extended family and the coefficient data of the filter equation.
///
/// `c_h` collects, in graded-lex order, every non-constant monomial of
/// `ℒ[c]`, `(hᵀh)c` and `hᵀh` that is not already a statistic.
pub fn build_decomposition(model: &ModelSpec, family: &ExpFamily) -> Result<CoefficientDecomposition> {
    check_dim(model.dim(), family.dim())?;
    let d = family.dim();
    let m = family.m();
    let base = ExpFamily::new(d, family.stats().to_vec())?;
    let a = model.diffusion_matrix();
    let energy = model.obs_energy();
    let half_energy = energy.scale(0.5);

    let mut targets = Vec::with_capacity(m);
    for c in base.stats() {
        let lc = generator_apply(model.drift(), &a, c)?;
        targets.push(lc.checked_sub(&half_energy.checked_mul(c)?)?);
    }

    let mut extra: BTreeSet<MultiIndex> = BTreeSet::new();
    let mut collect = |p: &SparsePolynomial| {
        for (k, _) in p.terms() {
            if !k.is_constant() && base.position(k).is_none() {
                extra.insert(k.clone());
            }
        }
    };
    for c in base.stats() {
        collect(&generator_apply(model.drift(), &a, c)?);
        collect(&energy.checked_mul(c)?);
    }
    collect(&energy);
    let ext = base.with_extension(extra.into_iter().map(|k| SparsePolynomial::monomial(k, 1.0)).collect())?;
    let m_ext = ext.m_ext();

    let mut a0 = DVector::zeros(m);
    let mut a0_ext = DMatrix::zeros(m, m_ext);
    for (j, t) in targets.iter().enumerate() {
        let (c0, row) = read_span(t, &ext, m_ext, "generator image")?;
        a0[j] = c0;
        for (k, v) in row.into_iter().enumerate() {
            a0_ext[(j, k)] = v;
        }
    }
    let (b0, bh) = read_span(&half_energy, &ext, m_ext, "observation energy")?;

    let dy = model.obs_dim();
    let mut lambda = DMatrix::zeros(m, dy);
    let mut lambda0 = DVector::zeros(dy);
    for (k, h) in model.obs().iter().enumerate() {
        let (c0, col) = read_span(h, &ext, m, "observation function")?;
        lambda0[k] = c0;
        for (j, v) in col.into_iter().enumerate() {
            lambda[(j, k)] = v;
        }
    }

    Ok(CoefficientDecomposition { family: ext, a0, a0_ext, b0, b_h: DVector::from_vec(bh), lambda, lambda0 })
}
