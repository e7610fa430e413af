//! Sparse multivariate polynomials over `f64`.
//!
//! Polynomials are stored as a map from exponent multi-index to coefficient,
//! ordered graded-lexicographically. They carry every model ingredient the
//! filter needs: drift, diffusion, observation function and the natural
//! statistics of the exponential family.

mod decomposition;

pub use decomposition::{build_decomposition, generator_apply, CoefficientDecomposition};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{check_dim, Error, Result};

/// Coefficients with magnitude below this are dropped after arithmetic.
pub const COEFF_EPS: f64 = 1e-14;

/// Exponent tuple `(e1, ..., ed)` of a monomial `x1^e1 ... xd^ed`.
///
/// Ordered by total degree first, ties broken lexicographically with higher
/// powers of earlier variables first (`x1 < x2`, `x1² < x1x2 < x2²`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// Unit index `e_axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Self(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn combine(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }

    /// All indices with `min_degree <= |i| <= max_degree`, in graded-lex order.
    pub fn all_up_to(dim: usize, min_degree: u32, max_degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for deg in min_degree..=max_degree {
            let mut current = vec![0u32; dim];
            collect_degree(dim, deg, 0, &mut current, &mut out);
        }
        out.sort();
        out
    }
}

fn collect_degree(dim: usize, remaining: u32, axis: usize, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if axis + 1 == dim {
        current[axis] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for e in 0..=remaining {
        current[axis] = e;
        collect_degree(dim, remaining - e, axis + 1, current, out);
    }
    current[axis] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial in canonical form: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePolynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl SparsePolynomial {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "polynomial dimension must be positive");
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self::monomial(MultiIndex::zero(dim), value)
    }

    /// The coordinate function `x_{axis+1}`.
    pub fn var(dim: usize, axis: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, axis), 1.0)
    }

    pub fn monomial(index: MultiIndex, coeff: f64) -> Self {
        let mut p = Self::zero(index.dim());
        p.insert(index, coeff);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated indices are summed.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(dim);
        for (exps, c) in terms {
            check_dim(dim, exps.len())?;
            p.insert(MultiIndex(exps), c);
        }
        Ok(p)
    }

    fn insert(&mut self, index: MultiIndex, coeff: f64) {
        let entry = self.terms.entry(index).or_insert(0.0);
        *entry += coeff;
        if entry.abs() < COEFF_EPS {
            self.prune();
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.abs() >= COEFF_EPS);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: &MultiIndex) -> f64 {
        self.terms.get(index).copied().unwrap_or(0.0)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// If the polynomial is a single monomial, returns its index and coefficient.
    pub fn as_monomial(&self) -> Option<(&MultiIndex, f64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, &v)| (k, v))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.terms.iter().map(|(k, c)| c * k.eval(x)).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            out.insert(k.clone(), c * factor);
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(-1.0))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut acc: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                *acc.entry(ka.combine(kb)).or_insert(0.0) += ca * cb;
            }
        }
        let mut out = Self { dim: self.dim, terms: acc };
        out.prune();
        Ok(out)
    }

    /// `p(shift + scale ∘ z)` as a polynomial in `z`.
    pub fn affine_substitute(&self, shift: &[f64], scale: &[f64]) -> Result<Self> {
        check_dim(self.dim, shift.len())?;
        check_dim(self.dim, scale.len())?;
        let lines: Vec<Self> = (0..self.dim)
            .map(|i| &Self::constant(self.dim, shift[i]) + &Self::var(self.dim, i).scale(scale[i]))
            .collect();
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            let mut term = Self::constant(self.dim, *c);
            for (line, &e) in lines.iter().zip(k.exponents()) {
                for _ in 0..e {
                    term = term.checked_mul(line)?;
                }
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to `x_{axis+1}`.
    pub fn diff(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange { axis, dim: self.dim });
        }
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            let e = k.0[axis];
            if e == 0 {
                continue;
            }
            let mut idx = k.clone();
            idx.0[axis] = e - 1;
            out.insert(idx, c * e as f64);
        }
        Ok(out)
    }

    /// Serializes as one `e1 ... ed coeff` line per term, in graded-lex order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, c) in &self.terms {
            for e in &k.0 {
                s.push_str(&e.to_string());
                s.push(' ');
            }
            s.push_str(&format!("{c:?}\n"));
        }
        s
    }

    /// Parses the `e1 ... ed coeff` line format. Blank lines and `#` comments are skipped.
    pub fn parse_text(dim: usize, text: &str) -> Result<Self> {
        Self::parse_lines(dim, text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    pub(crate) fn parse_lines<'a, I>(dim: usize, lines: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, &'a str)>,
    {
        let mut p = Self::zero(dim);
        for (line_no, raw) in lines {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != dim + 1 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {} fields, found {}", dim + 1, fields.len()),
                });
            }
            let exps = fields[..dim]
                .iter()
                .map(|f| f.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
            let coeff: f64 = fields[dim]
                .parse()
                .map_err(|e: std::num::ParseFloatError| Error::Parse { line: line_no, message: e.to_string() })?;
            p.insert(MultiIndex(exps), coeff);
        }
        Ok(p)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if k.is_constant() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{k}")?;
            }
        }
        Ok(())
    }
}

// Operator forms panic on dimension mismatch; use the `checked_*` methods for
// fallible arithmetic.
impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: Self) -> SparsePolynomial {
        self.checked_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: Self) -> SparsePolynomial {
        self.checked_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: Self) -> SparsePolynomial {
        self.checked_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        self.scale(-1.0)
    }
}

/// Flat, allocation-free evaluator for hot loops (particle propagation, grids).
#[derive(Debug, Clone)]
pub struct CompiledPolynomial {
    dim: usize,
    exps: Vec<u32>,
    coeffs: Vec<f64>,
}

impl CompiledPolynomial {
    pub fn new(p: &SparsePolynomial) -> Self {
        let mut exps = Vec::with_capacity(p.len() * p.dim());
        let mut coeffs = Vec::with_capacity(p.len());
        for (k, c) in p.terms() {
            exps.extend_from_slice(k.exponents());
            coeffs.push(c);
        }
        Self { dim: p.dim(), exps, coeffs }
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (t, c) in self.coeffs.iter().enumerate() {
            let mut term = *c;
            for (j, &e) in self.exps[t * self.dim..(t + 1) * self.dim].iter().enumerate() {
                if e > 0 {
                    term *= x[j].powi(e as i32);
                }
            }
            sum += term;
        }
        sum
    }
}
