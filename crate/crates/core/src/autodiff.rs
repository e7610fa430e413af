//! Second-order forward-mode automatic differentiation.
//!
//! A [`Jet2`] carries a value together with its gradient and dense Hessian
//! with respect to `m` seed variables. Propagation rules are exact to second
//! order. Jets created by [`lift`] and combined linearly keep an implicit zero
//! Hessian, so linear forms in the seeds cost `O(m)` rather than `O(m²)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    value: f64,
    grad: DVector<f64>,
    /// `None` encodes an exactly zero Hessian.
    hess: Option<DMatrix<f64>>,
}

impl Jet2 {
    pub fn constant(m: usize, value: f64) -> Self {
        Self { value, grad: DVector::zeros(m), hess: None }
    }

    pub fn new(value: f64, grad: DVector<f64>, hess: DMatrix<f64>) -> Self {
        Self { value, grad, hess: Some(hess) }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &DVector<f64> {
        &self.grad
    }

    /// Symmetrized Hessian.
    pub fn hess(&self) -> DMatrix<f64> {
        let m = self.grad.len();
        match &self.hess {
            Some(h) => (h + h.transpose()) * 0.5,
            None => DMatrix::zeros(m, m),
        }
    }

    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn into_parts(self) -> (f64, DVector<f64>, DMatrix<f64>) {
        let h = self.hess();
        (self.value, self.grad, h)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_assign(1.0, other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_assign(-1.0, other);
        out
    }

    pub fn add_const(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.value += c;
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            value: self.value * c,
            grad: &self.grad * c,
            hess: self.hess.as_ref().map(|h| h * c),
        }
    }

    /// `self += c · other`.
    pub fn add_scaled_assign(&mut self, c: f64, other: &Self) {
        self.value += c * other.value;
        self.grad.axpy(c, &other.grad, 1.0);
        if let Some(oh) = &other.hess {
            match &mut self.hess {
                Some(h) => axpy(h, c, oh),
                None => self.hess = Some(oh * c),
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (self.value, other.value);
        let grad = &other.grad * a + &self.grad * b;
        let mut hess = &self.grad * other.grad.transpose();
        hess += &other.grad * self.grad.transpose();
        if let Some(hb) = &other.hess {
            axpy(&mut hess, a, hb);
        }
        if let Some(ha) = &self.hess {
            axpy(&mut hess, b, ha);
        }
        Self { value: a * b, grad, hess: Some(hess) }
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    fn chain(&self, f: f64, df: f64, d2f: f64) -> Self {
        let grad = &self.grad * df;
        let mut hess = &self.grad * self.grad.transpose() * d2f;
        if let Some(h) = &self.hess {
            axpy(&mut hess, df, h);
        }
        Self { value: f, grad, hess: Some(hess) }
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Result<Self> {
        let a = self.value;
        if !(a > 0.0) {
            return Err(Error::Domain(format!("log of non-positive value {a}")));
        }
        Ok(self.chain(a.ln(), 1.0 / a, -1.0 / (a * a)))
    }

    pub fn recip(&self) -> Result<Self> {
        let a = self.value;
        if a == 0.0 || !a.is_finite() {
            return Err(Error::Domain(format!("reciprocal of {a}")));
        }
        Ok(self.chain(1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `Σ cᵢ · jetsᵢ`.
    pub fn linear_combination(coeffs: &[f64], jets: &[Jet2]) -> Self {
        assert_eq!(coeffs.len(), jets.len());
        let m = jets.first().map_or(0, Jet2::nvars);
        let mut out = Self::constant(m, 0.0);
        for (c, j) in coeffs.iter().zip(jets) {
            if *c != 0.0 {
                out.add_scaled_assign(*c, j);
            }
        }
        out
    }
}

/// `y += a·x` for equally shaped matrices.
fn axpy(y: &mut DMatrix<f64>, a: f64, x: &DMatrix<f64>) {
    for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yi += a * xi;
    }
}

/// Seeds independent variables: component `i` has gradient `eᵢ` and zero Hessian.
pub fn lift(point: &[f64]) -> Vec<Jet2> {
    let m = point.len();
    point
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut grad = DVector::zeros(m);
            grad[i] = 1.0;
            Jet2 { value: v, grad, hess: None }
        })
        .collect()
}

/// Value, gradient and symmetric Hessian of `func` at `point`.
pub fn hessian_of<F>(func: F, point: &[f64]) -> Result<Jet2>
where
    F: FnOnce(&[Jet2]) -> Result<Jet2>,
{
    if point.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite evaluation point".into()));
    }
    let out = func(&lift(point))?;
    let hess = out.hess();
    Ok(Jet2 { value: out.value, grad: out.grad, hess: Some(hess) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn finite_difference<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> (DVector<f64>, DMatrix<f64>) {
        let m = x.len();
        let mut g = DVector::zeros(m);
        let mut hm = DMatrix::zeros(m, m);
        let shifted = |d: &[(usize, f64)]| {
            let mut y = x.to_vec();
            for &(i, s) in d {
                y[i] += s;
            }
            f(&y)
        };
        for i in 0..m {
            g[i] = (shifted(&[(i, h)]) - shifted(&[(i, -h)])) / (2.0 * h);
            for j in 0..m {
                hm[(i, j)] = (shifted(&[(i, h), (j, h)]) - shifted(&[(i, h), (j, -h)]) - shifted(&[(i, -h), (j, h)])
                    + shifted(&[(i, -h), (j, -h)]))
                    / (4.0 * h * h);
            }
        }
        (g, hm)
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-3)
    }

    #[test]
    fn lift_seeds() {
        let j = lift(&[2.0]);
        assert_eq!(j[0].value(), 2.0);
        assert_eq!(j[0].grad().as_slice(), &[1.0]);
        assert_eq!(j[0].hess()[(0, 0)], 0.0);
        let j = lift(&[0.0, -0.5]);
        assert_eq!(j[1].grad().as_slice(), &[0.0, 1.0]);
        let s = j[0].add(&j[1]);
        assert_eq!(s.value(), -0.5);
        assert_eq!(s.grad().as_slice(), &[1.0, 1.0]);
        assert_eq!(s.hess(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn exp_at_zero_and_square() {
        let x = lift(&[0.0]);
        let e = x[0].exp();
        assert_eq!(e.value(), 1.0);
        assert_eq!(e.grad()[0], 1.0);
        let x = lift(&[1.0]);
        let sq = x[0].mul(&x[0]);
        assert_eq!((sq.value(), sq.grad()[0], sq.hess()[(0, 0)]), (1.0, 2.0, 2.0));
    }

    #[test]
    fn exp_of_product_matches_finite_differences() {
        let p = [0.3, -0.7];
        let jet = hessian_of(|t| Ok(t[0].mul(&t[1]).exp()), &p).unwrap();
        let (g, h) = finite_difference(|x| (x[0] * x[1]).exp(), &p, 1e-5);
        let e = (p[0] * p[1]).exp();
        let exact = [[e * p[1] * p[1], e * (1.0 + p[0] * p[1])], [e * (1.0 + p[0] * p[1]), e * p[0] * p[0]]];
        for i in 0..2 {
            assert!(rel_err(jet.grad()[i], g[i]) < 1e-6);
            for j in 0..2 {
                assert!(rel_err(jet.hess()[(i, j)], exact[i][j]) < 1e-14);
                assert!(rel_err(jet.hess()[(i, j)], h[(i, j)]) < 1e-4);
            }
        }
    }

    #[test]
    fn quadratic_form_hessian_is_exact() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, -1.0, 0.5, 3.0, 0.25, -1.0, 0.25, 1.5]);
        let p = [0.2, -1.0, 0.7];
        let jet = hessian_of(
            |t| {
                let mut acc = Jet2::constant(3, 0.0);
                for i in 0..3 {
                    for j in 0..3 {
                        acc.add_scaled_assign(0.5 * a[(i, j)], &t[i].mul(&t[j]));
                    }
                }
                Ok(acc)
            },
            &p,
        )
        .unwrap();
        assert_eq!(jet.hess(), a);
    }

    #[test]
    fn log_sum_exp_hessian_is_psd_and_matches_fd() {
        let forms = [[1.0, 0.5], [-0.3, 2.0], [0.7, -1.1]];
        let p = [0.4, -0.2];
        let lse = |t: &[Jet2]| -> Result<Jet2> {
            let mut acc = Jet2::constant(2, 0.0);
            for f in &forms {
                acc = acc.add(&Jet2::linear_combination(f, t).exp());
            }
            acc.ln()
        };
        let jet = hessian_of(lse, &p).unwrap();
        let plain = |x: &[f64]| forms.iter().map(|f| (f[0] * x[0] + f[1] * x[1]).exp()).sum::<f64>().ln();
        let (g, h) = finite_difference(plain, &p, 1e-5);
        let hess = jet.hess();
        for i in 0..2 {
            assert!(rel_err(jet.grad()[i], g[i]) < 1e-6);
            for j in 0..2 {
                assert!(rel_err(hess[(i, j)], h[(i, j)]) < 1e-6);
            }
        }
        let eig = hess.symmetric_eigenvalues();
        assert!(eig.iter().all(|&v| v >= -1e-14));
    }

    #[test]
    fn division_and_reciprocal() {
        let t = lift(&[2.0, 3.0]);
        let q = t[0].div(&t[1]).unwrap();
        assert_abs_diff_eq!(q.value(), 2.0 / 3.0);
        assert_abs_diff_eq!(q.grad()[0], 1.0 / 3.0);
        assert_abs_diff_eq!(q.grad()[1], -2.0 / 9.0);
        assert_abs_diff_eq!(q.hess()[(1, 1)], 4.0 / 27.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.hess()[(0, 1)], -1.0 / 9.0, epsilon = 1e-15);
        let zero = Jet2::constant(2, 0.0);
        assert!(t[0].div(&zero).is_err());
    }

    #[test]
    fn log_domain_errors() {
        assert!(Jet2::constant(1, 0.0).ln().is_err());
        assert!(Jet2::constant(1, -1.0).ln().is_err());
        assert!(hessian_of(|t| Ok(t[0].clone()), &[f64::NAN]).is_err());
    }

    #[test]
    fn scale_and_sub() {
        let t = lift(&[1.5]);
        let sq = t[0].mul(&t[0]);
        let d = sq.scale(2.0).sub(&t[0]).add_const(1.0);
        assert_eq!(d.value(), 2.0 * 2.25 - 1.5 + 1.0);
        assert_eq!(d.grad()[0], 4.0 * 1.5 - 1.0);
        assert_eq!(d.hess()[(0, 0)], 4.0);
    }
}
