use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{Rule1D, RuleFamily};
use crate::error::{Error, Result};

/// Gauss–Hermite rule for the weight `exp(-x²)`.
///
/// Nodes come from the Golub–Welsch eigenproblem and are polished by Newton
/// iterations on the orthonormal Hermite recurrence; weights use the
/// Christoffel sum `1 / Σ p̃ₖ(x)²`, which keeps tiny tail weights accurate in
/// relative terms.
pub fn gauss_hermite_1d(n: usize) -> Result<Rule1D> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss-Hermite rule needs at least one node".into()));
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = jacobi
        .try_symmetric_eigen(1e-14, 10_000)
        .ok_or(Error::NoConvergence)?;
    let mut roots: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    roots.sort_by(f64::total_cmp);

    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Upper half only; the lower half mirrors it.
    for i in (n / 2)..n {
        let mut x = roots[i];
        if n % 2 == 1 && i == n / 2 {
            x = 0.0;
        } else {
            for _ in 0..8 {
                let (pn, pn1, _) = recurrence(n, x);
                let step = pn / ((2.0 * n as f64).sqrt() * pn1);
                x -= step;
                if step.abs() <= 1e-16 * x.abs() {
                    break;
                }
            }
        }
        let (_, _, sum_sq) = recurrence(n, x);
        nodes[i] = x;
        weights[i] = 1.0 / sum_sq;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = 1.0 / sum_sq;
    }
    Ok(Rule1D { family: RuleFamily::GaussHermite, level: None, nodes, weights })
}

/// Returns `(p̃_n(x), p̃_{n-1}(x), Σ_{k<n} p̃_k(x)²)` for the orthonormal Hermite polynomials.
fn recurrence(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    let mut sum_sq = 0.0;
    for k in 0..n {
        sum_sq += cur * cur;
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * x * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev, sum_sq)
}
