use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Eigendecomposition `Σ = Tᵀ diag(Λ) T` of the symmetric part of `sigma`.
///
/// Rows of `T` are eigenvectors, eigenvalues ascend, and each eigenvector is
/// signed so that its largest-magnitude entry is positive.
pub fn sym_eigen(sigma: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let n = sigma.nrows();
    if sigma.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: sigma.ncols() });
    }
    if sigma.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite entry in symmetric matrix".into()));
    }
    let sym = (sigma + sigma.transpose()) * 0.5;
    let eig = sym.try_symmetric_eigen(1e-15, 10_000).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut t = DMatrix::zeros(n, n);
    let mut lambda = DVector::zeros(n);
    for (row, &k) in order.iter().enumerate() {
        lambda[row] = eig.eigenvalues[k];
        let v = eig.eigenvectors.column(k);
        let pivot = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        let s = if pivot < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(row, j)] = s * v[j];
        }
    }
    Ok((t, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity() {
        let (t, l) = sym_eigen(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(l, DVector::from_element(3, 1.0));
        assert!((t - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
    }

    #[test]
    fn two_by_two() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (t, l) = sym_eigen(&s).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-14 && (l[1] - 3.0).abs() < 1e-14);
        let recon = t.transpose() * DMatrix::from_diagonal(&l) * &t;
        assert!((recon - s).amax() < 1e-14);
    }

    #[test]
    fn random_spd_reconstruction() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in 2..=4 {
            for _ in 0..25 {
                let a = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
                let s = &a * a.transpose() + DMatrix::identity(d, d) * 0.1;
                let (t, l) = sym_eigen(&s).unwrap();
                assert!((&t * t.transpose() - DMatrix::<f64>::identity(d, d)).amax() < 1e-12);
                let recon = t.transpose() * DMatrix::from_diagonal(&l) * &t;
                assert!((recon - &s).amax() < 1e-10);
                assert!(l.as_slice().windows(2).all(|w| w[0] <= w[1]));
                for row in t.row_iter() {
                    let pivot = row.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
                    assert!(pivot > 0.0);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sym_eigen(&DMatrix::zeros(2, 3)).is_err());
        assert!(sym_eigen(&DMatrix::from_element(2, 2, f64::NAN)).is_err());
    }
}
