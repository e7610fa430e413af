use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};

/// Linear model `dx = A x dt + ρ dW`, `dy = H x dt + dV` with `ρQρᵀ = noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub a: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub noise: DMatrix<f64>,
}

/// Euler integration of the Kalman–Bucy mean and Riccati equations.
/// Returns `steps + 1` pairs starting at `(m0, p0)`.
pub fn kalman_bucy(
    model: &LinearModel,
    m0: DVector<f64>,
    p0: DMatrix<f64>,
    dt: f64,
    dys: &[Vec<f64>],
) -> Result<Vec<(DVector<f64>, DMatrix<f64>)>> {
    let d = model.a.nrows();
    check_dim(d, model.a.ncols())?;
    check_dim(d, model.h.ncols())?;
    check_dim(d, m0.len())?;
    check_dim(d, p0.nrows())?;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
    }
    let (mut m, mut p) = (m0, p0);
    let mut out = Vec::with_capacity(dys.len() + 1);
    out.push((m.clone(), p.clone()));
    for dy in dys {
        check_dim(model.h.nrows(), dy.len())?;
        let innov = DVector::from_column_slice(dy) - &model.h * &m * dt;
        let gain = &p * model.h.transpose();
        let dm = &model.a * &m * dt + &gain * innov;
        let dp = (&model.a * &p + &p * model.a.transpose() + &model.noise - &gain * gain.transpose()) * dt;
        m += dm;
        p += dp;
        p = (&p + p.transpose()) * 0.5;
        out.push((m.clone(), p.clone()));
    }
    Ok(out)
}
