use super::density::{Axis, GridDensity};
use crate::error::{check_dim, Error, Result};
use crate::model::ModelSpec;
use crate::polyalg::CompiledPolynomial;

/// Density magnitude allowed at the outermost cells.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Negative values above this are clipped to zero.
pub const NEGATIVE_TOL: f64 = -1e-10;

/// Explicit finite-difference solver of the one-dimensional Kushner–Stratonovich equation.
#[derive(Debug, Clone)]
pub struct FdSolver {
    axis: Axis,
    /// `f` at cell centers.
    drift: Vec<f64>,
    /// `ρQρᵀ` at cell centers.
    diff: Vec<f64>,
    obs: Vec<f64>,
}

impl FdSolver {
    pub fn new(model: &ModelSpec, axis: Axis) -> Result<Self> {
        check_dim(1, model.dim())?;
        check_dim(1, model.obs_dim())?;
        let a = model.diffusion_matrix();
        let f = CompiledPolynomial::new(&model.drift()[0]);
        let aa = CompiledPolynomial::new(&a[0][0]);
        let h = CompiledPolynomial::new(&model.obs()[0]);
        let xs = axis.centers();
        Ok(Self {
            axis,
            drift: xs.iter().map(|x| f.eval(&[*x])).collect(),
            diff: xs.iter().map(|x| aa.eval(&[*x])).collect(),
            obs: xs.iter().map(|x| h.eval(&[*x])).collect(),
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Fokker–Planck step `p ← p + dt·(-∂(fp) + ½∂²(ap))` in conservative central form
    /// with zero density outside the grid.
    pub fn fokker_planck_step(&self, p: &mut [f64], dt: f64) {
        let n = p.len();
        let h = self.axis.width();
        let flux = |i: isize, p: &[f64]| -> f64 {
            // flux through the face between cells i and i+1
            let get = |j: isize| if j < 0 || j >= n as isize { (0.0, 0.0, 0.0) } else {
                let j = j as usize;
                (p[j], self.drift[j], self.diff[j])
            };
            let (pl, fl, al) = get(i);
            let (pr, fr, ar) = get(i + 1);
            0.5 * (fl * pl + fr * pr) - 0.5 * (ar * pr - al * pl) / h
        };
        let faces: Vec<f64> = (-1..n as isize).map(|i| flux(i, p)).collect();
        for i in 0..n {
            p[i] -= dt * (faces[i + 1] - faces[i]) / h;
        }
    }

    /// Multiplies by `exp(h dy - ½h² dt)` and renormalizes.
    pub fn measurement_update(&self, p: &mut [f64], dt: f64, dy: f64) -> Result<()> {
        let logs: Vec<f64> = self.obs.iter().map(|h| h * dy - 0.5 * h * h * dt).collect();
        let top = logs
            .iter()
            .zip(p.iter())
            .filter(|(_, v)| **v > 0.0)
            .map(|(l, _)| *l)
            .fold(f64::NEG_INFINITY, f64::max);
        for (v, l) in p.iter_mut().zip(&logs) {
            *v *= (l - top).exp();
        }
        normalize(p, self.axis.width())
    }

    /// Runs `dys.len()` steps from `p0`, returning `(t, density)` every `record_every` steps
    /// (always including the initial and final densities).
    pub fn run(&self, p0: &GridDensity, dt: f64, dys: &[f64], record_every: usize) -> Result<Vec<(f64, GridDensity)>> {
        if p0.axes() != [self.axis] {
            return Err(Error::GridMismatch("initial density axis differs from solver axis".into()));
        }
        let h = self.axis.width();
        let courant = self.diff.iter().fold(0.0f64, |m, a| m.max(a.abs())) * dt / (h * h);
        if !(dt > 0.0) || courant > 1.0 {
            return Err(Error::InvalidArgument(format!(
                "explicit step unstable: dt={dt}, max(a)·dt/h² = {courant:.3} exceeds 1"
            )));
        }
        let every = record_every.max(1);
        let mut p = p0.values().to_vec();
        normalize(&mut p, self.axis.width())?;
        let mut out = vec![(0.0, GridDensity::new(vec![self.axis], p.clone())?)];
        for (k, &dy) in dys.iter().enumerate() {
            let step = k + 1;
            self.fokker_planck_step(&mut p, dt);
            for v in p.iter_mut() {
                if *v < 0.0 {
                    if *v < NEGATIVE_TOL {
                        return Err(Error::NegativeDensity { step, value: *v });
                    }
                    *v = 0.0;
                }
            }
            self.measurement_update(&mut p, dt, dy)?;
            let edge = p[0].max(p[p.len() - 1]);
            if edge > BOUNDARY_TOL {
                return Err(Error::BoundaryMass { step, value: edge });
            }
            if step % every == 0 || step == dys.len() {
                out.push((step as f64 * dt, GridDensity::new(vec![self.axis], p.clone())?));
            }
        }
        Ok(out)
    }
}

fn normalize(p: &mut [f64], h: f64) -> Result<()> {
    let z: f64 = p.iter().sum::<f64>() * h;
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::NonPositiveSum(z));
    }
    for v in p.iter_mut() {
        *v /= z;
    }
    Ok(())
}

/// Convenience wrapper over [`FdSolver`].
pub fn fd_ks_solver_1d(
    model: &ModelSpec,
    axis: Axis,
    p0: &GridDensity,
    dt: f64,
    dys: &[f64],
    record_every: usize,
) -> Result<Vec<(f64, GridDensity)>> {
    FdSolver::new(model, axis)?.run(p0, dt, dys, record_every)
}
