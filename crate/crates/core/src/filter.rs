//! Projection filter on an exponential family with polynomial statistics.
//!
//! Each step evaluates the Fisher metric and extended expectations under the
//! current bijection, advances `θ` by the explicit Euler discretization of
//!
//! ```text
//! dθ = g⁻¹ [a₀ + b₀η + (A₀ + η b_hᵀ) η̃] dt + λ dy
//! ```
//!
//! and then moves the Gaussian bijection by one Picard update computed from
//! the moments at the pre-update parameter. Quadrature nodes are placed with
//! the bijection covariance multiplied by the filter's spread factor (1 by
//! default).

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::bijection::{self, match_bijection, moment_match_from_family, Bijection};
use crate::error::{check_dim, Error, Result};
use crate::expfam::{fisher_cholesky, CgfResult, ExpFamily, NodeSet};
use crate::model::ModelSpec;
use crate::polyalg::{build_decomposition, CoefficientDecomposition};
use crate::quadrature::QuadratureGrid;

/// Tolerance and iteration cap of the Picard matching that sets the initial bijection.
pub const INITIAL_PICARD_TOL: f64 = 1e-8;
pub const INITIAL_PICARD_MAX_ITER: usize = 100;

#[derive(Debug, Clone)]
pub struct FilterState {
    pub theta: DVector<f64>,
    pub bij: Bijection,
    pub t: f64,
    pub step: usize,
    /// `ψ`, `η`, `g`, `η̃` at `(theta, bij)`.
    pub cache: Option<CgfResult>,
}

/// One logged row of a filter run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub theta: DVector<f64>,
    pub mu: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub psi: f64,
    pub cond_g: f64,
}

/// Result of [`ProjectionFilter::run`]. On divergence `error` is set and
/// `records` ends with the last good state.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<StepRecord>,
    pub final_state: FilterState,
    pub error: Option<Error>,
}

impl RunOutput {
    pub fn completed(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionFilter {
    model: ModelSpec,
    decomposition: CoefficientDecomposition,
    grid: QuadratureGrid,
    spread: f64,
}

impl ProjectionFilter {
    /// Extends `family` to close the filter equation and fixes the quadrature grid.
    pub fn new(model: ModelSpec, family: &ExpFamily, grid: QuadratureGrid) -> Result<Self> {
        check_dim(model.dim(), grid.dim())?;
        let decomposition = build_decomposition(&model, family)?;
        Ok(Self { model, decomposition, grid, spread: 1.0 })
    }

    pub fn from_decomposition(model: ModelSpec, decomposition: CoefficientDecomposition, grid: QuadratureGrid) -> Result<Self> {
        check_dim(model.dim(), grid.dim())?;
        check_dim(model.dim(), decomposition.family.dim())?;
        Ok(Self { model, decomposition, grid, spread: 1.0 })
    }

    /// Scales the covariance of the node-placing Gaussian by `factor`.
    pub fn with_spread(mut self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidArgument(format!("spread factor {factor} must be positive")));
        }
        self.spread = factor;
        Ok(self)
    }

    pub fn spread(&self) -> f64 {
        self.spread
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn family(&self) -> &ExpFamily {
        &self.decomposition.family
    }

    pub fn decomposition(&self) -> &CoefficientDecomposition {
        &self.decomposition
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    fn evaluate(&self, theta: &DVector<f64>, bij: &Bijection) -> Result<CgfResult> {
        let placed = match bij {
            Bijection::Gaussian(g) if self.spread != 1.0 => Bijection::Gaussian(g.widened(self.spread)?),
            _ => bij.clone(),
        };
        let nodes = NodeSet::new(self.family(), &placed, &self.grid)?;
        nodes.evaluate(theta.as_slice(), self.family().m())
    }

    /// Initial state at `t = 0`. A Gaussian bijection is first Picard-matched to `θ₀`.
    pub fn initial_state(&self, theta0: DVector<f64>, bij0: Bijection) -> Result<FilterState> {
        check_dim(self.family().m(), theta0.len())?;
        let bij = match &bij0 {
            Bijection::Gaussian(g) => {
                let report = match_bijection(
                    theta0.as_slice(),
                    self.family(),
                    g,
                    &self.grid,
                    self.spread,
                    INITIAL_PICARD_TOL,
                    INITIAL_PICARD_MAX_ITER,
                )?;
                log::debug!(
                    "initial bijection matched in {} iterations (residual {:e})",
                    report.iterations,
                    report.residuals.last().copied().unwrap_or(0.0)
                );
                Bijection::Gaussian(report.bijection)
            }
            Bijection::Static(_) => bij0,
        };
        let cache = self.evaluate(&theta0, &bij)?;
        Ok(FilterState { theta: theta0, bij, t: 0.0, step: 0, cache: Some(cache) })
    }

    /// Drift part `g⁻¹[a₀ + b₀η + (A₀ + η b_hᵀ)η̃]` of the parameter dynamics.
    pub fn drift(&self, cache: &CgfResult) -> Result<DVector<f64>> {
        let dec = &self.decomposition;
        let rhs = &dec.a0 + &cache.eta * dec.b0 + &dec.a0_ext * &cache.eta_ext + &cache.eta * dec.b_h.dot(&cache.eta_ext);
        solve_fisher(&cache.fisher, &rhs)
    }

    /// `Δθ = drift·dt + λ dy`.
    pub fn increment(&self, cache: &CgfResult, dt: f64, dy: &[f64]) -> Result<DVector<f64>> {
        check_dim(self.model.obs_dim(), dy.len())?;
        let drift = self.drift(cache)?;
        Ok(drift * dt + &self.decomposition.lambda * DVector::from_column_slice(dy))
    }

    /// One filter step over `[t, t + dt]` with measurement increment `dy`.
    pub fn step(&self, state: &FilterState, dt: f64, dy: &[f64]) -> Result<FilterState> {
        self.step_inner(state, dt, dy)
            .map_err(|e| Error::Divergence { step: state.step + 1, source: Box::new(e) })
    }

    fn step_inner(&self, state: &FilterState, dt: f64, dy: &[f64]) -> Result<FilterState> {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
        }
        let cache = match &state.cache {
            Some(c) => c.clone(),
            None => self.evaluate(&state.theta, &state.bij)?,
        };
        let delta = self.increment(&cache, dt, dy)?;
        if delta.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite parameter increment".into()));
        }
        let theta = &state.theta + delta;
        let bij = match &state.bij {
            Bijection::Gaussian(g) => Bijection::Gaussian(bijection::rebuild(&cache.eta_ext, self.family(), g)?.0),
            Bijection::Static(s) => Bijection::Static(*s),
        };
        let next = self.evaluate(&theta, &bij)?;
        Ok(FilterState { theta, bij, t: state.t + dt, step: state.step + 1, cache: Some(next) })
    }

    /// Runs the filter over all measurement increments, recording every state.
    pub fn run(&self, initial: FilterState, dt: f64, measurements: &[Vec<f64>]) -> RunOutput {
        self.run_thinned(initial, dt, measurements, 1)
    }

    /// As [`run`](Self::run), recording every `every`-th state plus the last one.
    pub fn run_thinned(&self, initial: FilterState, dt: f64, measurements: &[Vec<f64>], every: usize) -> RunOutput {
        let every = every.max(1);
        let mut records = Vec::with_capacity(measurements.len() / every + 2);
        let mut state = initial;
        let push = |s: &FilterState, records: &mut Vec<StepRecord>| match self.record(s) {
            Ok(r) => {
                records.push(r);
                Ok(())
            }
            Err(e) => Err(e),
        };
        if let Err(e) = push(&state, &mut records) {
            return RunOutput { records, final_state: state, error: Some(e) };
        }
        for (k, dy) in measurements.iter().enumerate() {
            match self.step(&state, dt, dy) {
                Ok(next) => state = next,
                Err(e) => {
                    log::warn!("filter stopped at t = {}: {e}", state.t);
                    if records.last().map(|r| r.t) != Some(state.t) {
                        let _ = push(&state, &mut records);
                    }
                    return RunOutput { records, final_state: state, error: Some(e) };
                }
            }
            if (k + 1) % every == 0 || k + 1 == measurements.len() {
                if let Err(e) = push(&state, &mut records) {
                    return RunOutput { records, final_state: state, error: Some(e) };
                }
            }
        }
        RunOutput { records, final_state: state, error: None }
    }

    /// Log row for a state (`μ`, `Σ` are the bijection parameters, or the
    /// family moments for the static bijection).
    pub fn record(&self, state: &FilterState) -> Result<StepRecord> {
        let cache = match &state.cache {
            Some(c) => c.clone(),
            None => self.evaluate(&state.theta, &state.bij)?,
        };
        let (mu, sigma) = match &state.bij {
            Bijection::Gaussian(g) => (g.mu().clone(), g.sigma().clone()),
            Bijection::Static(_) => moment_match_from_family(&cache.eta_ext, self.family())?,
        };
        Ok(StepRecord { t: state.t, theta: state.theta.clone(), mu, sigma, psi: cache.psi, cond_g: condition_number(&cache.fisher) })
    }
}

/// Solves `g x = r` by Cholesky on the diagonally equilibrated metric.
pub fn solve_fisher(fisher: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let m = fisher.nrows();
    check_dim(m, rhs.len())?;
    let mut d = DVector::zeros(m);
    for i in 0..m {
        let gii = fisher[(i, i)];
        if !(gii > 0.0) || !gii.is_finite() {
            return Err(Error::FisherNotPositiveDefinite { jitter: 0.0 });
        }
        d[i] = 1.0 / gii.sqrt();
    }
    let scaled = DMatrix::from_fn(m, m, |i, j| fisher[(i, j)] * d[i] * d[j]);
    let (chol, jitter) = fisher_cholesky(&scaled)?;
    if jitter > 0.0 {
        log::debug!("Fisher metric needed jitter {jitter:e}");
    }
    let z = chol.solve(&rhs.component_mul(&d));
    Ok(z.component_mul(&d))
}

/// Ratio of extreme eigenvalue magnitudes of the symmetric part.
pub fn condition_number(g: &DMatrix<f64>) -> f64 {
    let sym = (g + g.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    let max = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min = eig.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// CSV with header `t,theta_1..theta_m,mu_1..mu_d,sigma_11..sigma_dd,psi,cond_g`.
pub fn records_to_csv(records: &[StepRecord]) -> String {
    let mut out = String::new();
    let Some(first) = records.first() else {
        return out;
    };
    let m = first.theta.len();
    let d = first.mu.len();
    let mut header = vec!["t".to_string()];
    header.extend((1..=m).map(|i| format!("theta_{i}")));
    header.extend((1..=d).map(|i| format!("mu_{i}")));
    for i in 1..=d {
        for j in 1..=d {
            header.push(format!("sigma_{i}{j}"));
        }
    }
    header.push("psi".into());
    header.push("cond_g".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for r in records {
        let mut fields = vec![r.t.to_string()];
        fields.extend(r.theta.iter().map(f64::to_string));
        fields.extend(r.mu.iter().map(f64::to_string));
        for i in 0..d {
            for j in 0..d {
                fields.push(r.sigma[(i, j)].to_string());
            }
        }
        fields.push(r.psi.to_string());
        fields.push(r.cond_g.to_string());
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}
