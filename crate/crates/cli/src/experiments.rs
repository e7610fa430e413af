//! Experiment runners. Each writes its artifacts under an output directory and
//! returns a summary of the quantities the acceptance checks inspect.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use nalgebra::{DMatrix, DVector};
use projection_filter::baselines::{kalman_bucy, simulate, Axis, BootstrapFilter, FdSolver, GridDensity, LinearModel};
use projection_filter::filter::records_to_csv;
use projection_filter::metrics::{density_on_grid, hellinger};
use projection_filter::{ExpFamily, ModelSpec, MultiIndex};

use crate::common::{
    hellinger_table, initial_particles, median, particle_density, projection_density, run_variant, snapshot_axes, RunDir,
    VariantRun,
};
use crate::config::{ExperimentConfig, ExperimentKind};

fn expect_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.kind != kind {
        bail!("config describes a {:?} experiment, not {:?}", cfg.kind, kind);
    }
    if cfg.variants.is_empty() && kind != ExperimentKind::Linear {
        bail!("no filter variants configured");
    }
    Ok(())
}

fn truth_csv(sim: &projection_filter::baselines::SimulationOutput) -> String {
    let mut out = String::from("t");
    for i in 0..sim.dim {
        let _ = write!(out, ",x{}", i + 1);
    }
    for i in 0..sim.dy.first().map_or(0, Vec::len) {
        let _ = write!(out, ",dy{}", i + 1);
    }
    out.push('\n');
    for (k, t) in sim.times.iter().enumerate() {
        let _ = write!(out, "{t}");
        for v in sim.state(k) {
            let _ = write!(out, ",{v}");
        }
        if let Some(dy) = sim.dy.get(k) {
            for v in dy {
                let _ = write!(out, ",{v}");
            }
        }
        out.push('\n');
    }
    out
}

fn moments_csv(dim: usize, rows: &[(f64, Vec<f64>, Vec<f64>)]) -> String {
    let mut out = String::from("t");
    for i in 0..dim {
        let _ = write!(out, ",mu_{}", i + 1);
    }
    for i in 0..dim {
        for j in 0..dim {
            let _ = write!(out, ",sigma_{}{}", i + 1, j + 1);
        }
    }
    out.push('\n');
    for (t, m, c) in rows {
        let _ = write!(out, "{t}");
        for v in m.iter().chain(c) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

fn write_variant_logs(dir: &mut RunDir, runs: &[VariantRun]) -> Result<()> {
    for r in runs {
        dir.write(&format!("{}.csv", r.spec.name), &records_to_csv(&r.output.records))?;
        dir.note(&format!("nodes[{}]", r.spec.name), r.nodes);
        let status = match &r.output.error {
            None => "completed".to_string(),
            Some(e) => format!("stopped at t={}: {e}", r.output.final_state.t),
        };
        dir.note(&format!("status[{}]", r.spec.name), status);
    }
    Ok(())
}

/// Outcome of [`run_cubic_sensor`].
#[derive(Debug, Clone)]
pub struct CubicSummary {
    pub dir: PathBuf,
    pub names: Vec<String>,
    pub completed: Vec<bool>,
    /// `(t, Hellinger per variant)`; NaN after a variant stops.
    pub hellinger: Vec<(f64, Vec<f64>)>,
    /// Largest `|∫exp(cᵀθ - ψ) - 1|` over the logged states, per variant.
    pub max_defect: Vec<f64>,
}

impl CubicSummary {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn final_hellinger(&self, name: &str) -> Option<f64> {
        let i = self.index(name)?;
        self.hellinger.last().map(|(_, h)| h[i])
    }

    pub fn median_hellinger(&self, name: &str) -> Option<f64> {
        let i = self.index(name)?;
        Some(median(&self.hellinger.iter().map(|(_, h)| h[i]).collect::<Vec<_>>()))
    }
}

/// Scalar cubic sensor: FD reference plus every configured projection variant
/// on one shared measurement realization.
pub fn run_cubic_sensor(cfg: &ExperimentConfig, out: &Path) -> Result<CubicSummary> {
    expect_kind(cfg, ExperimentKind::Cubic)?;
    if cfg.dim() != 1 {
        bail!("the cubic sensor experiment is one-dimensional");
    }
    let (lo, hi, cells) = cfg.fd_axis.context("cubic sensor needs fd_min, fd_max and fd_cells")?;
    let axis = Axis::new(lo, hi, cells)?;
    let mut dir = RunDir::create(out, cfg, "run-cubic")?;
    let steps = cfg.steps();
    let sim = simulate(&cfg.model, &cfg.x0, cfg.dt, steps, cfg.seed)?;
    dir.write("truth.csv", &truth_csv(&sim))?;
    let family = ExpFamily::monomials_up_to(1, cfg.family_degree);
    let theta0 = crate::common::initial_theta(cfg, &family)?;

    let (p0, _) = density_on_grid(theta0.as_slice(), &family, 0.0, vec![axis])?;
    let every = cfg.record_every;
    let dys: Vec<f64> = sim.dy.iter().map(|d| d[0]).collect();
    let fd = FdSolver::new(&cfg.model, axis)?.run(&p0, cfg.dt, &dys, every).context("finite-difference reference")?;
    let fd_rows: Vec<_> = fd
        .iter()
        .map(|(t, g)| {
            let (m, c) = g.moments();
            (*t, m, c)
        })
        .collect();
    dir.write("fd.csv", &moments_csv(1, &fd_rows))?;

    let runs = cfg.variants.iter().map(|v| run_variant(cfg, v, &family, &sim.dy)).collect::<Result<Vec<_>>>()?;
    write_variant_logs(&mut dir, &runs)?;

    let names: Vec<String> = runs.iter().map(|r| r.spec.name.clone()).collect();
    let mut rows = Vec::with_capacity(fd.len());
    let mut max_defect = vec![0.0f64; runs.len()];
    for (n, (t, reference)) in fd.iter().enumerate() {
        let k = (n * every).min(steps);
        let mut hs = Vec::with_capacity(runs.len());
        for (i, r) in runs.iter().enumerate() {
            let h = match r.record(k).map(|rec| projection_density(r, rec, vec![axis])) {
                Some(Ok((p, defect))) => {
                    max_defect[i] = max_defect[i].max(defect);
                    hellinger(&p, reference)?
                }
                _ => f64::NAN,
            };
            hs.push(h);
        }
        rows.push((*t, hs));
    }
    dir.write("comparison.csv", &hellinger_table(&names, &rows))?;
    for (n, d) in names.iter().zip(&max_defect) {
        dir.note(&format!("max_integral_defect[{n}]"), format!("{d:e}"));
    }
    let completed = runs.iter().map(VariantRun::completed).collect();
    let path = dir.finish(cfg)?;
    log::info!("manifest written to {}", path.display());
    Ok(CubicSummary { dir: out.to_path_buf(), names, completed, hellinger: rows, max_defect })
}

/// Outcome of [`run_vdp`] and [`run_sir`].
#[derive(Debug, Clone)]
pub struct ParticleComparison {
    pub dir: PathBuf,
    pub names: Vec<String>,
    pub nodes: Vec<usize>,
    pub completed: Vec<bool>,
    pub hellinger: Vec<(f64, Vec<f64>)>,
    /// `trace Σ` of each variant's bijection at every filter step.
    pub trace: Vec<Vec<f64>>,
    /// `(t, name, integral)` of every dumped density snapshot.
    pub snapshots: Vec<(f64, String, f64)>,
    pub resample_count: usize,
}

impl ParticleComparison {
    /// Largest Hellinger distance of a variant over `t ∈ [t0, t1]` (NaN if it stopped).
    pub fn max_hellinger(&self, name: &str, t0: f64, t1: f64) -> Option<f64> {
        let i = self.names.iter().position(|n| n == name)?;
        let mut worst = 0.0f64;
        for (t, h) in &self.hellinger {
            if *t >= t0 - 1e-12 && *t <= t1 + 1e-12 {
                if h[i].is_nan() {
                    return Some(f64::NAN);
                }
                worst = worst.max(h[i]);
            }
        }
        Some(worst)
    }

    /// Whether `trace Σ` decreases over the second half of the run: it ends
    /// below its midpoint value and its least-squares slope there is negative.
    pub fn trace_decreasing_final_half(&self, name: &str) -> Option<bool> {
        let half = self.final_half_trace(name)?;
        if half.len() < 2 {
            return Some(false);
        }
        let n = half.len() as f64;
        let tm = (n - 1.0) / 2.0;
        let ym = half.iter().sum::<f64>() / n;
        let slope: f64 = half.iter().enumerate().map(|(k, y)| (k as f64 - tm) * (y - ym)).sum();
        Some(half[half.len() - 1] < half[0] && slope < 0.0)
    }

    /// Largest one-step relative increase of `trace Σ` over the second half.
    pub fn max_trace_uptick(&self, name: &str) -> Option<f64> {
        let half = self.final_half_trace(name)?;
        Some(half.windows(2).map(|w| (w[1] - w[0]) / w[0]).fold(0.0, f64::max))
    }

    fn final_half_trace(&self, name: &str) -> Option<&[f64]> {
        let i = self.names.iter().position(|n| n == name)?;
        let tr = &self.trace[i];
        Some(&tr[tr.len() / 2..])
    }
}

fn particle_experiment(cfg: &ExperimentConfig, out: &Path, command: &str) -> Result<ParticleComparison> {
    let mut dir = RunDir::create(out, cfg, command)?;
    let steps = cfg.steps();
    let sim = simulate(&cfg.model, &cfg.x0, cfg.dt, steps, cfg.seed)?;
    dir.write("truth.csv", &truth_csv(&sim))?;
    let family = ExpFamily::monomials_up_to(cfg.dim(), cfg.family_degree);
    let runs = cfg.variants.iter().map(|v| run_variant(cfg, v, &family, &sim.dy)).collect::<Result<Vec<_>>>()?;
    write_variant_logs(&mut dir, &runs)?;
    let names: Vec<String> = runs.iter().map(|r| r.spec.name.clone()).collect();

    let snapshot_steps: Vec<usize> = cfg.snapshot_times.iter().map(|t| (t / cfg.dt).round() as usize).collect();
    let every = cfg.hellinger_every;
    let mut rows = Vec::new();
    let mut pf_rows = Vec::new();
    let mut snapshots = Vec::new();
    let mut failure: Option<anyhow::Error> = None;
    let mut pf = BootstrapFilter::new(cfg.model.clone());
    pf.run_observed(initial_particles(cfg)?, cfg.dt, &sim.dy, cfg.seed, |step, t, set| {
        if failure.is_some() {
            return;
        }
        if step % cfg.record_every == 0 || step == steps {
            pf_rows.push((t, set.mean(), set.covariance()));
        }
        let snap = snapshot_steps.contains(&step);
        if step % every != 0 && step != steps && !snap {
            return;
        }
        let result = (|| -> Result<()> {
            let extra: Vec<_> = runs.iter().filter_map(|r| r.record(step)).map(|rec| (&rec.mu, &rec.sigma)).collect();
            let axes = snapshot_axes(set, cfg.hist_coverage, cfg.hist_cells, &extra)?;
            let (reference, _) = particle_density(set, axes.clone())?;
            let mut hs = Vec::with_capacity(runs.len());
            let mut dens: Vec<(String, GridDensity)> = Vec::new();
            for r in &runs {
                match r.record(step).map(|rec| projection_density(r, rec, axes.clone())) {
                    Some(Ok((p, _))) => {
                        hs.push(hellinger(&p, &reference)?);
                        dens.push((r.spec.name.clone(), p));
                    }
                    _ => hs.push(f64::NAN),
                }
            }
            if step % every == 0 || step == steps {
                rows.push((t, hs));
            }
            if snap {
                dens.push(("pf".to_string(), reference));
                for (name, g) in dens {
                    dir.write(&format!("densities/{name}_t{t:.4}.csv"), &g.to_csv())?;
                    snapshots.push((t, name, g.integral()));
                }
            }
            Ok(())
        })();
        if let Err(e) = result {
            failure = Some(e);
        }
    })?;
    if let Some(e) = failure {
        return Err(e.context("comparing against the particle filter"));
    }
    dir.note("pf_resample_count", pf.resample_count);
    dir.write("pf.csv", &moments_csv(cfg.dim(), &pf_rows))?;
    dir.write("comparison.csv", &hellinger_table(&names, &rows))?;
    let trace = runs.iter().map(|r| r.output.records.iter().map(|rec| rec.sigma.trace()).collect()).collect();
    let summary = ParticleComparison {
        dir: out.to_path_buf(),
        names,
        nodes: runs.iter().map(|r| r.nodes).collect(),
        completed: runs.iter().map(VariantRun::completed).collect(),
        hellinger: rows,
        trace,
        snapshots,
        resample_count: pf.resample_count,
    };
    dir.finish(cfg)?;
    Ok(summary)
}

/// Modified Van der Pol oscillator against a bootstrap particle filter.
pub fn run_vdp(cfg: &ExperimentConfig, out: &Path) -> Result<ParticleComparison> {
    expect_kind(cfg, ExperimentKind::Vdp)?;
    particle_experiment(cfg, out, "run-vdp")
}

/// Stochastic SIR model against a bootstrap particle filter.
pub fn run_sir(cfg: &ExperimentConfig, out: &Path) -> Result<ParticleComparison> {
    expect_kind(cfg, ExperimentKind::Sir)?;
    particle_experiment(cfg, out, "run-sir")
}

/// Outcome of [`run_linear_check`].
#[derive(Debug, Clone)]
pub struct LinearSummary {
    pub dir: PathBuf,
    pub completed: bool,
    /// Time-averaged `|mean - m_KB|`.
    pub mean_abs_error: f64,
    /// `max_t |var - P_KB| / P_KB`.
    pub var_rel_error: f64,
    /// Root mean square of `|mean_PF - m_KB|` over time.
    pub pf_mean_rmse: f64,
}

fn linear_coefficients(model: &ModelSpec) -> Result<LinearModel> {
    let d = model.dim();
    let coeff = |p: &projection_filter::SparsePolynomial, j: usize| {
        let mut e = vec![0; d];
        e[j] = 1;
        p.coeff(&MultiIndex::new(e))
    };
    for p in model.drift().iter().chain(model.obs()) {
        if p.degree() > 1 || p.terms().any(|(k, _)| k.is_constant()) {
            bail!("linear check needs linear drift and observation without constant terms");
        }
    }
    let a = DMatrix::from_fn(d, d, |i, j| coeff(&model.drift()[i], j));
    let h = DMatrix::from_fn(model.obs_dim(), d, |i, j| coeff(&model.obs()[i], j));
    let a_noise = model.diffusion_matrix();
    let mut noise = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let p = &a_noise[i][j];
            if p.degree() > 0 {
                bail!("linear check needs constant diffusion");
            }
            noise[(i, j)] = p.coeff(&MultiIndex::zero(d));
        }
    }
    Ok(LinearModel { a, h, noise })
}

/// Projection filter and bootstrap particle filter against the Kalman–Bucy filter.
pub fn run_linear_check(cfg: &ExperimentConfig, out: &Path) -> Result<LinearSummary> {
    expect_kind(cfg, ExperimentKind::Linear)?;
    if cfg.variants.len() != 1 {
        bail!("the linear check runs exactly one projection variant");
    }
    if cfg.standardize {
        bail!("the linear check reads moments from θ and runs in state coordinates");
    }
    let (Some(m0), Some(p0)) = (&cfg.initial_mean, &cfg.initial_cov) else {
        bail!("linear check needs initial_mean and initial_cov");
    };
    let d = cfg.dim();
    let lin = linear_coefficients(&cfg.model)?;
    let mut dir = RunDir::create(out, cfg, "run-linear-check")?;
    let steps = cfg.steps();
    let sim = simulate(&cfg.model, &cfg.x0, cfg.dt, steps, cfg.seed)?;
    dir.write("truth.csv", &truth_csv(&sim))?;
    let kb = kalman_bucy(&lin, DVector::from_column_slice(m0), DMatrix::from_row_slice(d, d, p0), cfg.dt, &sim.dy)?;
    let kb_rows: Vec<_> = kb.iter().enumerate().map(|(k, (m, p))| (k as f64 * cfg.dt, m.as_slice().to_vec(), p.as_slice().to_vec())).collect();
    dir.write("kalman.csv", &moments_csv(d, &kb_rows))?;

    let family = ExpFamily::monomials_up_to(d, 2);
    let run = run_variant(cfg, &cfg.variants[0], &family, &sim.dy)?;
    write_variant_logs(&mut dir, std::slice::from_ref(&run))?;

    // mean and covariance implied by θ for the Gaussian family
    let implied = |theta: &DVector<f64>| -> Result<(DVector<f64>, DMatrix<f64>)> {
        let mut prec = DMatrix::zeros(d, d);
        let mut lin_part = DVector::zeros(d);
        for (idx, stat) in family.stats().iter().enumerate() {
            let (k, c) = stat.as_monomial().context("family statistics must be monomials")?;
            let e = k.exponents();
            let th = theta[idx] * c;
            let nz: Vec<usize> = (0..d).filter(|&i| e[i] > 0).collect();
            match (k.degree(), nz.as_slice()) {
                (1, [i]) => lin_part[*i] = th,
                (2, [i]) => prec[(*i, *i)] = -2.0 * th,
                (2, [i, j]) => {
                    prec[(*i, *j)] = -th;
                    prec[(*j, *i)] = -th;
                }
                _ => bail!("unexpected statistic in the Gaussian family"),
            }
        }
        let cov = prec.try_inverse().context("implied precision is singular")?;
        Ok((&cov * lin_part, cov))
    };
    let mut mean_err = 0.0;
    let mut var_err = 0.0f64;
    let mut errors = String::from("t,mean_abs_error,var_rel_error\n");
    let n = run.output.records.len();
    for (rec, (m, p)) in run.output.records.iter().zip(&kb) {
        let (mean, cov) = implied(&rec.theta)?;
        let me = (&mean - m).amax();
        let ve = (0..d).map(|i| ((cov[(i, i)] - p[(i, i)]) / p[(i, i)]).abs()).fold(0.0, f64::max);
        mean_err += me / n as f64;
        var_err = var_err.max(ve);
        let _ = writeln!(errors, "{},{me},{ve}", rec.t);
    }
    dir.write("errors.csv", &errors)?;

    let mut pf = BootstrapFilter::new(cfg.model.clone());
    let mut sq = 0.0;
    let mut count = 0usize;
    let mut pf_rows = Vec::new();
    pf.run_observed(initial_particles(cfg)?, cfg.dt, &sim.dy, cfg.seed, |step, t, set| {
        let mean = set.mean();
        let diff: f64 = mean.iter().zip(kb[step].0.iter()).map(|(a, b)| (a - b).powi(2)).sum();
        sq += diff;
        count += 1;
        if step % cfg.record_every == 0 || step == steps {
            pf_rows.push((t, mean, set.covariance()));
        }
    })?;
    dir.write("pf.csv", &moments_csv(d, &pf_rows))?;
    let pf_mean_rmse = (sq / count as f64).sqrt();
    dir.note("mean_abs_error", format!("{mean_err:e}"));
    dir.note("var_rel_error", format!("{var_err:e}"));
    dir.note("pf_mean_rmse", format!("{pf_mean_rmse:e}"));
    let completed = run.completed() && n == kb.len();
    dir.finish(cfg)?;
    Ok(LinearSummary { dir: out.to_path_buf(), completed, mean_abs_error: mean_err, var_rel_error: var_err, pf_mean_rmse })
}
