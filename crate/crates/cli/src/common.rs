//! Pieces shared by the experiment runners.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use nalgebra::{DMatrix, DVector};
use projection_filter::baselines::{empirical_density, stream_rng, Axis, GridDensity, ParticleSet, Stream};
use projection_filter::metrics::density_on_grid;
use projection_filter::quadrature::{gauss_chebyshev, gauss_hermite_1d, smolyak};
use projection_filter::{
    Bijection, ExpFamily, GaussianBijection, MultiIndex, ProjectionFilter, QuadratureGrid, RuleFamily, RunOutput,
    StaticBijection, StepRecord,
};
use rand_distr::{Distribution, StandardNormal};

use crate::config::{ExperimentConfig, QuadratureSpec, VariantSpec};

pub fn build_grid(spec: &VariantSpec, dim: usize) -> Result<QuadratureGrid> {
    let grid = match spec.quadrature {
        QuadratureSpec::Chebyshev(n) => QuadratureGrid::from_rule(&gauss_chebyshev(n)?),
        QuadratureSpec::Hermite(n) => QuadratureGrid::from_rule(&gauss_hermite_1d(n)?),
        QuadratureSpec::Patterson(l) => smolyak(dim, l, RuleFamily::GaussPatterson)?,
        QuadratureSpec::HermiteSparse(l) => smolyak(dim, l, RuleFamily::GaussHermite)?,
    };
    if grid.dim() != dim {
        bail!("variant '{}' builds a {}-dimensional grid for a {dim}-dimensional model", spec.name, grid.dim());
    }
    Ok(match spec.prune {
        Some(t) => grid.prune(t),
        None => grid,
    })
}

/// Natural parameter of the Gaussian `N(mean, cov)` in a family containing all
/// first and second order monomials; higher statistics get zero.
pub fn gaussian_theta(family: &ExpFamily, mean: &[f64], cov: &[f64]) -> Result<DVector<f64>> {
    let d = family.dim();
    let sigma = DMatrix::from_row_slice(d, d, cov);
    let p = sigma.clone().cholesky().context("initial covariance is not positive definite")?.inverse();
    let pm = &p * DVector::from_column_slice(mean);
    let mut theta = DVector::zeros(family.m());
    let mut set = |exps: Vec<u32>, value: f64| -> Result<()> {
        let idx = MultiIndex::new(exps);
        match family.position(&idx) {
            Some((i, c)) if i < family.m() => {
                theta[i] = value / c;
                Ok(())
            }
            _ => bail!("family lacks the monomial {idx:?} needed for a Gaussian initial density"),
        }
    };
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        set(e, pm[i])?;
        for j in i..d {
            let mut e = vec![0; d];
            e[i] += 1;
            e[j] += 1;
            set(e, if i == j { -0.5 * p[(i, i)] } else { -p[(i, j)] })?;
        }
    }
    Ok(theta)
}

pub fn initial_theta(cfg: &ExperimentConfig, family: &ExpFamily) -> Result<DVector<f64>> {
    match (&cfg.theta0, &cfg.initial_mean, &cfg.initial_cov) {
        (Some(t), _, _) => {
            if t.len() != family.m() {
                bail!("theta0 has {} entries but the family has {} statistics", t.len(), family.m());
            }
            Ok(DVector::from_column_slice(t))
        }
        (None, Some(m), Some(c)) => gaussian_theta(family, m, c),
        _ => bail!("no initial density configured"),
    }
}

/// Affine coordinates `z = (x - shift) / scale` in which a projection filter runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub shift: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Frame {
    pub fn identity(dim: usize) -> Self {
        Self { shift: vec![0.0; dim], scale: vec![1.0; dim] }
    }

    /// Initial mean and standard deviations when `standardize` is set, identity otherwise.
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        let d = cfg.dim();
        match (cfg.standardize, &cfg.initial_mean, &cfg.initial_cov) {
            (false, _, _) => Ok(Self::identity(d)),
            (true, Some(m), Some(c)) => {
                let scale: Vec<f64> = (0..d).map(|i| c[i * d + i].sqrt()).collect();
                if scale.iter().any(|s| !(*s > 0.0)) {
                    bail!("standardize needs positive initial variances");
                }
                Ok(Self { shift: m.clone(), scale })
            }
            _ => bail!("standardize needs initial_mean and initial_cov"),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift.iter().all(|v| *v == 0.0) && self.scale.iter().all(|v| *v == 1.0)
    }

    pub fn mean_to_z(&self, m: &[f64]) -> Vec<f64> {
        m.iter().zip(&self.shift).zip(&self.scale).map(|((v, a), s)| (v - a) / s).collect()
    }

    /// Row-major covariance in `z`.
    pub fn cov_to_z(&self, c: &[f64]) -> Vec<f64> {
        let d = self.scale.len();
        (0..d * d).map(|k| c[k] / (self.scale[k / d] * self.scale[k % d])).collect()
    }

    pub fn mean_to_x(&self, mu: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(mu.len(), |i, _| self.shift[i] + self.scale[i] * mu[i])
    }

    pub fn cov_to_x(&self, sigma: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(sigma.nrows(), sigma.ncols(), |i, j| sigma[(i, j)] * self.scale[i] * self.scale[j])
    }

    pub fn axes_to_z(&self, axes: &[Axis]) -> Result<Vec<Axis>> {
        axes.iter()
            .enumerate()
            .map(|(i, a)| {
                let (s, m) = (self.scale[i], self.shift[i]);
                Ok(Axis::new((a.min - m) / s, (a.max - m) / s, a.count)?)
            })
            .collect()
    }
}

/// Initial bijection in the run's coordinates: the initial Gaussian when one is
/// configured, the standard one otherwise.
pub fn initial_bijection(spec: &VariantSpec, cfg: &ExperimentConfig, frame: &Frame) -> Result<Bijection> {
    let d = cfg.dim();
    Ok(match spec.bijection.gaussian_variant() {
        None => StaticBijection.into(),
        Some(variant) => match (&cfg.initial_mean, &cfg.initial_cov) {
            (Some(m), Some(c)) => GaussianBijection::new(
                DVector::from_vec(frame.mean_to_z(m)),
                DMatrix::from_row_slice(d, d, &frame.cov_to_z(c)),
                variant,
            )?
            .into(),
            _ => GaussianBijection::standard(d, variant).into(),
        },
    })
}

/// Sampler for the Gaussian initial density, used by the particle filter.
pub fn gaussian_sampler(mean: &[f64], cov: &[f64]) -> Result<impl FnMut(&mut rand_chacha::ChaCha20Rng) -> Vec<f64>> {
    let d = mean.len();
    let l = DMatrix::from_row_slice(d, d, cov).cholesky().context("initial covariance is not positive definite")?.l();
    let mean = DVector::from_column_slice(mean);
    Ok(move |rng: &mut rand_chacha::ChaCha20Rng| {
        let z = DVector::from_fn(d, |_, _| StandardNormal.sample(rng));
        (&mean + &l * z).as_slice().to_vec()
    })
}

pub fn initial_particles(cfg: &ExperimentConfig) -> Result<ParticleSet> {
    let (Some(m), Some(c)) = (&cfg.initial_mean, &cfg.initial_cov) else {
        bail!("particle filter needs initial_mean and initial_cov");
    };
    let mut sampler = gaussian_sampler(m, c)?;
    let mut rng = stream_rng(cfg.seed, Stream::Initial);
    let points: Vec<f64> = (0..cfg.particles).flat_map(|_| sampler(&mut rng)).collect();
    Ok(ParticleSet::uniform(cfg.dim(), points)?)
}

/// One projection filter run of an experiment.
pub struct VariantRun {
    pub spec: VariantSpec,
    pub nodes: usize,
    pub filter: ProjectionFilter,
    /// Records carry `μ`, `Σ` in state coordinates and `θ`, `ψ` in the frame.
    pub output: RunOutput,
    pub frame: Frame,
}

impl VariantRun {
    pub fn completed(&self) -> bool {
        self.output.completed()
    }

    /// Record at filter step `k`, if the run got that far.
    pub fn record(&self, k: usize) -> Option<&StepRecord> {
        self.output.records.get(k)
    }
}

pub fn run_variant(cfg: &ExperimentConfig, spec: &VariantSpec, family: &ExpFamily, dys: &[Vec<f64>]) -> Result<VariantRun> {
    let grid = build_grid(spec, cfg.dim())?;
    let nodes = grid.len();
    let frame = Frame::from_config(cfg)?;
    let (model, theta0) = match (frame.is_identity(), &cfg.initial_mean, &cfg.initial_cov) {
        (false, Some(m), Some(c)) => (
            cfg.model.standardized(&frame.shift, &frame.scale)?,
            gaussian_theta(family, &frame.mean_to_z(m), &frame.cov_to_z(c))?,
        ),
        _ => (cfg.model.clone(), initial_theta(cfg, family)?),
    };
    let filter = ProjectionFilter::new(model, family, grid)?.with_spread(spec.spread)?;
    let state = filter
        .initial_state(theta0, initial_bijection(spec, cfg, &frame)?)
        .with_context(|| format!("initializing variant {}", spec.name))?;
    let started = Instant::now();
    let mut output = filter.run(state, cfg.dt, dys);
    if !frame.is_identity() {
        for rec in &mut output.records {
            rec.mu = frame.mean_to_x(&rec.mu);
            rec.sigma = frame.cov_to_x(&rec.sigma);
        }
    }
    log::info!("variant {} ({} nodes) finished in {:.2?}", spec.name, nodes, started.elapsed());
    if let Some(e) = &output.error {
        log::warn!("variant {} stopped: {e}", spec.name);
    }
    Ok(VariantRun { spec: spec.clone(), nodes, filter, output, frame })
}

/// Projection density of a record on `axes`, normalized over the grid.
/// Returns the density and the integral defect of `exp(cᵀθ - ψ)` before normalizing.
pub fn projection_density(run: &VariantRun, record: &StepRecord, axes: Vec<Axis>) -> Result<(GridDensity, f64)> {
    let (g, defect) = density_on_grid(record.theta.as_slice(), run.filter.family(), record.psi, run.frame.axes_to_z(&axes)?)?;
    Ok((GridDensity::new(axes, g.values().to_vec())?.normalized()?, defect))
}

/// Per-axis histogram grid covering the central `coverage` mass of the particles
/// and `μ ± 4σ` of each listed Gaussian summary, padded by 5% per side.
pub fn snapshot_axes(set: &ParticleSet, coverage: f64, cells: usize, extra: &[(&DVector<f64>, &DMatrix<f64>)]) -> Result<Vec<Axis>> {
    let d = set.dim;
    let n = set.len();
    let tail = ((1.0 - coverage) / 2.0).max(0.0);
    (0..d)
        .map(|k| {
            let mut xs: Vec<f64> = (0..n).map(|i| set.points[i * d + k]).collect();
            xs.sort_by(f64::total_cmp);
            let pick = |q: f64| xs[((q * (n - 1) as f64).round() as usize).min(n - 1)];
            let (mut lo, mut hi) = (pick(tail), pick(1.0 - tail));
            for (mu, sigma) in extra {
                let s = sigma[(k, k)].max(0.0).sqrt();
                lo = lo.min(mu[k] - 4.0 * s);
                hi = hi.max(mu[k] + 4.0 * s);
            }
            let pad = 0.05 * (hi - lo).max(f64::EPSILON);
            Ok(Axis::new(lo - pad, hi + pad, cells)?)
        })
        .collect()
}

/// Normalized histogram of a particle set; also returns the fraction of mass inside the grid.
pub fn particle_density(set: &ParticleSet, axes: Vec<Axis>) -> Result<(GridDensity, f64)> {
    let (g, coverage) = empirical_density(&set.points, Some(&set.weights), axes)?;
    Ok((g.normalized()?, coverage))
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `t,<name>...` table of Hellinger distances.
pub fn hellinger_table(names: &[String], rows: &[(f64, Vec<f64>)]) -> String {
    let mut out = String::from("t");
    for n in names {
        let _ = write!(out, ",hellinger_{n}");
    }
    out.push('\n');
    for (t, hs) in rows {
        let _ = write!(out, "{t}");
        for h in hs {
            let _ = write!(out, ",{h}");
        }
        out.push('\n');
    }
    out
}

/// Output directory with a manifest accumulated during a run.
pub struct RunDir {
    pub path: PathBuf,
    manifest: String,
    started: Instant,
}

impl RunDir {
    pub fn create(path: &Path, cfg: &ExperimentConfig, command: &str) -> Result<Self> {
        fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))?;
        let mut manifest = String::new();
        let _ = writeln!(manifest, "command: {command}");
        let _ = writeln!(manifest, "version: {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(manifest, "seed: {}", cfg.seed);
        let _ = writeln!(manifest, "particles: {}", cfg.particles);
        let _ = writeln!(manifest, "dt: {:e}", cfg.dt);
        let _ = writeln!(manifest, "steps: {}", cfg.steps());
        for v in &cfg.variants {
            let _ = writeln!(manifest, "variant: {v}");
        }
        Ok(Self { path: path.to_path_buf(), manifest, started: Instant::now() })
    }

    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.manifest, "{key}: {value}");
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let p = self.path.join(name);
        if let Some(dir) = p.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(&p, contents).with_context(|| format!("writing {}", p.display()))?;
        Ok(p)
    }

    /// Writes `manifest.txt` with the wall-clock time and the config echo.
    pub fn finish(mut self, cfg: &ExperimentConfig) -> Result<PathBuf> {
        let elapsed = self.started.elapsed().as_secs_f64();
        self.note("wall_clock_s", format!("{elapsed:.3}"));
        let mut text = std::mem::take(&mut self.manifest);
        text.push_str("--- config ---\n");
        text.push_str(&cfg.raw.text);
        self.write("manifest.txt", &text)
    }
}
