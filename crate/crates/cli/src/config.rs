//! Experiment configuration files.
//!
//! Flat `key = value` lines set scalars and whitespace-separated vectors.
//! Model polynomials follow in sections whose bodies use the
//! `e1 ... ed coeff` line format:
//!
//! ```text
//! [drift i]          component i of f, 1-based
//! [diffusion i j]    entry (i, j) of ρ
//! [obs i]            component i of h
//! ```
//!
//! `#` starts a comment everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use nalgebra::DMatrix;
use projection_filter::{GaussianVariant, ModelSpec, SparsePolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Cubic,
    Vdp,
    Sir,
    Linear,
}

impl FromStr for ExperimentKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cubic" => Ok(Self::Cubic),
            "vdp" => Ok(Self::Vdp),
            "sir" => Ok(Self::Sir),
            "linear" => Ok(Self::Linear),
            _ => bail!("unknown experiment '{s}'"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BijectionKind {
    Static,
    ErfGaussian,
    GhAffine,
}

impl BijectionKind {
    pub fn gaussian_variant(self) -> Option<GaussianVariant> {
        match self {
            Self::Static => None,
            Self::ErfGaussian => Some(GaussianVariant::ErfHypercube),
            Self::GhAffine => Some(GaussianVariant::HermiteAffine),
        }
    }
}

impl FromStr for BijectionKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(Self::Static),
            "erf_gaussian" => Ok(Self::ErfGaussian),
            "gh_affine" => Ok(Self::GhAffine),
            _ => bail!("unknown bijection '{s}' (expected static, erf_gaussian or gh_affine)"),
        }
    }
}

impl fmt::Display for BijectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Static => "static",
            Self::ErfGaussian => "erf_gaussian",
            Self::GhAffine => "gh_affine",
        })
    }
}

/// Quadrature choice of a filter variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureSpec {
    /// One-dimensional Gauss–Chebyshev rule with `n` nodes.
    Chebyshev(usize),
    /// One-dimensional Gauss–Hermite rule with `n` nodes.
    Hermite(usize),
    /// Sparse Gauss–Patterson grid of the given level.
    Patterson(usize),
    /// Sparse Gauss–Hermite grid of the given level.
    HermiteSparse(usize),
}

impl QuadratureSpec {
    pub fn is_real_space(self) -> bool {
        matches!(self, Self::Hermite(_) | Self::HermiteSparse(_))
    }

    pub fn with_level(self, level: usize) -> Self {
        match self {
            Self::Patterson(_) => Self::Patterson(level),
            Self::HermiteSparse(_) => Self::HermiteSparse(level),
            other => other,
        }
    }
}

impl fmt::Display for QuadratureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Chebyshev(n) => write!(f, "chebyshev/{n}"),
            Self::Hermite(n) => write!(f, "hermite/{n}"),
            Self::Patterson(l) => write!(f, "patterson/{l}"),
            Self::HermiteSparse(l) => write!(f, "hermite-sparse/{l}"),
        }
    }
}

/// `name:bijection/quadrature/size[/prune]`, e.g. `GCQ-9:erf_gaussian/chebyshev/9`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantSpec {
    pub name: String,
    pub bijection: BijectionKind,
    pub quadrature: QuadratureSpec,
    /// Drop grid nodes with `|w|` below this.
    pub prune: Option<f64>,
    /// Covariance factor of the node-placing Gaussian.
    pub spread: f64,
}

impl FromStr for VariantSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').ok_or_else(|| anyhow!("variant '{s}' lacks a 'name:' prefix"))?;
        let parts: Vec<&str> = rest.split('/').collect();
        if parts.len() < 3 {
            bail!("variant '{s}' must read name:bijection/quadrature/size[/prune][/spread=f]");
        }
        let bijection: BijectionKind = parts[0].parse()?;
        let size: usize = parts[2].parse().with_context(|| format!("variant '{s}': bad size"))?;
        let quadrature = match parts[1] {
            "chebyshev" => QuadratureSpec::Chebyshev(size),
            "hermite" => QuadratureSpec::Hermite(size),
            "patterson" => QuadratureSpec::Patterson(size),
            "hermite-sparse" => QuadratureSpec::HermiteSparse(size),
            q => bail!("variant '{s}': unknown quadrature '{q}'"),
        };
        let mut prune = None;
        let mut spread = 1.0;
        for (i, opt) in parts[3..].iter().enumerate() {
            let (key, value) = opt.split_once('=').unwrap_or(if i == 0 { ("prune", opt) } else { ("", opt) });
            let v: f64 = value.parse().with_context(|| format!("variant '{s}': bad value in '{opt}'"))?;
            match key {
                "prune" => prune = Some(v),
                "spread" if v > 0.0 => spread = v,
                "spread" => bail!("variant '{s}': spread must be positive"),
                _ => bail!("variant '{s}': unknown option '{opt}'"),
            }
        }
        if spread != 1.0 && bijection == BijectionKind::Static {
            bail!("variant '{s}': spread applies to Gaussian bijections only");
        }
        if quadrature.is_real_space() != (bijection == BijectionKind::GhAffine) {
            bail!("variant '{s}': gh_affine requires a Hermite grid and hypercube grids require static or erf_gaussian");
        }
        Ok(Self { name: name.trim().to_string(), bijection, quadrature, prune, spread })
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}/{}", self.name, self.bijection, self.quadrature)?;
        if let Some(p) = self.prune {
            write!(f, "/{p:e}")?;
        }
        if self.spread != 1.0 {
            write!(f, "/spread={}", self.spread)?;
        }
        Ok(())
    }
}

/// Raw key/value pairs and model sections of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub values: BTreeMap<String, String>,
    pub sections: Vec<(String, Vec<usize>, Vec<(usize, String)>)>,
    pub text: String,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RawConfig { text: text.to_string(), ..Default::default() };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('[') {
                let header = header.strip_suffix(']').ok_or_else(|| anyhow!("line {line_no}: unterminated section header"))?;
                let mut words = header.split_whitespace();
                let name = words.next().ok_or_else(|| anyhow!("line {line_no}: empty section header"))?.to_string();
                let idx = words
                    .map(|w| w.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .with_context(|| format!("line {line_no}: bad section index"))?;
                cfg.sections.push((name, idx, Vec::new()));
            } else if let Some((_, _, body)) = cfg.sections.last_mut() {
                body.push((line_no, line.to_string()));
            } else {
                let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {line_no}: expected key = value"))?;
                let key = k.trim().to_string();
                if cfg.values.insert(key.clone(), v.trim().to_string()).is_some() {
                    bail!("line {line_no}: duplicate key '{key}'");
                }
            }
        }
        Ok(cfg)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("key '{key}': {e}")))
            .transpose()
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?.ok_or_else(|| anyhow!("missing key '{key}'"))
    }

    pub fn vector(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.values
            .get(key)
            .map(|v| {
                v.split_whitespace()
                    .map(|x| x.parse::<f64>().map_err(|e| anyhow!("key '{key}': {e}")))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()
    }

    fn polynomial(&self, dim: usize, name: &str, idx: &[usize]) -> Result<Option<SparsePolynomial>> {
        let mut found = None;
        for (n, i, body) in &self.sections {
            if n == name && i == idx {
                if found.is_some() {
                    bail!("duplicate section [{name} {idx:?}]");
                }
                let text: String = body.iter().map(|(_, l)| format!("{l}\n")).collect();
                let first = body.first().map(|(l, _)| *l).unwrap_or(0);
                let p = SparsePolynomial::parse_text(dim, &text)
                    .with_context(|| format!("section [{name} {idx:?}] starting at line {first}"))?;
                found = Some(p);
            }
        }
        Ok(found)
    }
}

/// Typed experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub raw: RawConfig,
    pub model: ModelSpec,
    pub family_degree: u32,
    pub variants: Vec<VariantSpec>,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub x0: Vec<f64>,
    /// Initial natural parameter; derived from `initial_mean`/`initial_cov` when absent.
    pub theta0: Option<Vec<f64>>,
    pub initial_mean: Option<Vec<f64>>,
    pub initial_cov: Option<Vec<f64>>,
    /// Measurement noise scale `k` in `dy = h dt + k dV`; data are rescaled to unit noise.
    pub obs_noise_scale: f64,
    pub record_every: usize,
    pub particles: usize,
    pub fd_axis: Option<(f64, f64, usize)>,
    pub hist_cells: usize,
    pub hist_coverage: f64,
    pub snapshot_times: Vec<f64>,
    pub hellinger_every: usize,
    /// Run the projection filter in `z = (x - m) / s` with `m`, `s` the
    /// initial mean and standard deviations.
    pub standardize: bool,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw = RawConfig::parse(text)?;
        let kind: ExperimentKind = raw.require("experiment")?;
        let dim: usize = raw.require("dim")?;
        let noise_dim: usize = raw.get("noise_dim")?.unwrap_or(dim);
        let obs_dim: usize = raw.get("obs_dim")?.unwrap_or(1);
        if dim == 0 || noise_dim == 0 || obs_dim == 0 {
            bail!("dimensions must be positive");
        }
        for (name, idx, _) in &raw.sections {
            let ok = match name.as_str() {
                "drift" => idx.len() == 1 && (1..=dim).contains(&idx[0]),
                "obs" => idx.len() == 1 && (1..=obs_dim).contains(&idx[0]),
                "diffusion" => idx.len() == 2 && (1..=dim).contains(&idx[0]) && (1..=noise_dim).contains(&idx[1]),
                _ => false,
            };
            if !ok {
                bail!("unexpected section [{name} {idx:?}]");
            }
        }
        let zero = || SparsePolynomial::zero(dim);
        let drift = (1..=dim)
            .map(|i| Ok(raw.polynomial(dim, "drift", &[i])?.unwrap_or_else(zero)))
            .collect::<Result<Vec<_>>>()?;
        let diffusion = (1..=dim)
            .map(|i| {
                (1..=noise_dim)
                    .map(|j| Ok(raw.polynomial(dim, "diffusion", &[i, j])?.unwrap_or_else(zero)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let obs = (1..=obs_dim)
            .map(|i| Ok(raw.polynomial(dim, "obs", &[i])?.unwrap_or_else(zero)))
            .collect::<Result<Vec<_>>>()?;
        let q = match raw.vector("noise_cov")? {
            Some(v) if v.len() == noise_dim * noise_dim => DMatrix::from_row_slice(noise_dim, noise_dim, &v),
            Some(v) => bail!("noise_cov needs {} entries, found {}", noise_dim * noise_dim, v.len()),
            None => DMatrix::identity(noise_dim, noise_dim),
        };
        let obs_noise_scale: f64 = raw.get("obs_noise_scale")?.unwrap_or(1.0);
        if !(obs_noise_scale > 0.0) {
            bail!("obs_noise_scale must be positive");
        }
        let model = ModelSpec::new(drift, diffusion, q, obs)?.with_obs_scaled(1.0 / obs_noise_scale);
        let variants = raw
            .values
            .get("variants")
            .map(|v| v.split(',').map(|s| s.trim().parse::<VariantSpec>()).collect::<Result<Vec<_>>>())
            .transpose()?
            .unwrap_or_default();
        for v in &variants {
            if dim > 1 && matches!(v.quadrature, QuadratureSpec::Chebyshev(_) | QuadratureSpec::Hermite(_)) {
                bail!("variant '{}' uses a one-dimensional rule in dimension {dim}", v.name);
            }
        }
        let dt: f64 = raw.require("dt")?;
        let t_end: f64 = raw.require("t_end")?;
        if !(dt > 0.0) || !(t_end > 0.0) {
            bail!("dt and t_end must be positive");
        }
        let x0 = raw.vector("x0")?.ok_or_else(|| anyhow!("missing key 'x0'"))?;
        if x0.len() != dim {
            bail!("x0 has {} entries for dimension {dim}", x0.len());
        }
        let theta0 = raw.vector("theta0")?;
        let initial_mean = raw.vector("initial_mean")?;
        let initial_cov = raw.vector("initial_cov")?;
        if theta0.is_none() && (initial_mean.is_none() || initial_cov.is_none()) {
            bail!("either theta0 or initial_mean and initial_cov are required");
        }
        if let Some(m) = &initial_mean {
            if m.len() != dim {
                bail!("initial_mean has {} entries for dimension {dim}", m.len());
            }
        }
        if let Some(c) = &initial_cov {
            if c.len() != dim * dim {
                bail!("initial_cov needs {} entries", dim * dim);
            }
        }
        let fd_axis = match (raw.get::<f64>("fd_min")?, raw.get::<f64>("fd_max")?, raw.get::<usize>("fd_cells")?) {
            (Some(a), Some(b), Some(n)) => Some((a, b, n)),
            (None, None, None) => None,
            _ => bail!("fd_min, fd_max and fd_cells must be given together"),
        };
        let cfg = Self {
            kind,
            model,
            family_degree: raw.require("family_degree")?,
            variants,
            dt,
            t_end,
            seed: raw.get("seed")?.unwrap_or(0),
            x0,
            theta0,
            initial_mean,
            initial_cov,
            obs_noise_scale,
            record_every: raw.get("record_every")?.unwrap_or(1),
            particles: raw.get("particles")?.unwrap_or(100_000),
            fd_axis,
            hist_cells: raw.get("hist_cells")?.unwrap_or(60),
            hist_coverage: raw.get("hist_coverage")?.unwrap_or(0.999),
            snapshot_times: raw.vector("snapshot_times")?.unwrap_or_default(),
            hellinger_every: raw.get("hellinger_every")?.unwrap_or(1),
            standardize: raw.get("standardize")?.unwrap_or(false),
            raw,
        };
        if cfg.record_every == 0 || cfg.hellinger_every == 0 {
            bail!("record_every and hellinger_every must be positive");
        }
        if cfg.standardize && (cfg.theta0.is_some() || cfg.initial_cov.is_none()) {
            bail!("standardize needs initial_mean and initial_cov and no theta0");
        }
        Ok(cfg)
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// Number of filter steps covering `[0, t_end]`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn apply_overrides(&mut self, seed: Option<u64>, particles: Option<usize>, level: Option<usize>) {
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(n) = particles {
            self.particles = n;
        }
        if let Some(l) = level {
            for v in &mut self.variants {
                v.quadrature = v.quadrature.with_level(l);
            }
        }
    }
}
