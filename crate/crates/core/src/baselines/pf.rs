use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::sde::{stream_rng, Stream};
use crate::error::{check_dim, Error, Result};
use crate::model::ModelSpec;

/// Weighted particle set; `points` is `n × d`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    pub dim: usize,
    pub points: Vec<f64>,
    /// Normalized weights.
    pub weights: Vec<f64>,
}

impl ParticleSet {
    pub fn uniform(dim: usize, points: Vec<f64>) -> Result<Self> {
        if dim == 0 || points.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim, got: points.len() });
        }
        let n = points.len() / dim;
        if n == 0 {
            return Err(Error::Empty("particle set"));
        }
        Ok(Self { dim, points, weights: vec![1.0 / n as f64; n] })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn particle(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn ess(&self) -> f64 {
        1.0 / self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    /// Weighted mean.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for (i, w) in self.weights.iter().enumerate() {
            for (k, mk) in m.iter_mut().enumerate() {
                *mk += w * self.points[i * self.dim + k];
            }
        }
        m
    }

    /// Weighted covariance, row-major.
    pub fn covariance(&self) -> Vec<f64> {
        let d = self.dim;
        let mean = self.mean();
        let mut c = vec![0.0; d * d];
        for (i, w) in self.weights.iter().enumerate() {
            let p = self.particle(i);
            for a in 0..d {
                for b in 0..d {
                    c[a * d + b] += w * (p[a] - mean[a]) * (p[b] - mean[b]);
                }
            }
        }
        c
    }
}

/// Systematic resampling: offspring indices for thresholds `(u + k)/n`, `u ∈ [0, 1)`.
pub fn systematic_resample(weights: &[f64], u: f64) -> Vec<usize> {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut out = Vec::with_capacity(n);
    let mut cumulative = weights[0] / total;
    let mut j = 0;
    for k in 0..n {
        let threshold = (u + k as f64) / n as f64;
        while threshold >= cumulative && j + 1 < n {
            j += 1;
            cumulative += weights[j] / total;
        }
        out.push(j);
    }
    out
}

/// Bootstrap particle filter with Euler–Maruyama propagation and systematic
/// resampling when the effective sample size drops below `n/2`.
#[derive(Debug, Clone)]
pub struct BootstrapFilter {
    model: ModelSpec,
    /// Number of resampling events in the last run.
    pub resample_count: usize,
}

impl BootstrapFilter {
    pub fn new(model: ModelSpec) -> Self {
        Self { model, resample_count: 0 }
    }

    /// Runs over `dys`, returning `(t, particles)` every `record_every` steps
    /// (plus the initial and final sets).
    pub fn run(
        &mut self,
        initial: ParticleSet,
        dt: f64,
        dys: &[Vec<f64>],
        seed: u64,
        record_every: usize,
    ) -> Result<Vec<(f64, ParticleSet)>> {
        let every = record_every.max(1);
        let last = dys.len();
        let mut out = Vec::new();
        self.run_observed(initial, dt, dys, seed, |step, t, set| {
            if step % every == 0 || step == last {
                out.push((t, set.clone()));
            }
        })?;
        Ok(out)
    }

    /// Runs over `dys`, calling `observe(step, t, particles)` after every step
    /// and once for the initial set with `step = 0`.
    pub fn run_observed(
        &mut self,
        initial: ParticleSet,
        dt: f64,
        dys: &[Vec<f64>],
        seed: u64,
        mut observe: impl FnMut(usize, f64, &ParticleSet),
    ) -> Result<()> {
        check_dim(self.model.dim(), initial.dim)?;
        if initial.len() < 2 {
            return Err(Error::InvalidArgument("particle filter needs at least two particles".into()));
        }
        let cm = self.model.compile();
        let d = cm.dim();
        let dw = cm.noise_dim();
        let dy_dim = cm.obs_dim();
        let mut rng = stream_rng(seed, Stream::Particles);
        let mut set = initial;
        let n = set.len();
        let mut logw: Vec<f64> = set.weights.iter().map(|w| w.ln()).collect();
        observe(0, 0.0, &set);
        let mut z = vec![0.0; dw];
        let mut h = vec![0.0; dy_dim];
        self.resample_count = 0;
        for (k, dy) in dys.iter().enumerate() {
            let step = k + 1;
            check_dim(dy_dim, dy.len())?;
            for i in 0..n {
                let x = &mut set.points[i * d..(i + 1) * d];
                for zi in z.iter_mut() {
                    *zi = StandardNormal.sample(&mut rng);
                }
                cm.em_step(x, dt, &z);
                cm.obs_into(x, &mut h);
                let mut inc = 0.0;
                for (hk, dyk) in h.iter().zip(dy) {
                    inc += hk * dyk - 0.5 * hk * hk * dt;
                }
                logw[i] += inc;
            }
            let top = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !top.is_finite() {
                return Err(Error::WeightDegeneracy { step });
            }
            let mut total = 0.0;
            for (w, l) in set.weights.iter_mut().zip(&logw) {
                *w = (l - top).exp();
                total += *w;
            }
            for w in set.weights.iter_mut() {
                *w /= total;
            }
            if set.ess() < n as f64 / 2.0 {
                let u: f64 = rng.random();
                let idx = systematic_resample(&set.weights, u);
                let mut points = Vec::with_capacity(n * d);
                for &j in &idx {
                    points.extend_from_slice(&set.points[j * d..(j + 1) * d]);
                }
                set.points = points;
                set.weights.fill(1.0 / n as f64);
                logw.fill(0.0);
                self.resample_count += 1;
            } else {
                for (l, w) in logw.iter_mut().zip(&set.weights) {
                    *l = w.ln();
                }
            }
            observe(step, step as f64 * dt, &set);
        }
        Ok(())
    }
}

/// Convenience wrapper: `n` particles drawn by `sampler` from the initial-condition stream.
pub fn bootstrap_pf(
    model: &ModelSpec,
    n_particles: usize,
    mut sampler: impl FnMut(&mut rand_chacha::ChaCha20Rng) -> Vec<f64>,
    dt: f64,
    dys: &[Vec<f64>],
    seed: u64,
    record_every: usize,
) -> Result<Vec<(f64, ParticleSet)>> {
    if n_particles < 2 {
        return Err(Error::InvalidArgument("particle filter needs at least two particles".into()));
    }
    let mut rng = stream_rng(seed, Stream::Initial);
    let mut points = Vec::with_capacity(n_particles * model.dim());
    for _ in 0..n_particles {
        let x = sampler(&mut rng);
        check_dim(model.dim(), x.len())?;
        points.extend(x);
    }
    let init = ParticleSet::uniform(model.dim(), points)?;
    BootstrapFilter::new(model.clone()).run(init, dt, dys, seed, record_every)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::SparsePolynomial;
    use nalgebra::DMatrix;

    #[test]
    fn two_equal_weights() {
        for u in [0.0, 0.3, 0.999] {
            assert_eq!(systematic_resample(&[0.5, 0.5], u), vec![0, 1]);
        }
    }

    #[test]
    fn expected_offspring_counts() {
        use rand::SeedableRng;
        let w = [0.1, 0.4, 0.05, 0.3, 0.15];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0usize; 5];
        let trials = 20_000;
        for _ in 0..trials {
            for j in systematic_resample(&w, rng.random()) {
                counts[j] += 1;
            }
        }
        for (c, wi) in counts.iter().zip(w) {
            let expected = trials as f64 * 5.0 * wi;
            assert!((*c as f64 / expected - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn no_information_keeps_uniform_weights() {
        let model = ModelSpec::new(
            vec![SparsePolynomial::zero(1)],
            vec![vec![SparsePolynomial::constant(1, 1.0)]],
            DMatrix::identity(1, 1),
            vec![SparsePolynomial::zero(1)],
        )
        .unwrap();
        let mut pf = BootstrapFilter::new(model);
        let init = ParticleSet::uniform(1, (0..100).map(|i| i as f64 * 0.01).collect()).unwrap();
        let out = pf.run(init, 1e-2, &vec![vec![0.3]; 20], 0, 5).unwrap();
        assert_eq!(pf.resample_count, 0);
        assert_eq!(out.len(), 5);
        for (_, s) in &out {
            assert!(s.weights.iter().all(|w| (w - 0.01).abs() < 1e-15));
        }
    }

    #[test]
    fn degenerate_weights_error() {
        let model = ModelSpec::new(
            vec![SparsePolynomial::zero(1)],
            vec![vec![SparsePolynomial::constant(1, 1.0)]],
            DMatrix::identity(1, 1),
            vec![SparsePolynomial::var(1, 0)],
        )
        .unwrap();
        let mut pf = BootstrapFilter::new(model);
        let init = ParticleSet::uniform(1, vec![0.0, 1.0]).unwrap();
        assert!(matches!(pf.run(init, 1e-2, &[vec![f64::NAN]], 0, 1), Err(Error::WeightDegeneracy { step: 1 })));
    }
}
