use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, Error, Result};
use crate::model::ModelSpec;

/// Independent random substreams derived from one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Truth = 0,
    Measurement = 1,
    Particles = 2,
    Initial = 3,
}

/// Deterministic generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Euler–Maruyama path and measurement increments.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub dim: usize,
    /// `steps + 1` times starting at 0.
    pub times: Vec<f64>,
    /// `(steps + 1) × d`, row-major, starting at `x0`.
    pub states: Vec<f64>,
    /// `steps` increments `dy_k = h(x_k)dt + √dt ε_k`.
    pub dy: Vec<Vec<f64>>,
    pub seed: u64,
}

impl SimulationOutput {
    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn steps(&self) -> usize {
        self.dy.len()
    }
}

/// Simulates `dx = f dt + ρ dW`, `dy = h dt + dV` with unit measurement noise.
pub fn simulate(model: &ModelSpec, x0: &[f64], dt: f64, steps: usize, seed: u64) -> Result<SimulationOutput> {
    check_dim(model.dim(), x0.len())?;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
    }
    let cm = model.compile();
    let d = model.dim();
    let dw = model.noise_dim();
    let dy_dim = model.obs_dim();
    let mut truth = stream_rng(seed, Stream::Truth);
    let mut meas = stream_rng(seed, Stream::Measurement);
    let mut x = x0.to_vec();
    let mut states = Vec::with_capacity((steps + 1) * d);
    states.extend_from_slice(&x);
    let mut times = Vec::with_capacity(steps + 1);
    times.push(0.0);
    let mut dys = Vec::with_capacity(steps);
    let mut z = vec![0.0; dw];
    let mut h = vec![0.0; dy_dim];
    let sdt = dt.sqrt();
    for k in 0..steps {
        cm.obs_into(&x, &mut h);
        let dy: Vec<f64> = h
            .iter()
            .map(|hk| {
                let e: f64 = StandardNormal.sample(&mut meas);
                hk * dt + sdt * e
            })
            .collect();
        dys.push(dy);
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(&mut truth);
        }
        cm.em_step(&mut x, dt, &z);
        states.extend_from_slice(&x);
        times.push((k + 1) as f64 * dt);
    }
    Ok(SimulationOutput { dim: d, times, states, dy: dys, seed })
}
