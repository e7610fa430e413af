use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Uniform axis of `count` cells on `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(max > min) || count == 0 || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidArgument(format!("bad axis [{min}, {max}] x {count}")));
        }
        Ok(Self { min, max, count })
    }

    pub fn width(&self) -> f64 {
        (self.max - self.min) / self.count as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.min + (i as f64 + 0.5) * self.width()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.center(i)).collect()
    }

    /// Cell containing `x`, if inside.
    pub fn cell(&self, x: f64) -> Option<usize> {
        if !(x >= self.min && x < self.max) {
            return None;
        }
        Some((((x - self.min) / self.width()) as usize).min(self.count - 1))
    }
}

/// Density values on the cell centers of a tensor grid, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    axes: Vec<Axis>,
    values: Vec<f64>,
}

impl GridDensity {
    pub fn new(axes: Vec<Axis>, values: Vec<f64>) -> Result<Self> {
        let n: usize = axes.iter().map(|a| a.count).product();
        if axes.is_empty() {
            return Err(Error::Empty("axis list"));
        }
        if values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: values.len() });
        }
        Ok(Self { axes, values })
    }

    /// Evaluates `f` at every cell center.
    pub fn from_fn(axes: Vec<Axis>, mut f: impl FnMut(&[f64]) -> f64) -> Result<Self> {
        let n: usize = axes.iter().map(|a| a.count).product();
        let mut values = Vec::with_capacity(n);
        let mut x = vec![0.0; axes.len()];
        for flat in 0..n {
            cell_center(&axes, flat, &mut x);
            values.push(f(&x));
        }
        Self::new(axes, values)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::width).product()
    }

    /// Center of cell `flat`.
    pub fn center(&self, flat: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        cell_center(&self.axes, flat, &mut x);
        x
    }

    /// Flat index of `(i₁, …, i_d)`.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (i, a)| acc * a.count + i)
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_volume()
    }

    pub fn normalized(&self) -> Result<Self> {
        let z = self.integral();
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::NonPositiveSum(z));
        }
        Ok(Self { axes: self.axes.clone(), values: self.values.iter().map(|v| v / z).collect() })
    }

    /// Mean and row-major covariance under the (normalized) cell masses.
    pub fn moments(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim();
        let z: f64 = self.values.iter().sum();
        let mut mean = vec![0.0; d];
        let mut second = vec![0.0; d * d];
        let mut x = vec![0.0; d];
        for (flat, v) in self.values.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            cell_center(&self.axes, flat, &mut x);
            let p = v / z;
            for i in 0..d {
                mean[i] += p * x[i];
                for j in 0..d {
                    second[i * d + j] += p * x[i] * x[j];
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                second[i * d + j] -= mean[i] * mean[j];
            }
        }
        (mean, second)
    }

    /// CSV dump: `#`-prefixed axis descriptors, then `x1..xd,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, a) in self.axes.iter().enumerate() {
            let _ = writeln!(out, "# axis {} min={} max={} count={}", k + 1, a.min, a.max, a.count);
        }
        let header: Vec<String> = (1..=self.dim()).map(|i| format!("x{i}")).chain(["value".to_string()]).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        let mut x = vec![0.0; self.dim()];
        for (flat, v) in self.values.iter().enumerate() {
            cell_center(&self.axes, flat, &mut x);
            for xi in &x {
                let _ = write!(out, "{xi},");
            }
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut axes = Vec::new();
        let mut values = Vec::new();
        let mut header_seen = false;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: &str| Error::Parse { line: no + 1, message: message.to_string() };
            if let Some(rest) = line.strip_prefix("# axis") {
                let mut min = None;
                let mut max = None;
                let mut count = None;
                for tok in rest.split_whitespace().skip(1) {
                    match tok.split_once('=') {
                        Some(("min", v)) => min = v.parse::<f64>().ok(),
                        Some(("max", v)) => max = v.parse::<f64>().ok(),
                        Some(("count", v)) => count = v.parse::<usize>().ok(),
                        _ => return Err(bad("unknown axis field")),
                    }
                }
                match (min, max, count) {
                    (Some(a), Some(b), Some(n)) => axes.push(Axis::new(a, b, n)?),
                    _ => return Err(bad("incomplete axis descriptor")),
                }
            } else if !header_seen {
                header_seen = true;
            } else {
                let v = line.rsplit(',').next().and_then(|v| v.parse::<f64>().ok()).ok_or_else(|| bad("bad value"))?;
                values.push(v);
            }
        }
        Self::new(axes, values)
    }
}

fn cell_center(axes: &[Axis], mut flat: usize, out: &mut [f64]) {
    for k in (0..axes.len()).rev() {
        let i = flat % axes[k].count;
        flat /= axes[k].count;
        out[k] = axes[k].center(i);
    }
}

/// Weighted histogram of particles normalized to a density; also returns the
/// fraction of weight that fell inside the grid. Coverage below 99.9% is logged.
pub fn empirical_density(points: &[f64], weights: Option<&[f64]>, axes: Vec<Axis>) -> Result<(GridDensity, f64)> {
    let d = axes.len();
    if d == 0 {
        return Err(Error::Empty("axis list"));
    }
    if points.is_empty() {
        return Err(Error::Empty("particle set"));
    }
    if points.len() % d != 0 {
        return Err(Error::DimensionMismatch { expected: d, got: points.len() % d });
    }
    let n = points.len() / d;
    if let Some(w) = weights {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
    }
    let cells: usize = axes.iter().map(|a| a.count).product();
    let mut counts = vec![0.0; cells];
    let mut total = 0.0;
    let mut inside = 0.0;
    'particles: for i in 0..n {
        let w = weights.map_or(1.0, |w| w[i]);
        total += w;
        let mut flat = 0;
        for (k, a) in axes.iter().enumerate() {
            match a.cell(points[i * d + k]) {
                Some(c) => flat = flat * a.count + c,
                None => continue 'particles,
            }
        }
        counts[flat] += w;
        inside += w;
    }
    if !(total > 0.0) {
        return Err(Error::Empty("particle weight"));
    }
    let coverage = inside / total;
    if coverage < 0.999 {
        log::warn!("density grid covers only {:.4}% of particle mass", 100.0 * coverage);
    }
    let vol: f64 = axes.iter().map(Axis::width).product();
    let values = counts.into_iter().map(|c| c / (total * vol)).collect();
    Ok((GridDensity::new(axes, values)?, coverage))
}
