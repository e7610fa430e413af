//! One-dimensional Gauss rules and Smolyak sparse grids.
//!
//! Hypercube rules (Gauss–Chebyshev, Gauss–Patterson) live on `(-1, 1)^d`;
//! Gauss–Hermite rules live on `R^d` with weight function `exp(-|x|^2)`.
//! Level `l` of the Patterson and Hermite schedules uses `2^(l+1) - 1` points.

mod hermite;
mod patterson_table;
mod smolyak;

pub use hermite::gauss_hermite_1d;
pub use smolyak::smolyak;

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleFamily {
    GaussChebyshev,
    GaussPatterson,
    GaussHermite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Hypercube,
    RealSpace,
}

impl RuleFamily {
    pub fn domain(self) -> Domain {
        match self {
            RuleFamily::GaussChebyshev | RuleFamily::GaussPatterson => Domain::Hypercube,
            RuleFamily::GaussHermite => Domain::RealSpace,
        }
    }

    /// `-log ω(x̃)` for the rule's weight function, summed over coordinates.
    pub fn neg_log_weight_fn(self, x: &[f64]) -> f64 {
        match self {
            // ω = ∏ (1 - x²)^(-1/2)
            RuleFamily::GaussChebyshev => x.iter().map(|&t| 0.5 * (1.0 - t * t).ln()).sum(),
            RuleFamily::GaussPatterson => 0.0,
            // ω = exp(-x̃ᵀx̃)
            RuleFamily::GaussHermite => x.iter().map(|&t| t * t).sum(),
        }
    }
}

/// Number of points at level `l` of the nested level schedule.
pub fn level_size(level: usize) -> usize {
    (1usize << (level + 1)) - 1
}

/// A one-dimensional quadrature rule with sorted, distinct nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D {
    pub family: RuleFamily,
    /// Level in the `2^(l+1) - 1` schedule, when the rule belongs to it.
    pub level: Option<usize>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Chebyshev rule of the first kind: exact for `∫ p(x) (1-x²)^(-1/2) dx`, `deg p ≤ 2n-1`.
pub fn gauss_chebyshev(n: usize) -> Result<Rule1D> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss-Chebyshev rule needs at least one node".into()));
    }
    let mut nodes = vec![0.0; n];
    for i in 0..n / 2 {
        // cos((2i+1)π/(2n)) for the upper half, mirrored for exact symmetry
        let x = ((2 * i + 1) as f64 * PI / (2 * n) as f64).cos();
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
    }
    Ok(Rule1D {
        family: RuleFamily::GaussChebyshev,
        level: None,
        nodes,
        weights: vec![PI / n as f64; n],
    })
}

/// Nested Gauss–Patterson rule on `(-1, 1)` with unit weight function, levels `0..=7`.
pub fn gauss_patterson_1d(level: usize) -> Result<Rule1D> {
    if level > patterson_table::MAX_LEVEL {
        return Err(Error::UnsupportedRule(format!(
            "Gauss-Patterson level {level} exceeds table maximum {}",
            patterson_table::MAX_LEVEL
        )));
    }
    let stride = 1usize << (patterson_table::MAX_LEVEL - level);
    let nodes: Vec<f64> = (0..level_size(level))
        .map(|k| patterson_table::NODES_255[k * stride + stride - 1])
        .collect();
    Ok(Rule1D {
        family: RuleFamily::GaussPatterson,
        level: Some(level),
        nodes,
        weights: patterson_table::WEIGHTS[level].to_vec(),
    })
}

/// Gauss–Hermite rule at level `l` of the `2^(l+1) - 1` schedule.
pub fn gauss_hermite_level(level: usize) -> Result<Rule1D> {
    if level > patterson_table::MAX_LEVEL {
        return Err(Error::UnsupportedRule(format!("Gauss-Hermite level {level} beyond supported range")));
    }
    let mut rule = gauss_hermite_1d(level_size(level))?;
    rule.level = Some(level);
    Ok(rule)
}

/// Quadrature nodes and weights on the canonical hypercube or on `R^d`.
///
/// Smolyak grids may carry negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    dim: usize,
    level: Option<usize>,
    family: RuleFamily,
    /// Row-major `N × d`.
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(dim: usize, level: Option<usize>, family: RuleFamily, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 || nodes.len() != dim * weights.len() {
            return Err(Error::DimensionMismatch { expected: dim * weights.len(), got: nodes.len() });
        }
        Ok(Self { dim, level, family, nodes, weights })
    }

    pub fn from_rule(rule: &Rule1D) -> Self {
        Self {
            dim: 1,
            level: rule.level,
            family: rule.family,
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> Option<usize> {
        self.level
    }

    pub fn family(&self) -> RuleFamily {
        self.family
    }

    pub fn domain(&self) -> Domain {
        self.family.domain()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ wᵢ g(x̃ᵢ)`.
    pub fn integrate(&self, g: impl Fn(&[f64]) -> f64) -> f64 {
        self.nodes().zip(&self.weights).map(|(x, &w)| w * g(x)).sum()
    }

    /// Drops nodes with `|w| < threshold`, keeping survivors in order.
    pub fn prune(&self, threshold: f64) -> Self {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut weights = Vec::with_capacity(self.weights.len());
        for (x, &w) in self.nodes().zip(&self.weights) {
            if w.abs() >= threshold {
                nodes.extend_from_slice(x);
                weights.push(w);
            }
        }
        Self { nodes, weights, ..self.clone() }
    }

    /// CSV with columns `x1..xd,weight`, values in round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for j in 0..self.dim {
            let _ = write!(s, "x{},", j + 1);
        }
        s.push_str("weight\n");
        for (x, w) in self.nodes().zip(&self.weights) {
            for v in x {
                let _ = write!(s, "{v:?},");
            }
            let _ = writeln!(s, "{w:?}");
        }
        s
    }
}
