use std::collections::BTreeMap;

use super::{gauss_hermite_level, gauss_patterson_1d, QuadratureGrid, Rule1D, RuleFamily};
use crate::error::{Error, Result};

/// Coordinates closer than this are treated as the same node when merging.
const MERGE_TOL: f64 = 1e-12;

/// Smolyak sparse grid of total level `level` in `dim` dimensions.
///
/// Uses the combination formula
/// `Σ_{l-d+1 ≤ |i| ≤ l} (-1)^(l-|i|) C(d-1, l-|i|) Q_{i_1} ⊗ ... ⊗ Q_{i_d}`
/// with zero-based 1-D levels, then merges coincident nodes by summing weights.
pub fn smolyak(dim: usize, level: usize, family: RuleFamily) -> Result<QuadratureGrid> {
    if dim == 0 {
        return Err(Error::InvalidArgument("sparse grid dimension must be positive".into()));
    }
    let rules: Vec<Rule1D> = (0..=level)
        .map(|l| match family {
            RuleFamily::GaussPatterson => gauss_patterson_1d(l),
            RuleFamily::GaussHermite => gauss_hermite_level(l),
            RuleFamily::GaussChebyshev => Err(Error::UnsupportedRule(
                "Gauss-Chebyshev rules are not used for sparse grids".into(),
            )),
        })
        .collect::<Result<_>>()?;

    // Canonical coordinate values shared by every axis.
    let mut canon: Vec<f64> = rules.iter().flat_map(|r| r.nodes.iter().copied()).collect();
    canon.sort_by(f64::total_cmp);
    canon.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
    let lookup = |x: f64| -> usize {
        let pos = canon.partition_point(|&c| c < x - MERGE_TOL);
        debug_assert!((canon[pos] - x).abs() <= MERGE_TOL);
        pos
    };
    let rule_index: Vec<Vec<usize>> = rules
        .iter()
        .map(|r| r.nodes.iter().map(|&x| lookup(x)).collect())
        .collect();

    let mut acc: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let lowest = (level + 1).saturating_sub(dim);
    for total in lowest..=level {
        let gap = level - total;
        let coef = if gap % 2 == 0 { 1.0 } else { -1.0 } * binomial(dim - 1, gap);
        for levels in compositions(total, dim) {
            tensor_accumulate(&levels, &rules, &rule_index, coef, &mut acc);
        }
    }

    let mut nodes = Vec::with_capacity(acc.len() * dim);
    let mut weights = Vec::with_capacity(acc.len());
    for (key, w) in acc {
        if w == 0.0 {
            continue;
        }
        nodes.extend(key.iter().map(|&k| canon[k]));
        weights.push(w);
    }
    QuadratureGrid::new(dim, Some(level), family, nodes, weights)
}

fn tensor_accumulate(
    levels: &[usize],
    rules: &[Rule1D],
    rule_index: &[Vec<usize>],
    coef: f64,
    acc: &mut BTreeMap<Vec<usize>, f64>,
) {
    let dim = levels.len();
    let sizes: Vec<usize> = levels.iter().map(|&l| rules[l].len()).collect();
    let mut counter = vec![0usize; dim];
    loop {
        let mut w = coef;
        let mut key = Vec::with_capacity(dim);
        for (axis, &c) in counter.iter().enumerate() {
            let l = levels[axis];
            w *= rules[l].weights[c];
            key.push(rule_index[l][c]);
        }
        *acc.entry(key).or_insert(0.0) += w;

        let mut axis = 0;
        loop {
            counter[axis] += 1;
            if counter[axis] < sizes[axis] {
                break;
            }
            counter[axis] = 0;
            axis += 1;
            if axis == dim {
                return;
            }
        }
    }
}

/// All `dim`-tuples of non-negative integers summing to `total`.
fn compositions(total: usize, dim: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=remaining {
            cur.push(v);
            rec(remaining - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, dim, &mut Vec::with_capacity(dim), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{gauss_hermite_1d, Domain};
    use std::f64::consts::PI;

    #[test]
    fn patterson_d2_level4_has_129_nodes() {
        let g = smolyak(2, 4, RuleFamily::GaussPatterson).unwrap();
        assert_eq!(g.len(), 129);
        assert_eq!(g.domain(), Domain::Hypercube);
        assert!((g.weight_sum() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn patterson_d2_level4_product_moment() {
        let g = smolyak(2, 4, RuleFamily::GaussPatterson).unwrap();
        let got = g.integrate(|x| x[0] * x[0] * x[1] * x[1]);
        assert!((got - 4.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn hermite_d2_level4_pruned_has_189_nodes() {
        let g = smolyak(2, 4, RuleFamily::GaussHermite).unwrap();
        assert!((g.weight_sum() - PI).abs() < 1e-9);
        assert_eq!(g.prune(1e-9).len(), 189);
    }

    #[test]
    fn one_dimensional_grid_is_the_rule() {
        for l in 0..=5 {
            let g = smolyak(1, l, RuleFamily::GaussPatterson).unwrap();
            let r = gauss_patterson_1d(l).unwrap();
            assert_eq!(g.nodes().map(|x| x[0]).collect::<Vec<_>>(), r.nodes);
            assert_eq!(g.weights(), &r.weights[..]);
            let g = smolyak(1, l, RuleFamily::GaussHermite).unwrap();
            let r = gauss_hermite_1d((1 << (l + 1)) - 1).unwrap();
            assert_eq!(g.nodes().map(|x| x[0]).collect::<Vec<_>>(), r.nodes);
        }
    }

    #[test]
    fn hermite_weight_sums() {
        for l in 0..=5 {
            let g = smolyak(2, l, RuleFamily::GaussHermite).unwrap();
            assert!((g.weight_sum() - PI).abs() < 1e-9, "level {l}");
        }
        let g = smolyak(3, 3, RuleFamily::GaussHermite).unwrap();
        assert!((g.weight_sum() - PI.powf(1.5)).abs() < 1e-9);
    }

    #[test]
    fn no_duplicate_nodes() {
        for family in [RuleFamily::GaussPatterson, RuleFamily::GaussHermite] {
            let g = smolyak(2, 5, family).unwrap();
            let mut pts: Vec<Vec<f64>> = g.nodes().map(|x| x.to_vec()).collect();
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in pts.windows(2) {
                let dist = w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(dist > MERGE_TOL);
            }
        }
    }

    #[test]
    fn hermite_sparse_exactness() {
        // total degree ≤ 2l+1 is exact for the level-l Smolyak Hermite grid.
        let g = smolyak(2, 3, RuleFamily::GaussHermite).unwrap();
        let gamma = |k: i32| -> f64 {
            if k % 2 == 1 {
                return 0.0;
            }
            (0..k / 2).fold(PI.sqrt(), |acc, j| acc * (j as f64 + 0.5))
        };
        for a in 0..=6 {
            for b in 0..=(6 - a) {
                let got = g.integrate(|x| x[0].powi(a) * x[1].powi(b));
                let exact = gamma(a) * gamma(b);
                assert!((got - exact).abs() < 1e-10 * exact.abs().max(1.0), "x^{a} y^{b}");
            }
        }
    }

    #[test]
    fn chebyshev_sparse_is_rejected() {
        assert!(matches!(smolyak(2, 2, RuleFamily::GaussChebyshev), Err(Error::UnsupportedRule(_))));
    }

    #[test]
    fn combination_helpers() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(binomial(3, 1), 3.0);
        assert_eq!(binomial(1, 2), 0.0);
    }
}
