//! Density comparison on tensor grids.

use std::fmt::Write as _;

use crate::baselines::{Axis, GridDensity};
use crate::error::{check_dim, Error, Result};
use crate::expfam::ExpFamily;

/// `exp(c(x)ᵀθ - ψ)` at cell centers, with the integral defect `|Σ p·vol - 1|`.
pub fn density_on_grid(theta: &[f64], family: &ExpFamily, psi: f64, axes: Vec<Axis>) -> Result<(GridDensity, f64)> {
    check_dim(family.m(), theta.len())?;
    check_dim(family.dim(), axes.len())?;
    let mut overflow = false;
    let g = GridDensity::from_fn(axes, |x| {
        let v = (family.log_unnormalized(theta, x) - psi).exp();
        if !v.is_finite() {
            overflow = true;
        }
        v
    })?;
    if overflow {
        return Err(Error::Overflow);
    }
    let defect = (g.integral() - 1.0).abs();
    Ok((g, defect))
}

/// Hellinger distance `√(1 - ∫√(pq))` of two normalized grid densities.
pub fn hellinger(p: &GridDensity, q: &GridDensity) -> Result<f64> {
    if p.axes() != q.axes() {
        return Err(Error::GridMismatch("densities live on different grids".into()));
    }
    // ½∫(√p − √q)² equals 1 − ∫√(pq) for normalized densities and vanishes exactly at p = q
    let h2: f64 = p
        .values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (a.max(0.0).sqrt() - b.max(0.0).sqrt()).powi(2))
        .sum::<f64>()
        * 0.5
        * p.cell_volume();
    Ok(h2.clamp(0.0, 1.0).sqrt())
}

/// One row of a comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub t: f64,
    pub hellinger: f64,
    pub moment_errors: Vec<f64>,
}

/// CSV `t,hellinger[,names...]`.
pub fn comparison_csv(rows: &[ComparisonRow], moment_names: &[&str]) -> String {
    let mut out = String::from("t,hellinger");
    for n in moment_names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{}", r.t, r.hellinger);
        for e in &r.moment_errors {
            let _ = write!(out, ",{e}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn normal(axes: &[Axis], mean: f64) -> GridDensity {
        GridDensity::from_fn(axes.to_vec(), |x| (-0.5 * (x[0] - mean).powi(2)).exp() / (2.0 * PI).sqrt()).unwrap()
    }

    #[test]
    fn gaussian_member_on_grid() {
        let fam = ExpFamily::monomials_up_to(1, 2);
        let axes = vec![Axis::new(-6.0, 6.0, 1200).unwrap()];
        let (g, defect) = density_on_grid(&[0.0, -0.5], &fam, 0.5 * (2.0 * PI).ln(), axes.clone()).unwrap();
        let exact = normal(&axes, 0.0);
        for (a, b) in g.values().iter().zip(exact.values()) {
            assert!((a - b).abs() <= 1e-10 * b);
        }
        assert!(defect < 1e-6);
    }

    #[test]
    fn symmetric_parameters_give_symmetric_values() {
        let fam = ExpFamily::monomials_up_to(1, 4);
        let axes = vec![Axis::new(-3.0, 3.0, 301).unwrap()];
        let (g, _) = density_on_grid(&[0.0, 2.0, 0.0, -1.0], &fam, 1.0, axes).unwrap();
        let v = g.values();
        for i in 0..v.len() {
            assert!((v[i] - v[v.len() - 1 - i]).abs() <= 1e-12 * v[i]);
        }
    }

    #[test]
    fn overflow_detected() {
        let fam = ExpFamily::monomials_up_to(1, 2);
        let axes = vec![Axis::new(-100.0, 100.0, 10).unwrap()];
        assert!(matches!(density_on_grid(&[0.0, 1.0], &fam, 0.0, axes), Err(Error::Overflow)));
    }

    #[test]
    fn hellinger_examples() {
        let axes = vec![Axis::new(-10.0, 11.0, 4200).unwrap()];
        let p = normal(&axes, 0.0);
        let q = normal(&axes, 1.0);
        assert_eq!(hellinger(&p, &p).unwrap(), 0.0);
        let expected = (1.0 - (-1.0f64 / 8.0).exp()).sqrt();
        assert!((hellinger(&p, &q).unwrap() - expected).abs() < 1e-3);
        assert_eq!(hellinger(&p, &q).unwrap(), hellinger(&q, &p).unwrap());

        let ax = vec![Axis::new(0.0, 2.0, 2).unwrap()];
        let a = GridDensity::new(ax.clone(), vec![1.0, 0.0]).unwrap();
        let b = GridDensity::new(ax, vec![0.0, 1.0]).unwrap();
        assert_eq!(hellinger(&a, &b).unwrap(), 1.0);
        let other = GridDensity::new(vec![Axis::new(0.0, 1.0, 2).unwrap()], vec![1.0, 1.0]).unwrap();
        assert!(hellinger(&a, &other).is_err());
    }

    #[test]
    fn triangle_inequality_spot_checks() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let axes = vec![Axis::new(0.0, 1.0, 50).unwrap()];
        for _ in 0..100 {
            let mut draw = || GridDensity::new(axes.clone(), (0..50).map(|_| rng.random::<f64>()).collect()).unwrap().normalized().unwrap();
            let (p, q, r) = (draw(), draw(), draw());
            let pq = hellinger(&p, &q).unwrap();
            let qr = hellinger(&q, &r).unwrap();
            let pr = hellinger(&p, &r).unwrap();
            assert!(pr <= pq + qr + 1e-9);
        }
    }

    #[test]
    fn refinement_stability() {
        let coarse = vec![Axis::new(-8.0, 9.0, 400).unwrap()];
        let fine = vec![Axis::new(-8.0, 9.0, 800).unwrap()];
        let h1 = hellinger(&normal(&coarse, 0.0), &normal(&coarse, 1.0)).unwrap();
        let h2 = hellinger(&normal(&fine, 0.0), &normal(&fine, 1.0)).unwrap();
        assert!((h1 - h2).abs() < 1e-3);
    }

    #[test]
    fn comparison_csv_layout() {
        let rows = vec![ComparisonRow { t: 0.5, hellinger: 0.1, moment_errors: vec![0.01] }];
        assert_eq!(comparison_csv(&rows, &["mean_err"]), "t,hellinger,mean_err\n0.5,0.1,0.01\n");
    }
}
