//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use projection_filter::bijection::{erf, erf_inv, match_bijection, sym_eigen};
use projection_filter::expfam::{defect_squared_gradient, log_partition, moments_and_fisher, normalization_defect, NodeSet};
use projection_filter::quadrature::{gauss_chebyshev, gauss_hermite_1d, gauss_hermite_level, gauss_patterson_1d, level_size, smolyak};
use projection_filter::{Bijection, ExpFamily, GaussianBijection, GaussianVariant, QuadratureGrid, RuleFamily};
use projfilter_cli::common::gaussian_theta;
use projfilter_cli::{run_cubic_sensor, run_linear_check, run_sir, run_vdp, ExperimentConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

type Outcome = anyhow::Result<(bool, String)>;

fn config(name: &str) -> anyhow::Result<ExperimentConfig> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    ExperimentConfig::from_path(&path)
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn uniform(lo: f64, hi: f64) -> Uniform<f64> {
    Uniform::new(lo, hi).expect("valid range")
}

/// `ψ`, mean and variance of `exp(c(x)ᵀθ)` by the trapezoid rule on 20000 points of `[-6, 6]`.
fn dense_oracle(theta: &[f64]) -> (f64, f64, f64) {
    let fam = ExpFamily::monomials_up_to(1, theta.len() as u32);
    let (lo, hi, n) = (-6.0, 6.0, 20000);
    let h = (hi - lo) / (n - 1) as f64;
    let mut s = [0.0; 3];
    for i in 0..n {
        let x = lo + h * i as f64;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let u = w * fam.log_unnormalized(theta, &[x]).exp();
        s[0] += u;
        s[1] += u * x;
        s[2] += u * x * x;
    }
    let mean = s[1] / s[0];
    ((s[0] * h).ln(), mean, s[2] / s[0] - mean * mean)
}

fn node_counts() -> Outcome {
    let gp = smolyak(2, 4, RuleFamily::GaussPatterson)?.len();
    let gh = smolyak(2, 4, RuleFamily::GaussHermite)?.prune(1e-9).len();
    Ok((gp == 129 && gh == 189, format!("GP d=2 l=4: {gp} nodes, GH d=2 l=4 pruned: {gh} nodes")))
}

fn level_sequence() -> Outcome {
    let mut ok = true;
    let mut sizes = Vec::new();
    for l in 0..=7 {
        let want = (1usize << (l + 1)) - 1;
        let gp = gauss_patterson_1d(l)?.nodes.len();
        let gh = gauss_hermite_level(l)?.nodes.len();
        ok &= gp == want && gh == want && level_size(l) == want;
        sizes.push(gp);
    }
    Ok((ok, format!("Patterson and Hermite sizes {sizes:?}")))
}

fn hermite_exactness() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for (d, levels) in [(1usize, 1..=6), (2, 2..=6)] {
        let fam = ExpFamily::monomials_up_to(d, 2);
        for _ in 0..5 {
            let mean: Vec<f64> = (0..d).map(|_| uniform(-3.0, 3.0).sample(&mut r)).collect();
            let a = DMatrix::from_fn(d, d, |_, _| uniform(-1.0, 1.0).sample(&mut r));
            let cov = &a * a.transpose() + DMatrix::identity(d, d) * 0.2;
            let theta = gaussian_theta(&fam, &mean, cov.transpose().as_slice())?;
            let m = DVector::from_column_slice(&mean);
            let prec = cov.clone().try_inverse().expect("SPD");
            let exact = 0.5 * (m.transpose() * &prec * &m)[(0, 0)] + 0.5 * ((2.0 * PI).powi(d as i32) * cov.determinant()).ln();
            let bij: Bijection = GaussianBijection::new(m, cov, GaussianVariant::HermiteAffine)?.into();
            for l in levels.clone() {
                let grid = smolyak(d, l, RuleFamily::GaussHermite)?;
                let psi = log_partition(theta.as_slice(), &fam, &bij, &grid)?;
                worst = worst.max((psi - exact).abs());
            }
        }
    }
    Ok((worst < 1e-12, format!("max |ψ_N - ψ| = {worst:.2e}")))
}

fn ad_identities() -> Outcome {
    let fam = ExpFamily::monomials_up_to(1, 4);
    let grid = QuadratureGrid::from_rule(&gauss_chebyshev(15)?);
    let bij: Bijection = GaussianBijection::standard(1, GaussianVariant::ErfHypercube).into();
    let nodes = NodeSet::new(&fam, &bij, &grid)?;
    let mut r = rng(4);
    let (mut grad_err, mut hess_err, mut norm_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let theta = [
            uniform(-1.0, 1.0).sample(&mut r),
            uniform(-1.0, 1.0).sample(&mut r),
            uniform(-0.5, 0.5).sample(&mut r),
            uniform(-1.5, -0.5).sample(&mut r),
        ];
        let ad = moments_and_fisher(&theta, &fam, &bij, &grid)?;
        let (mean, cov) = nodes.ratio_moments(&theta, 4)?;
        let head = mean.rows(0, 4).into_owned();
        grad_err = grad_err.max((&ad.eta - &head).amax() / head.amax());
        hess_err = hess_err.max((&ad.fisher - &cov).amax() / cov.amax());
        let (_, p) = nodes.normalized_weights(&theta)?;
        norm_err = norm_err.max((p.iter().sum::<f64>() - 1.0).abs());
    }
    let ok = grad_err < 1e-9 && hess_err < 1e-9 && norm_err < 1e-12;
    Ok((ok, format!("gradient rel {grad_err:.1e}, Hessian rel {hess_err:.1e}, Σp - 1 = {norm_err:.1e}")))
}

fn picard_fixed_point() -> Outcome {
    let fam2 = ExpFamily::monomials_up_to(1, 2);
    let gh = QuadratureGrid::from_rule(&gauss_hermite_1d(15)?);
    let start = GaussianBijection::standard(1, GaussianVariant::HermiteAffine);
    let gauss = match_bijection(&[8.0, -2.0], &fam2, &start, &gh, 1.0, 1e-8, 3)?;
    let gauss_ok = gauss.converged(1e-8) && gauss.iterations <= 3;

    let fam4 = ExpFamily::monomials_up_to(1, 4);
    let theta = [0.0, 2.0, 0.0, -1.0];
    let gc = QuadratureGrid::from_rule(&gauss_chebyshev(30)?);
    let start = GaussianBijection::standard(1, GaussianVariant::ErfHypercube);
    let quartic = match_bijection(&theta, &fam4, &start, &gc, 1.0, 1e-8, 100)?;
    let (_, mean, var) = dense_oracle(&theta);
    let b = &quartic.bijection;
    let (dm, dv) = ((b.mu()[0] - mean).abs(), (b.sigma()[(0, 0)] - var).abs());
    let ok = gauss_ok && quartic.converged(1e-8) && dm < 1e-4 && dv < 1e-4;
    Ok((
        ok,
        format!(
            "Gaussian residual {:.1e} after {} iterations; quartic (GC-30) |Δμ| = {dm:.1e}, |Δσ²| = {dv:.1e}",
            gauss.residuals.last().copied().unwrap_or(f64::NAN),
            gauss.iterations
        ),
    ))
}

fn linear_gaussian() -> Outcome {
    let out = tempfile::tempdir()?;
    let s = run_linear_check(&config("linear.cfg")?, out.path())?;
    let ok = s.completed && s.mean_abs_error < 1e-3 && s.var_rel_error < 1e-2;
    Ok((ok, format!("mean abs error {:.2e}, variance rel error {:.2e}", s.mean_abs_error, s.var_rel_error)))
}

fn cubic_sensor() -> Outcome {
    let out = tempfile::tempdir()?;
    let s = run_cubic_sensor(&config("cubic.cfg")?, out.path())?;
    // a stopped filter has no density; count it as maximally distant
    let final_h = |n: &str| s.final_hellinger(n).filter(|h| h.is_finite()).unwrap_or(1.0);
    let median_h = |n: &str| s.median_hellinger(n).unwrap_or(f64::NAN);
    let completed = s.index("GCQ-9").is_some_and(|i| s.completed[i]);
    let (gc, st9) = (final_h("GCQ-9"), final_h("static-9"));
    let (mgc, m18) = (median_h("GCQ-9"), median_h("static-18"));
    let ok = completed && gc < st9 && mgc <= 10.0 * m18;
    Ok((
        ok,
        format!("final H: GCQ-9 {gc:.3e} vs static-9 {st9:.3e}; median H: GCQ-9 {mgc:.3e} vs 10 x static-18 {:.3e}", 10.0 * m18),
    ))
}

fn van_der_pol() -> Outcome {
    let out = tempfile::tempdir()?;
    let s = run_vdp(&config("vdp.cfg")?, out.path())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, nodes) in [("GPQ-4", 129), ("GHQ-4", 189)] {
        let i = s.names.iter().position(|n| n == name).ok_or_else(|| anyhow::anyhow!("variant {name} missing"))?;
        let h = s.max_hellinger(name, 0.1, 1.0).unwrap_or(f64::NAN);
        ok &= s.completed[i] && s.nodes[i] == nodes && h < 0.35;
        parts.push(format!("{name} ({} nodes) max H {h:.3e}", s.nodes[i]));
    }
    Ok((ok, parts.join(", ")))
}

fn sir() -> Outcome {
    let out = tempfile::tempdir()?;
    let s = run_sir(&config("sir.cfg")?, out.path())?;
    let i = s.names.iter().position(|n| n == "GPQ-5").ok_or_else(|| anyhow::anyhow!("variant GPQ-5 missing"))?;
    let decreasing = s.trace_decreasing_final_half("GPQ-5").unwrap_or(false);
    let uptick = s.max_trace_uptick("GPQ-5").unwrap_or(f64::NAN);
    let h = s.max_hellinger("GPQ-5", 0.5, 5.0).unwrap_or(f64::NAN);
    let ok = s.completed[i] && decreasing && h < 0.4;
    Ok((ok, format!("completed {}, trace decreasing {decreasing} (largest step uptick {uptick:.1e}), max H {h:.3e}", s.completed[i])))
}

fn numerical_floors() -> Outcome {
    let mut r = rng(10);
    let mut erf_err = 0.0f64;
    for _ in 0..1000 {
        let y = uniform(-0.999, 0.999).sample(&mut r);
        erf_err = erf_err.max((erf(erf_inv(y)?) - y).abs());
    }
    let mut eig_err = 0.0f64;
    for d in 2..=4 {
        for _ in 0..25 {
            let a: DMatrix<f64> = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(&mut r));
            let sigma: DMatrix<f64> = &a * a.transpose() + DMatrix::identity(d, d) * 0.1;
            let (t, lambda) = sym_eigen(&sigma)?;
            let back = t.transpose() * DMatrix::from_diagonal(&lambda) * &t;
            eig_err = eig_err.max((back - &sigma).amax());
        }
    }
    let mut jac_err = 0.0f64;
    for d in 1..=3 {
        let a: DMatrix<f64> = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(&mut r));
        let sigma: DMatrix<f64> = &a * a.transpose() + DMatrix::identity(d, d) * 0.3;
        let mu: DVector<f64> = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut r));
        let b = GaussianBijection::new(mu, sigma, GaussianVariant::ErfHypercube)?;
        for _ in 0..100 {
            let xt: Vec<f64> = (0..d).map(|_| uniform(-0.99, 0.99).sample(&mut r)).collect();
            let (x, log_det) = b.forward(&xt)?;
            let v = (d as f64 * 2f64.ln() + b.log_density(&x) + log_det).exp();
            jac_err = jac_err.max((v - 1.0).abs());
        }
    }
    let ok = erf_err < 1e-13 && eig_err < 1e-10 && jac_err < 1e-10;
    Ok((ok, format!("erf roundtrip {erf_err:.1e}, eigen reconstruction {eig_err:.1e}, Jacobian identity {jac_err:.1e}")))
}

fn defect_gradient() -> Outcome {
    let fam = ExpFamily::monomials_up_to(1, 4);
    let grid = QuadratureGrid::from_rule(&gauss_chebyshev(15)?);
    let mut worst = 0.0f64;
    for theta in [[0.0, 2.0, 0.0, -1.0], [0.5, 0.3, -0.2, -0.6], [-0.4, 1.0, 0.3, -1.2]] {
        let (psi_ref, _, _) = dense_oracle(&theta);
        for (mu, var) in [(0.3, 0.8), (-0.2, 1.5), (0.0, 0.5)] {
            let make = |m: f64, v: f64| {
                GaussianBijection::new(DVector::from_element(1, m), DMatrix::from_element(1, 1, v), GaussianVariant::ErfHypercube)
            };
            let sq = |m: f64, v: f64| -> anyhow::Result<f64> {
                let b: Bijection = make(m, v)?.into();
                Ok(normalization_defect(&theta, &fam, &b, &grid, psi_ref)?.powi(2))
            };
            let analytic = defect_squared_gradient(&theta, &fam, &make(mu, var)?, &grid, psi_ref)?;
            let h = 1e-5;
            let fd = [(sq(mu + h, var)? - sq(mu - h, var)?) / (2.0 * h), (sq(mu, var + h)? - sq(mu, var - h)?) / (2.0 * h)];
            // floor relative to the gradient norm; symmetric cases have an exact zero component
            let floor = 1e-3 * fd[0].hypot(fd[1]);
            for k in 0..2 {
                worst = worst.max((analytic[k] - fd[k]).abs() / fd[k].abs().max(floor));
            }
        }
    }
    Ok((worst < 1e-4, format!("max rel error vs central differences {worst:.1e}")))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 11] = [
        (1, "sparse-grid node counts", Duration::from_secs(1), node_counts),
        (2, "nested level sequence", Duration::from_secs(1), level_sequence),
        (3, "matched Gauss-Hermite exactness", Duration::from_secs(1), hermite_exactness),
        (4, "AD vs quadrature-ratio identities", Duration::from_secs(5), ad_identities),
        (5, "Picard fixed point", Duration::from_secs(5), picard_fixed_point),
        (6, "linear-Gaussian equivalence", Duration::from_secs(30), linear_gaussian),
        (7, "cubic sensor vs finite differences", Duration::from_secs(600), cubic_sensor),
        (8, "Van der Pol vs particle filter", Duration::from_secs(900), van_der_pol),
        (9, "SIR shrinkage robustness", Duration::from_secs(900), sir),
        (10, "special-function and linear-algebra floors", Duration::from_secs(5), numerical_floors),
        (11, "defect gradient check", Duration::from_secs(5), defect_gradient),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let (pass, detail) = match outcome {
            Ok((ok, detail)) => (ok && elapsed <= budget, detail),
            Err(e) => (false, format!("error: {e:#}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {id:>2} {name}: {detail} [{:.2} s, budget {} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
