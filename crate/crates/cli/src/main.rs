use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use projection_filter::quadrature::smolyak;
use projection_filter::RuleFamily;
use projfilter_cli::{run_cubic_sensor, run_linear_check, run_sir, run_vdp, ExperimentConfig};

#[derive(Parser)]
#[command(name = "projfilter", version, about = "Projection filter experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scalar cubic sensor against a finite-difference reference.
    RunCubic(RunArgs),
    /// Modified Van der Pol oscillator against a particle filter.
    RunVdp(RunArgs),
    /// Stochastic SIR model against a particle filter.
    RunSir(RunArgs),
    /// Linear model against the Kalman–Bucy filter.
    RunLinearCheck(RunArgs),
    /// Prints the node count of a sparse grid.
    GridInfo(GridArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    particles: Option<usize>,
    /// Overrides the level of every sparse-grid variant.
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Args)]
struct GridArgs {
    /// patterson, hermite or chebyshev
    #[arg(long, default_value = "patterson")]
    family: String,
    #[arg(long)]
    level: usize,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Drop nodes with |weight| below this.
    #[arg(long)]
    prune: Option<f64>,
}

fn load(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    cfg.apply_overrides(args.seed, args.particles, args.level);
    Ok(cfg)
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::RunCubic(a) => {
            let s = run_cubic_sensor(&load(&a)?, &a.out)?;
            for (i, n) in s.names.iter().enumerate() {
                let last = s.hellinger.last().map_or(f64::NAN, |(_, h)| h[i]);
                println!("{n}: completed={} final_hellinger={last:.4e}", s.completed[i]);
            }
            println!("artifacts in {}", s.dir.display());
        }
        Command::RunVdp(a) => report(run_vdp(&load(&a)?, &a.out)?),
        Command::RunSir(a) => report(run_sir(&load(&a)?, &a.out)?),
        Command::RunLinearCheck(a) => {
            let s = run_linear_check(&load(&a)?, &a.out)?;
            println!(
                "completed={} mean_abs_error={:.3e} var_rel_error={:.3e} pf_mean_rmse={:.3e}",
                s.completed, s.mean_abs_error, s.var_rel_error, s.pf_mean_rmse
            );
            println!("artifacts in {}", s.dir.display());
        }
        Command::GridInfo(g) => {
            let family = match g.family.as_str() {
                "patterson" => RuleFamily::GaussPatterson,
                "hermite" => RuleFamily::GaussHermite,
                "chebyshev" => RuleFamily::GaussChebyshev,
                f => bail!("unknown family '{f}'"),
            };
            let grid = smolyak(g.dim, g.level, family)?;
            let grid = match g.prune {
                Some(t) => grid.prune(t),
                None => grid,
            };
            println!("{}", grid.len());
        }
    }
    Ok(())
}

fn report(s: projfilter_cli::ParticleComparison) {
    for (i, n) in s.names.iter().enumerate() {
        let worst = s.hellinger.iter().map(|(_, h)| h[i]).fold(0.0f64, f64::max);
        println!("{n}: nodes={} completed={} max_hellinger={worst:.4e}", s.nodes[i], s.completed[i]);
    }
    println!("artifacts in {}", s.dir.display());
}
