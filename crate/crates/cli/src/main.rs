#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Build example surfaces, evaluate Area/Volume/Willmore and certify
/// constrained criticality.
#[derive(Debug, Parser)]
#[command(name = "conwill", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a surface and print a JSON summary.
    Build(SurfaceArgs),
    /// Print area, Willmore energy and (for closed surfaces in R³) volume.
    Energy(EnergyArgs),
    /// Solve grad(F) = δ*(q) over a basis of quadratic differentials.
    Certify(CertifyArgs),
    /// Integrate a curvature ODE and write the curve as CSV.
    Curve(CurveArgs),
    /// Compare analytic first variations against finite differences.
    CheckGradients(GradientArgs),
    /// Write a surface as OBJ or CSV.
    Export(ExportArgs),
    /// Run the closed-form identity checks and print a table.
    VerifyIdentities(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// JSON job file; flags override its fields.
    #[arg(long)]
    pub job: Option<PathBuf>,
    /// Builder variant, e.g. homogeneous-torus, round-sphere, torus-of-revolution.
    #[arg(long)]
    pub builder: Option<String>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub big: Option<f64>,
    #[arg(long)]
    pub small: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Nodes per chart axis, in [8, 4096].
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// area, volume or willmore.
    #[arg(long)]
    pub functional: Option<String>,
    /// default, empty or polynomial:N.
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Exit with status 2 unless the verdict is critical.
    #[arg(long)]
    pub expect_critical: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ode {
    Elastica,
    Burstall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmbientArg {
    Plane,
    Sphere,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub job: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub ode: Option<Ode>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dk0: Option<f64>,
    /// Arc-length span as `start,end`.
    #[arg(long, allow_hyphen_values = true)]
    pub span: Option<String>,
    /// Plane for Burstall, sphere for elastica unless given.
    #[arg(long, value_enum)]
    pub ambient: Option<AmbientArg>,
    /// Write every n-th sample.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GradientArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long)]
    pub functional: Option<String>,
    /// Comma-separated step sizes.
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Obj,
    Csv,
    /// Hopf differential `φ` per node.
    HopfCsv,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, value_enum, default_value = "obj")]
    pub format: ExportFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Base nodes per axis; the cylinder check uses four times as many.
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("CONWILL_THREADS") {
        let n: usize = value.trim().parse().with_context(|| format!("CONWILL_THREADS=`{value}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Build(a) => commands::build(&a).context("build"),
        Command::Energy(a) => commands::energy(&a).context("energy"),
        Command::Certify(a) => commands::certify(&a).context("certify"),
        Command::Curve(a) => commands::curve(&a).context("curve"),
        Command::CheckGradients(a) => commands::check_gradients(&a).context("check-gradients"),
        Command::Export(a) => commands::export(&a).context("export"),
        Command::VerifyIdentities(a) => commands::verify_identities(&a).context("verify-identities"),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
