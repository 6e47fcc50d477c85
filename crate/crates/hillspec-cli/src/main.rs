use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hillspec::C64;

mod commands;
mod config;
mod output;
mod parse;
mod verify;

use commands::Grid;
use config::{Overrides, RunConfig, DEFAULTS_ENV};
use parse::parse_complex;

#[derive(Parser)]
#[command(name = "hillspec", version, about = "Point spectrum of the Euler equations linearised about cos(p·x)")]
struct Cli {
    /// JSON file with default settings; flags override it.
    #[arg(long, env = DEFAULTS_ENV, global = true)]
    defaults: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hill discriminant Δ(μ; c) on a uniform μ grid.
    Discriminant {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: C64,
        #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
        mu_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        mu_max: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Add the monodromy trace as an independent column.
        #[arg(long)]
        monodromy: bool,
    },
    /// Δ(d²; c) over a grid in the complex c-plane, flagging Im Δ = 0.
    ContourC {
        #[arg(long)]
        d: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Δ(μ; c) over a grid in the complex μ-plane, flagging Im Δ = 0.
    ContourMu {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: C64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Region map of the (θ, d) plane, or the class points of a wavevector.
    Circles {
        #[arg(long, default_value_t = 201)]
        n_theta: usize,
        #[arg(long, default_value_t = 121)]
        n_d: usize,
        #[arg(long, default_value_t = 1.2)]
        d_max: f64,
        #[arg(long, requires = "p2", allow_hyphen_values = true)]
        p1: Option<i64>,
        #[arg(long, requires = "p1", allow_hyphen_values = true)]
        p2: Option<i64>,
    },
    /// Zeros of the per-class Evans function E(c; θ, d).
    EvansRoots {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        count_only: bool,
    },
    /// Full spectrum report for the wavevector p = (p1, p2).
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        p1: i64,
        #[arg(long, allow_hyphen_values = true)]
        p2: i64,
        /// Winding numbers only, no root refinement.
        #[arg(long)]
        count_only: bool,
    },
    /// The product Evans function E_p(λ).
    FullEvans {
        #[arg(long, allow_hyphen_values = true)]
        p1: i64,
        #[arg(long, allow_hyphen_values = true)]
        p2: i64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: C64,
    },
    /// Cross-check the discriminant, monodromy, Evans and Jacobi computations.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Level::Quick)]
        level: verify::Level,
    },
}

#[derive(clap::Args)]
struct GridArgs {
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    re_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    re_max: f64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    im_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    im_max: f64,
    #[arg(long, default_value_t = 101)]
    nx: usize,
    #[arg(long, default_value_t = 101)]
    ny: usize,
}

impl GridArgs {
    fn grid(&self) -> Grid {
        Grid { re: (self.re_min, self.re_max), im: (self.im_min, self.im_max), nx: self.nx, ny: self.ny }
    }
}

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Errors caused by the arguments rather than by the numerics.
fn is_usage_error(e: &anyhow::Error) -> bool {
    use hillspec::Error as E;
    match e.downcast_ref::<E>() {
        Some(err) => matches!(
            err,
            E::Coprimality { .. }
                | E::TrivialClass
                | E::ClassRange { .. }
                | E::BranchCut { .. }
                | E::SingularPotential { .. }
                | E::FactorOnCut { .. }
                | E::DegenerateParameter { .. }
                | E::InvalidConfig(_)
        ),
        None => e.downcast_ref::<std::io::Error>().is_none(),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = RunConfig::load(cli.defaults.as_deref(), &cli.overrides)?;
    match cli.command {
        Command::Discriminant { c, mu_min, mu_max, points, monodromy } => {
            commands::discriminant_cmd(&cfg, c, mu_min, mu_max, points, monodromy)?
        }
        Command::ContourC { d, grid } => commands::contour_c(&cfg, d, &grid.grid())?,
        Command::ContourMu { c, grid } => commands::contour_mu(&cfg, c, &grid.grid())?,
        Command::Circles { n_theta, n_d, d_max, p1, p2 } => commands::circles(&cfg, n_theta, n_d, d_max, p1.zip(p2))?,
        Command::EvansRoots { theta, d, count_only } => commands::evans_roots(&cfg, theta, d, count_only)?,
        Command::Spectrum { p1, p2, count_only } => commands::spectrum(&cfg, p1, p2, count_only)?,
        Command::FullEvans { p1, p2, lambda } => commands::full_evans_cmd(&cfg, p1, p2, lambda)?,
        Command::Verify { level } => {
            let outcomes = verify::run(&cfg, level);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} checks, {} failed", outcomes.len(), failed);
            if failed > 0 {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { EXIT_USAGE } else { EXIT_VERIFY })
        }
    }
}
