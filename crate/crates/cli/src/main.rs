mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exact symmetry checks and spectra of d-dimensional Coulomb systems with spin 0, 1/2 and 1.
#[derive(Debug, Parser, Serialize)]
#[command(name = "spinlrl", version)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Gamma matrices, spin-1/2 and spin-1 generators for a range of dimensions.
    Repcheck(RepcheckArgs),
    /// Potential conditions, symmetry algebra and spin identities of one model.
    Verify(VerifyArgs),
    /// Closed-form bound-state energies, optionally with the numerical solver alongside.
    Spectrum(SpectrumArgs),
    /// Sampled normalized eigenfunction as CSV.
    Radial(RadialArgs),
    /// The transverse spin-1 channel (d >= 4).
    Forbidden(ForbiddenArgs),
    /// Evaluate one special function (debugging aid).
    EvalSpecfun(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Spin {
    Scalar,
    Half,
    One,
    OneExtended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
struct Couplings {
    /// Mass, as an integer or "p/q".
    #[arg(long, default_value = "1")]
    m: String,
    /// Coupling strength, as an integer or "p/q".
    #[arg(long, default_value = "1")]
    alpha: String,
}

#[derive(Debug, Args, Serialize)]
struct RepcheckArgs {
    #[arg(long, default_value_t = 2)]
    dmin: i64,
    #[arg(long, default_value_t = 10)]
    dmax: i64,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    spin: Spin,
    #[command(flatten)]
    couplings: Couplings,
    /// Random rational points per identity.
    #[arg(long, default_value_t = 20)]
    npoints: usize,
    /// Random test functions per identity.
    #[arg(long, default_value_t = 2)]
    nfunctions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build the Runge-Lenz vector with this coupling instead (must make the check fail).
    #[arg(long, hide = true)]
    tamper_lrl_alpha: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct SpectrumArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    spin: Spin,
    /// Orbital number (scalar and spin-1).
    #[arg(long)]
    l: Option<u32>,
    /// Total angular momentum, half-odd (spin-1/2), e.g. "1/2".
    #[arg(long)]
    j: Option<String>,
    #[arg(long, default_value_t = 3)]
    nmax: u32,
    #[command(flatten)]
    couplings: Couplings,
    /// Add numerical energies and relative deviations.
    #[arg(long)]
    numeric: bool,
    /// Largest accepted relative deviation with --numeric.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Interior points of the numerical grid (the step is also halved once for extrapolation).
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args, Serialize)]
struct RadialArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    spin: Spin,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[command(flatten)]
    couplings: Couplings,
    /// Outer end of the sample grid; defaults to 40 decay lengths.
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

#[derive(Debug, Args, Serialize)]
struct ForbiddenArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    lmax: u32,
    #[command(flatten)]
    couplings: Couplings,
}

#[derive(Debug, Args, Serialize)]
struct EvalArgs {
    #[command(subcommand)]
    function: SpecialFunction,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "function", rename_all = "kebab-case")]
enum SpecialFunction {
    /// 1F1(-n; b; z).
    Kummer {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// K_0 or K_1.
    BesselK {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        x: f64,
    },
    /// I_0 or I_1.
    BesselI {
        #[arg(long)]
        order: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.command {
        Command::Repcheck(a) => commands::repcheck(&cli, a),
        Command::Verify(a) => commands::verify(&cli, a),
        Command::Spectrum(a) => commands::spectrum(&cli, a),
        Command::Radial(a) => commands::radial(&cli, a),
        Command::Forbidden(a) => commands::forbidden(&cli, a),
        Command::EvalSpecfun(a) => commands::eval_specfun(&cli, a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
