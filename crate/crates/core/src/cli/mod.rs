//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input or
//! infeasible parameters, 3 unstable simulation, 4 I/O or internal error.

mod commands;
pub mod config;
pub mod json;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::elliptic::Modulus;
use crate::model::{PhysicalParams, SystemKind};
use crate::solutions::{figure_set, FreeParams, RSign, FIGURE_MODULUS};
use crate::verify::Tolerances;

pub use commands::ParamsRecord;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_UNSTABLE: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "cnoidal",
    version,
    about = "Cnoidal and solitary waves of coupled Schrödinger-KdV/BBM systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form parameters of a solution, as JSON.
    Params(CommonArgs),
    /// Coefficient, ODE, ratio and optional PDE checks.
    Verify(VerifyArgs),
    /// Profiles and fields over one period, as CSV.
    Sample(SampleArgs),
    /// Sampled profiles of the four reference parameter sets.
    Figures(FiguresArgs),
    /// Trivial and semi-trivial families with residual checks.
    Catalog(CommonArgs),
    /// Pseudo-spectral propagation of the exact initial data.
    Simulate(SimulateArgs),
    /// Verification over a range of wave speeds or moduli.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignChoice {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
    Both,
}

impl SignChoice {
    pub fn signs(self) -> Vec<RSign> {
        match self {
            SignChoice::Plus => vec![RSign::Plus],
            SignChoice::Minus => vec![RSign::Minus],
            SignChoice::Both => RSign::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// key=value file mirroring these flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// kdv-kdv, bbm-bbm, kdv-bbm or bbm-kdv.
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long)]
    pub mu0: Option<f64>,
    #[arg(long)]
    pub mu1: Option<f64>,
    /// Dispersion coefficient of the u equation.
    #[arg(long, visible_aliases = ["a0", "a1"], allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Elliptic modulus in [0, 1]; 1 selects the solitary limit.
    #[arg(long)]
    pub m: Option<f64>,
    /// Branch of R.
    #[arg(long, value_enum)]
    pub sign: Option<SignChoice>,
    /// Use semi-trivial family N instead of the cnoidal family.
    #[arg(long)]
    pub family: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub h0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub h2: Option<f64>,
    /// Phase wavenumber B of a plane-wave family.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Tolerance overrides: one number, or key=value pairs separated by commas.
    #[arg(long)]
    pub tol: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Verify records previously written by `params`.
    #[arg(long)]
    pub from: Option<PathBuf>,
    /// Add EPS to one coefficient before checking, e.g. d2=1e-3.
    #[arg(long, value_name = "KEY=EPS")]
    pub perturb: Vec<String>,
    /// Also run the finite-difference PDE check.
    #[arg(long)]
    pub pde: bool,
    /// Finite-difference step of the PDE check.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    /// Sample points of the ODE check.
    #[arg(long, default_value_t = 257)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, short, default_value_t = 401)]
    pub n: usize,
    #[arg(long, short, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, short, default_value_t = 401)]
    pub n: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 256)]
    pub modes: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Final time; defaults to the time taken to travel one period.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub no_dealias: bool,
    /// Number of output times.
    #[arg(long, default_value_t = 20)]
    pub outputs: usize,
    /// Also measure the order of the time integrator by halving dt.
    #[arg(long)]
    pub dt_study: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Sigma,
    M,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = SweepParam::Sigma)]
    pub param: SweepParam,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
}

/// Fully resolved settings shared by the subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemKind,
    pub phys: PhysicalParams,
    pub sigma: f64,
    pub m: Modulus,
    pub signs: Vec<RSign>,
    pub family: Option<usize>,
    pub free: FreeParams,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn file_value<T: std::str::FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    file.get(key)
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| crate::Error::Config(format!("config key {key}: {e}")))
        })
        .transpose()
        .map_err(Into::into)
}

impl RunConfig {
    /// Merges defaults, the environment, the config file and flags, in increasing precedence.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => config::load(path)?,
            None => BTreeMap::new(),
        };
        macro_rules! pick {
            ($field:ident) => {
                match args.$field.clone() {
                    Some(v) => Some(v),
                    None => file_value(&file, stringify!($field))?,
                }
            };
        }
        let system: SystemKind = match args.system.clone().or_else(|| file.get("system").cloned()) {
            Some(s) => s.parse()?,
            None => SystemKind::SchrodingerKdVKdV,
        };
        let (fig, fig_sigma) = figure_set(system);
        let phys = PhysicalParams {
            mu0: pick!(mu0).unwrap_or(fig.mu0),
            mu1: pick!(mu1).unwrap_or(fig.mu1),
            a: pick!(a).unwrap_or(fig.a),
            b: pick!(b).unwrap_or(fig.b),
            c: pick!(c).unwrap_or(fig.c),
        };
        phys.validate()?;
        let sigma_opt: Option<f64> = pick!(sigma);
        let m_opt: Option<f64> = pick!(m);
        let sign = match args.sign {
            Some(s) => s,
            None => match file.get("sign").map(String::as_str) {
                None | Some("+") | Some("plus") | Some("1") | Some("+1") => SignChoice::Plus,
                Some("-") | Some("minus") | Some("-1") => SignChoice::Minus,
                Some("both") => SignChoice::Both,
                Some(other) => {
                    return Err(crate::Error::Config(format!("config key sign: {other:?}")).into())
                }
            },
        };
        let defaults = FreeParams::default();
        let free = FreeParams {
            h0: pick!(h0).unwrap_or(defaults.h0),
            d0: pick!(d0).unwrap_or(defaults.d0),
            h2: pick!(h2).unwrap_or(defaults.h2),
            shift: pick!(shift).unwrap_or(defaults.shift),
            omega: pick!(omega).unwrap_or(defaults.omega),
            m: m_opt.unwrap_or(defaults.m),
            sigma: sigma_opt.unwrap_or(defaults.sigma),
        };
        let family: Option<usize> = pick!(family);
        let mut tolerances = Tolerances::from_env()?;
        if let Some(spec) = file.get("tol") {
            tolerances = tolerances.apply_overrides(spec)?;
        }
        if let Some(spec) = &args.tol {
            tolerances = tolerances.apply_overrides(spec)?;
        }
        let format = match args.format {
            Some(f) => f,
            None => match file.get("format").map(String::as_str) {
                None | Some("json") => Format::Json,
                Some("csv") => Format::Csv,
                Some(other) => {
                    return Err(
                        crate::Error::Config(format!("config key format: {other:?}")).into(),
                    )
                }
            },
        };
        Ok(Self {
            system,
            phys,
            sigma: sigma_opt.unwrap_or(fig_sigma),
            m: Modulus::new(m_opt.unwrap_or(FIGURE_MODULUS))?,
            signs: sign.signs(),
            family,
            free,
            tolerances,
            output: args
                .output
                .clone()
                .or_else(|| file.get("output").map(PathBuf::from)),
            format,
        })
    }
}

/// Maps an error chain to the exit-code contract.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<crate::Error>() {
        return match e {
            crate::Error::Stability(_) => EXIT_UNSTABLE,
            _ => EXIT_DOMAIN,
        };
    }
    if let Some(e) = err.downcast_ref::<clap::Error>() {
        return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
    }
    EXIT_INTERNAL
}

/// Runs one parsed command and returns its exit code.
pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Params(args) => commands::params(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Sample(args) => commands::sample(&args),
        Command::Figures(args) => commands::figures(&args),
        Command::Catalog(args) => commands::catalog(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Sweep(args) => commands::sweep(&args),
    }
}

/// Parses `args`, runs the command and reports errors on stderr.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
        }
    };
    match run(cli).context("cnoidal") {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
