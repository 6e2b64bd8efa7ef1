//! Command-line driver for the `kuznetsov` crate: tables of Kloosterman
//! and Ramanujan sums, zeta-series truncations, Bessel kernel and
//! Whittaker evaluations, Bessel transforms of the built-in weight family,
//! verification suites, and full trace reports.
//!
//! Output is deterministic: floats are always written with 17 significant
//! digits, JSON keys are sorted, and parallel maps collect in input order,
//! so `--threads 1` and `--threads 8` produce identical bytes.

pub mod commands;
pub mod data;
pub mod jsonfmt;
pub mod parse;
pub mod verify;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use kuznetsov::rings::QuadField;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "kuznetsov",
    version,
    about = "Kloosterman sums, Bessel kernels, Whittaker functions, and trace-formula \
             reports over imaginary quadratic rings"
)]
pub struct Cli {
    /// Field label D for Q(sqrt(-D)); one of 1, 2, 3, 7, 11.
    #[arg(long, global = true, default_value_t = 1)]
    pub field: u32,

    /// Verification threshold for `verify`; quadrature relative tolerance
    /// for the computing commands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// JSON carries the full nested report; CSV is a flat projection.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Worker threads. Any value produces byte-identical output.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Principal,
    Complementary,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteChoice {
    All,
    Closed,
    Kernel,
    Measure,
}

/// The (eta, nu, omega1, omega2) weight family shared by `transform` and
/// `trace`.
#[derive(Args, Clone, Debug)]
pub struct WeightArgs {
    /// Amplitude of the Gaussian eta.
    #[arg(long, default_value_t = 1.0)]
    pub eta_amplitude: f64,

    /// Center of the Gaussian eta as re,im.
    #[arg(long, default_value = "0,0")]
    pub eta_center: String,

    /// Width of the Gaussian eta.
    #[arg(long, default_value_t = 1.0)]
    pub eta_width: f64,

    /// Inner radius of the nu annulus.
    #[arg(long, default_value_t = 0.8)]
    pub nu_rho1: f64,

    /// Outer radius of the nu annulus.
    #[arg(long, default_value_t = 4.5)]
    pub nu_rho2: f64,

    /// First character as p/q,r/s over the integral basis; the first
    /// dual-basis generator when absent.
    #[arg(long)]
    pub omega1: Option<String>,

    /// Second character; defaults like --omega1.
    #[arg(long)]
    pub omega2: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kloosterman sums for every modulus root up to a norm bound.
    Kloosterman {
        /// Largest root norm enumerated.
        #[arg(long, default_value_t = 20)]
        bound: i64,
        /// First character as p/q,r/s over the integral basis.
        #[arg(long)]
        omega1: Option<String>,
        /// Second character.
        #[arg(long)]
        omega2: Option<String>,
        /// Use the defining residue sum instead of the factored path.
        #[arg(long)]
        brute: bool,
    },
    /// Ramanujan sums (one character; omega = 0 gives the totient).
    Ramanujan {
        #[arg(long, default_value_t = 20)]
        bound: i64,
        /// Character as p/q,r/s; zero when absent.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Truncated Kloosterman zeta series at a multiplicative character.
    Zeta {
        /// Character exponent s as re,im.
        #[arg(long, default_value = "1,0")]
        s: String,
        /// Angular frequency of the character.
        #[arg(long, default_value_t = 0)]
        d: i32,
        /// Additive twist as p/q,r/s; the first dual-basis generator when
        /// absent.
        #[arg(long)]
        omega: Option<String>,
        /// Largest root norm kept in the truncation.
        #[arg(long, default_value_t = 200)]
        bound: i64,
        /// Abel-smoothed truncations extrapolated to zero damping
        /// (experimental; for abscissae without absolute convergence).
        #[arg(long)]
        smoothed: bool,
    },
    /// The Bessel kernel of a spectral parameter on a list of points.
    Bessel {
        #[arg(long, value_enum, default_value_t = Kind::Principal)]
        kind: Kind,
        /// Spectral parameter: s = it (principal) or s = t (complementary).
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        d: i32,
        /// Raw complex s as re,im; overrides --kind/--t.
        #[arg(long, conflicts_with_all = ["kind", "t"])]
        s: Option<String>,
        /// First kernel argument as re,im.
        #[arg(long, default_value = "1,0")]
        a: String,
        /// Evaluation points as re,im; repeatable. A radial grid when
        /// absent.
        #[arg(long)]
        z: Vec<String>,
    },
    /// Whittaker values: the K-Bessel closed form against the defining
    /// unipotent integral on the diagonal torus.
    Whittaker {
        /// Real spectral parameter in (0, 1/2).
        #[arg(long, default_value_t = 0.3)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        d: i32,
        /// Character as p/q,r/s; the first dual-basis generator when absent.
        #[arg(long)]
        omega: Option<String>,
        /// Torus radii; repeatable.
        #[arg(long, default_values_t = [0.5, 1.0])]
        r: Vec<f64>,
        /// Torus angle.
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Skip the defining-integral column.
        #[arg(long)]
        closed_only: bool,
    },
    /// Bessel transform of the built-in weight at spectral points.
    Transform {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, value_enum, default_value_t = Kind::Principal)]
        kind: Kind,
        /// Spectral parameter values; repeatable.
        #[arg(long, default_values_t = [0.25])]
        t: Vec<f64>,
        /// Angular frequencies; repeatable.
        #[arg(long, default_values_t = [0])]
        d: Vec<i32>,
    },
    /// Verification suites; nonzero exit when any point fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
        suite: SuiteChoice,
        /// Restrict the s axis to one value.
        #[arg(long)]
        s: Option<f64>,
        /// Restrict the d axis to one value.
        #[arg(long)]
        d: Option<i32>,
        /// Restrict the r axis to one value (closed suite).
        #[arg(long)]
        r: Option<f64>,
    },
    /// Geometric, discrete, and continuous sides with per-term diagnostics.
    Trace {
        #[command(flatten)]
        weight: WeightArgs,
        /// Spectral data file; the discrete side is empty without it.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Skip the continuous side entirely.
        #[arg(long)]
        geometric_only: bool,
        /// Largest |d| on the continuous side.
        #[arg(long)]
        d_max: Option<i32>,
        /// Half-width of the continuous t window.
        #[arg(long)]
        t_max: Option<f64>,
        /// Gauss-Legendre nodes on the t window.
        #[arg(long)]
        t_nodes: Option<usize>,
        /// Norm bound for the smoothed zeta truncations.
        #[arg(long)]
        zeta_bound: Option<i64>,
    },
}

/// A finished command: the canonical JSON document, the CSV projection,
/// and the exit code.
pub struct Output {
    pub doc: serde_json::Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<jsonfmt::Cell>>,
    pub exit: i32,
}

/// An error with the exit code it maps to: 2 for configuration problems,
/// 3 for an unreadable data file, 1 for computation failures.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub fn config_failure(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

pub fn data_failure(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

pub fn compute_failure(context: &str, e: kuznetsov::Error) -> Failure {
    let code = match e {
        kuznetsov::Error::InvalidParameter(_) => 2,
        _ => 1,
    };
    Failure { code, message: format!("{context}: {e}") }
}

/// Settings shared by every command.
pub struct Ctx {
    pub field: QuadField,
    pub tol: Option<f64>,
}

impl Ctx {
    /// Quadrature settings: `--tol` as the relative tolerance when given,
    /// with the absolute floor three digits below.
    pub fn quad_spec(&self) -> kuznetsov::quad::QuadratureSpec {
        match self.tol {
            Some(t) => kuznetsov::quad::QuadratureSpec::with_tols(t, t * 1e-3),
            None => kuznetsov::quad::QuadratureSpec::with_tols(1e-9, 1e-12),
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let field = parse::lookup_field(cli.field).map_err(|e| config_failure(format!("--field: {e}")))?;
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(config_failure("--tol: must be positive and finite"));
        }
    }
    let threads = cli.threads.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| config_failure(format!("--threads: {e}")))?;
    let ctx = Ctx { field, tol: cli.tol };
    let output = pool.install(|| dispatch(&ctx, &cli.command))?;
    emit(cli, &output)?;
    Ok(output.exit)
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Kloosterman { bound, omega1, omega2, brute } => {
            commands::cmd_kloosterman(ctx, *bound, omega1.as_deref(), omega2.as_deref(), *brute)
        }
        Command::Ramanujan { bound, omega } => {
            commands::cmd_ramanujan(ctx, *bound, omega.as_deref())
        }
        Command::Zeta { s, d, omega, bound, smoothed } => {
            commands::cmd_zeta(ctx, s, *d, omega.as_deref(), *bound, *smoothed)
        }
        Command::Bessel { kind, t, d, s, a, z } => {
            commands::cmd_bessel(ctx, *kind, *t, *d, s.as_deref(), a, z)
        }
        Command::Whittaker { t, d, omega, r, phi, closed_only } => {
            commands::cmd_whittaker(ctx, *t, *d, omega.as_deref(), r, *phi, *closed_only)
        }
        Command::Transform { weight, kind, t, d } => {
            commands::cmd_transform(ctx, weight, *kind, t, d)
        }
        Command::Verify { suite, s, d, r } => commands::cmd_verify(ctx, *suite, *s, *d, *r),
        Command::Trace { weight, data, geometric_only, d_max, t_max, t_nodes, zeta_bound } => {
            commands::cmd_trace(
                ctx,
                weight,
                data.as_deref(),
                *geometric_only,
                *d_max,
                *t_max,
                *t_nodes,
                *zeta_bound,
            )
        }
    }
}

fn emit(cli: &Cli, output: &Output) -> Result<(), Failure> {
    let text = match cli.format {
        OutputFormat::Json => jsonfmt::to_canonical_json(&output.doc),
        OutputFormat::Csv => jsonfmt::to_csv(&output.csv_header, &output.csv_rows),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| config_failure(format!("--out {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| config_failure(format!("stdout: {e}")))
        }
    }
}
