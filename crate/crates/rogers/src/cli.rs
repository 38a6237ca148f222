//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rogers_core::montecarlo::McQuery;
use rogers_core::numerics::Complex;
use rogers_core::wiener_hopf::{Method, Side};

use crate::commands::{self, FactorSide, FluctQuery};
use crate::error::{CliError, Status};
use crate::output::to_json;
use crate::specfile::load_spec;
use crate::verify::{run_suite, McSettings, Suite};

#[derive(Debug, Parser)]
#[command(name = "rogers", version, about = "Rogers functions, spines, Wiener-Hopf factors and fluctuation identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Spec file (JSON).
    pub spec: PathBuf,
    /// Write the artifact here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Bd,
    Spine,
    Phi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FactorSideArg {
    Plus,
    Minus,
    Product,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Core,
    Spine,
    Wh,
    Fluct,
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate f at a point of the right half-plane.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Point as `re,im` (or a real number).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        xi: Complex,
    },
    /// Tabulate the spine as CSV; the Z intervals go to a JSON file.
    Spine {
        /// Spec file (JSON).
        spec: PathBuf,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// CSV destination; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Z-interval JSON destination.  Defaults to `<out>.z_intervals.json`
        /// next to the CSV, or stderr without `--out`.
        #[arg(long)]
        z_out: Option<PathBuf>,
    },
    /// Ratio `f^±(xi1)/f^±(xi2)` or product `f⁺(xi1) f⁻(xi2)` of factors of `tau + f`.
    Factor {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MethodArg::Bd)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = FactorSideArg::Plus)]
        side: FactorSideArg,
        #[arg(long)]
        xi1: f64,
        #[arg(long)]
        xi2: f64,
        #[arg(long)]
        tau: Option<f64>,
        /// Anchor radius of the spine product.
        #[arg(long, default_value_t = 0.0)]
        r: f64,
    },
    /// Space-time fluctuation quantities.
    Fluct {
        #[command(flatten)]
        common: Common,
        #[command(subcommand)]
        query: FluctCommand,
    },
    /// Simulate the supremum over an exponential horizon.
    Mc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Laplace variables of `E e^{-xi sup}`.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        xi: Vec<f64>,
        /// Time variables; adds `E e^{-xi sup - tau argmax}` for each `xi`.
        #[arg(long, value_delimiter = ',')]
        tau: Vec<f64>,
        /// Levels of `P(sup > x)`.
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        /// Dump the samples as CSV.
        #[arg(long)]
        samples_out: Option<PathBuf>,
    },
    /// Run a verification suite and write its report.
    Verify {
        /// Spec file (JSON).
        spec: PathBuf,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Tolerance; the default depends on the suite.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Sample size of the mc suite.
        #[arg(long, default_value_t = 50_000)]
        n: usize,
        /// Seed of the mc suite.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FluctCommand {
    /// `E exp(-xi sup)` over an `Exp(sigma)` horizon.
    SupLaplace {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        xi: f64,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
    },
    /// `P(sup > x)` over an `Exp(sigma)` horizon.
    SupTail {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        x: f64,
    },
    /// `E exp(-xi sup - tau argmax)` over an `Exp(sigma)` horizon.
    Pr {
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        #[arg(long)]
        xi: f64,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
    },
    /// `kappa(tau, xi1)/kappa(tau, xi2)`, or `kappa(tau1, xi)/kappa(tau2, xi)`
    /// when `--tau1 --tau2` are given.
    KappaRatio {
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        xi1: Option<f64>,
        #[arg(long)]
        xi2: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        tau1: Option<f64>,
        #[arg(long)]
        tau2: Option<f64>,
    },
    /// The compound Poisson correction `kappa°(tau)`.
    KappaCirc {
        #[arg(long)]
        tau: f64,
    },
}

fn parse_complex(s: &str) -> Result<Complex, String> {
    let num = |t: &str| -> Result<f64, String> {
        let v: f64 = t.trim().parse().map_err(|_| format!("not a number: {t:?}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("not finite: {t:?}"))
        }
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex::new(num(re)?, num(im)?)),
        None => Ok(Complex::new(num(s)?, 0.0)),
    }
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::new("argument", format!("{name} must be finite")).with_field(name))
    }
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::new("io", e.to_string())),
    }
}

fn fluct_query(q: &FluctCommand) -> Result<FluctQuery, CliError> {
    Ok(match *q {
        FluctCommand::SupLaplace { sigma, xi, side } => {
            FluctQuery::SupLaplace { sigma: finite("sigma", sigma)?, xi: finite("xi", xi)?, side: side.into() }
        }
        FluctCommand::SupTail { sigma, x } => FluctQuery::SupTail { sigma: finite("sigma", sigma)?, x: finite("x", x)? },
        FluctCommand::Pr { sigma, tau, xi, side } => FluctQuery::Pr {
            sigma: finite("sigma", sigma)?,
            tau: finite("tau", tau)?,
            xi: finite("xi", xi)?,
            side: side.into(),
        },
        FluctCommand::KappaRatio { side, tau, xi1, xi2, xi, tau1, tau2 } => match (tau, xi1, xi2, xi, tau1, tau2) {
            (tau, Some(xi1), Some(xi2), None, None, None) => FluctQuery::KappaRatioXi {
                tau: finite("tau", tau.unwrap_or(0.0))?,
                xi1: finite("xi1", xi1)?,
                xi2: finite("xi2", xi2)?,
                side: side.into(),
            },
            (None, None, None, xi, Some(tau1), Some(tau2)) => FluctQuery::KappaRatioTau {
                xi: finite("xi", xi.unwrap_or(0.0))?,
                tau1: finite("tau1", tau1)?,
                tau2: finite("tau2", tau2)?,
                side: side.into(),
            },
            _ => {
                return Err(CliError::new(
                    "argument",
                    "kappa-ratio takes either --xi1 --xi2 [--tau] or --tau1 --tau2 [--xi]",
                ))
            }
        },
        FluctCommand::KappaCirc { tau } => FluctQuery::KappaCirc { tau: finite("tau", tau)? },
    })
}

/// Run a parsed command; the artifact is written before returning.
pub fn execute(cli: &Cli) -> Result<Status, CliError> {
    match &cli.command {
        Command::Eval { common, xi } => {
            let spec = load_spec(&common.spec)?;
            let r = commands::eval(&spec, *xi)?;
            let text = match common.format {
                Format::Json => to_json(&r),
                Format::Csv => r.to_csv()?,
            };
            write_to(common.out.as_deref(), &text)?;
        }
        Command::Spine { spec, rmin, rmax, n, out, z_out } => {
            let spec = load_spec(spec)?;
            let (csv, meta) = commands::spine(&spec, finite("rmin", *rmin)?, finite("rmax", *rmax)?, *n)?;
            write_to(out.as_deref(), &csv)?;
            let meta = to_json(&meta);
            let z_path = z_out.clone().or_else(|| {
                out.as_ref().map(|p| {
                    let mut s = p.clone().into_os_string();
                    s.push(".z_intervals.json");
                    PathBuf::from(s)
                })
            });
            match z_path {
                Some(p) => std::fs::write(&p, meta).map_err(|e| CliError::io(&p, e))?,
                None => eprint!("{meta}"),
            }
        }
        Command::Factor { common, method, side, xi1, xi2, tau, r } => {
            let spec = load_spec(&common.spec)?;
            let method = match method {
                MethodArg::Bd => Method::Bd,
                MethodArg::Spine => Method::Spine,
                MethodArg::Phi => Method::Phi,
            };
            let side = match side {
                FactorSideArg::Plus => FactorSide::Plus,
                FactorSideArg::Minus => FactorSide::Minus,
                FactorSideArg::Product => FactorSide::Product,
            };
            let tau = tau.map(|t| finite("tau", t)).transpose()?;
            let o = commands::factor(&spec, method, side, finite("xi1", *xi1)?, finite("xi2", *xi2)?, tau, finite("r", *r)?)?;
            let text = match common.format {
                Format::Json => to_json(&o),
                Format::Csv => o.to_csv()?,
            };
            write_to(common.out.as_deref(), &text)?;
        }
        Command::Fluct { common, query } => {
            let spec = load_spec(&common.spec)?;
            let o = commands::fluct(&spec, fluct_query(query)?)?;
            let text = match common.format {
                Format::Json => to_json(&o),
                Format::Csv => o.to_csv()?,
            };
            write_to(common.out.as_deref(), &text)?;
        }
        Command::Mc { common, sigma, n, seed, xi, tau, x, samples_out } => {
            let spec = load_spec(&common.spec)?;
            let mut queries = Vec::new();
            for &v in xi {
                queries.push(McQuery::Laplace { xi: finite("xi", v)? });
            }
            for &v in xi {
                for &t in tau {
                    queries.push(McQuery::Joint { xi: v, tau: finite("tau", t)? });
                }
            }
            for &v in x {
                queries.push(McQuery::Tail { x: finite("x", v)? });
            }
            let (o, samples) = commands::mc(&spec, finite("sigma", *sigma)?, *n, *seed, &queries)?;
            if let Some(p) = samples_out {
                let text = commands::samples_csv(&samples)?;
                std::fs::write(p, text).map_err(|e| CliError::io(p, e))?;
            }
            let text = match common.format {
                Format::Json => to_json(&o),
                Format::Csv => o.to_csv()?,
            };
            write_to(common.out.as_deref(), &text)?;
        }
        Command::Verify { spec, suite, tol, out, n, seed } => {
            let spec = load_spec(spec)?;
            let suite = match suite {
                SuiteArg::Core => Suite::Core,
                SuiteArg::Spine => Suite::Spine,
                SuiteArg::Wh => Suite::Wh,
                SuiteArg::Fluct => Suite::Fluct,
                SuiteArg::Mc => Suite::Mc,
            };
            let mc = McSettings { n: *n, seed: *seed, ..McSettings::default() };
            let rep = run_suite(&spec, suite, tol.unwrap_or(suite.default_tol()), mc)?;
            write_to(out.as_deref(), &to_json(&rep))?;
            if !rep.passed() {
                return Ok(Status::ChecksFailed);
            }
        }
    }
    Ok(Status::Ok)
}

/// Parse `args`, run, report errors as JSON on stderr, and return the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return Status::Ok as i32;
            }
            let field = e.get(clap::error::ContextKind::InvalidArg).map(|v| v.to_string());
            let mut err = CliError::new("usage", e.render().to_string().trim().to_string());
            if let Some(f) = field {
                err = err.with_field(f);
            }
            eprint!("{}", to_json(&err));
            return Status::InputError as i32;
        }
    };
    match execute(&cli) {
        Ok(s) => s as i32,
        Err(e) => {
            eprint!("{}", to_json(&e));
            Status::InputError as i32
        }
    }
}
