//! Argument parsing and command implementations for the `gridzeta` binary.

pub mod check;
pub mod commands;
pub mod output;

use clap::{Parser, Subcommand, ValueEnum};
use gridzeta::{Complex64, Error, Result};

pub use output::{exit_code, Format, Report};

#[derive(Debug, Parser)]
#[command(
    name = "gridzeta",
    version,
    about = "Ihara zeta function of the square grid ℤ×ℤ"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Absolute and relative tolerance for quadrature routes.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Highest power of u kept by series routes (rounded up to even).
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Theta,
    Quadrature,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PlotKind {
    RealZeta,
    SheetsAbs,
    ImagBranchcut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Grid,
    Torus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Z(u) by one route, with the modulus k, nome t and region of u.
    Eval {
        /// Complex literal such as `0.1`, `0.1+0.05i` or `-2i`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        u: Complex64,
        #[arg(long, value_enum, default_value = "theta")]
        route: Route,
    },
    /// Exact coefficients of Tr log Δ_u, det Δ_u and Z as rationals.
    Series,
    /// Plot data as CSV rows.
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        /// Number of samples (per axis for grids).
        #[arg(long)]
        samples: Option<usize>,
        /// `a,b` interval of u for real_zeta.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// Radius of the t disk for sheets_abs.
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        /// Half-width of the u square for imag_branchcut.
        #[arg(long, default_value_t = 1.0)]
        extent: f64,
    },
    /// Apply deck words up to a length to the principal lift of u.
    Sheets {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        u: Complex64,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Normalized finite-graph log zeta against log Z, per size.
    Converge {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        u: Complex64,
        /// Comma-separated increasing sizes.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        sizes: Vec<usize>,
    },
    /// Closed-walk, geodesic and primitive-class counts on ℤ².
    Walks {
        #[arg(long, default_value_t = 12)]
        max_length: usize,
        /// Also list canonical direction words of primitive classes of this length.
        #[arg(long)]
        classes: Option<usize>,
    },
    /// Run the invariant battery.
    Check {
        /// Corrupt one computed coefficient of Z before comparing.
        #[arg(long)]
        inject_fault: bool,
    },
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also with `j`).
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    cleaned
        .parse::<Complex64>()
        .map_err(|_| format!("cannot parse {s:?} as a complex number"))
        .and_then(|z| {
            if z.re.is_finite() && z.im.is_finite() {
                Ok(z)
            } else {
                Err(format!("{s:?} is not finite"))
            }
        })
}

pub fn run(cli: &Cli) -> Result<Report> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Error::Domain(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Eval { u, route } => commands::eval(*u, *route, cli.tol, cli.order),
        Command::Series => {
            commands::series(cli.order.unwrap_or(gridzeta::exact_series::DEFAULT_ORDER))
        }
        Command::Plot {
            kind,
            samples,
            range,
            radius,
            extent,
        } => commands::plot(*kind, *samples, range.as_deref(), *radius, *extent),
        Command::Sheets { u, depth } => commands::sheets(*u, *depth),
        Command::Converge { family, u, sizes } => commands::converge(*family, *u, sizes),
        Command::Walks {
            max_length,
            classes,
        } => commands::walks(*max_length, *classes),
        Command::Check { inject_fault } => check::run_battery(*inject_fault),
    }
}
