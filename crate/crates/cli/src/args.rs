use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Parser, Debug)]
#[command(name = "kohn", version, about = "Spectrum and Weyl asymptotics of the Kohn Laplacian on S^(2n-1)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table, env = "KOHN_FORMAT")]
    pub format: Format,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weyl coefficient lim N(lambda)/lambda^n by one or all methods
    Coeff(CoeffArgs),
    /// Eigenvalue counting function N(lambda)
    Count(CountArgs),
    /// Heat trace G(t) and t^n G(t)
    Heat(HeatArgs),
    /// Convergence table of N(lambda)/lambda^n towards the Weyl coefficient
    Converge(ConvergeArgs),
    /// Form-level coefficient function f(q), its continuation g(q) and the pole term
    Stanton(StantonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    SeriesDirect,
    SeriesZeta,
    Integral,
    Intermediate,
    All,
}

#[derive(Args, Debug)]
pub struct CoeffArgs {
    #[arg(long)]
    pub n: u32,

    #[arg(long, value_enum, default_value_t = MethodChoice::All)]
    pub method: MethodChoice,

    /// Absolute tolerance of the quadrature methods
    #[arg(long, default_value_t = 1e-10, env = "KOHN_TOL")]
    pub tol: f64,

    /// Number of terms for the direct series
    #[arg(long, default_value_t = 1_000_000, env = "KOHN_TERMS")]
    pub terms: u64,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub n: u32,

    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,

    /// List every spectral line below lambda as CSV rows
    #[arg(long)]
    pub modes: bool,

    /// Largest number of bidegree rows (count) or lines (--modes) to visit
    #[arg(long, default_value_t = kohn_spectrum::spectrum::DEFAULT_LINE_CAP, env = "KOHN_LINE_CAP")]
    pub line_cap: u64,
}

#[derive(Args, Debug)]
pub struct HeatArgs {
    #[arg(long)]
    pub n: u32,

    /// Comma-separated list of t values
    #[arg(long = "t", value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub t: Vec<f64>,

    /// Cross-check against the direct double sum
    #[arg(long)]
    pub verify: bool,

    #[arg(long, default_value_t = 10_000_000, env = "KOHN_TERM_CAP")]
    pub term_cap: u64,

    /// Smallest accepted t
    #[arg(long, default_value_t = 1e-6, env = "KOHN_MIN_T")]
    pub min_t: f64,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub n: u32,

    /// Comma-separated list of lambda values
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub lambdas: Vec<f64>,

    #[arg(long, default_value_t = kohn_spectrum::spectrum::DEFAULT_LINE_CAP, env = "KOHN_LINE_CAP")]
    pub line_cap: u64,
}

#[derive(Args, Debug)]
pub struct StantonArgs {
    #[arg(long)]
    pub n: u32,

    /// Complex point as "re" or "re,im"
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required_unless_present = "grid")]
    pub q: Option<Complex64>,

    /// Rectangle "re_lo,re_hi,im_lo,im_hi,steps" swept with steps x steps points
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, conflicts_with = "q")]
    pub grid: Option<Grid>,

    #[arg(long, default_value_t = 1e-10, env = "KOHN_TOL")]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub steps: u32,
}

impl Grid {
    pub fn points(&self) -> Vec<Complex64> {
        let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
            if self.steps == 1 {
                vec![lo]
            } else {
                (0..self.steps).map(|i| lo + (hi - lo) * i as f64 / (self.steps - 1) as f64).collect()
            }
        };
        let (res, ims) = (axis(self.re), axis(self.im));
        ims.iter().flat_map(|&im| res.iter().map(move |&re| Complex64::new(re, im))).collect()
    }
}

fn parse_float(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse_float(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse_float(re)?, parse_float(im)?)),
        _ => Err(format!("expected \"re\" or \"re,im\", got '{s}'")),
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(format!("expected \"re_lo,re_hi,im_lo,im_hi,steps\", got '{s}'"));
    }
    let steps: u32 = parts[4].trim().parse().map_err(|_| format!("'{}' is not a step count", parts[4]))?;
    if steps == 0 || steps > 1000 {
        return Err("grid steps must be between 1 and 1000".into());
    }
    Ok(Grid {
        re: (parse_float(parts[0])?, parse_float(parts[1])?),
        im: (parse_float(parts[2])?, parse_float(parts[3])?),
        steps,
    })
}
