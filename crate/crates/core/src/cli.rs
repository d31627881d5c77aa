//! Command-line front end.
//!
//! Exit status is 0 on success, 2 on a usage error and 1 when a computation
//! fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::coulomb::{eigen_table, solve_states, Origin, RadialSolution, Settings};
use crate::error::Error;
use crate::exec::{map_indexed, map_slice, Execution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sinc-radial", version, about = "Sinc collocation bound states of the 2D logarithmic potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues for a set of angular momenta.
    Eigen(EigenArgs),
    /// Samples of the normalized radial function R(x).
    Wavefunction(WavefunctionArgs),
    /// One eigenvalue over a sequence of grid sizes.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OriginArg {
    Auto,
    Truncated,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Strip half-width of the conformal map.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub d: f64,
    /// Decay rate at infinity, in [0.5, 1].
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Closure at the origin for l = 0.
    #[arg(long, value_enum, default_value_t = OriginArg::Auto)]
    pub origin: OriginArg,
    /// Output layout.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run every loop on the calling thread.
    #[arg(long)]
    pub sequential: bool,
}

impl Common {
    fn settings(&self, m: usize) -> Settings {
        Settings {
            d: self.d,
            beta: self.beta,
            m,
            origin: match self.origin {
                OriginArg::Auto => Origin::Auto,
                OriginArg::Truncated => Origin::Truncated,
            },
            exec: if self.sequential { Execution::Sequential } else { Execution::Parallel },
        }
    }
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    /// Angular momenta, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 1, 2, 3, 4])]
    pub l: Vec<u32>,
    /// Number of states per l.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    /// Lower grid size M.
    #[arg(long = "M", alias = "m", default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    /// Also print lambda' = lambda + gamma + ln 2.
    #[arg(long)]
    pub lambda_prime: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Radial excitation, 0 for the ground state.
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    #[arg(long = "M", alias = "m", default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, default_value_t = 0.01)]
    pub x_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub x_max: f64,
    /// Number of log-spaced sample points.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    /// Grid sizes, strictly increasing, comma separated.
    #[arg(long = "M", alias = "m", value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: Vec<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

/// Parse `args` (program name first) and run; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
        }
    };
    match execute(&cli.command) {
        Ok((text, path)) => {
            let written = match path {
                Some(p) => File::create(p).and_then(|mut f| f.write_all(text.as_bytes())),
                None => stdout.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_COMPUTE
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_COMPUTE
        }
    }
}

fn execute(cmd: &Command) -> Result<(String, Option<&PathBuf>), Failure> {
    match cmd {
        Command::Eigen(a) => Ok((cmd_eigen(a)?, a.common.output.as_ref())),
        Command::Wavefunction(a) => Ok((cmd_wavefunction(a)?, a.common.output.as_ref())),
        Command::Converge(a) => Ok((cmd_converge(a)?, a.common.output.as_ref())),
    }
}

fn check_common(c: &Common) -> Result<(), Failure> {
    if !(c.d.is_finite() && c.d > 0.0) {
        return Err(Failure::Usage(format!("--d must be positive, got {}", c.d)));
    }
    if !(0.5..=1.0).contains(&c.beta) {
        return Err(Failure::Usage(format!("--beta must lie in [0.5, 1], got {}", c.beta)));
    }
    if let Some(p) = &c.output {
        if p.as_os_str().is_empty() {
            return Err(Failure::Usage("--output must not be empty".into()));
        }
    }
    Ok(())
}

fn cmd_eigen(a: &EigenArgs) -> Result<String, Failure> {
    check_common(&a.common)?;
    if a.l.is_empty() {
        return Err(Failure::Usage("--l needs at least one value".into()));
    }
    let table = eigen_table(&a.l, a.count as usize, &a.common.settings(a.m as usize))?;
    let count = a.count as usize;
    let mut out = String::new();
    match a.common.format {
        Format::Csv => {
            out.push_str(if a.lambda_prime { "n,l,lambda,lambda_prime\n" } else { "n,l,lambda\n" });
            for n in 0..count {
                for set in &table {
                    let s = &set.states[n];
                    let _ = write!(out, "{},{},{}", n, set.l, fmt_sig(s.lambda));
                    if a.lambda_prime {
                        let _ = write!(out, ",{}", fmt_sig(s.lambda_prime));
                    }
                    out.push('\n');
                }
            }
        }
        Format::Table => {
            let block = |out: &mut String, title: &str, pick: &dyn Fn(&RadialSolution) -> f64| {
                let _ = writeln!(out, "{title}");
                let _ = write!(out, "{:>3}", "n");
                for set in &table {
                    let _ = write!(out, " {:>14}", format!("l={}", set.l));
                }
                out.push('\n');
                for n in 0..count {
                    let _ = write!(out, "{n:>3}");
                    for set in &table {
                        let _ = write!(out, " {:>14}", fmt_sig(pick(&set.states[n])));
                    }
                    out.push('\n');
                }
            };
            block(&mut out, "lambda", &|s| s.lambda);
            if a.lambda_prime {
                out.push('\n');
                block(&mut out, "lambda_prime", &|s| s.lambda_prime);
            }
        }
    }
    Ok(out)
}

/// `samples` points from `lo` to `hi`, evenly spaced in `ln x`.
pub fn log_space(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    if samples == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..samples)
        .map(|i| {
            if i == samples - 1 {
                hi
            } else if i == 0 {
                lo
            } else {
                (a + (b - a) * i as f64 / (samples - 1) as f64).exp()
            }
        })
        .collect()
}

fn cmd_wavefunction(a: &WavefunctionArgs) -> Result<String, Failure> {
    check_common(&a.common)?;
    if !(a.x_min.is_finite() && a.x_min > 0.0) {
        return Err(Failure::Usage(format!("--x-min must be positive, got {}", a.x_min)));
    }
    if !(a.x_max.is_finite() && a.x_max > a.x_min) {
        return Err(Failure::Usage(format!("--x-max must exceed --x-min, got {}", a.x_max)));
    }
    let settings = a.common.settings(a.m as usize);
    let count = usize::try_from(a.n).ok().and_then(|n| n.checked_add(1)).ok_or_else(|| {
        Failure::Usage(format!("--n too large: {}", a.n))
    })?;
    let states = solve_states(a.l, count, &settings)?;
    let state = &states[count - 1];
    let xs = log_space(a.x_min, a.x_max, a.samples as usize);
    let rs = map_indexed(settings.exec, xs.len(), |i| state.evaluate_r(xs[i]))
        .into_iter()
        .collect::<Result<Vec<f64>, Error>>()?;
    let mut out = String::new();
    match a.common.format {
        Format::Csv => {
            out.push_str("x,R\n");
            for (x, r) in xs.iter().zip(&rs) {
                let _ = writeln!(out, "{},{}", fmt_sig(*x), fmt_sig(*r));
            }
        }
        Format::Table => {
            let _ = writeln!(out, "# l={} n={} lambda={}", a.l, a.n, fmt_sig(state.lambda));
            let _ = writeln!(out, "{:>16} {:>16}", "x", "R");
            for (x, r) in xs.iter().zip(&rs) {
                let _ = writeln!(out, "{:>16} {:>16}", fmt_sig(*x), fmt_sig(*r));
            }
        }
    }
    Ok(out)
}

fn cmd_converge(a: &ConvergeArgs) -> Result<String, Failure> {
    check_common(&a.common)?;
    if a.m.len() < 2 {
        return Err(Failure::Usage("--M needs at least two grid sizes".into()));
    }
    if a.m.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Usage("--M values must be strictly increasing".into()));
    }
    let count = usize::try_from(a.n).ok().and_then(|n| n.checked_add(1)).ok_or_else(|| {
        Failure::Usage(format!("--n too large: {}", a.n))
    })?;
    let base = a.common.settings(1);
    let lambdas = map_slice(base.exec, &a.m, |&m| {
        solve_states(a.l, count, &base.with_m(m as usize)).map(|s| s[count - 1].lambda)
    })
    .into_iter()
    .collect::<Result<Vec<f64>, Error>>()?;

    let mut out = String::new();
    let sep = match a.common.format {
        Format::Csv => {
            out.push_str("M,lambda,delta\n");
            ","
        }
        Format::Table => {
            let _ = writeln!(out, "{:>6} {:>16} {:>16}", "M", "lambda", "delta");
            " "
        }
    };
    for (i, (m, lam)) in a.m.iter().zip(&lambdas).enumerate() {
        let delta = if i == 0 { String::new() } else { fmt_sig((lam - lambdas[i - 1]).abs()) };
        match a.common.format {
            Format::Csv => {
                let _ = writeln!(out, "{m}{sep}{}{sep}{delta}", fmt_sig(*lam));
            }
            Format::Table => {
                let _ = writeln!(out, "{m:>6} {:>16} {delta:>16}", fmt_sig(*lam));
            }
        }
    }
    Ok(out)
}

/// Eight significant digits; fixed notation for magnitudes in `[1e-5, 1e8)`,
/// scientific otherwise.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.7e}");
    let exp: i32 = s[s.find('e').map_or(s.len(), |i| i + 1)..].parse().unwrap_or(0);
    if (-5..8).contains(&exp) {
        format!("{:.*}", (7 - exp) as usize, v)
    } else {
        s
    }
}
