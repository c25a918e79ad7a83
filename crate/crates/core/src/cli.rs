//! Command-line front end.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::aniso::ModeParams;
use crate::chains::{
    chain_state_bruteforce, chain_state_closed, decompose_a_minus_limited, gram_json, gram_matrix,
    ChainLabel, MAX_GRAM_CONDITION,
};
use crate::error::Error;
use crate::position::{density_grid, write_grid_binary, write_grid_csv, GridGeometry};
use crate::principal::{principal_state, uncertainty_products};
use crate::resolution::{
    fullspace_identity_check, subspace_report, QuadratureSpec, CONVERGENCE_TOL,
};
use crate::selftest;
use crate::zero_modes::ZeroModeCoeffs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_ILL_CONDITIONED: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_SELFTEST: i32 = 6;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "ALADDERS_THREADS";

const EXIT_HELP: &str = "\
Complex values are given as `re,im`, `re`, or polar `mag@phase_rad`.

Exit status:
  0  success
  1  usage error (unknown flag, bad value syntax)
  2  domain error (invalid parameters, degenerate state, quantum number out of range)
  3  quadrature convergence failure
  4  ill-conditioned Gram system
  5  I/O error
  6  selftest reported failures

Environment:
  ALADDERS_THREADS  maximum worker threads for grid evaluation";

#[derive(Debug, Parser)]
#[command(name = "aladders", version, about = "Coherent-state chains of the 2:1 anisotropic oscillator", after_help = EXIT_HELP)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,

    /// key=value file whose entries fill flags not given on the command line.
    #[arg(long, global = true)]
    config: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct ParamArgs {
    /// alpha coefficient of A+ = alpha b+ + beta a+ b-.
    #[arg(long, default_value = "1,0", value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Complex64,
    /// beta coefficient; must be non-zero.
    #[arg(long, default_value = "1,0", value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Complex64,
}

impl ParamArgs {
    fn params(&self) -> Result<ModeParams, Error> {
        ModeParams::new(self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Bruteforce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridFormat {
    Csv,
    Bin,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zero-mode coefficients at level 2n as JSON.
    ZeroModes {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// A chain state as JSON.
    Chain {
        #[arg(long)]
        chain: usize,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Gram matrix of the chain states on one row as JSON.
    Gram {
        #[arg(long)]
        row: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Expansion of A- of a chain state over the row below as JSON.
    Lower {
        #[arg(long)]
        chain: usize,
        #[arg(long)]
        level: usize,
        /// Largest accepted Gram condition number.
        #[arg(long, default_value_t = MAX_GRAM_CONDITION)]
        max_condition: f64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// CSV of uncertainty products nu, product_a, product_b.
    Uncertainty {
        #[arg(long)]
        nu_max: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Resolution-of-identity check on level nu as JSON.
    Resolution {
        #[arg(long)]
        nu: usize,
        /// Gauss-Laguerre nodes per radial axis.
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Largest entry change tolerated when the node counts are doubled.
        #[arg(long, default_value_t = CONVERGENCE_TOL)]
        convergence_tol: f64,
        /// Also check the summed identity on all levels <= nu.
        #[arg(long)]
        full: bool,
    },
    /// Position probability density |<x,y|state>|^2 on a grid.
    Density {
        #[arg(long, default_value_t = 0)]
        chain: usize,
        #[arg(long)]
        level: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: GridFormat,
        #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = -16.0, allow_hyphen_values = true)]
        y_min: f64,
        #[arg(long, default_value_t = 16.0, allow_hyphen_values = true)]
        y_max: f64,
        #[arg(long, default_value_t = 600)]
        nx: usize,
        #[arg(long, default_value_t = 600)]
        ny: usize,
    },
    /// Runs the oracle-equivalence checks and prints pass/fail counts.
    Selftest,
}

/// Parses `re,im`, a bare real `re`, or polar `mag@phase` (radians).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number `{t}` in complex value `{s}`"))
    };
    let z = if let Some((mag, phase)) = s.split_once('@') {
        Complex64::from_polar(num(mag)?, num(phase)?)
    } else if let Some((re, im)) = s.split_once(',') {
        Complex64::new(num(re)?, num(im)?)
    } else {
        Complex64::new(num(s)?, 0.0)
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("complex value `{s}` is not finite"));
    }
    Ok(z)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Degenerate(_) | Error::OutOfRange { .. } => EXIT_DOMAIN,
        Error::Convergence { .. } => EXIT_CONVERGENCE,
        Error::IllConditioned { .. } => EXIT_ILL_CONDITIONED,
    }
}

enum Failure {
    Model(Error),
    Io(io::Error),
    Selftest,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Appends `--key value` for config entries the subcommand accepts and the
/// command line does not already set.
fn merge_config(argv: &[String]) -> Result<Vec<String>, String> {
    let Some(pos) = argv
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(argv.to_vec());
    };
    let path = match argv[pos].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => argv.get(pos + 1).cloned().ok_or("--config needs a path")?,
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse_config(&text)?;

    let cmd = Cli::command();
    let sub = argv
        .iter()
        .skip(1)
        .find_map(|a| cmd.find_subcommand(a).map(|s| s.get_name().to_string()));
    let accepted: Vec<String> = match sub.as_deref().and_then(|s| cmd.find_subcommand(s)) {
        Some(s) => s
            .get_arguments()
            .filter_map(|a| a.get_long().map(str::to_string))
            .collect(),
        None => Vec::new(),
    };

    let mut merged = argv.to_vec();
    for (key, value) in entries {
        if key == "config" || key == "out" {
            continue;
        }
        let flag = format!("--{key}");
        let given = argv
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given || !accepted.contains(&key) {
            continue;
        }
        if value.eq_ignore_ascii_case("true") {
            merged.push(flag);
        } else if !value.eq_ignore_ascii_case("false") {
            merged.push(format!("{flag}={value}"));
        }
    }
    Ok(merged)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::ZeroModes { n, params } => {
            let p = params.params()?;
            writeln!(out, "{}", ZeroModeCoeffs::new(n, &p).to_json())?;
        }
        Command::Chain {
            chain,
            level,
            method,
            params,
        } => {
            let p = params.params()?;
            let label = ChainLabel::new(chain, level)?;
            let state = match method {
                Method::Closed => chain_state_closed(label, &p)?,
                Method::Bruteforce => chain_state_bruteforce(label, &p)?,
            };
            writeln!(out, "{}", state.to_json())?;
        }
        Command::Gram { row, params } => {
            let p = params.params()?;
            if row == 0 {
                return Err(Error::domain("gram row must be >= 1").into());
            }
            writeln!(out, "{}", gram_json(row, &gram_matrix(row, &p)?))?;
        }
        Command::Lower {
            chain,
            level,
            max_condition,
            params,
        } => {
            let p = params.params()?;
            let d = decompose_a_minus_limited(ChainLabel::new(chain, level)?, &p, max_condition)?;
            writeln!(out, "{}", d.to_json())?;
        }
        Command::Uncertainty { nu_max, params } => {
            let p = params.params()?;
            writeln!(out, "nu,product_a,product_b")?;
            for nu in 0..=nu_max {
                let u = uncertainty_products(nu, &p)?;
                writeln!(out, "{},{},{}", u.nu, u.product_a, u.product_b)?;
            }
        }
        Command::Resolution {
            nu,
            nodes,
            convergence_tol,
            full,
        } => {
            let spec = QuadratureSpec {
                convergence_tol,
                ..QuadratureSpec::with_nodes(nodes)?
            };
            spec.validate()?;
            let report = subspace_report(nu, &spec)?;
            let mut value = serde_json::to_value(&report).expect("report json");
            if full {
                value["fullspace_max_deviation"] = fullspace_identity_check(nu, &spec)?.into();
            }
            writeln!(out, "{value}")?;
        }
        Command::Density {
            chain,
            level,
            params,
            format,
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        } => {
            let p = params.params()?;
            let label = ChainLabel::new(chain, level)?;
            let state = if chain == 0 {
                principal_state(level, &p)?.to_vector()
            } else {
                chain_state_closed(label, &p)?.vector
            };
            let geometry = GridGeometry::new(x_min, x_max, y_min, y_max, nx, ny)?;
            let d = density_grid(&state, &geometry)?;
            match format {
                GridFormat::Csv => write_grid_csv(&d.grid, out)?,
                GridFormat::Bin => write_grid_binary(&d.grid, out)?,
            }
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let passed = results.iter().filter(|r| r.passed).count();
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{tag} {} (worst {:.3e}, tol {:.0e})",
                    r.name, r.worst, r.tolerance
                )?;
            }
            writeln!(out, "{passed} passed, {} failed", results.len() - passed)?;
            if passed != results.len() {
                return Err(Failure::Selftest);
            }
        }
    }
    Ok(())
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var(THREADS_ENV).ok()?.trim().parse().ok()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .ok()
}

/// Runs the CLI on `argv` (including the program name), writing results to
/// `stdout` (or `--out`) and diagnostics to `stderr`. Returns the exit status.
pub fn run(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };

    let mut buffer = Vec::new();
    let result = match thread_pool() {
        Some(pool) => pool.install(|| execute(cli.command, &mut buffer)),
        None => execute(cli.command, &mut buffer),
    };
    // output that was produced before a selftest failure is still reported
    let written = match &cli.out {
        Some(path) => fs::write(path, &buffer),
        None => stdout.write_all(&buffer),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_IO;
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Model(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
        Err(Failure::Selftest) => EXIT_SELFTEST,
    }
}
