//! Command-line front end for the tautlab verification suites.

pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use tautlab::Error;

use report::Report;
use suites::Settings;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tautlab",
    version,
    about = "Verification suites for taut contact spheres"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Seed for every sampled point set.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Tolerance replacing every check's default.
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Random sample points per sweep.
    #[arg(long, global = true, default_value_t = 100,
          value_parser = clap::value_parser!(u64).range(1..=100_000))]
    samples: u64,
    /// JSON report (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV rows of point coordinates and residuals instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(Verify),
    /// Report on a point of the moduli space.
    #[command(subcommand)]
    Report(ReportKind),
    /// Curvature sweeps.
    #[command(subcommand)]
    Curvature(Curvature),
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// Tautness, Λ-constancy and flatness of the ν-family.
    Family {
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        nu: f64,
    },
    /// The Gibbons–Hawking example.
    Gh,
    /// The Monge–Ampère and Helmholtz chain.
    Helmholtz {
        #[arg(long, default_value = "12x12", value_parser = parse_grid)]
        grid: (usize, usize),
    },
    /// The ν = 0 Cartan structure.
    Cartan,
}

#[derive(Debug, Subcommand)]
enum ReportKind {
    /// Whether the circle with modulus δ extends to a taut sphere.
    Moduli {
        /// Complex modulus, e.g. `0.3+0.0i` or `0.4i`.
        #[arg(long, value_parser = parse_delta, allow_hyphen_values = true)]
        delta: Complex64,
    },
}

#[derive(Debug, Subcommand)]
enum Curvature {
    /// Complex Monge–Ampère residual and `K` of the Helmholtz potential.
    Kahler {
        #[arg(long, default_value = "12x12", value_parser = parse_grid)]
        grid: (usize, usize),
    },
    /// Gauss curvature of the Gibbons–Hawking surface.
    Gauss {
        #[arg(long, default_value = "12x12", value_parser = parse_grid)]
        grid: (usize, usize),
    },
}

/// Parses `NxM` with both sides at least 1.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got {s:?}"))?;
    let n: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let m: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if n == 0 || m == 0 || n * m > 1_000_000 {
        return Err(format!("grid {n}x{m} out of range"));
    }
    Ok((n, m))
}

pub fn parse_delta(s: &str) -> Result<Complex64, String> {
    let d: Complex64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if !(d.re.is_finite() && d.im.is_finite()) {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(d)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(format!("tolerance must be positive, got {t}"));
    }
    Ok(t)
}

fn run_suite(command: &Command, s: &Settings) -> tautlab::Result<Report> {
    match command {
        Command::Verify(Verify::Family { nu }) => suites::verify_family(s, *nu),
        Command::Verify(Verify::Gh) => suites::verify_gh(s),
        Command::Verify(Verify::Helmholtz { grid }) => suites::verify_helmholtz(s, *grid),
        Command::Verify(Verify::Cartan) => suites::verify_cartan(s),
        Command::Report(ReportKind::Moduli { delta }) => suites::report_moduli(s, *delta),
        Command::Curvature(Curvature::Kahler { grid }) => suites::curvature_kahler(s, *grid),
        Command::Curvature(Curvature::Gauss { grid }) => suites::curvature_gauss(s, *grid),
    }
}

/// Parses `argv`, runs the suite and writes the report. Returns the exit
/// code: 0 when every check passes, 1 on a failed check or a computation
/// error, 2 on a usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let g = &cli.global;
    let settings = Settings {
        seed: g.seed,
        tol: g.tol,
        samples: g.samples as usize,
    };
    let start = Instant::now();
    let mut report = match run_suite(&cli.command, &settings) {
        Ok(r) => r,
        Err(e @ Error::Strip { .. }) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAIL;
        }
    };
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    if let Err(e) = emit(&report, g, out) {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_FAIL;
    }
    let _ = report.write_summary(err);
    if report.pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn emit(report: &Report, g: &Global, stdout: &mut dyn Write) -> io::Result<()> {
    let mut file;
    let sink: &mut dyn Write = match &g.out {
        Some(path) => {
            file = io::BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    if g.csv {
        report.write_csv(sink)?;
    } else {
        report.write_json(sink)?;
    }
    sink.flush()
}
