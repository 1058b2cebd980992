//! Command-line entry point. Exit codes: 0 success, 1 usage error,
//! 2 numerical failure, 3 verification failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::builder::{MatrixKind, MertensFamily, DEFAULT_DIM_CAP};
use crate::error::{Error, Result};
use crate::experiments::{
    fit_overlay, probe_records, sweep, top_spectrum, verify_identities, FitCurveConfig, LogBase, SpectrumKind,
    SweepConfig, Tolerances, DEFAULT_TOP,
};
use crate::io::{write_eigvec_sidecar, write_fit_csv, write_kernel_csv, write_matrix_dump, write_sweep_csv, KernelRow};
use crate::kernel::{bound_integral, hs_distance_truncated, hs_norm_default, DEFAULT_CELLS};
use crate::scalar::exact_sqrt;
use crate::sieve::{mertens_at_with_max, MertensTable, DEFAULT_SIEVE_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Flags that do not influence output content and are left out of `# config:`.
const UNECHOED_FLAGS: [&str; 2] = ["--workers", "--out"];

#[derive(Debug, Parser)]
#[command(name = "mertens-spectra", version, about = "Mertens matrices, their spectra, and kernel estimates")]
struct Cli {
    /// Largest sieve bound any subcommand may build.
    #[arg(long, global = true, default_value_t = DEFAULT_SIEVE_LIMIT)]
    sieve_limit: u64,

    /// Largest dense matrix dimension.
    #[arg(long, global = true, env = "MERTENS_SPECTRA_MAX_DIM", default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print M(n).
    Mertens {
        #[arg(long)]
        n: u64,
    },
    /// Dump one matrix of the family.
    Matrix {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = parse_matrix_kind)]
        kind: MatrixKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leading eigenvalues as JSON.
    Spectrum {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = parse_spectrum_kind)]
        matrix: SpectrumKind,
        #[arg(long, default_value_t = DEFAULT_TOP)]
        top: usize,
        /// Also write eigenvectors to a sidecar file.
        #[arg(long)]
        eigvecs: bool,
        /// Sidecar path; defaults to `eigvecs-n<N>-<kind>.txt`.
        #[arg(long)]
        eigvecs_out: Option<PathBuf>,
    },
    /// Spectra over n = k² as CSV.
    Sweep(SweepArgs),
    /// Identity and bound checks.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..), conflicts_with_all = ["k_min", "k_max"])]
        n: Option<u64>,
        #[arg(long, requires = "k_max", value_parser = clap::value_parser!(u64).range(1..))]
        k_min: Option<u64>,
        #[arg(long, requires = "k_min")]
        k_max: Option<u64>,
    },
    /// Samples of the oscillatory overlay on a log-spaced grid.
    FitCurve {
        #[arg(long)]
        n_min: f64,
        #[arg(long)]
        n_max: f64,
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 1.05)]
        amplitude: f64,
        #[arg(long, default_value_t = 14.14)]
        omega: f64,
        #[arg(long, default_value_t = 2.2)]
        phase: f64,
        /// Base of the logarithm inside the cosine: e or 10.
        #[arg(long, default_value = "e", value_parser = parse_log_base)]
        log_base: LogBase,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hilbert-Schmidt norms of k_eps against the closed-form bound.
    KernelHs {
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_CELLS)]
        cells: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated L2 distances between k_eps and k.
    KernelDistance {
        #[arg(long, value_delimiter = ',', required = true)]
        eps_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        delta_list: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        cells: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    k_min: u64,
    #[arg(long)]
    k_max: u64,
    #[arg(long, default_value_t = 1)]
    step: u64,
    #[arg(long, value_parser = parse_spectrum_kind)]
    matrix: SpectrumKind,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Print growth statistics of the spectral norm as JSON (Kinv only).
    #[arg(long)]
    probe: bool,
}

fn parse_matrix_kind(s: &str) -> std::result::Result<MatrixKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_spectrum_kind(s: &str) -> std::result::Result<SpectrumKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_log_base(s: &str) -> std::result::Result<LogBase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Arguments after the program name, minus the flags that do not affect output.
pub fn config_echo(args: &[OsString]) -> String {
    let mut kept = Vec::new();
    let mut skip_next = false;
    for a in args.iter().skip(1) {
        let a = a.to_string_lossy();
        if skip_next {
            skip_next = false;
            continue;
        }
        if UNECHOED_FLAGS.contains(&a.as_ref()) {
            skip_next = true;
            continue;
        }
        if UNECHOED_FLAGS.iter().any(|f| a.starts_with(&format!("{f}="))) {
            continue;
        }
        kept.push(a.into_owned());
    }
    kept.join(" ")
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    EXIT_OK
                }
                _ => {
                    let rendered = e.to_string();
                    let line = rendered.lines().next().unwrap_or("invalid arguments");
                    eprintln!("{}", line.trim());
                    EXIT_USAGE
                }
            };
        }
    };
    let config = config_echo(&args);
    match execute(cli, &config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn require_square(n: u64) -> Result<u64> {
    exact_sqrt(n).filter(|&r| r > 0).ok_or(Error::NotPerfectSquare(n))
}

fn execute(cli: Cli, config: &str) -> Result<i32> {
    let dim_cap = cli.dim_cap;
    let sieve_limit = cli.sieve_limit;
    match cli.command {
        Command::Mertens { n } => {
            println!("{}", mertens_at_with_max(n, sieve_limit)?);
        }
        Command::Matrix { n, kind, out } => {
            if kind == MatrixKind::Uk {
                require_square(n)?;
            }
            let family = MertensFamily::<f64>::new(n, dim_cap)?;
            let m = family.build(kind)?;
            let mut w = open_output(out.as_deref())?;
            write_matrix_dump(&mut w, kind, n, &m)?;
            w.flush()?;
        }
        Command::Spectrum { n, matrix, top, eigvecs, eigvecs_out } => {
            if top == 0 {
                return Err(Error::Domain("--top must be at least 1".into()));
            }
            let spectrum = top_spectrum(n, matrix, top, dim_cap)?;
            let json = serde_json::json!({
                "n": n,
                "kind": matrix.as_str(),
                "eigenvalues": spectrum.eigenvalues,
                "residual_max": spectrum.residual_max(),
            });
            println!("{json}");
            if eigvecs {
                let path = eigvecs_out.unwrap_or_else(|| PathBuf::from(format!("eigvecs-n{n}-{matrix}.txt")));
                let mut w = BufWriter::new(File::create(&path)?);
                write_eigvec_sidecar(&mut w, n, matrix, &spectrum)?;
                w.flush()?;
            }
        }
        Command::Sweep(args) => {
            let cfg = SweepConfig {
                k_min: args.k_min,
                k_max: args.k_max,
                step: args.step,
                kind: args.matrix,
                workers: args.workers,
                dim_cap,
                sieve_limit,
            };
            let records = sweep(&cfg)?;
            let mut w = BufWriter::new(File::create(&args.out)?);
            write_sweep_csv(&mut w, config, &records)?;
            w.flush()?;
            if args.probe {
                let summary = probe_records(&records)?;
                println!("{}", serde_json::to_string(&summary).expect("plain struct serializes"));
            }
        }
        Command::Verify { n, k_min, k_max } => {
            let ns: Vec<u64> = match (n, k_min, k_max) {
                (Some(n), _, _) => {
                    require_square(n)?;
                    vec![n]
                }
                (None, Some(a), Some(b)) if a <= b => (a..=b).map(|k| k * k).collect(),
                (None, Some(a), Some(b)) => {
                    return Err(Error::Domain(format!("--k-min {a} exceeds --k-max {b}")));
                }
                _ => return Err(Error::Domain("verify needs --n or --k-min/--k-max".into())),
            };
            let table = MertensTable::with_max(*ns.iter().max().expect("nonempty"), sieve_limit)?;
            let tol = Tolerances::default();
            let mut failures = 0;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for n in ns.iter().copied() {
                let report = verify_identities(n, &table, dim_cap, &tol)?;
                if !report.all_passed() {
                    failures += 1;
                }
                write!(out, "{report}")?;
            }
            writeln!(out, "verified {} value(s) of n, {} failing", ns.len(), failures)?;
            return Ok(if failures == 0 { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::FitCurve { n_min, n_max, points, amplitude, omega, phase, log_base, out } => {
            if points == 0 || !(n_min <= n_max) || !(n_min > 0.0) {
                return Err(Error::Domain("fit-curve needs points >= 1 and 0 < n-min <= n-max".into()));
            }
            let grid: Vec<f64> = if points == 1 {
                vec![n_min]
            } else {
                let (a, b) = (n_min.ln(), n_max.ln());
                let last = points - 1;
                (0..points)
                    .map(|i| match i {
                        0 => n_min,
                        i if i == last => n_max,
                        i => (a + (b - a) * i as f64 / last as f64).exp(),
                    })
                    .collect()
            };
            let cfg = FitCurveConfig { amplitude, angular_frequency: omega, phase, log_base, ..FitCurveConfig::default() };
            let samples = fit_overlay(&cfg, &grid)?;
            let mut w = open_output(out.as_deref())?;
            write_fit_csv(&mut w, config, &samples)?;
            w.flush()?;
        }
        Command::KernelHs { epsilon, cells, out } => {
            let mut rows = Vec::with_capacity(epsilon.len());
            for eps in epsilon {
                let est = hs_norm_default(eps, cells)?;
                if est.flagged {
                    eprintln!(
                        "warning: epsilon={eps} two-grid error {} exceeds 5% of {}",
                        est.two_grid_error, est.value
                    );
                }
                rows.push(KernelRow {
                    epsilon: eps,
                    delta: None,
                    hs_norm: est.value,
                    bound: Some(bound_integral(eps)?),
                    two_grid_error: est.two_grid_error,
                });
            }
            let mut w = open_output(out.as_deref())?;
            write_kernel_csv(&mut w, config, &rows)?;
            w.flush()?;
        }
        Command::KernelDistance { eps_list, delta_list, cells, out } => {
            let mut rows = Vec::with_capacity(eps_list.len() * delta_list.len());
            for &eps in &eps_list {
                for &delta in &delta_list {
                    let est = hs_distance_truncated(eps, None, delta, cells)?;
                    rows.push(KernelRow {
                        epsilon: eps,
                        delta: Some(delta),
                        hs_norm: est.value,
                        bound: None,
                        two_grid_error: est.two_grid_error,
                    });
                }
            }
            let mut w = open_output(out.as_deref())?;
            write_kernel_csv(&mut w, config, &rows)?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(args: &[&str]) -> Vec<OsString> {
        args.iter().map(OsString::from).collect()
    }

    #[test]
    fn config_echo_drops_output_only_flags() {
        let args = os(&["prog", "sweep", "--k-min", "2", "--workers", "4", "--out=x.csv", "--matrix", "M"]);
        assert_eq!(config_echo(&args), "sweep --k-min 2 --matrix M");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["prog", "spectrum", "--n", "0", "--matrix", "M"]), EXIT_USAGE);
        assert_eq!(run(["prog", "matrix", "--n", "4", "--kind", "Q"]), EXIT_USAGE);
        assert_eq!(run(["prog", "nonsense"]), EXIT_USAGE);
        assert_eq!(run(["prog", "spectrum", "--n", "8", "--matrix", "M"]), EXIT_USAGE);
    }

    #[test]
    fn numerical_errors_map_to_two() {
        assert_eq!(exit_code(&Error::Singular { column: 0 }), EXIT_NUMERICAL);
        assert_eq!(exit_code(&Error::NoConvergence { index: 0, iterations: 30 }), EXIT_NUMERICAL);
        assert_eq!(exit_code(&Error::NotPerfectSquare(3)), EXIT_USAGE);
    }
}
