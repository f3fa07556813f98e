//! `gpez` — profiles, energy audits, and ground states of the
//! zero-energy modified Gross-Pitaevskii problem, as deterministic CSV.
//!
//! Exit codes: 0 success, 2 missing config key, 3 invalid config value,
//! 4 unknown mode, 5 convergence failure, 6 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gpe_zero_energy::config::{self, ConfigError, Mode, RawConfig};
use gpe_zero_energy::run;
use gpe_zero_energy::Error;

#[derive(Debug, Parser)]
#[command(
    name = "gpez",
    about = "Zero-energy-limit Gross-Pitaevskii toolkit",
    after_help = "Flags override config-file values; unset options fall back to built-in defaults."
)]
struct Cli {
    /// Run mode: analytic | bvp | energy | gpe | sweep.
    #[arg(long)]
    mode: Option<String>,

    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Inner (hard-core) radius R_a.
    #[arg(long = "r-inner")]
    r_inner: Option<f64>,

    /// Outer (box) radius R.
    #[arg(long = "r-outer")]
    r_outer: Option<f64>,

    /// Source strength; repeat for a sweep.
    #[arg(long = "eps")]
    eps: Vec<f64>,

    /// Boundary amplitude Pi.
    #[arg(long = "pi")]
    pi: Option<f64>,

    #[arg(long = "grid-points")]
    grid_points: Option<usize>,

    /// Solver / quadrature relative tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// Add finite-difference companion columns to the sweep.
    #[arg(long = "cross-check")]
    cross_check: bool,

    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,

    /// 1D interaction coupling for gpe mode.
    #[arg(long)]
    g: Option<f64>,

    /// Trap angular frequency for gpe mode.
    #[arg(long)]
    omega: Option<f64>,

    #[arg(long = "n-atoms")]
    n_atoms: Option<f64>,

    #[arg(long = "box-half-width")]
    box_half_width: Option<f64>,

    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
}

impl Cli {
    fn to_raw(&self) -> Result<RawConfig, ConfigError> {
        let mode = match &self.mode {
            Some(s) => Some(s.parse::<Mode>()?),
            None => None,
        };
        Ok(RawConfig {
            mode,
            r_inner: self.r_inner,
            r_outer: self.r_outer,
            eps: if self.eps.is_empty() {
                None
            } else {
                Some(self.eps.clone())
            },
            pi: self.pi,
            grid_points: self.grid_points,
            tol: self.tol,
            cross_check: if self.cross_check { Some(true) } else { None },
            out: self.out.clone(),
            g: self.g,
            omega: self.omega,
            n_atoms: self.n_atoms,
            box_half_width: self.box_half_width,
            max_iters: self.max_iters,
        })
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("gpez: {message}");
    ExitCode::from(code)
}

fn run_error_code(err: &Error) -> u8 {
    match err {
        Error::NotConverged { .. } | Error::QuadratureBudget { .. } => 5,
        Error::Io(_) => 6,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let flags = match cli.to_raw() {
        Ok(raw) => raw,
        Err(e) => return fail(e.exit_code() as u8, e),
    };

    let file_cfg = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match config::parse_str(&text) {
                Ok(raw) => raw,
                Err(e) => return fail(e.exit_code() as u8, format!("{}: {e}", path.display())),
            },
            Err(e) => return fail(6, format!("{}: {e}", path.display())),
        },
        None => RawConfig::default(),
    };

    let resolved = match config::resolve(&file_cfg.merged_with(&flags)) {
        Ok(cfg) => cfg,
        Err(e) => return fail(e.exit_code() as u8, e),
    };

    let mut stderr = std::io::stderr();
    let result = match &resolved.out {
        Some(path) => {
            let file = match std::fs::File::create(path) {
                Ok(f) => f,
                Err(e) => return fail(6, format!("{}: {e}", path.display())),
            };
            let mut writer = std::io::BufWriter::new(file);
            run::execute(&resolved, &mut writer, &mut stderr).and_then(|()| Ok(writer.flush()?))
        }
        None => {
            let stdout = std::io::stdout();
            let mut writer = std::io::BufWriter::new(stdout.lock());
            run::execute(&resolved, &mut writer, &mut stderr).and_then(|()| Ok(writer.flush()?))
        }
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(run_error_code(&e), e),
    }
}
