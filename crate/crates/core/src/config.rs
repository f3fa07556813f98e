//! Run configuration: flat `key = value` config files, flag overrides,
//! and defaults.
//!
//! Precedence is flags over file over defaults. Config files are
//! line-oriented: blank lines and lines starting with `#` are ignored,
//! everything else must be `key = value`. [`parse_str`] accepts
//! untrusted input and never panics.

use std::path::PathBuf;

use thiserror::Error as ThisError;

use crate::error::Error;
use crate::params::PhysicalParams;
use crate::zero_energy::ZeroEnergyConfig;

/// Source-strength values of the reference sweep.
pub const DEFAULT_EPS_SWEEP: [f64; 4] = [0.0005, 0.001, 0.005, 0.01];
/// Boundary amplitude of the reference sweep.
pub const DEFAULT_PI: f64 = 0.01;
pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Bvp,
    Energy,
    Gpe,
    Sweep,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::Bvp => "bvp",
            Mode::Energy => "energy",
            Mode::Gpe => "gpe",
            Mode::Sweep => "sweep",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "bvp" => Ok(Mode::Bvp),
            "energy" => Ok(Mode::Energy),
            "gpe" => Ok(Mode::Gpe),
            "sweep" => Ok(Mode::Sweep),
            other => Err(ConfigError::UnknownMode(other.to_string())),
        }
    }
}

/// Configuration failures, each with its own process exit code.
#[derive(Debug, ThisError, PartialEq, Eq)]
pub enum ConfigError {
    #[error("missing required key: {0}")]
    MissingKey(String),
    #[error("invalid value for `{key}`: {message}")]
    InvalidValue { key: String, message: String },
    #[error("unknown mode `{0}` (expected analytic|bvp|energy|gpe|sweep)")]
    UnknownMode(String),
}

impl ConfigError {
    /// Documented exit codes: 2 missing key, 3 invalid value, 4 unknown
    /// mode.
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::MissingKey(_) => 2,
            ConfigError::InvalidValue { .. } => 3,
            ConfigError::UnknownMode(_) => 4,
        }
    }
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Raw option set, before defaults. Both the config file and the CLI
/// flags parse into this shape.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub mode: Option<Mode>,
    pub r_inner: Option<f64>,
    pub r_outer: Option<f64>,
    pub eps: Option<Vec<f64>>,
    pub pi: Option<f64>,
    pub grid_points: Option<usize>,
    pub tol: Option<f64>,
    pub cross_check: Option<bool>,
    pub out: Option<PathBuf>,
    pub g: Option<f64>,
    pub omega: Option<f64>,
    pub n_atoms: Option<f64>,
    pub box_half_width: Option<f64>,
    pub max_iters: Option<usize>,
}

impl RawConfig {
    /// Overlay `other` on top of `self` (`other` wins).
    pub fn merged_with(&self, other: &RawConfig) -> RawConfig {
        RawConfig {
            mode: other.mode.or(self.mode),
            r_inner: other.r_inner.or(self.r_inner),
            r_outer: other.r_outer.or(self.r_outer),
            eps: other.eps.clone().or_else(|| self.eps.clone()),
            pi: other.pi.or(self.pi),
            grid_points: other.grid_points.or(self.grid_points),
            tol: other.tol.or(self.tol),
            cross_check: other.cross_check.or(self.cross_check),
            out: other.out.clone().or_else(|| self.out.clone()),
            g: other.g.or(self.g),
            omega: other.omega.or(self.omega),
            n_atoms: other.n_atoms.or(self.n_atoms),
            box_half_width: other.box_half_width.or(self.box_half_width),
            max_iters: other.max_iters.or(self.max_iters),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value
        .parse()
        .map_err(|_| invalid(key, format!("`{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(invalid(key, format!("`{value}` is not finite")));
    }
    Ok(v)
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| invalid(key, format!("`{value}` is not a non-negative integer")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(invalid(key, format!("`{value}` is not a boolean"))),
    }
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Vec<&str> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(invalid(key, "empty list"));
    }
    items.iter().map(|s| parse_f64(key, s)).collect()
}

/// Parse a config file body. Never panics on any input.
pub fn parse_str(text: &str) -> Result<RawConfig, ConfigError> {
    let mut cfg = RawConfig::default();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => {
                return Err(invalid(line, "expected `key = value`"));
            }
        };
        match key {
            "mode" => cfg.mode = Some(value.parse()?),
            "r_inner" => cfg.r_inner = Some(parse_f64(key, value)?),
            "r_outer" => cfg.r_outer = Some(parse_f64(key, value)?),
            "eps" => cfg.eps = Some(parse_f64_list(key, value)?),
            "pi" => cfg.pi = Some(parse_f64(key, value)?),
            "grid_points" => cfg.grid_points = Some(parse_usize(key, value)?),
            "tol" => cfg.tol = Some(parse_f64(key, value)?),
            "cross_check" => cfg.cross_check = Some(parse_bool(key, value)?),
            "out" => cfg.out = Some(PathBuf::from(value)),
            "g" => cfg.g = Some(parse_f64(key, value)?),
            "omega" => cfg.omega = Some(parse_f64(key, value)?),
            "n_atoms" => cfg.n_atoms = Some(parse_f64(key, value)?),
            "box_half_width" => cfg.box_half_width = Some(parse_f64(key, value)?),
            "max_iters" => cfg.max_iters = Some(parse_usize(key, value)?),
            other => {
                return Err(invalid(other, "unknown key"));
            }
        }
    }
    Ok(cfg)
}

/// Fully resolved run configuration: every field has a value and the
/// cross-field invariants hold.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub r_inner: f64,
    pub r_outer: f64,
    pub eps: Vec<f64>,
    pub pi: f64,
    pub grid_points: usize,
    pub tol: f64,
    pub cross_check: bool,
    pub out: Option<PathBuf>,
    pub g: f64,
    pub omega: f64,
    pub n_atoms: f64,
    pub box_half_width: f64,
    pub max_iters: usize,
}

impl RunConfig {
    /// The annulus configuration for one source strength.
    pub fn zero_energy_config(&self, eps: f64) -> Result<ZeroEnergyConfig, ConfigError> {
        ZeroEnergyConfig::new(self.r_inner, self.r_outer, eps, self.pi)
            .map_err(|e| invalid("r_inner/r_outer/eps/pi", e.to_string()))
    }
}

/// Apply defaults and validate a merged raw configuration.
///
/// Default radii follow the trap length of the default unit system
/// (`l_t = sqrt(1/2)`): `r_inner = 0.1 l_t`, `r_outer = 1.0 l_t`. These
/// are artifact choices, recorded in the output header.
pub fn resolve(raw: &RawConfig) -> Result<RunConfig, ConfigError> {
    let mode = raw.mode.ok_or_else(|| ConfigError::MissingKey("mode".into()))?;

    let trap_length = PhysicalParams::default()
        .trap_length()
        .map_err(|e| invalid("omega", e.to_string()))?;
    let r_inner = raw.r_inner.unwrap_or(0.1 * trap_length);
    let r_outer = raw.r_outer.unwrap_or(trap_length);
    let eps = raw.eps.clone().unwrap_or_else(|| DEFAULT_EPS_SWEEP.to_vec());
    let pi = raw.pi.unwrap_or(DEFAULT_PI);
    let grid_points = raw.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
    let tol = raw.tol.unwrap_or(DEFAULT_TOLERANCE);
    let g = raw.g.unwrap_or(0.0);
    let omega = raw.omega.unwrap_or(1.0);
    let n_atoms = raw.n_atoms.unwrap_or(1.0);
    let max_iters = raw.max_iters.unwrap_or(DEFAULT_MAX_ITERS);

    if grid_points < 3 {
        return Err(invalid("grid_points", format!("need >= 3, got {grid_points}")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("need > 0, got {tol}")));
    }

    match mode {
        Mode::Analytic | Mode::Bvp | Mode::Energy | Mode::Sweep => {
            if !(r_inner > 0.0) {
                return Err(invalid("r_inner", format!("need > 0, got {r_inner}")));
            }
            if !(r_inner < r_outer) {
                return Err(invalid(
                    "r_outer",
                    format!("need r_inner < r_outer, got [{r_inner}, {r_outer}]"),
                ));
            }
            for &e in &eps {
                if !(e >= 0.0) {
                    return Err(invalid("eps", format!("need >= 0, got {e}")));
                }
            }
        }
        Mode::Gpe => {
            if !(g >= 0.0) {
                return Err(invalid("g", format!("need >= 0, got {g}")));
            }
            if !(omega > 0.0) {
                return Err(invalid("omega", format!("need > 0, got {omega}")));
            }
            if !(n_atoms > 0.0) {
                return Err(invalid("n_atoms", format!("need > 0, got {n_atoms}")));
            }
        }
    }

    // Default half-width: 8x the larger of the trap length and the
    // Thomas-Fermi radius estimate, so truncation stays below tolerance.
    let box_half_width = match raw.box_half_width {
        Some(l) => {
            if !(l > 0.0) {
                return Err(invalid("box_half_width", format!("need > 0, got {l}")));
            }
            l
        }
        None => {
            let lt = (1.0 / (2.0 * omega)).sqrt();
            let tf_radius = if g > 0.0 {
                let mu_tf = 0.5 * (1.5 * g * n_atoms * omega).powf(2.0 / 3.0);
                (2.0 * mu_tf).sqrt() / omega
            } else {
                0.0
            };
            8.0 * lt.max(tf_radius)
        }
    };

    Ok(RunConfig {
        mode,
        r_inner,
        r_outer,
        eps,
        pi,
        grid_points,
        tol,
        cross_check: raw.cross_check.unwrap_or(false),
        out: raw.out.clone(),
        g,
        omega,
        n_atoms,
        box_half_width,
        max_iters,
    })
}

/// Read and parse a config file.
pub fn parse_file(path: &std::path::Path) -> Result<RawConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text).map_err(|e| Error::InvalidInput(e.to_string()))
}
