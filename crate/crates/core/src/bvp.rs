//! Finite-difference solver for the radial boundary-value problem
//! `psi'' + psi'/r = -eps` on `[R_a, R]` with Dirichlet data
//! `psi(R_a) = 0`, `psi(R) = Pi`.
//!
//! Second-order centered stencil on a uniform grid; the resulting
//! tridiagonal system is eliminated with the Thomas algorithm. This is
//! the independent cross-check for the closed-form solution in
//! [`crate::zero_energy`].

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, WaveFunction};
use crate::zero_energy::ZeroEnergyConfig;

/// Tridiagonal system for the interior unknowns, with the Dirichlet
/// boundary values folded into the right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledSystem {
    pub grid: RadialGrid,
    /// Subdiagonal, length `n - 1` where `n` is the interior count.
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    /// Superdiagonal, length `n - 1`.
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
    pub left_value: f64,
    pub right_value: f64,
}

/// Discretize the radial operator on `grid` with source `eps` and outer
/// boundary amplitude `pi_amp`:
///
/// ```text
/// (psi[i+1] - 2 psi[i] + psi[i-1]) / h^2
///   + (psi[i+1] - psi[i-1]) / (2 h r_i) = -eps
/// ```
pub fn assemble_system(grid: &RadialGrid, eps: f64, pi_amp: f64) -> Result<AssembledSystem> {
    if !(grid.r_min() > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radial assembly needs r_min > 0 (the 1/r term), got {}",
            grid.r_min()
        )));
    }
    let n_interior = grid.points() - 2;
    let h = grid.spacing();
    let h2 = h * h;
    let left_value = 0.0;
    let right_value = pi_amp;

    let mut sub = Vec::with_capacity(n_interior.saturating_sub(1));
    let mut diag = Vec::with_capacity(n_interior);
    let mut sup = Vec::with_capacity(n_interior.saturating_sub(1));
    let mut rhs = Vec::with_capacity(n_interior);

    for k in 0..n_interior {
        let r_i = grid.node(k + 1);
        let lower = 1.0 / h2 - 1.0 / (2.0 * h * r_i); // coeff of psi[i-1]
        let upper = 1.0 / h2 + 1.0 / (2.0 * h * r_i); // coeff of psi[i+1]
        diag.push(-2.0 / h2);
        let mut b = -eps;
        if k == 0 {
            b -= lower * left_value;
        } else {
            sub.push(lower);
        }
        if k == n_interior - 1 {
            b -= upper * right_value;
        } else {
            sup.push(upper);
        }
        rhs.push(b);
    }

    Ok(AssembledSystem {
        grid: *grid,
        sub,
        diag,
        sup,
        rhs,
        left_value,
        right_value,
    })
}

/// Thomas-algorithm elimination of a general tridiagonal system.
/// `sub` and `sup` have length `n - 1`; `diag` and `rhs` length `n`.
pub fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty tridiagonal system".into()));
    }
    if rhs.len() != n || sub.len() + 1 != n || sup.len() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "tridiagonal shape mismatch: n = {n}, sub = {}, sup = {}, rhs = {}",
            sub.len(),
            sup.len(),
            rhs.len()
        )));
    }

    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() < f64::MIN_POSITIVE {
        return Err(Error::SingularSystem { row: 0, pivot });
    }
    if n > 1 {
        c_prime[0] = sup[0] / pivot;
    }
    d_prime[0] = rhs[0] / pivot;

    for i in 1..n {
        pivot = diag[i] - sub[i - 1] * c_prime[i - 1];
        if pivot.abs() < f64::MIN_POSITIVE {
            return Err(Error::SingularSystem { row: i, pivot });
        }
        if i < n - 1 {
            c_prime[i] = sup[i] / pivot;
        }
        d_prime[i] = (rhs[i] - sub[i - 1] * d_prime[i - 1]) / pivot;
    }

    let mut x = d_prime;
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}

/// Solve an assembled system and reattach the boundary nodes.
pub fn solve_tridiagonal(system: &AssembledSystem) -> Result<WaveFunction> {
    let interior = thomas(&system.sub, &system.diag, &system.sup, &system.rhs)?;
    let mut values = Vec::with_capacity(system.grid.points());
    values.push(system.left_value);
    values.extend_from_slice(&interior);
    values.push(system.right_value);
    WaveFunction::new(system.grid, values)
}

/// Assemble and solve the radial problem for `cfg` on an `n`-point grid.
pub fn solve_bvp(cfg: &ZeroEnergyConfig, n: usize) -> Result<WaveFunction> {
    let grid = RadialGrid::new(cfg.inner_radius, cfg.outer_radius, n)?;
    let system = assemble_system(&grid, cfg.source, cfg.boundary_amplitude)?;
    solve_tridiagonal(&system)
}

/// Fitted convergence order, or `Exact` when every error is at rounding
/// level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderEstimate {
    Measured(f64),
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    /// (grid points, max-norm error vs the analytic solution) per level.
    pub errors: Vec<(usize, f64)>,
    pub order: OrderEstimate,
}

/// Max-norm error of the numerical solution against the closed form.
pub fn max_error_vs_analytic(cfg: &ZeroEnergyConfig, psi: &WaveFunction) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, r) in psi.grid().nodes().enumerate() {
        let gap = (psi.values()[i] - cfg.psi(r)?).abs();
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// Solve on each grid in `n_list` and regress max-norm error against
/// spacing to estimate the convergence order.
pub fn convergence_study(cfg: &ZeroEnergyConfig, n_list: &[usize]) -> Result<ConvergenceStudy> {
    if n_list.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "convergence study needs >= 2 grid levels, got {}",
            n_list.len()
        )));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) || n_list.iter().any(|&n| n < 3) {
        return Err(Error::InvalidInput(
            "grid levels must be strictly increasing and >= 3".into(),
        ));
    }

    let mut errors = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let psi = solve_bvp(cfg, n)?;
        errors.push((n, max_error_vs_analytic(cfg, &psi)?));
    }

    // Rounding floor: solutions this close to the closed form carry no
    // order information.
    let floor = 1e-14 * (cfg.boundary_amplitude.abs() + cfg.source * cfg.outer_radius * cfg.outer_radius).max(1e-300);
    if errors.iter().all(|&(_, e)| e <= floor) {
        return Ok(ConvergenceStudy {
            errors,
            order: OrderEstimate::Exact,
        });
    }

    // Least squares of ln(err) on ln(h).
    let span = cfg.outer_radius - cfg.inner_radius;
    let pts: Vec<(f64, f64)> = errors
        .iter()
        .filter(|&&(_, e)| e > floor)
        .map(|&(n, e)| ((span / (n - 1) as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(
            "too few levels above the rounding floor to fit an order".into(),
        ));
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    Ok(ConvergenceStudy {
        errors,
        order: OrderEstimate::Measured(slope),
    })
}
