//! Stationary 1D Gross-Pitaevskii ground-state solver.
//!
//! The iterate follows a semi-implicit normalized gradient flow: the
//! stiff linear part (kinetic + harmonic trap) is advanced implicitly
//! through a tridiagonal solve, the cubic term through a lagged
//! diagonal coefficient, and the result is renormalized to the particle
//! number after every step.
//!
//! Only the repulsive, real, nodeless ground state is in scope. The 1D
//! coupling `g` is a direct input; no dimensional reduction from the 3D
//! `4 pi a hbar^2 / m` form is imposed.

use thiserror::Error as ThisError;

use crate::bvp::thomas;
use crate::error::{Error, Result};
use crate::grid::{RadialGrid, WaveFunction};
use crate::params::PhysicalParams;

/// Definition of a 1D trapped-gas ground-state problem on `[-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpeProblem {
    pub grid: RadialGrid,
    pub trap_frequency: f64,
    /// Effective 1D interaction coupling; repulsive only.
    pub coupling: f64,
    pub particle_number: f64,
    pub params: PhysicalParams,
}

/// Energy split into its three contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTerms {
    pub kinetic: f64,
    pub potential: f64,
    /// `(g/2) int |psi|^4`.
    pub interaction: f64,
}

impl EnergyTerms {
    pub fn total(&self) -> f64 {
        self.kinetic + self.potential + self.interaction
    }
}

/// Iteration diagnostics of a ground-state solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    /// Attempted steps including those discarded by step-size halving.
    pub wall_steps: usize,
    /// Total energy after each accepted step.
    pub energy_trace: Vec<f64>,
}

/// Converged (or partial, on failure) ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub wavefunction: WaveFunction,
    pub chemical_potential: f64,
    pub total_energy: f64,
    pub report: SolveReport,
}

#[derive(Debug, ThisError)]
pub enum GpeSolveError {
    /// The iteration cap was reached first; the last iterate and its
    /// diagnostics are carried along.
    #[error("ground-state solve did not converge after {} iterations (residual {:e})",
            .0.report.iterations, .0.report.final_residual)]
    NotConverged(Box<GroundState>),
    #[error(transparent)]
    Other(#[from] Error),
}

impl From<GpeSolveError> for Error {
    fn from(e: GpeSolveError) -> Self {
        match e {
            GpeSolveError::NotConverged(state) => Error::NotConverged {
                iterations: state.report.iterations,
                final_residual: state.report.final_residual,
            },
            GpeSolveError::Other(err) => err,
        }
    }
}

/// Knobs of the gradient-flow iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub dt: f64,
    pub max_halvings: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dt: 1e-2,
            max_halvings: 10,
        }
    }
}

impl GpeProblem {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let h = self.grid.spacing();
        if (self.grid.r_min() + self.grid.r_max()).abs() > h {
            return Err(Error::InvalidInput(format!(
                "grid must be symmetric about 0 within one spacing, got [{}, {}]",
                self.grid.r_min(),
                self.grid.r_max()
            )));
        }
        if !(self.particle_number > 0.0) {
            return Err(Error::InvalidInput(format!(
                "particle number must be > 0, got {}",
                self.particle_number
            )));
        }
        if !(self.coupling >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "coupling must be >= 0 (attractive collapse out of scope), got {}",
                self.coupling
            )));
        }
        if !(self.trap_frequency > 0.0) {
            return Err(Error::InvalidInput(format!(
                "trap frequency must be > 0, got {}",
                self.trap_frequency
            )));
        }
        Ok(())
    }

    fn check_grid(&self, psi: &WaveFunction) -> Result<()> {
        if *psi.grid() != self.grid {
            return Err(Error::GridMismatch("wavefunction not on the problem grid".into()));
        }
        Ok(())
    }

    /// Harmonic trap `V(x) = m omega^2 x^2 / 2` at node coordinate `x`.
    pub fn potential(&self, x: f64) -> f64 {
        0.5 * self.params.mass * self.trap_frequency * self.trap_frequency * x * x
    }

    /// Trapezoid-rule `int |psi|^2 dx`.
    pub fn norm_squared(&self, psi: &WaveFunction) -> f64 {
        trapezoid(psi, |v| v * v)
    }

    /// Apply `H[psi] = -(hbar^2/2m) D2 psi + V psi + g psi^3` with
    /// Dirichlet zeros just outside the box.
    pub fn apply_hamiltonian(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        self.check_grid(psi)?;
        let n = self.grid.points();
        let h = self.grid.spacing();
        let kin = self.params.hbar * self.params.hbar / (2.0 * self.params.mass * h * h);
        let v = psi.values();
        let mut out = vec![0.0; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            let left = if i > 0 { v[i - 1] } else { 0.0 };
            let right = if i + 1 < n { v[i + 1] } else { 0.0 };
            let x = self.grid.node(i);
            out[i] = -kin * (right - 2.0 * v[i] + left)
                + self.potential(x) * v[i]
                + self.coupling * v[i] * v[i] * v[i];
        }
        WaveFunction::new(self.grid, out)
    }

    /// Energy functional: midpoint-gradient kinetic term plus trapezoid
    /// potential and interaction terms.
    pub fn energy_terms(&self, psi: &WaveFunction) -> Result<EnergyTerms> {
        self.check_grid(psi)?;
        let h = self.grid.spacing();
        let v = psi.values();
        let mut kinetic = 0.0;
        for i in 0..v.len() - 1 {
            let d = (v[i + 1] - v[i]) / h;
            kinetic += d * d;
        }
        kinetic *= h * self.params.hbar * self.params.hbar / (2.0 * self.params.mass);
        let potential = trapezoid_with(psi, |x, p| self.potential(x) * p * p);
        let interaction = 0.5 * self.coupling * trapezoid(psi, |p| p * p * p * p);
        Ok(EnergyTerms {
            kinetic,
            potential,
            interaction,
        })
    }

    pub fn energy_functional(&self, psi: &WaveFunction) -> Result<f64> {
        Ok(self.energy_terms(psi)?.total())
    }

    /// Chemical potential `mu = <psi|H[psi]|psi> / <psi|psi>`, evaluated
    /// through the same quadrature as the energy functional so that
    /// `mu = E / N` holds identically at `g = 0`.
    pub fn chemical_potential(&self, psi: &WaveFunction) -> Result<f64> {
        let norm = self.norm_squared(psi);
        if norm <= 0.0 {
            return Err(Error::InvalidInput("chemical potential of a zero-norm state".into()));
        }
        let t = self.energy_terms(psi)?;
        Ok((t.kinetic + t.potential + 2.0 * t.interaction) / norm)
    }

    /// Relative stationarity residual `||H psi - mu psi||_2 / ||psi||_2`.
    pub fn residual(&self, psi: &WaveFunction) -> Result<f64> {
        let mu = self.chemical_potential(psi)?;
        let h_psi = self.apply_hamiltonian(psi)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for (hv, v) in h_psi.values().iter().zip(psi.values()) {
            let r = hv - mu * v;
            num += r * r;
            den += v * v;
        }
        Ok((num / den).sqrt())
    }

    /// One semi-implicit gradient-flow step of size `dt`, renormalized to
    /// the particle number.
    pub fn imaginary_time_step(&self, psi: &WaveFunction, dt: f64) -> Result<WaveFunction> {
        self.check_grid(psi)?;
        if !(dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be > 0, got {dt}")));
        }
        let v = psi.values();
        let peak_density = v.iter().fold(0.0f64, |m, &x| m.max(x * x));
        // The cubic coefficient is lagged by one step; bound how far it
        // can drift within a single step.
        if dt * self.coupling * peak_density > 1.0 {
            return Err(Error::StepSize(format!(
                "dt = {dt} exceeds the explicit nonlinear bound 1/(g max|psi|^2) = {:e}",
                1.0 / (self.coupling * peak_density)
            )));
        }

        let n = self.grid.points();
        let n_int = n - 2;
        let h = self.grid.spacing();
        let kin = self.params.hbar * self.params.hbar / (2.0 * self.params.mass * h * h);
        let off = -dt * kin;
        let sub = vec![off; n_int - 1];
        let sup = vec![off; n_int - 1];
        let mut diag = Vec::with_capacity(n_int);
        let mut rhs = Vec::with_capacity(n_int);
        for k in 0..n_int {
            let x = self.grid.node(k + 1);
            let p = v[k + 1];
            // The cubic term enters through a lagged coefficient on the
            // diagonal: the fixed point of the normalized iteration is
            // then exactly a stationary state of the full operator,
            // which an explicit cubic term would miss by O(dt g n).
            diag.push(1.0 + dt * (2.0 * kin + self.potential(x) + self.coupling * p * p));
            rhs.push(p);
        }
        let interior = thomas(&sub, &diag, &sup, &rhs)?;

        let mut values = Vec::with_capacity(n);
        values.push(0.0);
        values.extend_from_slice(&interior);
        values.push(0.0);
        let stepped = WaveFunction::new(self.grid, values)?;

        let old_norm = self.norm_squared(psi);
        let new_norm = self.norm_squared(&stepped);
        if new_norm > 100.0 * old_norm {
            return Err(Error::StepSize(format!(
                "norm grew {}x before renormalization; step unstable",
                (new_norm / old_norm).sqrt()
            )));
        }
        if new_norm <= 0.0 {
            return Err(Error::StepSize("iterate collapsed to zero norm".into()));
        }

        let scale = (self.particle_number / new_norm).sqrt();
        let mut out = stepped;
        for value in out.values_mut() {
            *value *= scale;
        }
        Ok(out)
    }

    /// Gaussian at the trap scale, normalized to the particle number.
    /// Nodeless, so it overlaps the ground state of every repulsive
    /// problem.
    pub fn initial_guess(&self) -> Result<WaveFunction> {
        let alpha = self.params.mass * self.trap_frequency / (2.0 * self.params.hbar);
        let values = self
            .grid
            .nodes()
            .map(|x| (-alpha * x * x).exp())
            .collect::<Vec<_>>();
        let mut psi = WaveFunction::new(self.grid, values)?;
        let norm = self.norm_squared(&psi);
        let scale = (self.particle_number / norm).sqrt();
        for value in psi.values_mut() {
            *value *= scale;
        }
        Ok(psi)
    }

    pub fn solve_ground_state(
        &self,
        tol: f64,
        max_iters: usize,
    ) -> std::result::Result<GroundState, GpeSolveError> {
        self.solve_ground_state_with(tol, max_iters, SolverOptions::default())
    }

    /// Iterate the gradient flow until
    /// `||H psi - mu psi||_2 / ||psi||_2 <= tol * |mu|` or `max_iters`.
    /// The step size is halved (up to `max_halvings` times) whenever a
    /// step reports instability.
    pub fn solve_ground_state_with(
        &self,
        tol: f64,
        max_iters: usize,
        options: SolverOptions,
    ) -> std::result::Result<GroundState, GpeSolveError> {
        self.validate()?;
        if !(tol > 0.0) {
            return Err(GpeSolveError::Other(Error::InvalidInput(format!(
                "tolerance must be > 0, got {tol}"
            ))));
        }

        let mut psi = self.initial_guess()?;
        let mut dt = options.dt;
        let mut halvings = 0;
        let mut wall_steps = 0;
        let mut iterations = 0;
        let mut energy_trace = Vec::new();
        let mut residual = self.residual(&psi)?;
        let mut mu = self.chemical_potential(&psi)?;

        while iterations < max_iters && residual > tol * mu.abs() {
            wall_steps += 1;
            match self.imaginary_time_step(&psi, dt) {
                Ok(next) => {
                    psi = next;
                    iterations += 1;
                    mu = self.chemical_potential(&psi)?;
                    residual = self.residual(&psi)?;
                    energy_trace.push(self.energy_functional(&psi)?);
                }
                Err(Error::StepSize(_)) if halvings < options.max_halvings => {
                    dt *= 0.5;
                    halvings += 1;
                }
                Err(e) => return Err(GpeSolveError::Other(e)),
            }
        }

        let converged = residual <= tol * mu.abs();
        let state = GroundState {
            total_energy: self.energy_functional(&psi)?,
            chemical_potential: mu,
            wavefunction: psi,
            report: SolveReport {
                iterations,
                final_residual: residual,
                converged,
                wall_steps,
                energy_trace,
            },
        };
        if converged {
            Ok(state)
        } else {
            Err(GpeSolveError::NotConverged(Box::new(state)))
        }
    }

    /// Thomas-Fermi chemical potential: drop the kinetic term, integrate
    /// the inverted-parabola density `n(x) = (mu - V(x))/g` over its
    /// support, and solve for `mu` at the given particle number:
    /// `mu_TF = (1/2) (3 g N omega sqrt(m) / 2)^(2/3)`.
    pub fn thomas_fermi_mu(&self) -> Result<f64> {
        if !(self.coupling > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Thomas-Fermi limit needs g > 0, got {}",
                self.coupling
            )));
        }
        let x = 1.5 * self.coupling * self.particle_number * self.trap_frequency * self.params.mass.sqrt();
        Ok(0.5 * x.powf(2.0 / 3.0))
    }
}

fn trapezoid(psi: &WaveFunction, f: impl Fn(f64) -> f64) -> f64 {
    let v = psi.values();
    let h = psi.grid().spacing();
    let n = v.len();
    let mut sum = 0.5 * (f(v[0]) + f(v[n - 1]));
    for &value in &v[1..n - 1] {
        sum += f(value);
    }
    sum * h
}

fn trapezoid_with(psi: &WaveFunction, f: impl Fn(f64, f64) -> f64) -> f64 {
    let v = psi.values();
    let grid = psi.grid();
    let h = grid.spacing();
    let n = v.len();
    let mut sum = 0.5 * (f(grid.node(0), v[0]) + f(grid.node(n - 1), v[n - 1]));
    for (i, &value) in v.iter().enumerate().take(n - 1).skip(1) {
        sum += f(grid.node(i), value);
    }
    sum * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator_problem(g: f64, n_atoms: f64, points: usize, half_width: f64) -> GpeProblem {
        GpeProblem {
            grid: RadialGrid::new(-half_width, half_width, points).unwrap(),
            trap_frequency: 1.0,
            coupling: g,
            particle_number: n_atoms,
            params: PhysicalParams::default(),
        }
    }

    fn sampled_gaussian(prob: &GpeProblem) -> WaveFunction {
        prob.initial_guess().unwrap()
    }

    #[test]
    fn validate_rejects_bad_problems() {
        let mut p = oscillator_problem(0.0, 1.0, 101, 8.0);
        p.grid = RadialGrid::new(0.0, 8.0, 101).unwrap();
        assert!(p.validate().is_err());

        let mut p = oscillator_problem(0.0, 1.0, 101, 8.0);
        p.particle_number = 0.0;
        assert!(p.validate().is_err());

        let mut p = oscillator_problem(0.0, 1.0, 101, 8.0);
        p.coupling = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn hamiltonian_on_zero_is_zero() {
        let prob = oscillator_problem(1.0, 1.0, 101, 8.0);
        let zero = WaveFunction::zeros(prob.grid);
        let h = prob.apply_hamiltonian(&zero).unwrap();
        assert!(h.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hamiltonian_oscillator_eigenfunction() {
        // H psi = (hbar omega / 2) psi for the sampled Gaussian, up to
        // O(h^2) in the interior.
        let prob = oscillator_problem(0.0, 1.0, 2001, 8.0);
        let psi = sampled_gaussian(&prob);
        let h_psi = prob.apply_hamiltonian(&psi).unwrap();
        let h = prob.grid.spacing();
        let peak = psi.values().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for i in 1..prob.grid.points() - 1 {
            worst = worst.max((h_psi.values()[i] - 0.5 * psi.values()[i]).abs());
        }
        assert!(worst < 5.0 * h * h * peak, "deviation {worst}");
    }

    #[test]
    fn hamiltonian_cubic_term() {
        let prob = oscillator_problem(2.0, 1.0, 101, 8.0);
        let c = 0.3;
        let values = vec![c; 101];
        let psi = WaveFunction::new(prob.grid, values).unwrap();
        let h_psi = prob.apply_hamiltonian(&psi).unwrap();
        // Deep interior at x ~ 0: kinetic term vanishes for a constant.
        let mid = 50;
        let x = prob.grid.node(mid);
        let expected = prob.potential(x) * c + 2.0 * c * c * c;
        assert!((h_psi.values()[mid] - expected).abs() < 1e-12);
    }

    #[test]
    fn energy_of_zero_state_is_zero() {
        let prob = oscillator_problem(1.0, 1.0, 101, 8.0);
        let zero = WaveFunction::zeros(prob.grid);
        assert_eq!(prob.energy_functional(&zero).unwrap(), 0.0);
    }

    #[test]
    fn oscillator_energy_near_half() {
        let prob = oscillator_problem(0.0, 1.0, 2001, 8.0);
        let psi = sampled_gaussian(&prob);
        let e = prob.energy_functional(&psi).unwrap();
        let h = prob.grid.spacing();
        assert!((e - 0.5).abs() < 10.0 * h * h, "E = {e}");
    }

    #[test]
    fn mu_equals_energy_per_particle_without_interaction() {
        let prob = oscillator_problem(0.0, 3.0, 801, 8.0);
        let psi = sampled_gaussian(&prob);
        let mu = prob.chemical_potential(&psi).unwrap();
        let e = prob.energy_functional(&psi).unwrap();
        assert_eq!(mu, e / prob.norm_squared(&psi));
    }

    #[test]
    fn chemical_potential_rejects_zero_state() {
        let prob = oscillator_problem(0.0, 1.0, 101, 8.0);
        let zero = WaveFunction::zeros(prob.grid);
        assert!(prob.chemical_potential(&zero).is_err());
    }

    #[test]
    fn step_conserves_norm() {
        let prob = oscillator_problem(1.0, 5.0, 501, 8.0);
        let psi = sampled_gaussian(&prob);
        let next = prob.imaginary_time_step(&psi, 1e-2).unwrap();
        let norm = prob.norm_squared(&next);
        assert!((norm - 5.0).abs() / 5.0 < 1e-10);
    }

    #[test]
    fn step_rejects_oversized_dt() {
        let prob = oscillator_problem(50.0, 100.0, 501, 8.0);
        let psi = sampled_gaussian(&prob);
        let err = prob.imaginary_time_step(&psi, 10.0).unwrap_err();
        assert!(matches!(err, Error::StepSize(_)));
    }

    #[test]
    fn converged_state_is_a_fixed_point() {
        let prob = oscillator_problem(0.5, 2.0, 401, 8.0);
        let state = prob.solve_ground_state(1e-10, 50_000).unwrap();
        let stepped = prob
            .imaginary_time_step(&state.wavefunction, 1e-2)
            .unwrap();
        let gap = state.wavefunction.max_abs_diff(&stepped).unwrap();
        assert!(gap <= 1e-10, "moved by {gap}");
    }

    #[test]
    fn report_contract_on_convergence() {
        let prob = oscillator_problem(0.0, 1.0, 801, 8.0);
        let tol = 1e-8;
        let state = prob.solve_ground_state(tol, 20_000).unwrap();
        assert!(state.report.converged);
        assert!(state.report.final_residual <= tol * state.chemical_potential.abs());
    }

    #[test]
    fn non_convergence_carries_last_iterate() {
        let prob = oscillator_problem(1.0, 10.0, 401, 8.0);
        match prob.solve_ground_state(1e-14, 3) {
            Err(GpeSolveError::NotConverged(state)) => {
                assert!(!state.report.converged);
                assert_eq!(state.report.iterations, 3);
                assert!(state.wavefunction.values().iter().any(|&v| v != 0.0));
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn thomas_fermi_values() {
        // g N omega = 2/3 makes the cube-root argument 1.
        let mut prob = oscillator_problem(2.0 / 3.0, 1.0, 101, 8.0);
        assert!((prob.thomas_fermi_mu().unwrap() - 0.5).abs() < 1e-15);

        // (2/3)-power scaling in g N.
        prob.coupling = 1.0;
        prob.particle_number = 10.0;
        let mu1 = prob.thomas_fermi_mu().unwrap();
        prob.particle_number = 80.0;
        let mu8 = prob.thomas_fermi_mu().unwrap();
        assert!((mu8 / mu1 - 4.0).abs() < 1e-12);

        prob.particle_number = 100.0;
        let expected = 0.5 * 150.0f64.powf(2.0 / 3.0);
        assert!((prob.thomas_fermi_mu().unwrap() - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn thomas_fermi_profile_integration_oracle() {
        // Recover N by integrating n(x) = (mu - V)/g over its support and
        // compare with the closed form.
        let prob = oscillator_problem(1.0, 100.0, 101, 8.0);
        let mu = prob.thomas_fermi_mu().unwrap();
        let x_max = (2.0 * mu).sqrt() / prob.trap_frequency;
        let n = crate::quad::integrate(
            |x| (mu - prob.potential(x)) / prob.coupling,
            -x_max,
            x_max,
            1e-12,
            1_000_000,
        )
        .unwrap()
        .value;
        assert!((n - 100.0).abs() / 100.0 < 1e-10, "N = {n}");
    }

    #[test]
    fn thomas_fermi_rejects_zero_coupling() {
        let prob = oscillator_problem(0.0, 1.0, 101, 8.0);
        assert!(prob.thomas_fermi_mu().is_err());
    }
}
