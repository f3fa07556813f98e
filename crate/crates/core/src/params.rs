//! Physical constants and the derived scales used throughout the crate.
//!
//! The default unit system is trap units (`hbar = mass = 1`, lengths in
//! units of the trap length). SI values may be supplied explicitly; no
//! hidden conversion is performed and callers own unit consistency.

use crate::error::{Error, Result};

/// Default threshold for the diluteness flag. The physical criterion is
/// only "much less than one"; 1e-2 leaves an order-of-magnitude margin
/// and is overridable via [`PhysicalParams::diluteness_with_threshold`].
pub const DILUTENESS_THRESHOLD: f64 = 1e-2;

/// Physical constants of the gas. Source of every derived scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    /// s-wave scattering length; any sign (attractive or repulsive).
    pub scattering_length: f64,
    /// Angular frequency of the harmonic trap.
    pub trap_frequency: f64,
    /// Number density, if known.
    pub density: Option<f64>,
    /// Effective radius of the atom-atom interaction, if known.
    pub effective_radius: Option<f64>,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            scattering_length: 0.0,
            trap_frequency: 1.0,
            density: None,
            effective_radius: None,
        }
    }
}

/// Diluteness report: the parameter `n * r_e^3` and whether it clears the
/// configured threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diluteness {
    pub value: f64,
    pub dilute: bool,
}

impl PhysicalParams {
    /// Trap units with the given trap frequency.
    pub fn trap_units(trap_frequency: f64) -> Self {
        Self {
            trap_frequency,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::InvalidInput(format!("mass must be > 0, got {}", self.mass)));
        }
        if !(self.hbar > 0.0) {
            return Err(Error::InvalidInput(format!("hbar must be > 0, got {}", self.hbar)));
        }
        if !(self.trap_frequency > 0.0) {
            return Err(Error::InvalidInput(format!(
                "trap_frequency must be > 0, got {}",
                self.trap_frequency
            )));
        }
        if let Some(n) = self.density {
            if !(n >= 0.0) {
                return Err(Error::InvalidInput(format!("density must be >= 0, got {n}")));
            }
        }
        if let Some(re) = self.effective_radius {
            if !(re >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "effective_radius must be >= 0, got {re}"
                )));
            }
        }
        Ok(())
    }

    /// Interaction coupling constant `g = 4 pi a hbar^2 / m`. Sign follows
    /// the scattering length.
    pub fn coupling_constant(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.scattering_length * self.hbar * self.hbar / self.mass
    }

    /// Harmonic-oscillator length `l_t = sqrt(hbar / 2 m omega)`.
    pub fn trap_length(&self) -> Result<f64> {
        if !(self.trap_frequency > 0.0) {
            return Err(Error::InvalidInput(format!(
                "trap_length requires omega > 0, got {}",
                self.trap_frequency
            )));
        }
        if !(self.mass > 0.0) {
            return Err(Error::InvalidInput(format!(
                "trap_length requires mass > 0, got {}",
                self.mass
            )));
        }
        Ok((self.hbar / (2.0 * self.mass * self.trap_frequency)).sqrt())
    }

    /// Healing length `l_h = hbar / sqrt(2 m mu)`. Undefined for a
    /// non-positive chemical potential (no condensate).
    pub fn healing_length(&self, mu: f64) -> Result<f64> {
        if !(mu > 0.0) {
            return Err(Error::InvalidInput(format!(
                "healing_length requires mu > 0, got {mu}"
            )));
        }
        Ok(self.hbar / (2.0 * self.mass * mu).sqrt())
    }

    /// Diluteness parameter `n * r_e^3` with the default threshold.
    /// `None` when either density or effective radius is unset.
    pub fn diluteness(&self) -> Option<Diluteness> {
        self.diluteness_with_threshold(DILUTENESS_THRESHOLD)
    }

    pub fn diluteness_with_threshold(&self, threshold: f64) -> Option<Diluteness> {
        let n = self.density?;
        let re = self.effective_radius?;
        let value = n * re * re * re;
        Some(Diluteness {
            value,
            dilute: value < threshold,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(hbar: f64, mass: f64, omega: f64) -> PhysicalParams {
        PhysicalParams {
            hbar,
            mass,
            trap_frequency: omega,
            ..PhysicalParams::default()
        }
    }

    #[test]
    fn coupling_constant_unit_inputs() {
        let p = PhysicalParams {
            scattering_length: 1.0,
            ..params(1.0, 1.0, 1.0)
        };
        assert!((p.coupling_constant() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn coupling_constant_zero_scattering_length() {
        let p = params(1.0, 1.0, 1.0);
        assert_eq!(p.coupling_constant(), 0.0);
    }

    #[test]
    fn coupling_constant_rb87_like() {
        // 4 pi a hbar^2 / m evaluated with 40-digit arithmetic.
        let p = PhysicalParams {
            hbar: 1.0546e-34,
            mass: 1.443e-25,
            scattering_length: 5.3e-9,
            ..PhysicalParams::default()
        };
        let expected = 5.133279794067904e-51;
        assert!((p.coupling_constant() - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn trap_length_values() {
        assert!((params(1.0, 1.0, 0.5).trap_length().unwrap() - 1.0).abs() < 1e-15);
        assert!((params(1.0, 1.0, 2.0).trap_length().unwrap() - 0.5).abs() < 1e-15);
        // sqrt(1/12)
        let expected = 0.28867513459481288;
        assert!((params(1.0, 2.0, 3.0).trap_length().unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn trap_length_rejects_nonpositive_omega() {
        assert!(params(1.0, 1.0, 0.0).trap_length().is_err());
        assert!(params(1.0, 1.0, -1.0).trap_length().is_err());
    }

    #[test]
    fn healing_length_values() {
        assert!((params(1.0, 1.0, 1.0).healing_length(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((params(1.0, 0.5, 1.0).healing_length(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((params(1.0, 1.0, 1.0).healing_length(2.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn healing_length_rejects_nonpositive_mu() {
        assert!(params(1.0, 1.0, 1.0).healing_length(0.0).is_err());
        assert!(params(1.0, 1.0, 1.0).healing_length(-1.0).is_err());
    }

    #[test]
    fn diluteness_cases() {
        let mut p = PhysicalParams::default();
        assert!(p.diluteness().is_none());

        p.density = Some(0.0);
        p.effective_radius = Some(1.0);
        let d = p.diluteness().unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.dilute);

        p.density = Some(1.0);
        let d = p.diluteness().unwrap();
        assert_eq!(d.value, 1.0);
        assert!(!d.dilute);

        p.density = Some(1e20);
        p.effective_radius = Some(1e-9);
        let d = p.diluteness().unwrap();
        assert!((d.value - 1e-7).abs() / 1e-7 < 1e-12);
        assert!(d.dilute);
    }

    #[test]
    fn scale_relations() {
        // trap_length ~ omega^(-1/2); healing_length ~ mu^(-1/2);
        // coupling constant linear in a.
        for k in 1..20 {
            let omega = 0.1 * k as f64;
            let p1 = params(1.0, 1.0, omega);
            let p4 = params(1.0, 1.0, 4.0 * omega);
            let ratio = p1.trap_length().unwrap() / p4.trap_length().unwrap();
            assert!((ratio - 2.0).abs() < 1e-12);

            let mu = 0.3 * k as f64;
            let lh = p1.healing_length(mu).unwrap();
            let lh2 = p1.healing_length(2.0 * mu).unwrap();
            assert!((lh * mu.sqrt() - lh2 * (2.0 * mu).sqrt()).abs() < 1e-12);

            let a = 0.01 * k as f64;
            let ga = PhysicalParams {
                scattering_length: a,
                ..p1
            };
            let g2a = PhysicalParams {
                scattering_length: 2.0 * a,
                ..p1
            };
            assert_eq!(g2a.coupling_constant(), 2.0 * ga.coupling_constant());
        }
    }
}
