//! Classical phase-space transport: the Liouville flow, its Fokker-Planck
//! extension with radiation-reaction drift and momentum diffusion, and the
//! two-path comparison against Schrodinger evolution.

mod correspondence;
mod transport;

use crate::error::{Error, Result};
use crate::numerics::{Grid1D, UnitSystem};
use crate::wavefunction::Potential;

pub use correspondence::{
    alpha_mismatch_residual, correspondence_paths, correspondence_residual, CorrespondencePaths,
};
pub use transport::{evolve_fokker_planck, evolve_liouville};

/// Largest accepted `gamma * max|F'| / M * dt`.
pub const DRIFT_STIFFNESS_LIMIT: f64 = 0.1;

/// Settings for [`evolve_fokker_planck`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticParameters {
    /// Radiation-reaction time.
    pub gamma: f64,
    /// Momentum diffusion coefficient (the product `e^2 D`).
    pub diffusion: f64,
    pub dt: f64,
    pub steps: usize,
}

impl KineticParameters {
    pub fn new(gamma: f64, diffusion: f64, dt: f64, steps: usize) -> Result<Self> {
        let params = KineticParameters {
            gamma,
            diffusion,
            dt,
            steps,
        };
        params.validate_ranges()?;
        Ok(params)
    }

    fn validate_ranges(&self) -> Result<()> {
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::Configuration(format!(
                "gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        if !(self.diffusion >= 0.0) || !self.diffusion.is_finite() {
            return Err(Error::Configuration(format!(
                "diffusion must be non-negative, got {}",
                self.diffusion
            )));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Configuration(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }

    /// Rejects settings whose radiation-reaction drift is stiff on `x`.
    pub fn check_stability(&self, potential: &Potential, x: &Grid1D, mass: f64) -> Result<()> {
        self.validate_ranges()?;
        let steepest = x
            .points()
            .iter()
            .map(|&q| potential.force_gradient(q).abs())
            .fold(0.0, f64::max);
        let stiffness = self.gamma * steepest / mass * self.dt;
        if !(stiffness <= DRIFT_STIFFNESS_LIMIT) {
            return Err(Error::Stability(format!(
                "radiation-reaction drift is stiff: gamma |F'|/M dt = {stiffness:e} exceeds {DRIFT_STIFFNESS_LIMIT}"
            )));
        }
        Ok(())
    }
}

/// Constant diffusion `gamma M alpha omega0^3 / 2` whose harmonic stationary
/// state has the ground-state variances `alpha / 2M omega0` and `M alpha omega0 / 2`.
pub fn equilibrium_diffusion(omega0: f64, gamma: f64, units: &UnitSystem) -> Result<f64> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(Error::Domain(format!(
            "omega0 must be positive, got {omega0}"
        )));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "gamma must be non-negative, got {gamma}"
        )));
    }
    Ok(0.5 * gamma * units.mass() * units.alpha() * omega0.powi(3))
}
