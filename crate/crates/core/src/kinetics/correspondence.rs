use super::evolve_liouville;
use crate::error::{Error, Result};
use crate::phasespace::{wigner_of, PhaseSpaceDensity};
use crate::wavefunction::{evolve_split_step, Potential, WaveFunction};

/// Relative L2 distance `||A - B|| / ||B||` between the classically advected
/// Wigner density (A) and the Wigner density of the Schrodinger-evolved
/// state (B) at time `t`. Both use the wavefunction's own `alpha`.
pub fn correspondence_residual(
    psi0: &WaveFunction,
    potential: &Potential,
    t: f64,
    dt: f64,
) -> Result<f64> {
    alpha_mismatch_residual(psi0, potential, t, dt, psi0.units().alpha())
}

/// As [`correspondence_residual`], but both Wigner transforms use
/// `alpha_transform` while the wavefunction evolves with its own `alpha`.
pub fn alpha_mismatch_residual(
    psi0: &WaveFunction,
    potential: &Potential,
    t: f64,
    dt: f64,
    alpha_transform: f64,
) -> Result<f64> {
    let paths = correspondence_paths(psi0, potential, t, dt, alpha_transform)?;
    paths.classical.relative_distance(&paths.quantum)
}

/// End points of the two routes from `psi0` to phase space at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondencePaths {
    /// Wigner density of `psi0`, advected by the Liouville flow.
    pub classical: PhaseSpaceDensity,
    /// Wigner density of the Schrodinger-evolved state.
    pub quantum: PhaseSpaceDensity,
    pub steps: usize,
    pub step: f64,
}

/// Runs both routes with `round(t / dt)` equal steps landing exactly on `t`.
pub fn correspondence_paths(
    psi0: &WaveFunction,
    potential: &Potential,
    t: f64,
    dt: f64,
    alpha_transform: f64,
) -> Result<CorrespondencePaths> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("horizon must be non-negative, got {t}")));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let steps = (t / dt).round() as usize;
    let steps = if t > 0.0 { steps.max(1) } else { 0 };
    let step = if steps > 0 { t / steps as f64 } else { dt };

    let q0 = wigner_of(psi0, alpha_transform)?;
    let classical = evolve_liouville(&q0, potential, step, steps)?;
    let psi_t = evolve_split_step(psi0, potential, step, steps)?;
    let quantum = wigner_of(&psi_t, alpha_transform)?;
    if !classical.grid().same_lattice(quantum.grid()) {
        return Err(Error::GridMismatch(
            "classical and quantum paths ended on different lattices".into(),
        ));
    }
    Ok(CorrespondencePaths {
        classical,
        quantum,
        steps,
        step,
    })
}
