//! Photoemission from a bound level into a box-discretized continuum:
//! golden-rule rates, the emission spectrum, the Einstein relation and the
//! recoil balance.

mod kinematics;

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{Grid1D, UnitSystem};
use crate::wavefunction::{solve_eigenstates_with, Discretization, LevelRequest, Potential};

pub use kinematics::{einstein_ke_max, max_velocity, recoil_kinematics, Recoil};

/// Minimum ratio of the broadening to the local continuum level spacing.
pub const MIN_SPACING_RATIO: f64 = 3.0;

/// Final states are kept up to this many broadening widths above the resonance.
const CONTINUUM_REACH: f64 = 10.0;

/// `2 pi |d|^2 E0^2 t g(omega - omega_fg) / alpha^2`, where `g` is a unit-mass
/// Gaussian of width `sigma` in angular frequency.
pub fn golden_rule_rate(
    dipole: f64,
    field: f64,
    omega: f64,
    omega_fg: f64,
    t: f64,
    sigma: f64,
    units: &UnitSystem,
) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "broadening must be positive, got {sigma}"
        )));
    }
    let z = (omega - omega_fg) / sigma;
    let line = (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt());
    let alpha = units.alpha();
    Ok(2.0 * PI * dipole * dipole * field * field * t * line / (alpha * alpha))
}

/// A bound electron driven at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionModel {
    pub well: Potential,
    /// Box holding the discretized continuum; should span many well widths.
    pub grid: Grid1D,
    pub drive_amplitude: f64,
    pub drive_frequency: f64,
    /// Energy width of the broadened delta function.
    pub delta_width: f64,
    pub interaction_time: f64,
    pub units: UnitSystem,
}

impl EmissionModel {
    fn validate(&self) -> Result<()> {
        let checks = [
            ("drive amplitude", self.drive_amplitude, self.drive_amplitude >= 0.0),
            ("drive frequency", self.drive_frequency, self.drive_frequency > 0.0),
            ("delta width", self.delta_width, self.delta_width > 0.0),
            ("interaction time", self.interaction_time, self.interaction_time > 0.0),
        ];
        for (name, value, ok) in checks {
            if !ok || !value.is_finite() {
                return Err(Error::Configuration(format!("{name} out of range: {value}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionSpectrum {
    /// Continuum (non-negative) energies of the box states, ascending.
    pub final_energies: Vec<f64>,
    pub rates: Vec<f64>,
    /// `<f| e x |g>` for every final state.
    pub dipoles: Vec<f64>,
    pub ground_energy: f64,
    /// Work function `-ground_energy`.
    pub threshold: f64,
    /// `max(0, alpha omega - threshold)`.
    pub ke_max: f64,
    /// Level spacing of the continuum near the resonance.
    pub level_spacing: f64,
}

impl EmissionSpectrum {
    pub fn total_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    /// Final energy of the largest rate, refined by a log-parabola through
    /// the states carrying at least 1% of it. `None` if every rate is zero.
    pub fn peak_energy(&self) -> Option<f64> {
        let (best, &top) = self
            .rates
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        if !(top > 0.0) {
            return None;
        }
        let picked: Vec<(f64, f64)> = self
            .final_energies
            .iter()
            .zip(&self.rates)
            .filter(|(_, &r)| r >= 1e-2 * top)
            .map(|(&e, &r)| (e, r.ln()))
            .collect();
        let fallback = self.final_energies[best];
        if picked.len() < 3 {
            return Some(fallback);
        }
        let origin = fallback;
        let mut normal = Matrix3::<f64>::zeros();
        let mut rhs = Vector3::<f64>::zeros();
        for &(e, l) in &picked {
            let d = e - origin;
            let basis = Vector3::new(1.0, d, d * d);
            normal += basis * basis.transpose();
            rhs += basis * l;
        }
        match normal.lu().solve(&rhs) {
            Some(c) if c[2] < 0.0 => Some(origin - c[1] / (2.0 * c[2])),
            _ => Some(fallback),
        }
    }
}

/// Golden-rule spectrum from the deepest bound level of `model.well` into
/// every box state between zero energy and the resonance plus ten widths.
pub fn emission_spectrum(model: &EmissionModel) -> Result<EmissionSpectrum> {
    model.validate()?;
    let units = model.units;
    let alpha = units.alpha();
    let ground = solve_eigenstates_with(
        &model.well,
        &model.grid,
        &units,
        LevelRequest::Lowest(1),
        Discretization::FiniteDifference,
    )?;
    let ground_energy = ground.energies[0];
    if !(ground_energy < 0.0) {
        return Err(Error::NoBoundState(format!(
            "lowest level of {} is at {ground_energy}",
            model.well
        )));
    }
    let resonance = ground_energy + alpha * model.drive_frequency;
    let ceiling = (resonance + CONTINUUM_REACH * model.delta_width).max(0.0);
    let levels = solve_eigenstates_with(
        &model.well,
        &model.grid,
        &units,
        LevelRequest::Below(ceiling),
        Discretization::FiniteDifference,
    )?;
    let g = &ground.states[0];
    let first = levels.energies.partition_point(|&e| e < 0.0);
    let final_energies = levels.energies[first..].to_vec();

    let level_spacing = local_spacing(&final_energies, resonance);
    if let Some(spacing) = level_spacing {
        if model.delta_width < MIN_SPACING_RATIO * spacing {
            return Err(Error::Configuration(format!(
                "delta width {} is below {MIN_SPACING_RATIO} continuum spacings ({spacing}); enlarge the box",
                model.delta_width
            )));
        }
    }

    let x = model.grid.points();
    let dx = model.grid.spacing();
    let charge = units.charge();
    let dipoles: Vec<f64> = levels.states[first..]
        .par_iter()
        .map(|f| {
            charge
                * dx
                * f.iter()
                    .zip(g)
                    .zip(&x)
                    .map(|((a, b), q)| a * q * b)
                    .sum::<f64>()
        })
        .collect();
    let sigma = model.delta_width / alpha;
    let rates = dipoles
        .iter()
        .zip(&final_energies)
        .map(|(&d, &e)| {
            golden_rule_rate(
                d,
                model.drive_amplitude,
                model.drive_frequency,
                (e - ground_energy) / alpha,
                model.interaction_time,
                sigma,
                &units,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = -ground_energy;
    Ok(EmissionSpectrum {
        final_energies,
        rates,
        dipoles,
        ground_energy,
        threshold,
        ke_max: (alpha * model.drive_frequency - threshold).max(0.0),
        level_spacing: level_spacing.unwrap_or(0.0),
    })
}

/// Gap between the two continuum levels bracketing `energy` (or the lowest
/// pair when `energy` lies below the continuum).
fn local_spacing(levels: &[f64], energy: f64) -> Option<f64> {
    if levels.len() < 2 {
        return None;
    }
    let k = levels.partition_point(|&e| e < energy).clamp(1, levels.len() - 1);
    Some(levels[k] - levels[k - 1])
}
