use num_complex::Complex64;

use super::{Potential, WaveFunction};
use crate::error::{Error, Result};
use crate::numerics::{ComplexFft, Grid1D, UnitSystem};

/// How often the evolver scans for non-finite amplitudes.
const CHECK_EVERY: usize = 256;

/// Precomputed Strang propagator `e^{-iV dt/2a} e^{-iT dt/a} e^{-iV dt/2a}`.
pub struct SplitStep {
    fft: ComplexFft,
    half_potential: Vec<Complex64>,
    full_potential: Vec<Complex64>,
    kinetic: Vec<Complex64>,
    dt: f64,
}

impl SplitStep {
    pub fn new(grid: &Grid1D, potential: &Potential, units: &UnitSystem, dt: f64) -> Result<Self> {
        if !dt.is_finite() {
            return Err(Error::Domain(format!("time step must be finite, got {dt}")));
        }
        let alpha = units.alpha();
        let mass = units.mass();
        let v = potential.sample(&grid.points());
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain(format!(
                "potential {potential} is not finite on the grid"
            )));
        }
        let half_potential = v
            .iter()
            .map(|&v| Complex64::cis(-v * dt / (2.0 * alpha)))
            .collect();
        let full_potential = v.iter().map(|&v| Complex64::cis(-v * dt / alpha)).collect();
        let kinetic = grid
            .wavenumbers()
            .iter()
            .map(|&k| Complex64::cis(-alpha * k * k * dt / (2.0 * mass)))
            .collect();
        Ok(SplitStep {
            fft: ComplexFft::new(grid.n_points()),
            half_potential,
            full_potential,
            kinetic,
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn kinetic_step(&self, values: &mut [Complex64]) {
        self.fft.forward(values);
        values
            .iter_mut()
            .zip(&self.kinetic)
            .for_each(|(v, k)| *v *= k);
        self.fft.inverse(values);
    }

    /// Applies `steps` Strang steps in place; adjacent half-potential
    /// factors are merged.
    pub fn advance(&self, values: &mut [Complex64], steps: usize) -> Result<()> {
        if steps == 0 {
            return Ok(());
        }
        let mul = |values: &mut [Complex64], table: &[Complex64]| {
            values.iter_mut().zip(table).for_each(|(v, p)| *v *= p);
        };
        mul(values, &self.half_potential);
        for step in 0..steps {
            self.kinetic_step(values);
            if step + 1 < steps {
                mul(values, &self.full_potential);
            }
            if (step + 1) % CHECK_EVERY == 0 || step + 1 == steps {
                if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                    return Err(Error::Stability(format!(
                        "non-finite amplitude at site {i} after {} steps",
                        step + 1
                    )));
                }
            }
        }
        mul(values, &self.half_potential);
        Ok(())
    }
}

/// Evolves `psi` by `steps` Strang steps of size `dt` under
/// `i alpha dPsi/dt = [-(alpha^2 / 2M) d^2/dx^2 + V] Psi`.
pub fn evolve_split_step(
    psi: &WaveFunction,
    potential: &Potential,
    dt: f64,
    steps: usize,
) -> Result<WaveFunction> {
    if steps == 0 {
        return Ok(psi.clone());
    }
    let stepper = SplitStep::new(psi.grid(), potential, psi.units(), dt)?;
    let mut values = psi.values().to_vec();
    stepper.advance(&mut values, steps)?;
    let out = WaveFunction::from_parts(
        *psi.grid(),
        values,
        psi.time() + steps as f64 * dt,
        *psi.units(),
    );
    let drift = (out.norm() - psi.norm()).abs();
    if drift > 1e-10 {
        return Err(Error::Stability(format!(
            "norm drifted by {drift:e} over {steps} steps"
        )));
    }
    Ok(out)
}
