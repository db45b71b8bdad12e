use rayon::prelude::*;

use super::KineticParameters;
use crate::error::{Error, Result};
use crate::numerics::fourier::AffineResampler;
use crate::numerics::fourier::transpose_into;
use crate::numerics::RealRows;
use crate::phasespace::PhaseSpaceDensity;
use crate::wavefunction::Potential;

const CHECK_EVERY: usize = 256;
const MASS_DRIFT_TOL: f64 = 1e-8;

/// Position advection `x -> x + p dt / M`, applied to p-major rows.
struct Drift {
    rows: RealRows,
    table: Vec<num_complex::Complex64>,
    n_x: usize,
    n_p: usize,
    scratch: Vec<f64>,
}

impl Drift {
    fn new(w: &PhaseSpaceDensity, dt: f64) -> Self {
        let g = w.grid();
        let mass = w.units().mass();
        let rows = RealRows::new(g.x.n_points());
        let shifts: Vec<f64> = (0..g.p.n_points())
            .map(|j| g.p.point(j) * dt / mass)
            .collect();
        let table = rows.shift_table(&g.x, &shifts);
        Drift {
            rows,
            table,
            n_x: g.x.n_points(),
            n_p: g.p.n_points(),
            scratch: vec![0.0; g.site_count()],
        }
    }

    fn apply(&mut self, values: &mut [f64]) {
        transpose_into(values, self.n_x, self.n_p, &mut self.scratch);
        self.rows.apply(&mut self.scratch, &self.table);
        transpose_into(&self.scratch, self.n_p, self.n_x, values);
    }
}

fn check_finite(values: &[f64], step: usize) -> Result<()> {
    match values.par_iter().position_first(|v| !v.is_finite()) {
        Some(k) => Err(Error::Stability(format!(
            "non-finite density at site {k} after {step} steps"
        ))),
        None => Ok(()),
    }
}

fn check_mass(w: &PhaseSpaceDensity, initial: f64) -> Result<()> {
    let mass = w.mass();
    if (mass - initial).abs() > MASS_DRIFT_TOL * initial.abs().max(1.0) {
        return Err(Error::Normalization(format!(
            "phase-space mass drifted from {initial} to {mass}"
        )));
    }
    Ok(())
}

fn validate_density(w: &PhaseSpaceDensity) -> Result<f64> {
    let mass = w.mass();
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::Normalization(format!(
            "density has non-positive mass {mass}"
        )));
    }
    Ok(mass)
}

/// Advances `dW/dt + (p/M) dW/dx + F(x) dW/dp = 0` with kick-drift-kick
/// Strang steps. Both sub-steps are exact spectral translations, so mass is
/// preserved to rounding. Negative values from ringing are kept as they are.
pub fn evolve_liouville(
    w: &PhaseSpaceDensity,
    potential: &Potential,
    dt: f64,
    steps: usize,
) -> Result<PhaseSpaceDensity> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let initial = validate_density(w)?;
    if steps == 0 {
        return Ok(w.clone());
    }
    let g = *w.grid();
    let forces: Vec<f64> = g.x.points().iter().map(|&x| potential.force(x)).collect();
    if forces.iter().any(|f| !f.is_finite()) {
        return Err(Error::Domain(format!(
            "force of {potential} is not finite on the grid"
        )));
    }
    let kick = RealRows::new(g.p.n_points());
    let scaled = |tau: f64| forces.iter().map(|f| f * tau).collect::<Vec<_>>();
    let half_kick = kick.shift_table(&g.p, &scaled(0.5 * dt));
    let full_kick = kick.shift_table(&g.p, &scaled(dt));
    let mut drift = Drift::new(w, dt);

    let mut values = w.values().to_vec();
    kick.apply(&mut values, &half_kick);
    for step in 1..=steps {
        drift.apply(&mut values);
        let table = if step == steps { &half_kick } else { &full_kick };
        kick.apply(&mut values, table);
        if step % CHECK_EVERY == 0 || step == steps {
            check_finite(&values, step)?;
        }
    }
    let out = PhaseSpaceDensity::from_parts(
        g,
        values,
        w.time() + steps as f64 * dt,
        *w.units(),
    );
    check_mass(&out, initial)?;
    Ok(out)
}

/// `expm1(z) / z`, continuous at zero.
fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-300 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// Per-row affine maps for the exact flow of `dp/dt = F + a p` over `tau`,
/// `a = (gamma / M) F'`: `W(p) <- s W(s p + b)`.
fn kick_maps(potential: &Potential, w: &PhaseSpaceDensity, gamma: f64, tau: f64) -> Vec<(f64, f64)> {
    let mass = w.units().mass();
    w.grid()
        .x
        .points()
        .iter()
        .map(|&x| {
            let f = potential.force(x);
            let a = gamma / mass * potential.force_gradient(x);
            let z = -a * tau;
            (z.exp(), -f * tau * phi1(z))
        })
        .collect()
}

fn heat_filter(w: &PhaseSpaceDensity, diffusion: f64, tau: f64) -> Vec<f64> {
    let p = &w.grid().p;
    (0..p.n_points() / 2 + 1)
        .map(|j| {
            let k = 2.0 * std::f64::consts::PI * j as f64 / p.length();
            (-diffusion * k * k * tau).exp()
        })
        .collect()
}

/// Advances
/// `dW/dt + (p/M) dW/dx + d/dp[(F + (gamma/M) F' p) W] = e^2 D d^2W/dp^2`
/// with the splitting `diffusion/2, kick/2, drift, kick/2, diffusion/2`.
/// The kick integrates the linear-in-p drift exactly as a per-row dilation
/// and translation; the diffusion is a Gaussian multiplier in the conjugate
/// variable.
pub fn evolve_fokker_planck(
    w: &PhaseSpaceDensity,
    potential: &Potential,
    params: &KineticParameters,
) -> Result<PhaseSpaceDensity> {
    let g = *w.grid();
    params.check_stability(potential, &g.x, w.units().mass())?;
    let initial = validate_density(w)?;
    let KineticParameters {
        gamma,
        diffusion,
        dt,
        steps,
    } = *params;
    if steps == 0 {
        return Ok(w.clone());
    }
    let maps = kick_maps(potential, w, gamma, 0.5 * dt);
    if maps.iter().any(|(s, b)| !s.is_finite() || !b.is_finite()) {
        return Err(Error::Domain(format!(
            "force of {potential} is not finite on the grid"
        )));
    }
    let kick = AffineResampler::new(&g.p, &maps)?;
    let diffusing = diffusion > 0.0;
    let half_heat = heat_filter(w, diffusion, 0.5 * dt);
    let full_heat = heat_filter(w, diffusion, dt);
    let mut drift = Drift::new(w, dt);

    let mut values = w.values().to_vec();
    for step in 1..=steps {
        let pending = match (diffusing, step) {
            (false, _) => None,
            (true, 1) => Some(half_heat.as_slice()),
            (true, _) => Some(full_heat.as_slice()),
        };
        kick.apply(&mut values, pending);
        drift.apply(&mut values);
        kick.apply(&mut values, None);
        if step % CHECK_EVERY == 0 || step == steps {
            check_finite(&values, step)?;
        }
    }
    if diffusing {
        let rows = RealRows::new(g.p.n_points());
        let table = rows.diffusion_table(&g.p, diffusion, 0.5 * dt);
        rows.apply(&mut values, &table);
    }
    let out = PhaseSpaceDensity::from_parts(
        g,
        values,
        w.time() + steps as f64 * dt,
        *w.units(),
    );
    check_mass(&out, initial)?;
    Ok(out)
}
