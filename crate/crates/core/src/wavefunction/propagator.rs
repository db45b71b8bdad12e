use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{WaveFunction, BOUNDARY_TAIL};
use crate::error::{Error, Result};
use crate::numerics::{ComplexFft, UnitSystem};

/// Free-particle propagator `K(x, t | x0, t0)` with the principal branch
/// `sqrt(1/i) = e^{-i pi/4}`.
pub fn free_kernel(x: f64, t: f64, x0: f64, t0: f64, units: &UnitSystem) -> Result<Complex64> {
    let tau = t - t0;
    if !(tau > 0.0) {
        return Err(Error::Domain(format!(
            "kernel needs t > t0, got t - t0 = {tau}"
        )));
    }
    Ok(kernel_at(x - x0, Complex64::new(tau, 0.0), units))
}

/// Kernel continued to complex elapsed time. For `Im tau < 0` the kernel is a
/// decaying Gaussian, which makes composition integrals absolutely convergent.
pub fn kernel_at(displacement: f64, tau: Complex64, units: &UnitSystem) -> Complex64 {
    let m = units.mass();
    let a = units.alpha();
    let i = Complex64::i();
    let prefactor = (m / (2.0 * PI * i * a * tau)).sqrt();
    prefactor * (i * m * displacement * displacement / (2.0 * a * tau)).exp()
}

/// Packet tail found at the periodic boundary after propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainEscape {
    pub tail: f64,
}

/// Free evolution by the exact momentum-space phase `e^{-i alpha k^2 t / 2M}`.
/// Negative `t` runs backwards. A warning is returned when the result reaches
/// the periodic boundary.
pub fn propagate_free(psi: &WaveFunction, t: f64) -> Result<(WaveFunction, Option<DomainEscape>)> {
    if !t.is_finite() {
        return Err(Error::Domain(format!(
            "propagation time must be finite, got {t}"
        )));
    }
    let grid = psi.grid();
    let units = psi.units();
    let c = units.alpha() * t / (2.0 * units.mass());
    let fft = ComplexFft::new(grid.n_points());
    let mut values = psi.values().to_vec();
    fft.forward(&mut values);
    for (j, v) in values.iter_mut().enumerate() {
        let k = grid.wavenumber(j);
        *v *= Complex64::cis(-c * k * k);
    }
    fft.inverse(&mut values);
    let out = WaveFunction::from_parts(*grid, values, psi.time() + t, *units);
    let tail = out.boundary_tail();
    let warning = (tail > BOUNDARY_TAIL).then_some(DomainEscape { tail });
    Ok((out, warning))
}

/// Direct quadrature `Psi(x, t) = sum_j dx K(x, t | x_j, 0) Psi(x_j, 0)` on the
/// open line. Cross-check for [`propagate_free`]; O(n^2).
pub fn propagate_free_by_kernel(psi: &WaveFunction, t: f64) -> Result<WaveFunction> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "kernel quadrature needs t > 0, got {t}"
        )));
    }
    let grid = *psi.grid();
    let units = *psi.units();
    let dx = grid.spacing();
    let tau = Complex64::new(t, 0.0);
    let src = psi.values();
    let values = (0..grid.n_points())
        .into_par_iter()
        .map(|i| {
            let x = grid.point(i);
            src.iter()
                .enumerate()
                .map(|(j, v)| kernel_at(x - grid.point(j), tau, &units) * v)
                .sum::<Complex64>()
                * dx
        })
        .collect();
    Ok(WaveFunction::from_parts(
        grid,
        values,
        psi.time() + t,
        units,
    ))
}
