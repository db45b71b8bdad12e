//! Zero-point radiation spectrum, its thermal parent and the
//! position-momentum commutator integral.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, QuadratureResult, UnitSystem};

const QUADRATURE_TOL: f64 = 1e-12;
const MAX_INTERVALS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPointSpectrum {
    hbar: f64,
    light_speed: f64,
    temperature: f64,
    boltzmann: f64,
}

impl ZeroPointSpectrum {
    pub fn new(hbar: f64, light_speed: f64, temperature: f64, boltzmann: f64) -> Result<Self> {
        for (name, v) in [
            ("hbar", hbar),
            ("light speed", light_speed),
            ("boltzmann constant", boltzmann),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::Domain(format!(
                "temperature must be non-negative, got {temperature}"
            )));
        }
        Ok(ZeroPointSpectrum {
            hbar,
            light_speed,
            temperature,
            boltzmann,
        })
    }

    /// Spectrum at zero temperature with `hbar = alpha` and the unit system's
    /// light speed and Boltzmann constant.
    pub fn from_units(units: &UnitSystem) -> Self {
        ZeroPointSpectrum {
            hbar: units.alpha(),
            light_speed: units.light_speed(),
            temperature: 0.0,
            boltzmann: units.boltzmann(),
        }
    }

    pub fn with_temperature(self, temperature: f64) -> Result<Self> {
        Self::new(self.hbar, self.light_speed, temperature, self.boltzmann)
    }

    pub fn with_hbar(self, hbar: f64) -> Result<Self> {
        Self::new(hbar, self.light_speed, self.temperature, self.boltzmann)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }

    /// `hbar / (2 pi^2 c^3)`, the constant `rho0(omega) / omega^3`.
    fn cubic_coefficient(&self) -> f64 {
        self.hbar / (2.0 * PI * PI * self.light_speed.powi(3))
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be non-negative, got {omega}"
        )));
    }
    Ok(())
}

/// `hbar omega^3 / (2 pi^2 c^3)`
pub fn rho0(omega: f64, spectrum: &ZeroPointSpectrum) -> Result<f64> {
    check_frequency(omega)?;
    Ok(spectrum.cubic_coefficient() * omega.powi(3))
}

/// Thermal excess `(omega^2 / pi^2 c^3) hbar omega / (e^{hbar omega / kT} - 1)`;
/// zero at `T = 0`.
pub fn thermal_part(omega: f64, temperature: f64, spectrum: &ZeroPointSpectrum) -> Result<f64> {
    check_frequency(omega)?;
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    if temperature == 0.0 || omega == 0.0 {
        return Ok(0.0);
    }
    let x = spectrum.hbar * omega / (spectrum.boltzmann * temperature);
    let occupancy = 1.0 / x.exp_m1();
    let prefactor = omega * omega / (PI * PI * spectrum.light_speed.powi(3));
    Ok(prefactor * spectrum.hbar * omega * occupancy)
}

/// `(omega^2 / pi^2 c^3) (hbar omega / 2 + hbar omega / (e^{hbar omega / kT} - 1))`
pub fn planck_spectrum(
    omega: f64,
    temperature: f64,
    spectrum: &ZeroPointSpectrum,
) -> Result<f64> {
    Ok(rho0(omega, spectrum)? + thermal_part(omega, temperature, spectrum)?)
}

/// Magnitude of `4 pi^2 c^3 gamma int_0^inf rho0(omega) / (omega^3 (1 + gamma^2 omega^2)) d omega`.
///
/// Evaluated numerically in `u = gamma omega`, mapped onto `[0, 1)` by
/// `u = t / (1 - t)`. The closed form is `pi hbar`.
pub fn commutator_integral(gamma: f64, spectrum: &ZeroPointSpectrum) -> Result<f64> {
    commutator_quadrature(gamma, f64::INFINITY, spectrum).map(|q| q.value)
}

/// The same integral truncated at `omega_max`, with quadrature diagnostics.
pub fn commutator_quadrature(
    gamma: f64,
    omega_max: f64,
    spectrum: &ZeroPointSpectrum,
) -> Result<QuadratureResult> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    if !(omega_max > 0.0) {
        return Err(Error::Domain(format!(
            "cutoff must be positive, got {omega_max}"
        )));
    }
    let c3 = spectrum.light_speed.powi(3);
    let prefactor = 4.0 * PI * PI * c3 * gamma;
    // rho0(omega) / omega^3 is constant, so only the Lorentzian factor varies.
    let ratio = spectrum.cubic_coefficient();
    let integrand = |t: f64| {
        let u = t / (1.0 - t);
        let jacobian = 1.0 / (gamma * (1.0 - t) * (1.0 - t));
        prefactor * ratio / (1.0 + u * u) * jacobian
    };
    let upper = if omega_max.is_infinite() {
        1.0
    } else {
        let u = gamma * omega_max;
        u / (1.0 + u)
    };
    let scale = PI * spectrum.hbar;
    let result = integrate_adaptive(
        integrand,
        0.0,
        upper,
        QUADRATURE_TOL * scale,
        QUADRATURE_TOL,
        MAX_INTERVALS,
    )?;
    if !result.value.is_finite() {
        return Err(Error::NonConvergence {
            iterations: result.intervals,
            detail: format!("commutator quadrature returned {}", result.value),
        });
    }
    Ok(result)
}

/// Radiation-reaction time `2 e^2 / (3 M c^3)` in Gaussian units.
pub fn gamma_of(units: &UnitSystem) -> f64 {
    units.gamma()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural() -> ZeroPointSpectrum {
        ZeroPointSpectrum::new(1.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn rho0_values() {
        let s = natural();
        assert_eq!(rho0(0.0, &s).unwrap(), 0.0);
        assert!((rho0(1.0, &s).unwrap() - 0.050_660_591_821_168_89).abs() < 1e-15);
        assert!((rho0(2.4, &s).unwrap() / rho0(1.2, &s).unwrap() - 8.0).abs() < 1e-12);
        assert!(rho0(-1.0, &s).is_err());
    }

    #[test]
    fn planck_limits() {
        let s = natural();
        // hbar omega / kT = 60
        let cold = planck_spectrum(3.0, 0.05, &s).unwrap();
        assert!((cold - rho0(3.0, &s).unwrap()).abs() < 1e-12 * cold);
        assert_eq!(planck_spectrum(3.0, 0.0, &s).unwrap(), rho0(3.0, &s).unwrap());
        // hbar omega / kT = 0.01: Rayleigh-Jeans plus zero point.
        let omega = 0.5;
        let kt = 50.0;
        let hot = planck_spectrum(omega, kt, &s).unwrap();
        let rj = omega * omega * kt / (PI * PI) + rho0(omega, &s).unwrap();
        assert!((hot - rj).abs() < 0.01 * rj);
    }

    #[test]
    fn planck_grows_with_temperature() {
        let s = natural();
        let mut last = 0.0;
        for t in [0.0, 0.1, 0.5, 1.0, 5.0, 50.0] {
            let v = planck_spectrum(1.3, t, &s).unwrap();
            assert!(v >= last);
            assert!(v >= rho0(1.3, &s).unwrap());
            last = v;
        }
    }

    #[test]
    fn commutator_is_pi_hbar() {
        let s = natural();
        let value = commutator_integral(1e-3, &s).unwrap();
        assert!((value - PI).abs() < 1e-10 * PI, "{value}");
        assert!(commutator_integral(0.0, &s).is_err());
    }

    #[test]
    fn gamma_for_electrons() {
        let g = gamma_of(&UnitSystem::electron_cgs());
        assert!((g - 6.26e-24).abs() < 0.01e-24, "{g:e}");
        let heavier = UnitSystem::electron_cgs().with_mass(2.0 * 9.109e-28).unwrap();
        assert!((gamma_of(&heavier) / g - 0.5).abs() < 1e-12);
        let neutral = UnitSystem::electron_cgs().with_charge(0.0).unwrap();
        assert_eq!(gamma_of(&neutral), 0.0);
    }
}
