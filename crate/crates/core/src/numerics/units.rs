use crate::error::{Error, Result};

/// Physical constants used by the dynamics. `alpha` is the action constant
/// playing the role of hbar. The radiation-reaction time is always derived
/// from charge, mass and light speed (Gaussian form `2 e^2 / 3 M c^3`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    alpha: f64,
    mass: f64,
    light_speed: f64,
    charge: f64,
    boltzmann: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::dimensionless()
    }
}

impl UnitSystem {
    pub fn new(
        alpha: f64,
        mass: f64,
        light_speed: f64,
        charge: f64,
        boltzmann: f64,
    ) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("alpha", alpha)?;
        positive("mass", mass)?;
        positive("light speed", light_speed)?;
        positive("boltzmann constant", boltzmann)?;
        if !charge.is_finite() {
            return Err(Error::Domain(format!(
                "charge must be finite, got {charge}"
            )));
        }
        Ok(UnitSystem {
            alpha,
            mass,
            light_speed,
            charge,
            boltzmann,
        })
    }

    /// `alpha = M = c = e = k_B = 1`.
    pub fn dimensionless() -> Self {
        UnitSystem {
            alpha: 1.0,
            mass: 1.0,
            light_speed: 1.0,
            charge: 1.0,
            boltzmann: 1.0,
        }
    }

    /// Electron in Gaussian cgs units (erg, g, cm, s, esu).
    pub fn electron_cgs() -> Self {
        UnitSystem {
            alpha: 1.054_571_817e-27,
            mass: 9.109e-28,
            light_speed: 2.9979e10,
            charge: 4.8032e-10,
            boltzmann: 1.380_649e-16,
        }
    }

    /// Electron in (eV, m, s) units: action in eV s, mass in eV s^2/m^2 so that
    /// `M c^2` is the rest energy in eV, charge squared in eV m (`e^2 / 4 pi eps0`).
    pub fn electron_ev() -> Self {
        let c = 2.997_924_58e8;
        UnitSystem {
            alpha: 6.582_119_569e-16,
            mass: ELECTRON_REST_ENERGY_EV / (c * c),
            light_speed: c,
            charge: 1.439_964_548e-9_f64.sqrt(),
            boltzmann: 8.617_333_262e-5,
        }
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    #[inline]
    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    #[inline]
    pub fn charge(&self) -> f64 {
        self.charge
    }

    #[inline]
    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }

    /// Radiation-reaction time `(2/3) e^2 / (M c^3)`.
    pub fn gamma(&self) -> f64 {
        2.0 * self.charge * self.charge / (3.0 * self.mass * self.light_speed.powi(3))
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(
            alpha,
            self.mass,
            self.light_speed,
            self.charge,
            self.boltzmann,
        )
    }

    pub fn with_mass(self, mass: f64) -> Result<Self> {
        Self::new(
            self.alpha,
            mass,
            self.light_speed,
            self.charge,
            self.boltzmann,
        )
    }

    pub fn with_light_speed(self, light_speed: f64) -> Result<Self> {
        Self::new(
            self.alpha,
            self.mass,
            light_speed,
            self.charge,
            self.boltzmann,
        )
    }

    pub fn with_charge(self, charge: f64) -> Result<Self> {
        Self::new(
            self.alpha,
            self.mass,
            self.light_speed,
            charge,
            self.boltzmann,
        )
    }

    pub fn with_boltzmann(self, boltzmann: f64) -> Result<Self> {
        Self::new(
            self.alpha,
            self.mass,
            self.light_speed,
            self.charge,
            boltzmann,
        )
    }
}

/// Electron rest energy in eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;
