use crate::error::{Error, Result};
use crate::numerics::UnitSystem;

/// Kinetic-energy ceiling `max(0, alpha omega - phi)`.
pub fn einstein_ke_max(omega: f64, work_function: f64, units: &UnitSystem) -> Result<f64> {
    if !(work_function > 0.0) || !work_function.is_finite() {
        return Err(Error::Domain(format!(
            "work function must be positive, got {work_function}"
        )));
    }
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be non-negative, got {omega}"
        )));
    }
    Ok((units.alpha() * omega - work_function).max(0.0))
}

/// Speed `sqrt(2 KE / M)` of a non-relativistic particle.
pub fn max_velocity(kinetic_energy: f64, units: &UnitSystem) -> Result<f64> {
    if !(kinetic_energy >= 0.0) || !kinetic_energy.is_finite() {
        return Err(Error::Domain(format!(
            "kinetic energy must be non-negative, got {kinetic_energy}"
        )));
    }
    Ok((2.0 * kinetic_energy / units.mass()).sqrt())
}

/// Planar momentum balance of photoabsorption. The photon arrives along `+y`;
/// the electron angle is measured from `+y` towards `+x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recoil {
    pub photon: [f64; 2],
    pub electron: [f64; 2],
    pub atom: [f64; 2],
}

impl Recoil {
    pub fn photon_momentum(&self) -> f64 {
        self.photon[0].hypot(self.photon[1])
    }

    pub fn electron_momentum(&self) -> f64 {
        self.electron[0].hypot(self.electron[1])
    }

    pub fn atom_momentum(&self) -> f64 {
        self.atom[0].hypot(self.atom[1])
    }

    /// `|photon - electron - atom|` relative to the largest momentum involved.
    pub fn closure_error(&self) -> f64 {
        let scale = self
            .photon_momentum()
            .max(self.electron_momentum())
            .max(self.atom_momentum());
        if scale == 0.0 {
            return 0.0;
        }
        let dx = self.photon[0] - self.electron[0] - self.atom[0];
        let dy = self.photon[1] - self.electron[1] - self.atom[1];
        dx.hypot(dy) / scale
    }
}

pub fn recoil_kinematics(
    photon_energy: f64,
    electron_ke: f64,
    electron_angle: f64,
    units: &UnitSystem,
) -> Result<Recoil> {
    if !(photon_energy >= 0.0) || !photon_energy.is_finite() {
        return Err(Error::Domain(format!(
            "photon energy must be non-negative, got {photon_energy}"
        )));
    }
    if !(electron_ke >= 0.0) || !electron_ke.is_finite() {
        return Err(Error::Domain(format!(
            "electron kinetic energy must be non-negative, got {electron_ke}"
        )));
    }
    if !electron_angle.is_finite() {
        return Err(Error::Domain(format!(
            "electron angle must be finite, got {electron_angle}"
        )));
    }
    let photon = [0.0, photon_energy / units.light_speed()];
    let p = (2.0 * units.mass() * electron_ke).sqrt();
    let electron = [p * electron_angle.sin(), p * electron_angle.cos()];
    let atom = [photon[0] - electron[0], photon[1] - electron[1]];
    Ok(Recoil {
        photon,
        electron,
        atom,
    })
}
