//! Configuration-space side: wavefunctions on a periodic lattice, split-step
//! evolution, stationary states and the free propagator.

mod eigen;
mod evolve;
mod potential;
mod propagator;
mod tridiagonal;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexFft, Grid1D, UnitSystem};

pub use eigen::{
    solve_eigenstates, solve_eigenstates_with, Discretization, EigenSolution, LevelRequest,
};
pub use evolve::{evolve_split_step, SplitStep};
pub use potential::{Potential, TablePotential};
pub use propagator::{
    free_kernel, kernel_at, propagate_free, propagate_free_by_kernel, DomainEscape,
};

/// Boundary amplitude (relative `|psi|^2`) above which a packet counts as
/// touching the periodic wrap.
pub const BOUNDARY_TAIL: f64 = 1e-10;

/// Complex amplitude samples on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
    time: f64,
    units: UnitSystem,
}

impl WaveFunction {
    /// Builds a wavefunction from samples, rescaling to unit norm.
    pub fn new(grid: Grid1D, values: Vec<Complex64>, units: UnitSystem) -> Result<Self> {
        grid.check_len(values.len())?;
        let mut psi = WaveFunction {
            grid,
            values,
            time: 0.0,
            units,
        };
        let norm = psi.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Normalization(format!(
                "cannot normalize amplitude with norm {norm}"
            )));
        }
        let scale = 1.0 / norm.sqrt();
        psi.values.iter_mut().for_each(|v| *v *= scale);
        Ok(psi)
    }

    /// Real samples, normalized.
    pub fn from_real(grid: Grid1D, values: &[f64], units: UnitSystem) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            units,
        )
    }

    pub(crate) fn from_parts(
        grid: Grid1D,
        values: Vec<Complex64>,
        time: f64,
        units: UnitSystem,
    ) -> Self {
        WaveFunction {
            grid,
            values,
            time,
            units,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// `int |psi|^2 dx`
    pub fn norm(&self) -> f64 {
        self.grid.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn mean_position(&self) -> f64 {
        let dx = self.grid.spacing();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.point(i) * v.norm_sqr())
            .sum::<f64>()
            * dx
    }

    pub fn position_variance(&self) -> f64 {
        let dx = self.grid.spacing();
        let mean = self.mean_position();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (self.grid.point(i) - mean).powi(2) * v.norm_sqr())
            .sum::<f64>()
            * dx
    }

    /// Momentum lattice `p_j = alpha k_j` in FFT order and the density
    /// `|Phi(p_j)|^2`, normalized so that `sum |Phi|^2 dp = 1` with
    /// `dp = 2 pi alpha / L`.
    pub fn momentum_density(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.n_points();
        let alpha = self.units.alpha();
        let mut buf = self.values.clone();
        ComplexFft::new(n).forward(&mut buf);
        let scale = self.grid.spacing().powi(2) / (2.0 * PI * alpha);
        let momenta = (0..n).map(|j| alpha * self.grid.wavenumber(j)).collect();
        let density = buf.iter().map(|v| v.norm_sqr() * scale).collect();
        (momenta, density)
    }

    /// `|Phi(p)|^2` at arbitrary momenta by direct quadrature of
    /// `Phi(p) = (2 pi alpha)^{-1/2} int psi(x) e^{-i p x / alpha} dx`.
    pub fn momentum_density_at(&self, momenta: &[f64]) -> Vec<f64> {
        let alpha = self.units.alpha();
        let dx = self.grid.spacing();
        let scale = dx * dx / (2.0 * PI * alpha);
        momenta
            .iter()
            .map(|&p| {
                let phi: Complex64 = self
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * Complex64::cis(-p * self.grid.point(i) / alpha))
                    .sum();
                phi.norm_sqr() * scale
            })
            .collect()
    }

    pub fn mean_momentum(&self) -> f64 {
        let (p, rho) = self.momentum_density();
        let dp = 2.0 * PI * self.units.alpha() / self.grid.length();
        p.iter().zip(&rho).map(|(p, r)| p * r).sum::<f64>() * dp
    }

    /// `<H>` with the spectral kinetic operator `alpha^2 k^2 / 2M`.
    pub fn energy(&self, potential: &Potential) -> f64 {
        let n = self.grid.n_points();
        let alpha = self.units.alpha();
        let mass = self.units.mass();
        let mut buf = self.values.clone();
        ComplexFft::new(n).forward(&mut buf);
        let kinetic: f64 = buf
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let k = self.grid.wavenumber(j);
                alpha * alpha * k * k / (2.0 * mass) * v.norm_sqr()
            })
            .sum::<f64>()
            * self.grid.spacing()
            / n as f64;
        let potential: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| potential.value(self.grid.point(i)) * v.norm_sqr())
            .sum::<f64>()
            * self.grid.spacing();
        kinetic + potential
    }

    /// Largest `|psi|^2` at the two outermost lattice sites, relative to the peak.
    pub fn boundary_tail(&self) -> f64 {
        let peak = self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        let n = self.values.len();
        let edge = self.values[0].norm_sqr().max(self.values[n - 1].norm_sqr());
        if peak > 0.0 {
            edge / peak
        } else {
            0.0
        }
    }

    /// `<self|other> = int conj(self) other dx`
    pub fn overlap(&self, other: &WaveFunction) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "overlap of wavefunctions on different grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.spacing())
    }
}

/// Normalized Gaussian with position variance `width^2` and mean momentum
/// `momentum`: `psi ~ exp(-(x - x0)^2 / (4 width^2) + i p0 x / alpha)`.
pub fn gaussian_packet(
    grid: &Grid1D,
    center: f64,
    width: f64,
    momentum: f64,
    units: UnitSystem,
) -> Result<WaveFunction> {
    let dx = grid.spacing();
    if !(width > 4.0 * dx) {
        return Err(Error::UnderResolved(format!(
            "packet width {width} must exceed four grid spacings ({})",
            4.0 * dx
        )));
    }
    let half = 0.5 * grid.length();
    let room = (half - center.abs()).max(0.0);
    // |psi|^2 at the nearest edge relative to the peak.
    let edge = (-room * room / (2.0 * width * width)).exp();
    if edge > 1e-8 {
        return Err(Error::Domain(format!(
            "packet at {center} with width {width} does not fit in [{}, {half})",
            -half
        )));
    }
    let alpha = units.alpha();
    let values = (0..grid.n_points())
        .map(|i| {
            let x = grid.point(i);
            let d = x - center;
            Complex64::from_polar((-d * d / (4.0 * width * width)).exp(), momentum * x / alpha)
        })
        .collect();
    WaveFunction::new(*grid, values, units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;

    #[test]
    fn packet_moments() {
        let grid = make_grid(512, 40.0).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.0, UnitSystem::default()).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(psi.mean_position().abs() < 1e-12);
        assert!((psi.position_variance() - 1.0).abs() < 1e-8);

        let boosted = gaussian_packet(&grid, 1.5, 1.0, 2.0, UnitSystem::default()).unwrap();
        assert!((boosted.mean_position() - 1.5).abs() < 1e-8);
        assert!((boosted.mean_momentum() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn momentum_density_is_normalized_with_alpha() {
        let grid = make_grid(256, 30.0).unwrap();
        let units = UnitSystem::default().with_alpha(0.5).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.7, units).unwrap();
        let (_, rho) = psi.momentum_density();
        let dp = 2.0 * PI * 0.5 / 30.0;
        assert!((rho.iter().sum::<f64>() * dp - 1.0).abs() < 1e-12);
        assert!((psi.mean_momentum() - 0.7).abs() < 1e-8);
    }

    #[test]
    fn under_resolved_and_escaping_packets_are_rejected() {
        let grid = make_grid(256, 20.0).unwrap();
        let dx = grid.spacing();
        let err = gaussian_packet(&grid, 0.0, dx, 0.0, UnitSystem::default()).unwrap_err();
        assert!(matches!(err, Error::UnderResolved(_)));
        let err = gaussian_packet(&grid, 8.0, 1.0, 0.0, UnitSystem::default()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn gaussian_energy_matches_closed_form() {
        // <p^2>/2M = alpha^2 / (8 M width^2), <x^2>/2 = width^2 / 2 for omega = M = 1.
        let grid = make_grid(512, 40.0).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 0.8, 0.0, UnitSystem::default()).unwrap();
        let e = psi.energy(&Potential::harmonic(1.0, 1.0));
        let expected = 1.0 / (8.0 * 0.64) + 0.32;
        assert!((e - expected).abs() < 1e-10, "{e} vs {expected}");
    }
}
