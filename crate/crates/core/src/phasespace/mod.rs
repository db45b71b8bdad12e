//! Phase-space densities, the Wigner transform and its Fourier partner in
//! the auxiliary variable `y`, marginals and factorization diagnostics.

mod factorization;
mod wigner;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::fourier::AffineResampler;
use crate::numerics::{PhaseSpaceGrid, UnitSystem};
use crate::wavefunction::Potential;

pub use factorization::{factorization_residual, factorize, mvt_residual, Factorization};
pub use wigner::{transform_of_density, wigner_of, TransformedDensity};

/// Real samples `W(x_i, p_j)` stored x-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceDensity {
    grid: PhaseSpaceGrid,
    values: Vec<f64>,
    time: f64,
    units: UnitSystem,
}

impl PhaseSpaceDensity {
    pub fn new(grid: PhaseSpaceGrid, values: Vec<f64>, units: UnitSystem) -> Result<Self> {
        if values.len() != grid.site_count() {
            return Err(Error::ShapeMismatch {
                expected: grid.site_count(),
                actual: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite density at site {k}")));
        }
        Ok(PhaseSpaceDensity {
            grid,
            values,
            time: 0.0,
            units,
        })
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(
        grid: PhaseSpaceGrid,
        units: UnitSystem,
        f: F,
    ) -> Result<Self> {
        let n_p = grid.p.n_points();
        let values = (0..grid.site_count())
            .map(|k| f(grid.x.point(k / n_p), grid.p.point(k % n_p)))
            .collect();
        Self::new(grid, values, units)
    }

    /// Product Gaussian with the given means and variances, normalized on the lattice.
    pub fn gaussian(
        grid: PhaseSpaceGrid,
        units: UnitSystem,
        center: (f64, f64),
        variance: (f64, f64),
    ) -> Result<Self> {
        let (x0, p0) = center;
        let (vx, vp) = variance;
        if !(vx > 0.0 && vp > 0.0) {
            return Err(Error::Domain(format!(
                "variances must be positive, got {vx}, {vp}"
            )));
        }
        let mut w = Self::from_fn(grid, units, |x, p| {
            (-(x - x0).powi(2) / (2.0 * vx) - (p - p0).powi(2) / (2.0 * vp)).exp()
        })?;
        let mass = w.mass();
        w.values.iter_mut().for_each(|v| *v /= mass);
        Ok(w)
    }

    pub(crate) fn from_parts(
        grid: PhaseSpaceGrid,
        values: Vec<f64>,
        time: f64,
        units: UnitSystem,
    ) -> Self {
        PhaseSpaceDensity {
            grid,
            values,
            time,
            units,
        }
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
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

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.p.n_points() + j]
    }

    /// `int int W dx dp`
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()).sqrt()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn position_marginal(&self) -> Vec<f64> {
        let dp = self.grid.p.spacing();
        self.values
            .chunks(self.grid.p.n_points())
            .map(|row| row.iter().sum::<f64>() * dp)
            .collect()
    }

    pub fn momentum_marginal(&self) -> Vec<f64> {
        let n_p = self.grid.p.n_points();
        let dx = self.grid.x.spacing();
        let mut out = vec![0.0; n_p];
        for row in self.values.chunks(n_p) {
            out.iter_mut().zip(row).for_each(|(o, v)| *o += v);
        }
        out.iter_mut().for_each(|v| *v *= dx);
        out
    }

    /// `(<x>, <p>, Var x, Var p)` relative to the density's own mass.
    pub fn moments(&self) -> (f64, f64, f64, f64) {
        let px = self.position_marginal();
        let pp = self.momentum_marginal();
        let stats = |w: &[f64], grid: &crate::numerics::Grid1D| {
            let total: f64 = w.iter().sum();
            let mean = w
                .iter()
                .enumerate()
                .map(|(i, v)| grid.point(i) * v)
                .sum::<f64>()
                / total;
            let var = w
                .iter()
                .enumerate()
                .map(|(i, v)| (grid.point(i) - mean).powi(2) * v)
                .sum::<f64>()
                / total;
            (mean, var)
        };
        let (mx, vx) = stats(&px, &self.grid.x);
        let (mp, vp) = stats(&pp, &self.grid.p);
        (mx, mp, vx, vp)
    }

    /// `<p^2 / 2M + V(x)>`
    pub fn energy(&self, potential: &Potential) -> f64 {
        let px = self.position_marginal();
        let pp = self.momentum_marginal();
        let m = self.units.mass();
        let kinetic: f64 = pp
            .iter()
            .enumerate()
            .map(|(j, w)| self.grid.p.point(j).powi(2) / (2.0 * m) * w)
            .sum::<f64>()
            * self.grid.p.spacing();
        let pot: f64 = px
            .iter()
            .enumerate()
            .map(|(i, w)| potential.value(self.grid.x.point(i)) * w)
            .sum::<f64>()
            * self.grid.x.spacing();
        kinetic + pot
    }

    /// `||self - other|| / ||other||` in the lattice L2 norm.
    pub fn relative_distance(&self, other: &PhaseSpaceDensity) -> Result<f64> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::GridMismatch(
                "densities live on different lattices".into(),
            ));
        }
        let diff: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        let reference: f64 = other.values.iter().map(|b| b * b).sum();
        if reference == 0.0 {
            return Err(Error::Degenerate(
                "reference density is identically zero".into(),
            ));
        }
        Ok((diff / reference).sqrt())
    }
}

/// Free-function form of [`PhaseSpaceDensity::position_marginal`].
pub fn position_marginal(w: &PhaseSpaceDensity) -> Vec<f64> {
    w.position_marginal()
}

/// Free-function form of [`PhaseSpaceDensity::momentum_marginal`].
pub fn momentum_marginal(w: &PhaseSpaceDensity) -> Vec<f64> {
    w.momentum_marginal()
}

/// Band-limited interpolation of every x-row onto another momentum lattice
/// with the same point count; values outside the source range are zero.
pub fn resample_momentum(
    w: &PhaseSpaceDensity,
    target: &PhaseSpaceGrid,
) -> Result<PhaseSpaceDensity> {
    let src = w.grid();
    if src.x != target.x || src.p.n_points() != target.p.n_points() {
        return Err(Error::GridMismatch(
            "momentum resampling needs the same x lattice and momentum point count".into(),
        ));
    }
    let scale = target.p.spacing() / src.p.spacing();
    let offset = target.p.point(0) - scale * src.p.point(0);
    let n_p = src.p.n_points();
    let resampler = AffineResampler::new(&src.p, &vec![(scale, offset); src.x.n_points()])?;
    let mut values = w.values().to_vec();
    resampler.apply(&mut values, None);
    let lo = src.p.point(0);
    let hi = src.p.point(n_p - 1);
    let tol = 1e-12 * src.p.length();
    values.par_chunks_mut(n_p).for_each(|row| {
        for (j, v) in row.iter_mut().enumerate() {
            let p = target.p.point(j);
            *v = if p < lo - tol || p > hi + tol {
                0.0
            } else {
                *v / scale
            };
        }
    });
    Ok(PhaseSpaceDensity::from_parts(
        *target,
        values,
        w.time(),
        *w.units(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;

    fn lattice() -> PhaseSpaceGrid {
        PhaseSpaceGrid::new(make_grid(64, 16.0).unwrap(), make_grid(64, 16.0).unwrap())
    }

    #[test]
    fn gaussian_moments_and_mass() {
        let w =
            PhaseSpaceDensity::gaussian(lattice(), UnitSystem::default(), (0.5, -1.0), (1.0, 0.7))
                .unwrap();
        assert!((w.mass() - 1.0).abs() < 1e-12);
        let (mx, mp, vx, vp) = w.moments();
        assert!((mx - 0.5).abs() < 1e-10);
        assert!((mp + 1.0).abs() < 1e-10);
        assert!((vx - 1.0).abs() < 1e-8);
        assert!((vp - 0.7).abs() < 1e-8);
    }

    #[test]
    fn uniform_density_has_flat_marginal() {
        let g = lattice();
        let w = PhaseSpaceDensity::from_fn(g, UnitSystem::default(), |_, _| 1.0 / 256.0).unwrap();
        let px = w.position_marginal();
        assert!(px.iter().all(|v| (v - px[0]).abs() < 1e-15));
        assert!((w.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shape_is_checked() {
        let r = PhaseSpaceDensity::new(lattice(), vec![0.0; 10], UnitSystem::default());
        assert!(matches!(r, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn resampling_onto_a_coarser_momentum_lattice() {
        let x = make_grid(32, 16.0).unwrap();
        let fine = PhaseSpaceGrid::new(x, make_grid(128, 24.0).unwrap());
        let coarse = PhaseSpaceGrid::new(x, make_grid(128, 48.0).unwrap());
        let w = PhaseSpaceDensity::gaussian(fine, UnitSystem::default(), (0.0, 0.3), (1.0, 1.2))
            .unwrap();
        let r = resample_momentum(&w, &coarse).unwrap();
        let exact =
            PhaseSpaceDensity::gaussian(coarse, UnitSystem::default(), (0.0, 0.3), (1.0, 1.2))
                .unwrap();
        assert!((r.mass() - 1.0).abs() < 1e-10);
        let worst = r
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }
}
