use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::PhaseSpaceDensity;
use crate::error::{Error, Result};
use crate::numerics::{ComplexFft, Grid1D, PhaseSpaceGrid};
use crate::wavefunction::WaveFunction;

const IMAGINARY_RESIDUE: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-8;

/// `Q(x, p) = (1 / pi alpha) int dy conj(Psi(x - y)) Psi(x + y) e^{-2 i p y / alpha}`
/// with `y` on the x-lattice and periodic index arithmetic. The momentum axis
/// has spacing `pi alpha / L` (see [`PhaseSpaceGrid::wigner`]).
///
/// Offsets are restricted to `|y| < L/4`. On a ring, the pair `(x - y, x + y)`
/// with `|y|` near `L/2` reaches the same two points from the antipode of `x`,
/// which would add a copy of the density modulated at the momentum Nyquist
/// frequency half a period away. Packets narrower than `L/2` lose nothing.
pub fn wigner_of(psi: &WaveFunction, alpha: f64) -> Result<PhaseSpaceDensity> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let x = *psi.grid();
    let n = x.n_points();
    let grid = PhaseSpaceGrid::wigner(x, alpha)?;
    let fft = ComplexFft::new(n);
    let amp = psi.values();
    let scale = x.spacing() / (PI * alpha);
    let quarter = n / 4;
    let mut values = vec![0.0; n * n];
    let residue = values
        .par_chunks_mut(n)
        .enumerate()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); n],
            |buf, (i, row)| {
                for (m, c) in buf.iter_mut().enumerate() {
                    if m >= quarter && m <= n - quarter {
                        *c = Complex64::new(0.0, 0.0);
                        continue;
                    }
                    let v = amp[(i + n - m) % n].conj() * amp[(i + m) % n];
                    *c = if m % 2 == 0 { v } else { -v };
                }
                fft.forward(buf);
                let mut worst: f64 = 0.0;
                for (out, c) in row.iter_mut().zip(buf.iter()) {
                    *out = c.re * scale;
                    worst = worst.max((c.im * scale).abs());
                }
                worst
            },
        )
        .reduce(|| 0.0, f64::max);
    let w = PhaseSpaceDensity::from_parts(grid, values, psi.time(), psi.units().with_alpha(alpha)?);
    let peak = w.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if residue > IMAGINARY_RESIDUE * peak.max(1.0) {
        return Err(Error::Normalization(format!(
            "Wigner transform has imaginary residue {residue:e}"
        )));
    }
    let mass = w.mass();
    let expected = psi.norm();
    if (mass - expected).abs() > NORMALIZATION_TOL {
        return Err(Error::Normalization(format!(
            "Wigner mass {mass} differs from norm {expected}"
        )));
    }
    Ok(w)
}

/// `W~(x, y) = int dp W(x, p) e^{2 i p y / alpha}` on `y_k = (k - n/2) dy`,
/// `dy = pi alpha / (n_p dp)`, so `y = 0` sits at index `n_p / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedDensity {
    x: Grid1D,
    y: Grid1D,
    values: Vec<Complex64>,
    alpha: f64,
    time: f64,
}

impl TransformedDensity {
    pub fn x_grid(&self) -> &Grid1D {
        &self.x
    }

    pub fn y_grid(&self) -> &Grid1D {
        &self.y
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    #[inline]
    pub fn at(&self, i: usize, k: usize) -> Complex64 {
        self.values[i * self.y.n_points() + k]
    }

    /// `W~(x, 0)`, the position marginal of the source density.
    pub fn zero_slice(&self) -> Vec<f64> {
        let n_y = self.y.n_points();
        (0..self.x.n_points())
            .map(|i| self.at(i, n_y / 2).re)
            .collect()
    }

    /// Largest `|W~(x, -y) - conj(W~(x, y))|` over lattice pairs.
    pub fn hermiticity_error(&self) -> f64 {
        let n_y = self.y.n_points();
        let mut worst: f64 = 0.0;
        for i in 0..self.x.n_points() {
            for k in 1..n_y {
                let d = self.at(i, n_y - k) - self.at(i, k).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// True when `y` shares the x-lattice spacing, as produced from a Wigner
    /// density; required for the `(x + y, x - y)` factorization.
    pub fn on_pair_lattice(&self) -> bool {
        self.x.n_points() == self.y.n_points()
            && (self.x.spacing() - self.y.spacing()).abs() <= 1e-12 * self.x.spacing()
    }
}

pub fn transform_of_density(w: &PhaseSpaceDensity, alpha: f64) -> Result<TransformedDensity> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let grid = w.grid();
    let n_p = grid.p.n_points();
    let dp = grid.p.spacing();
    let dy = PI * alpha / (n_p as f64 * dp);
    let y = Grid1D::new(n_p, dy * n_p as f64)?;
    let fft = ComplexFft::new(n_p);
    // e^{2 i p_j y_k / alpha} = e^{2 pi i j k / n} (-1)^{j + k + n/2}
    let sign_n = if (n_p / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut values = vec![Complex64::new(0.0, 0.0); grid.site_count()];
    values
        .par_chunks_mut(n_p)
        .zip(w.values().par_chunks(n_p))
        .for_each(|(out, row)| {
            for (j, (o, &v)) in out.iter_mut().zip(row).enumerate() {
                *o = Complex64::new(if j % 2 == 0 { v } else { -v }, 0.0);
            }
            fft.inverse_unscaled(out);
            for (k, o) in out.iter_mut().enumerate() {
                let s = if k % 2 == 0 { sign_n } else { -sign_n };
                *o *= s * dp;
            }
        });
    Ok(TransformedDensity {
        x: grid.x,
        y,
        values,
        alpha,
        time: w.time(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{make_grid, UnitSystem};
    use crate::wavefunction::gaussian_packet;

    #[test]
    fn gaussian_packet_wigner_is_nonnegative_and_normalized() {
        let grid = make_grid(256, 40.0).unwrap();
        let psi = gaussian_packet(&grid, 1.0, 1.1, -0.5, UnitSystem::default()).unwrap();
        let q = wigner_of(&psi, 1.0).unwrap();
        assert!((q.mass() - 1.0).abs() < 1e-8);
        assert!(q.min_value() > -1e-10, "{}", q.min_value());
    }

    #[test]
    fn transform_zero_slice_is_position_marginal() {
        let grid = make_grid(128, 16.0).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.8, UnitSystem::default()).unwrap();
        let q = wigner_of(&psi, 1.0).unwrap();
        let t = transform_of_density(&q, 1.0).unwrap();
        let slice = t.zero_slice();
        let px = q.position_marginal();
        for (a, b) in slice.iter().zip(&px) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(t.on_pair_lattice());
        assert!(t.hermiticity_error() < 1e-10);
    }

    #[test]
    fn gaussian_momentum_profile_transforms_to_gaussian() {
        // W ~ exp(-p^2 / 2 s^2) gives W~(y) ~ exp(-2 s^2 y^2 / alpha^2): width alpha / (2 s).
        let x = make_grid(16, 8.0).unwrap();
        let p = make_grid(256, 40.0).unwrap();
        let alpha = 0.7;
        let s = 1.3;
        let w = PhaseSpaceDensity::gaussian(
            PhaseSpaceGrid::new(x, p),
            UnitSystem::default(),
            (0.0, 0.0),
            (1.0, s * s),
        )
        .unwrap();
        let t = transform_of_density(&w, alpha).unwrap();
        let px = w.position_marginal();
        let width = alpha / (2.0 * s);
        for i in [4, 8, 11] {
            for k in 0..t.y_grid().n_points() {
                let y = t.y_grid().point(k);
                let expected = px[i] * (-y * y / (2.0 * width * width)).exp();
                assert!((t.at(i, k) - expected).norm() < 1e-10, "{i} {k}");
            }
        }
    }
}
