use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::error::{Error, Result};

/// Uniform periodic lattice on `[-L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    length: f64,
    spacing: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::Sizing(format!(
                "point count must be a power of two >= 8, got {n_points}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Sizing(format!(
                "length must be positive, got {length}"
            )));
        }
        Ok(Grid1D {
            n_points,
            length,
            spacing: length / n_points as f64,
        })
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Angular wavenumber of FFT bin `j` (standard FFT ordering, Nyquist bin negative).
    #[inline]
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n_points as i64;
        let j = j as i64;
        let signed = if j < n / 2 { j } else { j - n };
        2.0 * PI * signed as f64 / self.length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.wavenumber(j)).collect()
    }

    /// Largest resolvable angular wavenumber, `pi / dx`.
    pub fn nyquist(&self) -> f64 {
        PI / self.spacing
    }

    /// Index of the lattice point nearest to `x`, with periodic wrap.
    pub fn nearest_index(&self, x: f64) -> usize {
        let n = self.n_points as f64;
        let raw = ((x + 0.5 * self.length) / self.spacing).round();
        raw.rem_euclid(n) as usize
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_points {
            return Err(Error::ShapeMismatch {
                expected: self.n_points,
                actual: len,
            });
        }
        Ok(())
    }
}

/// Constructs the lattice `x_i = -L/2 + i dx`.
pub fn make_grid(n_points: usize, length: f64) -> Result<Grid1D> {
    Grid1D::new(n_points, length)
}

/// Rectangular lattice over phase space. Values are stored x-major:
/// index `i * n_p + j` holds `(x_i, p_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    pub x: Grid1D,
    pub p: Grid1D,
}

impl PhaseSpaceGrid {
    pub fn new(x: Grid1D, p: Grid1D) -> Self {
        PhaseSpaceGrid { x, p }
    }

    /// Momentum lattice conjugate to `x` under `exp(i p x / alpha)`:
    /// spacing `2 pi alpha / L`.
    pub fn kinetic(x: Grid1D, n_p: usize, alpha: f64) -> Result<Self> {
        let dp = 2.0 * PI * alpha / x.length();
        Ok(PhaseSpaceGrid {
            x,
            p: Grid1D::new(n_p, dp * n_p as f64)?,
        })
    }

    /// Momentum lattice produced by the Wigner transform, whose kernel is
    /// `exp(-2 i p y / alpha)` with `y` on the x-lattice: spacing `pi alpha / L`.
    pub fn wigner(x: Grid1D, alpha: f64) -> Result<Self> {
        let n = x.n_points();
        let dp = PI * alpha / x.length();
        Ok(PhaseSpaceGrid {
            x,
            p: Grid1D::new(n, dp * n as f64)?,
        })
    }

    pub fn site_count(&self) -> usize {
        self.x.n_points() * self.p.n_points()
    }

    pub fn cell_area(&self) -> f64 {
        self.x.spacing() * self.p.spacing()
    }

    pub fn same_lattice(&self, other: &PhaseSpaceGrid) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        self.x.n_points() == other.x.n_points()
            && self.p.n_points() == other.p.n_points()
            && close(self.x.length(), other.x.length())
            && close(self.p.length(), other.p.length())
    }
}

/// Periodic rectangle rule `dx * sum(samples)`, summed in index order.
pub fn integrate<T>(samples: &[T], grid: &Grid1D) -> Result<T>
where
    T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
{
    grid.check_len(samples.len())?;
    let sum = samples.iter().fold(T::zero(), |acc, &v| acc + v);
    Ok(sum * grid.spacing())
}
