use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::tridiagonal::Tridiagonal;
use super::{Potential, WaveFunction};
use crate::error::{Error, Result};
use crate::numerics::{ComplexFft, Grid1D, UnitSystem};

/// Kinetic operator used to discretize the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// Periodic Fourier Laplacian (dense, spectrally accurate).
    Spectral,
    /// Three-point Laplacian with `psi = 0` at the wrap point `x_0`.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelRequest {
    Lowest(usize),
    /// Every level with energy strictly below the bound.
    Below(f64),
}

/// Ascending energies and real states normalized with `sum phi^2 dx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub energies: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    grid: Grid1D,
    discretization: Discretization,
}

impl EigenSolution {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn discretization(&self) -> Discretization {
        self.discretization
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn wavefunction(&self, level: usize, units: UnitSystem) -> Result<WaveFunction> {
        let state = self.states.get(level).ok_or_else(|| {
            Error::Domain(format!(
                "level {level} not computed ({} available)",
                self.len()
            ))
        })?;
        WaveFunction::from_real(self.grid, state, units)
    }

    /// Largest `|<m|n> - delta_mn|`.
    pub fn orthonormality_error(&self) -> f64 {
        let dx = self.grid.spacing();
        let mut worst: f64 = 0.0;
        for (m, a) in self.states.iter().enumerate() {
            for (n, b) in self.states.iter().enumerate().skip(m) {
                let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * dx;
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }

    /// `||H phi_n - e_n phi_n|| / ||phi_n||` for each level, using the same
    /// discrete Hamiltonian that produced the solution.
    pub fn residuals(&self, potential: &Potential, units: &UnitSystem) -> Vec<f64> {
        let op = Hamiltonian::new(&self.grid, potential, units, self.discretization);
        self.states
            .iter()
            .zip(&self.energies)
            .map(|(phi, &e)| {
                let h = op.apply(phi);
                let r: f64 = h.iter().zip(phi).map(|(a, b)| (a - e * b).powi(2)).sum();
                let norm: f64 = phi.iter().map(|v| v * v).sum();
                (r / norm).sqrt()
            })
            .collect()
    }
}

struct Hamiltonian {
    potential: Vec<f64>,
    // first row of the circulant kinetic matrix, or the 3-point weights
    kinetic: Vec<f64>,
    discretization: Discretization,
}

impl Hamiltonian {
    fn new(
        grid: &Grid1D,
        potential: &Potential,
        units: &UnitSystem,
        discretization: Discretization,
    ) -> Self {
        let n = grid.n_points();
        let c = units.alpha().powi(2) / (2.0 * units.mass());
        let kinetic = match discretization {
            Discretization::Spectral => {
                let mut k2: Vec<Complex64> = grid
                    .wavenumbers()
                    .iter()
                    .map(|k| Complex64::new(c * k * k, 0.0))
                    .collect();
                ComplexFft::new(n).inverse(&mut k2);
                k2.iter().map(|v| v.re).collect()
            }
            Discretization::FiniteDifference => {
                let h2 = grid.spacing().powi(2);
                vec![2.0 * c / h2, -c / h2]
            }
        };
        Hamiltonian {
            potential: potential.sample(&grid.points()),
            kinetic,
            discretization,
        }
    }

    fn apply(&self, phi: &[f64]) -> Vec<f64> {
        let n = phi.len();
        match self.discretization {
            Discretization::Spectral => (0..n)
                .map(|i| {
                    let kin: f64 = (0..n).map(|j| self.kinetic[(i + n - j) % n] * phi[j]).sum();
                    kin + self.potential[i] * phi[i]
                })
                .collect(),
            Discretization::FiniteDifference => (0..n)
                .map(|i| {
                    if i == 0 {
                        return 0.0;
                    }
                    let left = if i > 1 { phi[i - 1] } else { 0.0 };
                    let right = if i + 1 < n { phi[i + 1] } else { 0.0 };
                    (self.kinetic[0] + self.potential[i]) * phi[i]
                        + self.kinetic[1] * (left + right)
                })
                .collect(),
        }
    }
}

/// Lowest `count` eigenpairs of `H = -(alpha^2/2M) d^2/dx^2 + V` on the
/// periodic grid, spectral kinetic operator.
pub fn solve_eigenstates(
    potential: &Potential,
    grid: &Grid1D,
    units: &UnitSystem,
    count: usize,
) -> Result<EigenSolution> {
    solve_eigenstates_with(
        potential,
        grid,
        units,
        LevelRequest::Lowest(count),
        Discretization::Spectral,
    )
}

pub fn solve_eigenstates_with(
    potential: &Potential,
    grid: &Grid1D,
    units: &UnitSystem,
    request: LevelRequest,
    discretization: Discretization,
) -> Result<EigenSolution> {
    let n = grid.n_points();
    if let LevelRequest::Lowest(count) = request {
        if count == 0 || count > n / 2 {
            return Err(Error::Domain(format!(
                "requested {count} levels on a {n}-point grid"
            )));
        }
    }
    let op = Hamiltonian::new(grid, potential, units, discretization);
    if op.potential.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "potential {potential} is not finite on the grid"
        )));
    }
    let (energies, mut states) = match discretization {
        Discretization::Spectral => dense_levels(&op, n, request)?,
        Discretization::FiniteDifference => tridiagonal_levels(&op, n, request)?,
    };
    let scale = 1.0 / grid.spacing().sqrt();
    for state in &mut states {
        state.iter_mut().for_each(|v| *v *= scale);
        fix_sign(state);
    }
    Ok(EigenSolution {
        energies,
        states,
        grid: *grid,
        discretization,
    })
}

fn dense_levels(
    op: &Hamiltonian,
    n: usize,
    request: LevelRequest,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let h = DMatrix::from_fn(n, n, |i, j| {
        let kin = op.kinetic[(i + n - j) % n];
        if i == j {
            kin + op.potential[i]
        } else {
            kin
        }
    });
    let max_iterations = 64 * n;
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, max_iterations).ok_or_else(|| {
        Error::NonConvergence {
            iterations: max_iterations,
            detail: format!("dense symmetric eigensolver on {n}x{n} Hamiltonian"),
        }
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let keep = match request {
        LevelRequest::Lowest(count) => count,
        LevelRequest::Below(bound) => order
            .iter()
            .take_while(|&&i| eig.eigenvalues[i] < bound)
            .count(),
    };
    let energies = order[..keep].iter().map(|&i| eig.eigenvalues[i]).collect();
    let states = order[..keep]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Ok((energies, states))
}

fn tridiagonal_levels(
    op: &Hamiltonian,
    n: usize,
    request: LevelRequest,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let diag: Vec<f64> = op.potential[1..]
        .iter()
        .map(|v| op.kinetic[0] + v)
        .collect();
    let off = vec![op.kinetic[1]; n - 2];
    let t = Tridiagonal::new(&diag, &off);
    let count = match request {
        LevelRequest::Lowest(count) => count,
        LevelRequest::Below(bound) => t.count_below(bound),
    };
    let (energies, interior) = t.lowest(count)?;
    let states = interior
        .into_iter()
        .map(|v| std::iter::once(0.0).chain(v).collect())
        .collect();
    Ok((energies, states))
}

/// First sample above 1% of the peak magnitude is made positive.
fn fix_sign(state: &mut [f64]) {
    let peak = state.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = state.iter().find(|v| v.abs() > 0.01 * peak) {
        if *first < 0.0 {
            state.iter_mut().for_each(|v| *v = -*v);
        }
    }
}
