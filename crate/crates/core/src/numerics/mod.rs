//! Lattices, discrete transforms, spectral shifts and quadrature shared by
//! every solver in the crate.

pub mod fourier;
pub mod grid;
pub mod quadrature;
pub mod units;

pub use fourier::{affine_resample, spectral_shift, spectral_shift_real, ComplexFft, RealRows};
pub use grid::{integrate, make_grid, Grid1D, PhaseSpaceGrid};
pub use quadrature::{integrate_adaptive, QuadratureResult};
pub use units::UnitSystem;
