pub mod error;
pub mod kinetics;
pub mod numerics;
pub mod phasespace;
pub mod photoelectric;
pub mod wavefunction;
pub mod zeropoint;

pub use error::{Error, Result};
