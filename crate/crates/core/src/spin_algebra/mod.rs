//! Angular-momentum operators, coupled bases, rotation matrices and Haar sampling.

mod coupling;
mod operators;
mod rotation;
mod spin;

pub use coupling::{coupled_basis, CoupledBasis};
pub use operators::{spin_operators, SpinOperators};
pub use rotation::{haar_rotation, wigner_rotation, wigner_rotation_with, Rotation};
pub use spin::{parse_fraction, Spin};
