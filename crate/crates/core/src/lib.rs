//! Krein-space operator theory for the Phillips lattice model: J-self-adjoint
//! extensions, boundary triplets, spectral classification and C-symmetry.

pub mod csym;
pub mod error;
pub mod extensions;
pub mod krein;
pub mod linalg;
pub mod phillips;
pub mod random;
pub mod tolerance;
pub mod triplet;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
