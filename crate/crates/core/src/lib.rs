pub mod darboux;
pub mod error;
pub mod families;
pub mod ermakov;
pub mod function;
pub mod jet;
pub mod spectral;
pub mod suite;
pub mod superpotential;

pub use error::{Error, Result};
