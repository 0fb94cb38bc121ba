//! Regular richness of matrix data: transitivity, spectra, rigidity, Schubert bounds.

pub mod cli;
pub mod config;
pub mod constraints;
pub mod error;
pub mod io;
pub mod linalg;
pub mod random;
pub mod richness;
pub mod scanner;
pub mod rigidity;
pub mod schubert;
pub mod spectral;
pub mod transitivity;

pub use config::ToleranceConfig;
pub use error::{Error, Result};
