pub mod clifford;
pub mod error;
pub mod experiment;
pub mod fourier;
pub mod grid;
pub mod sum;
pub mod uncertainty;
pub mod wavelet;

pub use error::{Error, Result};
pub use num_complex::Complex64;
