//! Spin-indexed continuous Clifford wavelet transform.

mod admissibility;
mod checks;
mod direct;
mod mother;
mod params;
mod spectral;

pub use admissibility::{admissibility, AdmissibleWavelet};
pub use checks::{calibration_check, hpsi_inner_product, interior_frequencies, plancherel_check, RatioReport};
pub use direct::{cwt_direct, daughter, daughter_of};
pub use mother::{CliffordHermite, GaussianDerivative, MotherWavelet, SampledWavelet};
pub use params::{geometric_scales, CwtCoefficients, CwtParams};
pub use spectral::{cwt_spectral, oracle_check, synthesize, SpectralCwt, Synthesizer, ORACLE_PADDING};
pub(crate) use spectral::pairwise_sum_vectors;
