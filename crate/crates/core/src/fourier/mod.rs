//! Clifford Fourier transform with the scalar kernel `e^{−i⟨x,ξ⟩}` and
//! `(2π)^{−n/2}` normalization, evaluated blade by blade.

mod plan;

pub use plan::{cft, cft_tensor, icft, FourierPlan};
