//! The real Clifford algebra `ℝₙ` (with `e_i² = −1`) and its complexification.

mod blade;
mod multivector;
mod spin;

pub use blade::{blade_product, BladeIndex, MAX_DIM};
pub use multivector::{
    geometric_product, vector_product_split, Involution, Multivector, EPS_SCALAR,
};
pub use spin::{haar_mass, spin_act, spin_sample, SpinElement, EPS_SPIN};

pub(crate) use blade::blade_label;
pub(crate) use multivector::{gp_into, involute_in_place};
pub(crate) use spin::apply_matrix;
