//! Sampled Clifford-valued functions on centred midpoint lattices.

mod field;
mod io;
mod quadrature;
mod spec;

pub use field::{CliffordField, Domain, Weight};
pub(crate) use field::for_each_line;
pub use io::{read_field_csv, write_field_csv};
pub use quadrature::{integrate, log_radius_integral, log_radius_integral_midpoint};
pub use spec::GridSpec;
