//! Uncertainty functionals and inequality reports.

mod digamma;
mod heisenberg;
mod logarithmic;
mod moments;
mod report;
mod slices;

pub use digamma::digamma;
pub use heisenberg::{
    fd_convergence, heisenberg_thm31, heisenberg_thm31_all, heisenberg_thm32, spectral_derivative, FdConvergence, Thm32Report,
};
pub use logarithmic::{
    log_constant, log_cwt_sides, log_cwt_up, log_fourier_up, log_identity_sides, log_moment_identity, refine_by_interpolation,
    LemmaReport, LogConstant, LogCwtSides, LogIdentity, MOMENT_PADDING,
};
pub use moments::{coordinate_moment, log_moment, log_moment_midpoint};
pub use report::{Diagnostics, InequalityReport, Verdict, RELATIVE_TOLERANCE, TAIL_THRESHOLD};
