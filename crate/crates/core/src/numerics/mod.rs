//! Complex-arithmetic utilities shared by every other module.

mod fit;
mod ode;
mod special;
mod stencil;

pub use fit::{fit_log_log_slope, LogLogFit};
pub use ode::{integrate_path, local_flow, ComplexPath, IntegratorConfig, Sample, Trajectory};
pub use special::{arg_gamma_imag_axis, gamma, ln_gamma, principal_log, EULER_GAMMA};
pub use stencil::derivative_stencil;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("step size underflow at s = {s} (blow-up or movable pole)")]
    StepUnderflow { s: crate::C64 },
    #[error("non-finite value returned by the vector field at s = {s}")]
    NonFinite { s: crate::C64 },
    #[error("step limit of {limit} exceeded at s = {s}")]
    StepLimit { limit: usize, s: crate::C64 },
    #[error("vector field failed at s = {s}: {reason}")]
    Field { s: crate::C64, reason: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("point {0} is not on the trajectory path")]
    OffPath(crate::C64),
    #[error("stencil point outside the domain: {0}")]
    StencilOutOfDomain(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("zero argument")]
    ZeroArgument,
}
