//! Asymptotic reduction of the Painlevé VI equation PVIμ to Painlevé III
//! near the critical point `s = 0`.
//!
//! The crate integrates the isomonodromic Ω system and its reduced form,
//! maps Ω states to PVI transcendents, evaluates the PIII expansions that
//! feed the reduction, builds the formal power series of the Ω system, and
//! drives experiments that compare all of these against each other.
//!
//! Module map:
//!
//! * [`numerics`]: complex-path integration, finite differences, log-log fits,
//!   principal logarithm and the Γ function on the imaginary axis.
//! * [`omega`]: the full and reduced Ω systems, first integrals, error orders.
//! * [`pvi`]: Ω → y, the PVI residual, and the leading critical behaviours.
//! * [`piii`]: PIII and sine-Gordon residuals, the change of variables, the
//!   three expansion cases and the pole guard.
//! * [`series`]: power-log series, the two recursive constructions of the
//!   formal solution, and closed forms for `Re σ = 1`.
//! * [`harness`]: experiment configuration, the four commands and their
//!   CSV/JSON output.

pub mod error;
pub mod harness;
pub mod numerics;
pub mod omega;
pub mod piii;
pub mod pvi;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
