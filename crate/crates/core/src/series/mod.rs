//! Formal power series for the Ω system at `s = 0`.
//!
//! Two independent constructions of the same double series:
//! the small-parameter route ([`extend`]) and the direct `s`-expansion
//! ([`direct_formal_series`]), plus the closed forms at `Re σ = 1`.

mod closed;
mod labelled;
mod power;
mod recursion;

pub use closed::{
    complete_on_shell, geometric_closed_form, geometric_partial_sum, geometric_ratio, log_case_closed_forms,
    resum_inverse_sine, InverseSineForms, LogForms,
};
pub use labelled::{LabelledSeries, LatticeExponent, Monomial};
pub use power::{PowerLogSeries, Term, TermRecord, MERGE_TOL};
pub use recursion::{
    direct_formal_series, direct_labelled, extend, order0, LabelledSolution, SeriesSolution,
};

use thiserror::Error;

use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("σ = {0} outside −1 < Re σ < 1")]
    OutOfRange(C64),
    #[error("σ = {sigma} needs logarithmic terms at order {order}")]
    LogTermRequired { sigma: C64, order: usize },
    #[error("σ = {sigma} is resonant at order {order}")]
    Resonant { sigma: C64, order: usize },
    #[error("σ = {0}: the homogeneous exponents coincide")]
    DegenerateExponent(C64),
    #[error("antiderivative of a z^-1 term (coefficient {0})")]
    ExponentMinusOne(C64),
    #[error("series outside its validity region at s = {s} (order ratio {ratio})")]
    OutsideValidity { s: C64, ratio: f64 },
    #[error("zero argument")]
    ZeroArgument,
    #[error("ln s + C vanishes at s = {0}")]
    LogPole(C64),
    #[error("sin(ν ln s + C) vanishes at s = {0}")]
    SinePole(C64),
}
