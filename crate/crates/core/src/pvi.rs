//! From Ω to the PVI transcendent `y(s)`, the PVI residual, and the leading
//! terms of the critical behaviours at `s = 0`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{principal_log, NumericsError};
use crate::omega::{first_integral_defect, OmegaState};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PviError {
    #[error("denominator of A vanishes")]
    DenominatorVanishes,
    #[error("the two forms of A disagree: {0} vs {1}")]
    InconsistentForms(C64, C64),
    #[error("y has a pole at s = {0}")]
    PoleOfY(C64),
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("leading formula of the family is singular at s = {0}")]
    FamilySingularity(C64),
    #[error("invalid family constants: {0}")]
    InvalidFamily(String),
}

impl From<NumericsError> for PviError {
    fn from(e: NumericsError) -> Self {
        PviError::SingularConfiguration(e.to_string())
    }
}

/// `A(s) = [(Ω1Ω2 + μΩ3)/(μ² + Ω2²)]²`.
///
/// `alternative` holds the value from the on-shell denominator
/// `−(Ω1² + Ω3²)` when the state satisfies the first integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AValue {
    pub value: C64,
    pub alternative: Option<C64>,
}

// Relative first-integral defect below which the state counts as on-shell.
const ON_SHELL: f64 = 1e-8;

pub fn compute_a(w: &OmegaState, mu: C64) -> Result<AValue, PviError> {
    let num = w.o1 * w.o2 + mu * w.o3;
    let den = mu * mu + w.o2 * w.o2;
    let den_alt = -(w.o1 * w.o1 + w.o3 * w.o3);
    let scale = den.norm().max(den_alt.norm()).max(mu.norm_sqr());
    let on_shell = first_integral_defect(w, mu).norm() <= ON_SHELL * scale.max(1e-300);
    if !on_shell {
        if den.norm() == 0.0 {
            return Err(PviError::DenominatorVanishes);
        }
        let q = num / den;
        return Ok(AValue { value: q * q, alternative: None });
    }
    if den.norm() == 0.0 && den_alt.norm() == 0.0 {
        return Err(PviError::DenominatorVanishes);
    }
    let q = num / den;
    let qa = num / den_alt;
    let (a, alt) = (q * q, qa * qa);
    if den.norm() > 0.0 && den_alt.norm() > 0.0 {
        let tol = 1e-6 * a.norm().max(alt.norm());
        if (a - alt).norm() > tol && (a - alt).norm() > 1e-300 {
            return Err(PviError::InconsistentForms(a, alt));
        }
    }
    // Use the better-conditioned denominator.
    let value = if den.norm() >= den_alt.norm() { a } else { alt };
    Ok(AValue { value, alternative: Some(if den.norm() >= den_alt.norm() { alt } else { a }) })
}

/// `y = −sA / (1 − s(1 + A))`.
pub fn y_from_a(s: C64, a: C64) -> Result<C64, PviError> {
    let den = C64::new(1.0, 0.0) - s * (a + 1.0);
    if den.norm() <= 1e-14 * (1.0 + (s * a).norm()) {
        return Err(PviError::PoleOfY(s));
    }
    Ok(-s * a / den)
}

pub fn y_of_omega(s: C64, w: &OmegaState, mu: C64) -> Result<C64, PviError> {
    y_from_a(s, compute_a(w, mu)?.value)
}

/// Right-hand side of PVIμ (`β = γ = 0`, `δ = 1/2`) as a function of the jet.
pub fn pvi_rhs(s: C64, y: C64, yp: C64, mu: C64) -> Result<C64, PviError> {
    let one = C64::new(1.0, 0.0);
    if y.norm() == 0.0 || y == one || y == s {
        return Err(PviError::SingularConfiguration(format!("y = {y} at s = {s}")));
    }
    if s.norm() == 0.0 || s == one {
        return Err(PviError::SingularConfiguration(format!("s = {s}")));
    }
    let k = (mu * 2.0 - 1.0) * (mu * 2.0 - 1.0);
    let t1 = (one / y + one / (y - one) + one / (y - s)) * yp * yp * 0.5;
    let t2 = (one / s + one / (s - one) + one / (y - s)) * yp;
    let t3 = y * (y - one) * (y - s) / (s * s * (s - one) * (s - one) * 2.0)
        * (k + s * (s - one) / ((y - s) * (y - s)));
    Ok(t1 - t2 + t3)
}

/// `y″ − RHS(s, y, y′)`.
pub fn pvi_residual(s: C64, y: C64, yp: C64, ypp: C64, mu: C64) -> Result<C64, PviError> {
    Ok(ypp - pvi_rhs(s, y, yp, mu)?)
}

/// Leading term of a critical behaviour of PVIμ at `s = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CriticalBehavior {
    /// `y ≈ a s^{1−σ}`, `0 < Re σ < 1`.
    SmallPower { sigma: C64, a: C64 },
    /// `y ≈ s sin²(ν ln s + C)`, `σ = 2iν`.
    Sine { nu: f64, c: C64 },
    /// `y ≈ 1 / (1 − (4ν² + (2μ−1)²)/(4ν²) · sin²(ν ln s + C))`, `σ = 1 + 2iν`.
    InverseSine { nu: f64, c: C64, mu: C64 },
    /// `y ≈ −4/(2μ−1)² · 1/(ln s + C)²`, `σ = 1`.
    LogType { c: C64, mu: C64 },
    /// `y ≈ a s`, `σ = 0`.
    Taylor { a: C64 },
}

impl CriticalBehavior {
    pub fn validate(&self) -> Result<(), PviError> {
        match *self {
            CriticalBehavior::SmallPower { sigma, a } => {
                if !(sigma.re > 0.0 && sigma.re < 1.0) {
                    return Err(PviError::InvalidFamily(format!("small power needs 0 < Re σ < 1, got {sigma}")));
                }
                if a.norm() == 0.0 {
                    return Err(PviError::InvalidFamily("a must be non-zero".into()));
                }
            }
            CriticalBehavior::Sine { nu, .. } | CriticalBehavior::InverseSine { nu, .. } => {
                if nu == 0.0 || !nu.is_finite() {
                    return Err(PviError::InvalidFamily("ν must be non-zero".into()));
                }
            }
            CriticalBehavior::LogType { mu, .. } => {
                if (mu * 2.0 - 1.0).norm() == 0.0 {
                    return Err(PviError::InvalidFamily("log type needs 2μ − 1 ≠ 0".into()));
                }
            }
            CriticalBehavior::Taylor { .. } => {}
        }
        Ok(())
    }

    /// Prefactor `−4/(2μ−1)²` of the log family.
    pub fn log_prefactor(mu: C64) -> C64 {
        let d = mu * 2.0 - 1.0;
        C64::new(-4.0, 0.0) / (d * d)
    }
}

pub fn behavior_eval(b: &CriticalBehavior, s: C64) -> Result<C64, PviError> {
    b.validate()?;
    if s.norm() == 0.0 {
        return Err(PviError::FamilySingularity(s));
    }
    let ln_s = principal_log(s)?;
    let one = C64::new(1.0, 0.0);
    let v = match *b {
        CriticalBehavior::SmallPower { sigma, a } => a * ((one - sigma) * ln_s).exp(),
        CriticalBehavior::Sine { nu, c } => {
            let sn = (ln_s * nu + c).sin();
            s * sn * sn
        }
        CriticalBehavior::InverseSine { nu, c, mu } => {
            let d = mu * 2.0 - 1.0;
            let k = (d * d + 4.0 * nu * nu) / (4.0 * nu * nu);
            let sn = (ln_s * nu + c).sin();
            let den = one - k * sn * sn;
            if den.norm() < 1e-14 {
                return Err(PviError::FamilySingularity(s));
            }
            one / den
        }
        CriticalBehavior::LogType { c, mu } => {
            let l = ln_s + c;
            if l.norm() == 0.0 {
                return Err(PviError::FamilySingularity(s));
            }
            CriticalBehavior::log_prefactor(mu) / (l * l)
        }
        CriticalBehavior::Taylor { a } => a * s,
    };
    Ok(v)
}
