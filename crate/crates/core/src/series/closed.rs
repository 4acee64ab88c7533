use serde::{Deserialize, Serialize};

use super::SeriesError;
use crate::numerics::principal_log;
use crate::omega::OmegaState;
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Ratio `w = (b/(1−σ))² s^{1−σ}` of the alternating sub-series.
pub fn geometric_ratio(sigma: C64, b: C64, s: C64) -> Result<C64, SeriesError> {
    let one = C64::new(1.0, 0.0);
    let q = b / (one - sigma);
    let ls = principal_log(s).map_err(|_| SeriesError::ZeroArgument)?;
    Ok(q * q * ((one - sigma) * ls).exp())
}

/// `Σ_{q<depth} (−w)^q`.
pub fn geometric_partial_sum(sigma: C64, b: C64, s: C64, depth: usize) -> Result<C64, SeriesError> {
    let w = geometric_ratio(sigma, b, s)?;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for _ in 0..depth {
        sum += term;
        term *= -w;
    }
    Ok(sum)
}

/// `1/(1 + w)`.
pub fn geometric_closed_form(sigma: C64, b: C64, s: C64) -> Result<C64, SeriesError> {
    Ok(C64::new(1.0, 0.0) / (geometric_ratio(sigma, b, s)? + 1.0))
}

/// Closed forms at `σ = 1 + 2iν` with phase `C = −i ln(2ν/b)`:
/// `Ω1 = −iν/(√s sin φ)`, `Ω3 = ν/(√s sin φ)`, `Ω2 = i/2 + iν cot φ`,
/// `φ = ν ln s + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseSineForms {
    pub nu: f64,
    pub c: C64,
}

pub fn resum_inverse_sine(nu: f64, b: C64) -> Result<InverseSineForms, SeriesError> {
    if nu == 0.0 || !nu.is_finite() || b.norm() == 0.0 {
        return Err(SeriesError::ZeroArgument);
    }
    let l = principal_log(C64::new(2.0 * nu, 0.0) / b).map_err(|_| SeriesError::ZeroArgument)?;
    Ok(InverseSineForms { nu, c: -I * l })
}

impl InverseSineForms {
    pub fn phase(&self, s: C64) -> Result<C64, SeriesError> {
        Ok(principal_log(s).map_err(|_| SeriesError::ZeroArgument)? * self.nu + self.c)
    }

    pub fn state(&self, s: C64) -> Result<OmegaState, SeriesError> {
        let phi = self.phase(s)?;
        let sn = phi.sin();
        if sn.norm() < 1e-14 {
            return Err(SeriesError::SinePole(s));
        }
        let d = s.sqrt() * sn;
        let nu = C64::new(self.nu, 0.0);
        Ok(OmegaState::new(-I * nu / d, I * 0.5 + I * nu * phi.cos() / sn, nu / d))
    }
}

/// Closed forms at `σ = 1`: `Ω1 = i/(√s L)`, `Ω3 = −1/(√s L)`,
/// `Ω2 = i/2 + i/L`, `L = ln s + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogForms {
    pub c: C64,
}

pub fn log_case_closed_forms(c: C64) -> LogForms {
    LogForms { c }
}

impl LogForms {
    pub fn state(&self, s: C64) -> Result<OmegaState, SeriesError> {
        let l = principal_log(s).map_err(|_| SeriesError::ZeroArgument)? + self.c;
        if l.norm() == 0.0 {
            return Err(SeriesError::LogPole(s));
        }
        let d = s.sqrt() * l;
        Ok(OmegaState::new(I / d, I * 0.5 + I / l, -C64::new(1.0, 0.0) / d))
    }
}

/// Moves the larger of `Ω1`, `Ω3` onto the branch of
/// `±√(−μ² − (other two)²)` nearest to it, so the state satisfies the full
/// first integral exactly.
pub fn complete_on_shell(w: OmegaState, mu: C64) -> Result<OmegaState, SeriesError> {
    let fix = |target: C64, o: C64, p: C64| {
        let root = (-mu * mu - o * o - p * p).sqrt();
        if (root - target).norm() <= (root + target).norm() {
            root
        } else {
            -root
        }
    };
    let out = if w.o1.norm() >= w.o3.norm() {
        OmegaState::new(fix(w.o1, w.o2, w.o3), w.o2, w.o3)
    } else {
        OmegaState::new(w.o1, w.o2, fix(w.o3, w.o1, w.o2))
    };
    if !out.is_finite() {
        return Err(SeriesError::ZeroArgument);
    }
    Ok(out)
}
