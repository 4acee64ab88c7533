//! PIII side of the reduction: residuals of PIII (`α = β = 0`, `γ = −δ = 1`)
//! and of radial sine-Gordon, the change of variables
//! `θ = R√s/i`, `x = 2iθ`, `ŷ = exp(iu/2)`, the small-`θ` expansions of
//! `ŷ`, and the critical behaviours of `y` they predict.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{arg_gamma_imag_axis, principal_log, EULER_GAMMA};
use crate::omega::{canonical_sqrt, OmegaState, SystemKind};
use crate::pvi::CriticalBehavior;
use crate::series::{direct_labelled, PowerLogSeries, SeriesError};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default threshold on `|sin(ν ln s + D)|`.
pub const POLE_GUARD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PiiiError {
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("zero argument")]
    ZeroArgument,
    #[error("ŷ = 0")]
    ZeroYhat,
    #[error("unsupported truncation: {0}")]
    UnsupportedOrder(String),
    #[error("operation needs the oscillatory case (σ = 1 + 2iν)")]
    WrongCase,
    #[error("inconsistent constants: {0}")]
    InconsistentConstants(String),
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("s = {s} is within {proximity} of a pole")]
    NearPole { s: C64, proximity: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Small-`θ` asymptotic families of PIII.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum TracyCase {
    /// `ŷ ≈ B s^{σ/2}`, `0 ≤ Re σ < 1`.
    CaseI { b_const: C64, sigma: C64, r: C64 },
    /// `σ = 1`.
    CaseII { r: C64 },
    /// `σ = 1 + 2iν`.
    CaseIII { nu: f64, r: C64 },
}

fn r_of(sigma: C64, mu: C64) -> Result<C64, PiiiError> {
    let r = canonical_sqrt(sigma * sigma / 4.0 - mu * mu);
    if r.norm() == 0.0 {
        return Err(PiiiError::InvalidCase("R = 0".into()));
    }
    Ok(r)
}

impl TracyCase {
    /// `CaseI` with `R = √(σ²/4 − μ²)`.
    pub fn case_i(b_const: C64, sigma: C64, mu: C64) -> Result<Self, PiiiError> {
        let c = TracyCase::CaseI { b_const, sigma, r: r_of(sigma, mu)? };
        c.validate()?;
        Ok(c)
    }

    pub fn case_ii(mu: C64) -> Result<Self, PiiiError> {
        let c = TracyCase::CaseII { r: r_of(C64::new(1.0, 0.0), mu)? };
        c.validate()?;
        Ok(c)
    }

    pub fn case_iii(nu: f64, mu: C64) -> Result<Self, PiiiError> {
        let c = TracyCase::CaseIII { nu, r: r_of(C64::new(1.0, 2.0 * nu), mu)? };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), PiiiError> {
        match *self {
            TracyCase::CaseI { b_const, sigma, r } => {
                if b_const.norm() == 0.0 {
                    return Err(PiiiError::InvalidCase("B must be non-zero".into()));
                }
                if !(0.0..1.0).contains(&sigma.re) {
                    return Err(PiiiError::InvalidCase(format!("case I needs 0 ≤ Re σ < 1, got {sigma}")));
                }
                if r.norm() == 0.0 {
                    return Err(PiiiError::InvalidCase("R = 0".into()));
                }
            }
            TracyCase::CaseII { r } => {
                if r.norm() == 0.0 {
                    return Err(PiiiError::InvalidCase("R = 0".into()));
                }
            }
            TracyCase::CaseIII { nu, r } => {
                if nu == 0.0 || !nu.is_finite() {
                    return Err(PiiiError::InvalidCase("ν must be non-zero".into()));
                }
                if r.norm() == 0.0 {
                    return Err(PiiiError::InvalidCase("R = 0".into()));
                }
            }
        }
        Ok(())
    }

    pub fn r(&self) -> C64 {
        match *self {
            TracyCase::CaseI { r, .. } | TracyCase::CaseII { r } | TracyCase::CaseIII { r, .. } => r,
        }
    }

    pub fn sigma(&self) -> C64 {
        match *self {
            TracyCase::CaseI { sigma, .. } => sigma,
            TracyCase::CaseII { .. } => C64::new(1.0, 0.0),
            TracyCase::CaseIII { nu, .. } => C64::new(1.0, 2.0 * nu),
        }
    }

    /// `(a, b) = (RB/2, R/(2B))` for `CaseI`.
    pub fn ab(&self) -> Option<(C64, C64)> {
        match *self {
            TracyCase::CaseI { b_const, r, .. } => Some((r * b_const / 2.0, r / (b_const * 2.0))),
            _ => None,
        }
    }

    /// `C = 2 ln(R/4i) + 2γ` for `CaseII`.
    pub fn log_constant(&self) -> Option<C64> {
        match *self {
            TracyCase::CaseII { r } => {
                let l = principal_log(r / (I * 4.0)).ok()?;
                Some(l * 2.0 + 2.0 * EULER_GAMMA)
            }
            _ => None,
        }
    }

    /// `D = 2ν ln(−iR/4) + 2 arg Γ(iν)` for `CaseIII`.
    pub fn phase_constant(&self) -> Option<C64> {
        match *self {
            TracyCase::CaseIII { nu, r } => {
                let l = principal_log(-I * r / 4.0).ok()?;
                let phi = arg_gamma_imag_axis(nu).ok()?;
                Some(l * (2.0 * nu) + 2.0 * phi)
            }
            _ => None,
        }
    }
}

/// `(s, θ, x)` with `θ = R√s/i`, `x = 2iθ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndependentFrame {
    pub s: C64,
    pub theta: C64,
    pub x: C64,
}

/// Full frame including the dependent variables `ŷ = exp(iu/2)`, `u = 2φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariableFrame {
    pub s: C64,
    pub theta: C64,
    pub x: C64,
    pub u: C64,
    pub yhat: C64,
    pub phi: C64,
}

pub fn frame_from_s(s: C64, r: C64) -> Result<IndependentFrame, PiiiError> {
    if s.norm() == 0.0 || r.norm() == 0.0 {
        return Err(PiiiError::ZeroArgument);
    }
    let theta = r * s.sqrt() / I;
    Ok(IndependentFrame { s, theta, x: I * 2.0 * theta })
}

impl IndependentFrame {
    /// `x²/(4R²)`.
    pub fn s_from_x(&self, r: C64) -> C64 {
        self.x * self.x / (r * r * 4.0)
    }

    pub fn with_yhat(&self, yhat: C64) -> Result<VariableFrame, PiiiError> {
        let u = -I * 2.0 * principal_log(yhat).map_err(|_| PiiiError::ZeroYhat)?;
        Ok(VariableFrame { s: self.s, theta: self.theta, x: self.x, u, yhat, phi: u / 2.0 })
    }
}

/// `ŷ″ − [ŷ′²/ŷ − ŷ′/θ + ŷ³ − 1/ŷ]`, derivatives in `θ`.
pub fn piii_residual(theta: C64, y: C64, yp: C64, ypp: C64) -> Result<C64, PiiiError> {
    if y.norm() == 0.0 || theta.norm() == 0.0 {
        return Err(PiiiError::SingularConfiguration(format!("ŷ = {y}, θ = {theta}")));
    }
    Ok(ypp - (yp * yp / y - yp / theta + y * y * y - C64::new(1.0, 0.0) / y))
}

/// `u″ + u′/x + sin u`, derivatives in `x`.
pub fn sine_gordon_residual(x: C64, u: C64, up: C64, upp: C64) -> Result<C64, PiiiError> {
    if x.norm() == 0.0 {
        return Err(PiiiError::SingularConfiguration("x = 0".into()));
    }
    Ok(upp + up / x + u.sin())
}

/// Value and first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

/// `s`-jet of `ŷ` to `θ`-jet, using `ds/dθ = 2s/θ`, `d²s/dθ² = 2s/θ²`.
pub fn s_jet_to_theta(s: C64, theta: C64, j: Jet) -> Jet {
    let ds = s * 2.0 / theta;
    let dds = s * 2.0 / (theta * theta);
    Jet { value: j.value, d1: j.d1 * ds, d2: j.d2 * ds * ds + j.d1 * dds }
}

/// `θ`-jet of `ŷ` to the `x`-jet of `u = −2i ln ŷ`, `x = 2iθ`.
pub fn theta_jet_to_sine_gordon(j: Jet) -> Result<Jet, PiiiError> {
    if j.value.norm() == 0.0 {
        return Err(PiiiError::ZeroYhat);
    }
    let u = -I * 2.0 * principal_log(j.value).map_err(|_| PiiiError::ZeroYhat)?;
    let q = j.d1 / j.value;
    Ok(Jet { value: u, d1: -q, d2: -(j.d2 / j.value - q * q) / (I * 2.0) })
}

/// Which display of `Ω2⁽ᵃ⁾` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega2Form {
    /// `i s ŷ′/ŷ`.
    #[default]
    LogDerivative,
    /// `i s ŷ′`.
    Literal,
}

/// `Ω1 = (R/2)(1/ŷ + ŷ)`, `Ω3 = (iR/2)(1/ŷ − ŷ)`, `Ω2 = i s ŷ′/ŷ`.
pub fn omega_a_of_yhat(s: C64, yhat: C64, dyhat_ds: C64, r: C64) -> Result<OmegaState, PiiiError> {
    omega_a_of_yhat_with(Omega2Form::LogDerivative, s, yhat, dyhat_ds, r)
}

pub fn omega_a_of_yhat_with(
    form: Omega2Form,
    s: C64,
    yhat: C64,
    dyhat_ds: C64,
    r: C64,
) -> Result<OmegaState, PiiiError> {
    if yhat.norm() == 0.0 {
        return Err(PiiiError::ZeroYhat);
    }
    let inv = C64::new(1.0, 0.0) / yhat;
    let o2 = match form {
        Omega2Form::LogDerivative => I * s * dyhat_ds * inv,
        Omega2Form::Literal => I * s * dyhat_ds,
    };
    Ok(OmegaState::new(r / 2.0 * (inv + yhat), o2, I * r / 2.0 * (inv - yhat)))
}

/// `Ω⁽ᵃ⁾` and its `s`-derivative from an `s`-jet of `ŷ`.
pub fn omega_a_jet(s: C64, j: Jet, r: C64) -> Result<(OmegaState, OmegaState), PiiiError> {
    let w = omega_a_of_yhat(s, j.value, j.d1, r)?;
    let (y, y1, y2) = (j.value, j.d1, j.d2);
    let q = y1 / y;
    let dw = OmegaState::new(
        r / 2.0 * (y1 - y1 / (y * y)),
        I * (q + s * y2 / y - s * q * q),
        -(I * r / 2.0) * (y1 + y1 / (y * y)),
    );
    Ok((w, dw))
}

/// Truncation of the small-`θ` expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum Truncation {
    Leading,
    /// The printed corrections (case I: `s^{1∓σ}` terms; case II: `θ⁵`).
    Printed,
    /// Case I only: reduced-system series through the given order.
    Derived(usize),
}

/// Case I expansion of `ŷ` as a series in `s`.
pub fn case_i_series(case: &TracyCase, trunc: Truncation) -> Result<PowerLogSeries, PiiiError> {
    let TracyCase::CaseI { b_const, sigma, r } = *case else {
        return Err(PiiiError::UnsupportedOrder("series form exists for case I only".into()));
    };
    let one = C64::new(1.0, 0.0);
    let lead = sigma / 2.0;
    match trunc {
        Truncation::Leading => Ok(PowerLogSeries::monomial(b_const, lead)),
        Truncation::Printed => {
            let rb = r / b_const;
            let rb2 = r * b_const;
            Ok(PowerLogSeries::from_terms([
                (b_const, lead),
                (b_const * rb * rb / (4.0 * (one - sigma) * (one - sigma)), lead + one - sigma),
                (-b_const * rb2 * rb2 / (4.0 * (one + sigma) * (one + sigma)), lead + one + sigma),
            ]))
        }
        Truncation::Derived(n) => {
            let (a, b) = case.ab().expect("case I");
            let sol = direct_labelled(SystemKind::Reduced, sigma, n)?.instantiate(a, b);
            Ok(sol.omega1_plus_i_omega3().scale(one / r))
        }
    }
}

fn log_s(s: C64) -> Result<C64, PiiiError> {
    principal_log(s).map_err(|_| PiiiError::ZeroArgument)
}

/// `s`-jet of the expansion of `ŷ`.
pub fn tracy_jet(case: &TracyCase, s: C64, trunc: Truncation) -> Result<Jet, PiiiError> {
    case.validate()?;
    if s.norm() == 0.0 {
        return Err(PiiiError::ZeroArgument);
    }
    match *case {
        TracyCase::CaseI { .. } => {
            let f = case_i_series(case, trunc)?;
            let d = f.derivative();
            Ok(Jet { value: f.eval(s)?, d1: d.eval(s)?, d2: d.derivative().eval(s)? })
        }
        TracyCase::CaseII { r } => {
            let quintic = match trunc {
                Truncation::Leading => false,
                Truncation::Printed => true,
                Truncation::Derived(_) => {
                    return Err(PiiiError::UnsupportedOrder("case II stops at the θ⁵ term".into()))
                }
            };
            let th = frame_from_s(s, r)?.theta;
            let omega = (log_s(s)? + case.log_constant().ok_or(PiiiError::ZeroArgument)?) / 2.0;
            let tj = case_ii_theta_jet(th, omega, quintic);
            // dθ/ds = θ/(2s), d²θ/ds² = −θ/(4s²)
            let t1 = th / (s * 2.0);
            let t2 = -th / (s * s * 4.0);
            Ok(Jet { value: tj.value, d1: tj.d1 * t1, d2: tj.d2 * t1 * t1 + tj.d1 * t2 })
        }
        TracyCase::CaseIII { nu, r } => {
            if trunc != Truncation::Leading {
                return Err(PiiiError::UnsupportedOrder("case III has the leading term only".into()));
            }
            let phi = log_s(s)? * nu + case.phase_constant().ok_or(PiiiError::ZeroArgument)?;
            let (sn, cs) = (phi.sin(), phi.cos());
            let k = I * r / (2.0 * nu);
            let rt = s.sqrt();
            Ok(Jet {
                value: k * rt * sn,
                d1: k / rt * (sn * 0.5 + cs * nu),
                d2: -k / (rt * s) * (0.25 + nu * nu) * sn,
            })
        }
    }
}

/// `θ`-jet of `−θω − θ⁵/128 (8ω³ − 8ω² + 4ω − 1)` with `dω/dθ = 1/θ`.
fn case_ii_theta_jet(th: C64, w: C64, quintic: bool) -> Jet {
    let mut j = Jet { value: -th * w, d1: -w - 1.0, d2: -C64::new(1.0, 0.0) / th };
    if quintic {
        let p = w * w * w * 8.0 - w * w * 8.0 + w * 4.0 - 1.0;
        let p1 = w * w * 24.0 - w * 16.0 + 4.0;
        let p2 = w * 48.0 - 16.0;
        let t3 = th * th * th;
        let t4 = t3 * th;
        j.value -= t4 * th * p / 128.0;
        j.d1 -= t4 * (p * 5.0 + p1) / 128.0;
        j.d2 -= t3 * (p * 20.0 + p1 * 9.0 + p2) / 128.0;
    }
    j
}

/// `(ŷ, dŷ/ds)` of the expansion.
pub fn tracy_eval(case: &TracyCase, s: C64, trunc: Truncation) -> Result<(C64, C64), PiiiError> {
    let j = tracy_jet(case, s, trunc)?;
    Ok((j.value, j.d1))
}

/// `|sin(ν ln s + D)|` for case III.
pub fn pole_guard(case: &TracyCase, s: C64) -> Result<f64, PiiiError> {
    let TracyCase::CaseIII { nu, .. } = *case else {
        return Err(PiiiError::WrongCase);
    };
    let d = case.phase_constant().ok_or(PiiiError::ZeroArgument)?;
    Ok((log_s(s)? * nu + d).sin().norm())
}

/// `Ω⁽ᵃ⁾` from the expansion, refusing case III points within `threshold`
/// of a pole.
pub fn omega_a_from_case(
    case: &TracyCase,
    s: C64,
    trunc: Truncation,
    threshold: f64,
) -> Result<OmegaState, PiiiError> {
    if let TracyCase::CaseIII { .. } = case {
        let proximity = pole_guard(case, s)?;
        if proximity < threshold {
            return Err(PiiiError::NearPole { s, proximity });
        }
    }
    let (y, dy) = tracy_eval(case, s, trunc)?;
    omega_a_of_yhat(s, y, dy, case.r())
}

fn check_r(case: &TracyCase, mu: C64) -> Result<(), PiiiError> {
    let sigma = case.sigma();
    let r2 = sigma * sigma / 4.0 - mu * mu;
    let r = case.r();
    if (r * r - r2).norm() > 1e-10 * r2.norm().max(1.0) {
        return Err(PiiiError::InconsistentConstants(format!("R² = {} but σ²/4 − μ² = {r2}", r * r)));
    }
    Ok(())
}

/// Critical behaviour of `y` predicted by the dominant term of each case.
pub fn reduced_behavior(case: &TracyCase, mu: C64) -> Result<CriticalBehavior, PiiiError> {
    case.validate()?;
    check_r(case, mu)?;
    let tiny = 1e-14;
    match *case {
        TracyCase::CaseI { b_const, sigma, r } => {
            let (_, b) = case.ab().expect("case I");
            if sigma.re.abs() < tiny && sigma.im.abs() >= tiny {
                let nu = sigma.im / 2.0;
                let arg = I * b_const * (I * nu - mu) / r;
                let l = principal_log(arg)
                    .map_err(|_| PiiiError::InconsistentConstants("iν − μ = 0".into()))?;
                return Ok(CriticalBehavior::Sine { nu, c: -I * l });
            }
            let d = mu * 2.0 - sigma;
            if d.norm() < tiny {
                return Err(PiiiError::InconsistentConstants("2μ − σ = 0".into()));
            }
            let a = b * b * 4.0 / (d * d);
            if sigma.norm() < tiny {
                Ok(CriticalBehavior::Taylor { a })
            } else {
                Ok(CriticalBehavior::SmallPower { sigma, a })
            }
        }
        TracyCase::CaseII { .. } => {
            if (mu * 2.0 - 1.0).norm() < tiny {
                return Err(PiiiError::InconsistentConstants("2μ − 1 = 0".into()));
            }
            Ok(CriticalBehavior::LogType { c: case.log_constant().ok_or(PiiiError::ZeroArgument)?, mu })
        }
        TracyCase::CaseIII { nu, .. } => {
            let d = mu * 2.0 - 1.0;
            let ratio = (d - I * (2.0 * nu)) / (d + I * (2.0 * nu));
            let l = principal_log(ratio)
                .map_err(|_| PiiiError::InconsistentConstants("2μ − 1 = 2iν".into()))?;
            let c = case.phase_constant().ok_or(PiiiError::ZeroArgument)? - I * 0.5 * l;
            Ok(CriticalBehavior::InverseSine { nu, c, mu })
        }
    }
}
