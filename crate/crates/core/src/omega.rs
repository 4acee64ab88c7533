//! The Ω system for the antisymmetric matrix `V(s)`, its reduced form near
//! `s = 0`, and their first integrals.
//!
//! Full system:
//!
//! ```text
//! Ω1' = Ω2 Ω3 / s,   Ω2' = Ω1 Ω3 / (1 − s),   Ω3' = Ω1 Ω2 / (s (s − 1))
//! ```
//!
//! conserves `Ω1² + Ω2² + Ω3² = −μ²`. The reduced system replaces
//! `1/(1 − s)` by 1 and `1/(s(s − 1))` by `−1/s` and conserves `Ω1² + Ω3²`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{self, ComplexPath, IntegratorConfig, NumericsError, Trajectory};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OmegaError {
    #[error("vector field is singular at s = {0}")]
    SingularPoint(C64),
    #[error("exponent σ = {0} outside 0 ≤ Re σ < 1")]
    OutOfRange(C64),
    #[error("path passes through a singular point of the {0:?} system")]
    PathHitsSingularity(SystemKind),
    #[error("seed point {seed} is not the start of the path ({start})")]
    SeedMismatch { seed: C64, start: C64 },
    #[error("R must be non-zero")]
    ZeroR,
    #[error(transparent)]
    Integration(#[from] NumericsError),
}

/// `(Ω1, Ω2, Ω3)`, also used for their `s`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OmegaState {
    pub o1: C64,
    pub o2: C64,
    pub o3: C64,
}

impl OmegaState {
    pub const ZERO: OmegaState =
        OmegaState { o1: C64::new(0.0, 0.0), o2: C64::new(0.0, 0.0), o3: C64::new(0.0, 0.0) };

    pub fn new(o1: C64, o2: C64, o3: C64) -> Self {
        Self { o1, o2, o3 }
    }

    pub fn to_vec(self) -> Vec<C64> {
        vec![self.o1, self.o2, self.o3]
    }

    pub fn from_slice(v: &[C64]) -> Self {
        Self { o1: v[0], o2: v[1], o3: v[2] }
    }

    pub fn is_finite(&self) -> bool {
        self.o1.is_finite() && self.o2.is_finite() && self.o3.is_finite()
    }

    /// Largest componentwise modulus.
    pub fn max_norm(&self) -> f64 {
        self.o1.norm().max(self.o2.norm()).max(self.o3.norm())
    }

    pub fn components(&self) -> [C64; 3] {
        [self.o1, self.o2, self.o3]
    }
}

impl Add for OmegaState {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.o1 + r.o1, self.o2 + r.o2, self.o3 + r.o3)
    }
}

impl Sub for OmegaState {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.o1 - r.o1, self.o2 - r.o2, self.o3 - r.o3)
    }
}

impl Neg for OmegaState {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.o1, -self.o2, -self.o3)
    }
}

impl Mul<C64> for OmegaState {
    type Output = Self;
    fn mul(self, k: C64) -> Self {
        Self::new(self.o1 * k, self.o2 * k, self.o3 * k)
    }
}

/// Parameter `μ` of PVIμ, `α = (2μ − 1)²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PviParams {
    pub mu: C64,
}

impl PviParams {
    pub fn new(mu: C64) -> Self {
        Self { mu }
    }

    /// Value of `Ω1² + Ω2² + Ω3²` on solutions.
    pub fn constraint(&self) -> C64 {
        -self.mu * self.mu
    }
}

/// `R` and `σ` of the reduced system, tied by `R² = σ²/4 − μ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub r: C64,
    pub sigma: C64,
}

impl ReducedParams {
    /// `R = √(σ²/4 − μ²)` with `Re R ≥ 0`, ties broken by `Im R ≥ 0`.
    pub fn from_sigma_mu(sigma: C64, mu: C64) -> Result<Self, OmegaError> {
        let r = canonical_sqrt(sigma * sigma / 4.0 - mu * mu);
        if r.norm() == 0.0 {
            return Err(OmegaError::ZeroR);
        }
        Ok(Self { r, sigma })
    }
}

/// Square root with `Re ≥ 0`, and `Im ≥ 0` when `Re = 0`.
pub fn canonical_sqrt(w: C64) -> C64 {
    let r = w.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Full,
    Reduced,
}

pub fn full_rhs(s: C64, w: &OmegaState) -> Result<OmegaState, OmegaError> {
    let one = C64::new(1.0, 0.0);
    if s.norm() == 0.0 || s == one {
        return Err(OmegaError::SingularPoint(s));
    }
    Ok(OmegaState::new(w.o2 * w.o3 / s, w.o1 * w.o3 / (one - s), w.o1 * w.o2 / (s * (s - one))))
}

pub fn reduced_rhs(s: C64, w: &OmegaState) -> Result<OmegaState, OmegaError> {
    if s.norm() == 0.0 {
        return Err(OmegaError::SingularPoint(s));
    }
    Ok(OmegaState::new(w.o2 * w.o3 / s, w.o1 * w.o3, -w.o1 * w.o2 / s))
}

pub fn rhs(kind: SystemKind, s: C64, w: &OmegaState) -> Result<OmegaState, OmegaError> {
    match kind {
        SystemKind::Full => full_rhs(s, w),
        SystemKind::Reduced => reduced_rhs(s, w),
    }
}

/// `Ω1² + Ω2² + Ω3² + μ²`.
pub fn first_integral_defect(w: &OmegaState, mu: C64) -> C64 {
    w.o1 * w.o1 + w.o2 * w.o2 + w.o3 * w.o3 + mu * mu
}

/// `Ω1² + Ω3²`, equal to `R²` on reduced-system solutions.
pub fn reduced_first_integral(w: &OmegaState) -> C64 {
    w.o1 * w.o1 + w.o3 * w.o3
}

/// Integrated Ω trajectory with the first-integral monitor.
///
/// For the full system `defects[i] = |Ω1² + Ω2² + Ω3² + μ²|`; for the reduced
/// system it is the drift `|Ω1² + Ω3² − (Ω1² + Ω3²)(s0)|`.
#[derive(Debug, Clone)]
pub struct OmegaRun {
    pub kind: SystemKind,
    pub mu: C64,
    pub trajectory: Trajectory,
    pub defects: Vec<f64>,
    pub rel_tol: f64,
}

impl OmegaRun {
    pub fn max_defect(&self) -> f64 {
        self.defects.iter().copied().fold(0.0, f64::max)
    }

    /// False once the monitor exceeds `10³·rel_tol`.
    pub fn is_valid(&self) -> bool {
        self.max_defect() <= 1e3 * self.rel_tol
    }

    pub fn state_at(&self, s: C64) -> Result<OmegaState, OmegaError> {
        Ok(OmegaState::from_slice(&self.trajectory.at(s)?))
    }

    pub fn final_state(&self) -> OmegaState {
        OmegaState::from_slice(&self.trajectory.last().state)
    }

    /// Vector field of this run's system, for local re-integration.
    pub fn field(&self) -> impl Fn(C64, &[C64]) -> Result<Vec<C64>, OmegaError> + '_ {
        let kind = self.kind;
        move |s, y| rhs(kind, s, &OmegaState::from_slice(y)).map(OmegaState::to_vec)
    }

    /// State at `s` obtained by a fixed-step flow from the nearest accepted
    /// sample. Smooth in `s`, so finite differences of it are clean.
    pub fn state_by_local_flow(&self, s: C64) -> Result<OmegaState, OmegaError> {
        let base = self.trajectory.nearest_sample(s);
        let gap = (s - base.s).norm() / base.s.norm();
        let steps = (gap / 2e-3).ceil().max(1.0) as usize;
        let y = numerics::local_flow(self.field(), base.s, &base.state, s, steps)?;
        Ok(OmegaState::from_slice(&y))
    }
}

fn path_is_admissible(kind: SystemKind, path: &ComplexPath) -> bool {
    if path.min_modulus() == 0.0 {
        return false;
    }
    match kind {
        SystemKind::Reduced => true,
        SystemKind::Full => {
            let one = C64::new(1.0, 0.0);
            let shifted: Vec<_> = std::iter::once(path.start() - one)
                .chain(path.segments().iter().map(|&(_, b)| b - one))
                .collect();
            ComplexPath::polyline(&shifted).map(|p| p.min_modulus() > 0.0).unwrap_or(false)
        }
    }
}

pub fn integrate_omega(
    kind: SystemKind,
    mu: C64,
    seed: (C64, OmegaState),
    path: &ComplexPath,
    cfg: &IntegratorConfig,
) -> Result<OmegaRun, OmegaError> {
    let (s0, w0) = seed;
    if (s0 - path.start()).norm() > 1e-14 * s0.norm().max(1e-300) {
        return Err(OmegaError::SeedMismatch { seed: s0, start: path.start() });
    }
    if !path_is_admissible(kind, path) {
        return Err(OmegaError::PathHitsSingularity(kind));
    }
    let trajectory = numerics::integrate_path(
        |s, y: &[C64]| rhs(kind, s, &OmegaState::from_slice(y)).map(OmegaState::to_vec),
        path,
        &w0.to_vec(),
        cfg,
    )?;
    let reference = reduced_first_integral(&w0);
    let defects = trajectory
        .samples()
        .iter()
        .map(|smp| {
            let w = OmegaState::from_slice(&smp.state);
            match kind {
                SystemKind::Full => first_integral_defect(&w, mu).norm(),
                SystemKind::Reduced => (reduced_first_integral(&w) - reference).norm(),
            }
        })
        .collect();
    Ok(OmegaRun { kind, mu, trajectory, defects, rel_tol: cfg.rel_tol })
}

/// Predicted log-log slopes `(e1, e2, e3)` of `|Ωj − Ωj⁽ᵃ⁾|`:
/// `e1 = e3 = 1 − Re σ/2`, `e2 = 2 − Re σ`.
pub fn error_exponents(sigma: C64) -> Result<(f64, f64, f64), OmegaError> {
    if !(0.0..1.0).contains(&sigma.re) {
        return Err(OmegaError::OutOfRange(sigma));
    }
    let e13 = 1.0 - sigma.re / 2.0;
    Ok((e13, 2.0 - sigma.re, e13))
}
