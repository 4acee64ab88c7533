//! Adaptive Dormand–Prince 5(4) integration along piecewise-linear paths in
//! the complex plane.
//!
//! Each segment `start → end` is parametrised by `τ ∈ [0, 1]`,
//! `s(τ) = start + τ (end − start)`, and the integrator advances in `τ` with
//! the vector field scaled by `ds/dτ`. Step sizes are bounded relative to the
//! local modulus `|s|`, which keeps the step count per decade constant when a
//! path approaches the origin along a ray.

use std::fmt::Display;

use crate::C64;

use super::NumericsError;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension of order 4 (Hairer, Nørsett & Wanner).
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const MAX_STEPS: usize = 2_000_000;

/// Piecewise-linear path in the complex `s` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPath {
    segments: Vec<(C64, C64)>,
}

impl ComplexPath {
    /// Path through the given vertices.
    pub fn polyline(points: &[C64]) -> Result<Self, NumericsError> {
        if points.len() < 2 {
            return Err(NumericsError::InvalidPath("need at least two vertices".into()));
        }
        let segments: Vec<_> = points.windows(2).map(|w| (w[0], w[1])).collect();
        if segments.iter().any(|(a, b)| a == b) {
            return Err(NumericsError::InvalidPath("zero-length segment".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(NumericsError::InvalidPath("non-finite vertex".into()));
        }
        Ok(Self { segments })
    }

    pub fn segment(start: C64, end: C64) -> Result<Self, NumericsError> {
        Self::polyline(&[start, end])
    }

    /// Radial segment `r_from·e^{iφ} → r_to·e^{iφ}`.
    pub fn ray(angle: f64, r_from: f64, r_to: f64) -> Result<Self, NumericsError> {
        if !(r_from > 0.0 && r_to > 0.0) {
            return Err(NumericsError::InvalidPath("ray radii must be positive".into()));
        }
        let dir = C64::from_polar(1.0, angle);
        Self::segment(dir * r_from, dir * r_to)
    }

    pub fn segments(&self) -> &[(C64, C64)] {
        &self.segments
    }

    pub fn start(&self) -> C64 {
        self.segments[0].0
    }

    pub fn end(&self) -> C64 {
        self.segments[self.segments.len() - 1].1
    }

    /// Distance of the closest path point to the origin.
    pub fn min_modulus(&self) -> f64 {
        self.segments
            .iter()
            .map(|&(a, b)| {
                let d = b - a;
                let t = (-(a.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0);
                (a + d * t).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Point at cumulative parameter `param ∈ [0, n_segments]`.
    pub fn point(&self, param: f64) -> C64 {
        let n = self.segments.len();
        let k = (param.floor() as usize).min(n - 1);
        let (a, b) = self.segments[k];
        a + (b - a) * (param - k as f64)
    }

    /// Cumulative parameter of `s`, if `s` lies on the path.
    pub fn param_of(&self, s: C64) -> Option<f64> {
        for (k, &(a, b)) in self.segments.iter().enumerate() {
            let t = (s - a) / (b - a);
            let scale = 1e-9 * (1.0 + s.norm() / (b - a).norm());
            if t.im.abs() <= scale && t.re >= -1e-12 && t.re <= 1.0 + 1e-12 {
                return Some(k as f64 + t.re.clamp(0.0, 1.0));
            }
        }
        None
    }
}

/// Tolerances and step bounds. `min_step` and `max_step` are relative to the
/// local `|s|`: every accepted step satisfies
/// `min_step·|s| ≤ |Δs| ≤ max_step·|s|` (the lower bound triggers
/// [`NumericsError::StepUnderflow`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub dense_output: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_step: 0.1, min_step: 1e-13, dense_output: true }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self { rel_tol, abs_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(NumericsError::InvalidConfig("tolerances must be positive".into()));
        }
        if !(self.min_step > 0.0 && self.min_step <= self.max_step) {
            return Err(NumericsError::InvalidConfig("need 0 < min_step <= max_step".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Cumulative path parameter.
    pub param: f64,
    pub s: C64,
    pub state: Vec<C64>,
}

#[derive(Debug, Clone)]
struct DenseStep {
    param0: f64,
    param1: f64,
    rcont: [Vec<C64>; 5],
}

impl DenseStep {
    fn eval(&self, param: f64) -> Vec<C64> {
        let th = (param - self.param0) / (self.param1 - self.param0);
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        (0..r1.len())
            .map(|i| r1[i] + (r2[i] + (r3[i] + (r4[i] + r5[i] * th1) * th) * th1) * th)
            .collect()
    }
}

/// Accepted steps of one integration, with optional dense output.
#[derive(Debug, Clone)]
pub struct Trajectory {
    path: ComplexPath,
    samples: Vec<Sample>,
    dense: Vec<DenseStep>,
}

impl Trajectory {
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn path(&self) -> &ComplexPath {
        &self.path
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    pub fn has_dense_output(&self) -> bool {
        !self.dense.is_empty() || self.samples.len() == 1
    }

    /// State at cumulative path parameter `param`.
    pub fn interpolate(&self, param: f64) -> Result<Vec<C64>, NumericsError> {
        let first = &self.samples[0];
        let last = self.last();
        let (lo, hi) = if first.param <= last.param {
            (first.param, last.param)
        } else {
            (last.param, first.param)
        };
        if param < lo - 1e-12 || param > hi + 1e-12 {
            return Err(NumericsError::OffPath(self.path.point(param)));
        }
        if let Some(exact) = self.samples.iter().find(|x| x.param == param) {
            return Ok(exact.state.clone());
        }
        if self.dense.is_empty() {
            return Err(NumericsError::InvalidConfig("trajectory has no dense output".into()));
        }
        let forward = first.param <= last.param;
        let idx = self.dense.partition_point(|d| {
            if forward {
                d.param1 < param
            } else {
                d.param1 > param
            }
        });
        let step = &self.dense[idx.min(self.dense.len() - 1)];
        Ok(step.eval(param))
    }

    /// State at a point `s` of the path.
    pub fn at(&self, s: C64) -> Result<Vec<C64>, NumericsError> {
        let param = self.path.param_of(s).ok_or(NumericsError::OffPath(s))?;
        self.interpolate(param)
    }

    /// Sample whose `s` is closest to the given point.
    pub fn nearest_sample(&self, s: C64) -> &Sample {
        self.samples
            .iter()
            .min_by(|a, b| (a.s - s).norm().total_cmp(&(b.s - s).norm()))
            .expect("non-empty")
    }
}

fn field<F, E>(rhs: &mut F, s: C64, y: &[C64], ds: C64) -> Result<Vec<C64>, NumericsError>
where
    F: FnMut(C64, &[C64]) -> Result<Vec<C64>, E>,
    E: Display,
{
    let f = rhs(s, y).map_err(|e| NumericsError::Field { s, reason: e.to_string() })?;
    Ok(f.into_iter().map(|v| v * ds).collect())
}

fn axpy(y: &[C64], terms: &[(f64, &[C64])], h: f64) -> Vec<C64> {
    let mut out = y.to_vec();
    for &(c, k) in terms {
        if c != 0.0 {
            for (o, &kv) in out.iter_mut().zip(k) {
                *o += kv * (c * h);
            }
        }
    }
    out
}

fn all_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.is_finite())
}

/// Integrates `dY/ds = rhs(s, Y)` along `path` from `initial`.
///
/// The final sample sits exactly at the path end. Blow-up of the solution
/// (e.g. near a movable pole) shows up as step-size underflow.
pub fn integrate_path<F, E>(
    mut rhs: F,
    path: &ComplexPath,
    initial: &[C64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory, NumericsError>
where
    F: FnMut(C64, &[C64]) -> Result<Vec<C64>, E>,
    E: Display,
{
    cfg.validate()?;
    if !all_finite(initial) {
        return Err(NumericsError::NonFinite { s: path.start() });
    }
    let mut samples = vec![Sample { param: 0.0, s: path.start(), state: initial.to_vec() }];
    let mut dense = Vec::new();
    let mut y = initial.to_vec();
    let mut steps = 0usize;
    let mut h_carry: Option<f64> = None;

    for (k, &(a, b)) in path.segments().iter().enumerate() {
        let ds = b - a;
        let len = ds.norm();
        let mut tau = 0.0f64;
        let mut k1 = field(&mut rhs, a, &y, ds)?;
        if !all_finite(&k1) {
            return Err(NumericsError::NonFinite { s: a });
        }
        let mut h = h_carry
            .unwrap_or_else(|| (1e-3 * a.norm().max(f64::MIN_POSITIVE) / len).min(0.1))
            .min(1.0);
        let mut facold = 1e-4f64;
        let mut rejected_last = false;

        while tau < 1.0 {
            steps += 1;
            let s = a + ds * tau;
            if steps > MAX_STEPS {
                return Err(NumericsError::StepLimit { limit: MAX_STEPS, s });
            }
            let local = s.norm();
            let h_max = (cfg.max_step * local / len).max(f64::MIN_POSITIVE);
            let h_min = cfg.min_step * local / len;
            h = h.min(h_max);
            let last_step = tau + h >= 1.0 - 1e-14;
            if last_step {
                h = 1.0 - tau;
            }
            if h < h_min && !last_step {
                return Err(NumericsError::StepUnderflow { s });
            }

            let at = |c: f64| a + ds * (tau + c * h);
            let k2 = field(&mut rhs, at(C2), &axpy(&y, &[(A21, &k1)], h), ds)?;
            let k3 = field(&mut rhs, at(C3), &axpy(&y, &[(A31, &k1), (A32, &k2)], h), ds)?;
            let k4 =
                field(&mut rhs, at(C4), &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h), ds)?;
            let k5 = field(
                &mut rhs,
                at(C5),
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
                ds,
            )?;
            let k6 = field(
                &mut rhs,
                at(1.0),
                &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
                ds,
            )?;
            let y_new =
                axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
            let s_new = if last_step { b } else { at(1.0) };
            let k7 = field(&mut rhs, s_new, &y_new, ds)?;

            let mut err = 0.0;
            let mut finite = all_finite(&y_new) && all_finite(&k7);
            for i in 0..y.len() {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                    * h;
                let sc = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
                err += (e.norm() / sc).powi(2);
            }
            err = (err / y.len().max(1) as f64).sqrt();
            if !err.is_finite() {
                finite = false;
            }

            if !finite {
                // Trial stage left the finite range: shrink and retry.
                h *= 0.1;
                rejected_last = true;
                if h < h_min {
                    return Err(NumericsError::StepUnderflow { s });
                }
                continue;
            }

            let fac11 = err.powf(0.2 - BETA * 0.75);
            if err <= 1.0 {
                let fac = (fac11 / facold.powf(BETA) / SAFETY).clamp(0.2, 10.0);
                let mut h_new = h / fac;
                if rejected_last {
                    h_new = h_new.min(h);
                }
                facold = err.max(1e-4);

                let param0 = k as f64 + tau;
                tau = if last_step { 1.0 } else { tau + h };
                let param1 = k as f64 + tau;
                if cfg.dense_output {
                    let n = y.len();
                    let mut r2 = vec![C64::new(0.0, 0.0); n];
                    let mut r3 = r2.clone();
                    let mut r4 = r2.clone();
                    let mut r5 = r2.clone();
                    for i in 0..n {
                        r2[i] = y_new[i] - y[i];
                        r3[i] = k1[i] * h - r2[i];
                        r4[i] = r2[i] - k7[i] * h - r3[i];
                        r5[i] = (k1[i] * D1
                            + k3[i] * D3
                            + k4[i] * D4
                            + k5[i] * D5
                            + k6[i] * D6
                            + k7[i] * D7)
                            * h;
                    }
                    dense.push(DenseStep { param0, param1, rcont: [y.clone(), r2, r3, r4, r5] });
                }
                y = y_new;
                k1 = k7;
                samples.push(Sample { param: param1, s: s_new, state: y.clone() });
                h = h_new;
                rejected_last = false;
            } else {
                h /= (fac11 / SAFETY).min(5.0);
                rejected_last = true;
            }
        }
        h_carry = Some(h * len / path.segments().get(k + 1).map_or(len, |(a, b)| (b - a).norm()));
    }

    Ok(Trajectory { path: path.clone(), samples, dense })
}

/// Fixed-step classical RK4 flow from `s_from` to `s_to` along a straight
/// line. The result is a smooth function of `s_to`, which makes it suitable
/// for feeding finite-difference stencils.
pub fn local_flow<F, E>(
    mut rhs: F,
    s_from: C64,
    initial: &[C64],
    s_to: C64,
    steps: usize,
) -> Result<Vec<C64>, NumericsError>
where
    F: FnMut(C64, &[C64]) -> Result<Vec<C64>, E>,
    E: Display,
{
    let steps = steps.max(1);
    let ds = (s_to - s_from) / steps as f64;
    let mut y = initial.to_vec();
    let one = C64::new(1.0, 0.0);
    for n in 0..steps {
        let s = s_from + ds * n as f64;
        let k1 = field(&mut rhs, s, &y, one)?;
        let k2 = field(&mut rhs, s + ds * 0.5, &add_scaled(&y, &k1, ds * 0.5), one)?;
        let k3 = field(&mut rhs, s + ds * 0.5, &add_scaled(&y, &k2, ds * 0.5), one)?;
        let k4 = field(&mut rhs, s + ds, &add_scaled(&y, &k3, ds), one)?;
        for i in 0..y.len() {
            y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (ds / 6.0);
        }
        if !all_finite(&y) {
            return Err(NumericsError::NonFinite { s: s + ds });
        }
    }
    Ok(y)
}

fn add_scaled(y: &[C64], k: &[C64], c: C64) -> Vec<C64> {
    y.iter().zip(k).map(|(&a, &b)| a + b * c).collect()
}
