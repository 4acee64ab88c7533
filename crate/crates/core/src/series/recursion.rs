use serde::{Deserialize, Serialize};

use super::labelled::{LabelledSeries, Monomial};
use super::power::PowerLogSeries;
use super::SeriesError;
use crate::omega::{OmegaState, SystemKind};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Exponent distance treated as an exact resonance.
const RESONANCE_TOL: f64 = 1e-12;
/// A source coefficient this small relative to its series counts as zero.
const NEGLIGIBLE: f64 = 1e-9;

pub(crate) trait Algebra: Clone {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, k: C64) -> Self;
    fn shift_int(&self, k: i32) -> Self;
}

impl Algebra for PowerLogSeries {
    fn zero() -> Self {
        PowerLogSeries::zero()
    }
    fn add(&self, o: &Self) -> Self {
        PowerLogSeries::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        PowerLogSeries::mul(self, o)
    }
    fn scale(&self, k: C64) -> Self {
        PowerLogSeries::scale(self, k)
    }
    fn shift_int(&self, k: i32) -> Self {
        self.shift(C64::new(k as f64, 0.0))
    }
}

impl Algebra for LabelledSeries {
    fn zero() -> Self {
        LabelledSeries::zero()
    }
    fn add(&self, o: &Self) -> Self {
        LabelledSeries::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        LabelledSeries::mul(self, o)
    }
    fn scale(&self, k: C64) -> Self {
        LabelledSeries::scale(self, k)
    }
    fn shift_int(&self, k: i32) -> Self {
        LabelledSeries::shift_int(self, k)
    }
}

/// Right-hand side of `Ω2⁽ⁿ⁾′`, from orders below `n`.
fn omega2_source<S: Algebra>(kind: SystemKind, orders: &[[S; 3]], n: usize) -> S {
    let kmax = match kind {
        SystemKind::Full => n - 1,
        SystemKind::Reduced => 0,
    };
    let mut out = S::zero();
    for k in 0..=kmax {
        for l in 0..=(n - 1 - k) {
            out = out.add(&orders[l][0].mul(&orders[n - 1 - k - l][2]).shift_int(k as i32));
        }
    }
    out
}

/// `s·A1` and `s·A3` at order `n`; needs `Ω2⁽ⁿ⁾` in `orders[n][1]`.
fn omega13_sources<S: Algebra>(kind: SystemKind, orders: &[[S; 3]], n: usize) -> (S, S) {
    let mut a1 = S::zero();
    let mut a3 = S::zero();
    for j in 1..=n {
        a1 = a1.add(&orders[j][1].mul(&orders[n - j][2]));
        a3 = a3.add(&orders[j][1].mul(&orders[n - j][0]));
    }
    if kind == SystemKind::Full {
        for k in 1..=n {
            for l in 0..=(n - k) {
                a3 = a3.add(&orders[l][0].mul(&orders[n - k - l][1]).shift_int(k as i32));
            }
        }
    }
    (a1, a3.scale(C64::new(-1.0, 0.0)))
}

/// Truncated double series for `(Ω1, Ω2, Ω3)` with numeric `(σ, a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    pub kind: SystemKind,
    pub sigma: C64,
    pub a: C64,
    pub b: C64,
    /// `orders[n]` holds `(Ω1⁽ⁿ⁾, Ω2⁽ⁿ⁾, Ω3⁽ⁿ⁾)`.
    pub orders: Vec<[PowerLogSeries; 3]>,
}

impl SeriesSolution {
    pub fn order(&self) -> usize {
        self.orders.len() - 1
    }

    /// Sum over orders of component `i` (0, 1, 2 for Ω1, Ω2, Ω3).
    pub fn component(&self, i: usize) -> PowerLogSeries {
        self.orders.iter().fold(PowerLogSeries::zero(), |acc, o| acc.add(&o[i]))
    }

    pub fn components(&self) -> [PowerLogSeries; 3] {
        [self.component(0), self.component(1), self.component(2)]
    }

    /// `Ω1 + iΩ3`, which equals `Rŷ` for the reduced system.
    pub fn omega1_plus_i_omega3(&self) -> PowerLogSeries {
        self.component(0).add(&self.component(2).scale(I))
    }

    /// Largest coefficient deviation between two solutions, per component.
    pub fn distance(&self, other: &Self) -> f64 {
        (0..3).map(|i| self.component(i).distance(&other.component(i))).fold(0.0, f64::max)
    }

    fn order_state(&self, n: usize, s: C64) -> Result<OmegaState, SeriesError> {
        let o = &self.orders[n];
        Ok(OmegaState::new(o[0].eval(s)?, o[1].eval(s)?, o[2].eval(s)?))
    }

    /// Sum of the truncated series at `s`.
    ///
    /// Fails with `OutsideValidity` unless the last retained order is smaller
    /// than the one before it.
    pub fn evaluate(&self, s: C64) -> Result<OmegaState, SeriesError> {
        let mut total = OmegaState::ZERO;
        let mut sizes = Vec::with_capacity(self.orders.len());
        for n in 0..self.orders.len() {
            let w = self.order_state(n, s)?;
            sizes.push(w.max_norm());
            total = total + w;
        }
        if let [.., prev, last] = sizes[..] {
            if prev > 0.0 && last >= prev {
                return Err(SeriesError::OutsideValidity { s, ratio: last / prev });
            }
        }
        Ok(total)
    }

    /// `evaluate` without the validity test.
    pub fn evaluate_unchecked(&self, s: C64) -> Result<OmegaState, SeriesError> {
        (0..self.orders.len()).try_fold(OmegaState::ZERO, |acc, n| Ok(acc + self.order_state(n, s)?))
    }

    /// Term-wise `s`-derivative of the truncated series at `s`.
    pub fn derivative_at(&self, s: C64) -> Result<OmegaState, SeriesError> {
        let [f1, f2, f3] = self.components();
        Ok(OmegaState::new(f1.derivative().eval(s)?, f2.derivative().eval(s)?, f3.derivative().eval(s)?))
    }
}

/// Direct-route solution with coefficients kept per monomial `a^p b^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledSolution {
    pub kind: SystemKind,
    pub sigma: C64,
    pub orders: Vec<[LabelledSeries; 3]>,
}

impl LabelledSolution {
    pub fn order(&self) -> usize {
        self.orders.len() - 1
    }

    /// Coefficient of `key` in component `i`.
    pub fn coefficient(&self, i: usize, key: Monomial) -> C64 {
        self.orders.iter().map(|o| o[i].get(key)).sum()
    }

    pub fn instantiate(&self, a: C64, b: C64) -> SeriesSolution {
        let sigma = self.sigma;
        SeriesSolution {
            kind: self.kind,
            sigma,
            a,
            b,
            orders: self
                .orders
                .iter()
                .map(|o| [o[0].instantiate(sigma, a, b), o[1].instantiate(sigma, a, b), o[2].instantiate(sigma, a, b)])
                .collect(),
        }
    }
}

fn check_sigma(sigma: C64) -> Result<(), SeriesError> {
    if !(sigma.re > -1.0 && sigma.re < 1.0) || !sigma.is_finite() {
        return Err(SeriesError::OutOfRange(sigma));
    }
    Ok(())
}

/// Leading order: `Ω2 = iσ/2`, `Ω1 = b s^{−σ/2} + a s^{σ/2}`,
/// `Ω3 = i b s^{−σ/2} − i a s^{σ/2}`.
pub fn order0(kind: SystemKind, sigma: C64, a: C64, b: C64) -> Result<SeriesSolution, SeriesError> {
    Ok(order0_labelled(kind, sigma)?.instantiate(a, b))
}

fn order0_labelled(kind: SystemKind, sigma: C64) -> Result<LabelledSolution, SeriesError> {
    check_sigma(sigma)?;
    let one = C64::new(1.0, 0.0);
    let kb = Monomial::new(0, 0, 1);
    let ka = Monomial::new(0, 1, 0);
    let mut o1 = LabelledSeries::monomial(kb, one);
    o1.push(ka, one);
    let o2 = LabelledSeries::monomial(Monomial::new(0, 0, 0), I * sigma / 2.0);
    let mut o3 = LabelledSeries::monomial(kb, I);
    o3.push(ka, -I);
    Ok(LabelledSolution { kind, sigma, orders: vec![[o1, o2, o3]] })
}

fn near_odd_integer(sigma: C64) -> bool {
    let k = ((sigma.re - 1.0) / 2.0).round();
    (sigma - C64::new(2.0 * k + 1.0, 0.0)).norm() <= RESONANCE_TOL
}

/// Higher orders by the small-parameter route: `Ω2⁽ⁿ⁾` by direct
/// integration, `Ω1⁽ⁿ⁾` by variation of parameters, `Ω3⁽ⁿ⁾` from the
/// first equation. All integration constants are zero.
pub fn extend(sol: &SeriesSolution, target_order: usize) -> Result<SeriesSolution, SeriesError> {
    let sigma = sol.sigma;
    if near_odd_integer(sigma) {
        return Err(SeriesError::LogTermRequired { sigma, order: sol.order() + 1 });
    }
    check_sigma(sigma)?;
    let mut out = sol.clone();
    if target_order <= sol.order() {
        out.orders.truncate(target_order + 1);
        return Ok(out);
    }
    if sigma.norm() <= RESONANCE_TOL {
        return Err(SeriesError::DegenerateExponent(sigma));
    }
    let c2 = I * sigma / 2.0;
    let half = sigma / 2.0;
    let one = C64::new(1.0, 0.0);
    for n in (sol.order() + 1)..=target_order {
        let o2 = omega2_source(sol.kind, &out.orders, n)
            .antiderivative_dropping(NEGLIGIBLE)
            .map_err(|_| SeriesError::LogTermRequired { sigma, order: n })?;
        out.orders.push([PowerLogSeries::zero(), o2, PowerLogSeries::zero()]);
        let (sa1, sa3) = omega13_sources(sol.kind, &out.orders, n);
        let a1 = sa1.div_z();
        let a3 = sa3.div_z();
        let r1 = a1.div_z().add(&a3.div_z().scale(c2)).add(&a1.derivative());
        let resonant = |_| SeriesError::Resonant { sigma, order: n };
        let i1 = r1.shift(one - half).antiderivative_dropping(NEGLIGIBLE).map_err(resonant)?;
        let i2 = r1.shift(one + half).antiderivative_dropping(NEGLIGIBLE).map_err(resonant)?;
        let o1 = i1.shift(half).sub(&i2.shift(-half)).scale(one / sigma);
        let o3 = o1.derivative().sub(&a1).shift(one).scale(one / c2);
        out.orders[n][0] = o1;
        out.orders[n][2] = o3;
    }
    Ok(out)
}

fn integrate_omega2(src: &LabelledSeries, sigma: C64, n: usize) -> Result<LabelledSeries, SeriesError> {
    let scale = src.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let mut out = LabelledSeries::zero();
    for (k, c) in src.terms() {
        let e = k.exponent(sigma) + 1.0;
        if e.norm() <= RESONANCE_TOL * sigma.norm().max(1.0) {
            if c.norm() <= NEGLIGIBLE * scale {
                continue;
            }
            return Err(SeriesError::LogTermRequired { sigma, order: n });
        }
        out.push(Monomial::new(k.n + 1, k.pa, k.pb), c / e);
    }
    Ok(out)
}

/// Per-monomial solve of `α p − c r = f1`, `c p + α r = f3`, `c = iσ/2`,
/// through `u = p + ir`, `v = p − ir`.
fn solve_13(
    sa1: &LabelledSeries,
    sa3: &LabelledSeries,
    sigma: C64,
    n: usize,
) -> Result<(LabelledSeries, LabelledSeries), SeriesError> {
    let mut keys: Vec<Monomial> = sa1.keys().chain(sa3.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let half = sigma / 2.0;
    let tol = RESONANCE_TOL * sigma.norm().max(1.0);
    let solve = |d: C64, f: C64, size: f64| -> Result<C64, SeriesError> {
        if d.norm() <= tol {
            if f.norm() <= NEGLIGIBLE * size {
                return Ok(C64::new(0.0, 0.0));
            }
            return Err(SeriesError::Resonant { sigma, order: n });
        }
        Ok(f / d)
    };
    let mut p_out = LabelledSeries::zero();
    let mut r_out = LabelledSeries::zero();
    for k in keys {
        let (f1, f3) = (sa1.get(k), sa3.get(k));
        let size = f1.norm() + f3.norm();
        let alpha = k.exponent(sigma);
        let u = solve(alpha - half, f1 + I * f3, size)?;
        let v = solve(alpha + half, f1 - I * f3, size)?;
        p_out.push(k, (u + v) / 2.0);
        r_out.push(k, (u - v) / (I * 2.0));
    }
    Ok((p_out, r_out))
}

/// Direct `s`-expansion with `b₀₀ = b`, `a₀₀ = a`, coefficients kept per
/// monomial in `(a, b)`.
pub fn direct_labelled(kind: SystemKind, sigma: C64, order: usize) -> Result<LabelledSolution, SeriesError> {
    if near_odd_integer(sigma) && order > 0 {
        return Err(SeriesError::LogTermRequired { sigma, order: 1 });
    }
    let mut sol = order0_labelled(kind, sigma)?;
    for n in 1..=order {
        let o2 = integrate_omega2(&omega2_source(kind, &sol.orders, n), sigma, n)?;
        sol.orders.push([LabelledSeries::zero(), o2, LabelledSeries::zero()]);
        let (sa1, sa3) = omega13_sources(kind, &sol.orders, n);
        let (o1, o3) = solve_13(&sa1, &sa3, sigma, n)?;
        sol.orders[n][0] = o1;
        sol.orders[n][2] = o3;
    }
    Ok(sol)
}

pub fn direct_formal_series(
    kind: SystemKind,
    sigma: C64,
    a: C64,
    b: C64,
    order: usize,
) -> Result<SeriesSolution, SeriesError> {
    Ok(direct_labelled(kind, sigma, order)?.instantiate(a, b))
}
