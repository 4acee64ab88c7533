use serde::{Deserialize, Serialize};

use super::SeriesError;
use crate::numerics::principal_log;
use crate::C64;

/// Exponents closer than this (relative to `max(1, |α|)`) are merged.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub c: C64,
    pub alpha: C64,
}

/// Row of the JSON term list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub re_alpha: f64,
    pub im_alpha: f64,
    pub re_c: f64,
    pub im_c: f64,
}

/// Finite sum `Σ c z^α` with numerically distinct exponents.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<TermRecord>", from = "Vec<TermRecord>")]
pub struct PowerLogSeries {
    terms: Vec<Term>,
}

fn same_exponent(x: C64, y: C64) -> bool {
    (x - y).norm() <= MERGE_TOL * x.norm().max(y.norm()).max(1.0)
}

impl PowerLogSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: C64, alpha: C64) -> Self {
        let mut s = Self::zero();
        s.push(c, alpha);
        s
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(c, C64::new(0.0, 0.0))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (C64, C64)>) -> Self {
        let mut s = Self::zero();
        for (c, alpha) in terms {
            s.push(c, alpha);
        }
        s
    }

    /// Adds `c z^α`, merging with an existing exponent.
    pub fn push(&mut self, c: C64, alpha: C64) {
        if c.norm() == 0.0 {
            return;
        }
        if let Some(i) = self.terms.iter().position(|t| same_exponent(t.alpha, alpha)) {
            self.terms[i].c += c;
            if self.terms[i].c.norm() == 0.0 {
                self.terms.remove(i);
            }
        } else {
            self.terms.push(Term { c, alpha });
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `z^α` (zero when absent).
    pub fn coefficient(&self, alpha: C64) -> C64 {
        self.terms
            .iter()
            .find(|t| same_exponent(t.alpha, alpha))
            .map_or(C64::new(0.0, 0.0), |t| t.c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.c, t.alpha);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| (t.c * k, t.alpha)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for x in &self.terms {
            for y in &other.terms {
                out.push(x.c * y.c, x.alpha + y.alpha);
            }
        }
        out
    }

    /// Multiplies by `z^β`.
    pub fn shift(&self, beta: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| (t.c, t.alpha + beta)))
    }

    pub fn div_z(&self) -> Self {
        self.shift(C64::new(-1.0, 0.0))
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| (t.c * t.alpha, t.alpha - 1.0)))
    }

    /// Term-wise antiderivative with zero integration constant.
    pub fn antiderivative(&self) -> Result<Self, SeriesError> {
        let mut out = Self::zero();
        for t in &self.terms {
            let e = t.alpha + 1.0;
            if same_exponent(e, C64::new(0.0, 0.0)) {
                return Err(SeriesError::ExponentMinusOne(t.c));
            }
            out.push(t.c / e, e);
        }
        Ok(out)
    }

    /// As [`Self::antiderivative`], but a `z^-1` term whose coefficient is
    /// below `rel` times the largest coefficient is dropped.
    pub fn antiderivative_dropping(&self, rel: f64) -> Result<Self, SeriesError> {
        let scale = self.max_coefficient();
        let kept = Self::from_terms(
            self.terms
                .iter()
                .filter(|t| !(same_exponent(t.alpha, C64::new(-1.0, 0.0)) && t.c.norm() <= rel * scale))
                .map(|t| (t.c, t.alpha)),
        );
        kept.antiderivative()
    }

    pub fn eval(&self, z: C64) -> Result<C64, SeriesError> {
        if self.terms.is_empty() {
            return Ok(C64::new(0.0, 0.0));
        }
        let lz = principal_log(z).map_err(|_| SeriesError::ZeroArgument)?;
        Ok(self.terms.iter().map(|t| t.c * (t.alpha * lz).exp()).sum())
    }

    /// Largest `|c z^α|` over the terms.
    pub fn max_term(&self, z: C64) -> Result<f64, SeriesError> {
        let lz = principal_log(z).map_err(|_| SeriesError::ZeroArgument)?;
        Ok(self.terms.iter().map(|t| (t.c * (t.alpha * lz).exp()).norm()).fold(0.0, f64::max))
    }

    /// Largest coefficient modulus.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).fold(0.0, f64::max)
    }

    /// `max |c|` of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).max_coefficient()
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|t| TermRecord { re_alpha: t.alpha.re, im_alpha: t.alpha.im, re_c: t.c.re, im_c: t.c.im })
            .collect()
    }
}

impl From<PowerLogSeries> for Vec<TermRecord> {
    fn from(s: PowerLogSeries) -> Self {
        s.to_records()
    }
}

impl From<Vec<TermRecord>> for PowerLogSeries {
    fn from(v: Vec<TermRecord>) -> Self {
        Self::from_terms(v.into_iter().map(|r| (C64::new(r.re_c, r.im_c), C64::new(r.re_alpha, r.im_alpha))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn merging_and_cancellation() {
        let mut s = PowerLogSeries::zero();
        s.push(c(1.0, 0.0), c(0.5, 0.0));
        s.push(c(2.0, 0.0), c(0.5 + 1e-14, 0.0));
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(c(0.5, 0.0)), c(3.0, 0.0));
        s.push(c(-3.0, 0.0), c(0.5, 0.0));
        assert!(s.is_empty());
    }

    #[test]
    fn calculus() {
        let s = PowerLogSeries::from_terms([(c(2.0, 0.0), c(2.0, 0.0)), (c(1.0, 1.0), c(0.3, 0.2))]);
        let back = s.antiderivative().unwrap().derivative();
        assert!(back.distance(&s) < 1e-15);
        let inv = PowerLogSeries::monomial(c(1.0, 0.0), c(-1.0, 0.0));
        assert!(matches!(inv.antiderivative(), Err(SeriesError::ExponentMinusOne(_))));
        let tiny = inv.scale(c(1e-13, 0.0)).add(&PowerLogSeries::constant(c(1.0, 0.0)));
        assert_eq!(tiny.antiderivative_dropping(1e-9).unwrap().len(), 1);
        assert!(inv.antiderivative_dropping(1e-9).is_err());
        assert_eq!(s.derivative().coefficient(c(1.0, 0.0)), c(4.0, 0.0));
    }

    #[test]
    fn evaluation() {
        let s = PowerLogSeries::from_terms([(c(1.0, 0.0), c(0.0, 0.0)), (c(3.0, 0.0), c(2.0, 0.0))]);
        assert!((s.eval(c(2.0, 0.0)).unwrap() - 13.0).norm() < 1e-13);
        assert_eq!(s.eval(c(0.0, 0.0)), Err(SeriesError::ZeroArgument));
        assert_eq!(PowerLogSeries::zero().eval(c(0.3, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn json_round_trip() {
        let s = PowerLogSeries::from_terms([(c(1.0, -2.0), c(0.25, 0.5)), (c(0.5, 0.0), c(1.0, 0.0))]);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("re_alpha") && text.contains("im_c"));
        let back: PowerLogSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    fn small_series() -> impl Strategy<Value = PowerLogSeries> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0usize..3, -2i32..3), 0..4).prop_map(|v| {
            PowerLogSeries::from_terms(
                v.into_iter().map(|(re, im, k, j)| (C64::new(re, im), C64::new(k as f64 + 0.3 * j as f64, 0.1 * j as f64))),
            )
        })
    }

    proptest! {
        #[test]
        fn associative(f in small_series(), g in small_series(), h in small_series()) {
            prop_assert!(f.mul(&g).mul(&h).distance(&f.mul(&g.mul(&h))) < 1e-12);
        }

        #[test]
        fn distributive(f in small_series(), g in small_series(), h in small_series()) {
            let lhs = f.mul(&g.add(&h));
            let rhs = f.mul(&g).add(&f.mul(&h));
            prop_assert!(lhs.distance(&rhs) < 1e-12);
        }

        #[test]
        fn antiderivative_inverts_derivative(f in small_series()) {
            let g = f.antiderivative().unwrap();
            prop_assert!(g.derivative().distance(&f) < 1e-12);
        }

        #[test]
        fn eval_is_a_homomorphism(f in small_series(), g in small_series(), x in 0.05f64..2.0) {
            let z = C64::new(x, 0.1);
            let lhs = f.mul(&g).eval(z).unwrap();
            let rhs = f.eval(z).unwrap() * g.eval(z).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }
}
