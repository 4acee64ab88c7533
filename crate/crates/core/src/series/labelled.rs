use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::power::PowerLogSeries;
use crate::C64;

/// Exponent `int + half_sigma·σ/2` on the lattice `Z + Zσ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeExponent {
    pub int: i32,
    pub half_sigma: i32,
}

impl LatticeExponent {
    pub fn value(&self, sigma: C64) -> C64 {
        sigma * (self.half_sigma as f64 / 2.0) + self.int as f64
    }
}

/// Coefficient label `a^pa b^pb s^{n + (pa − pb)σ/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub n: i32,
    pub pa: u32,
    pub pb: u32,
}

impl Monomial {
    pub const fn new(n: i32, pa: u32, pb: u32) -> Self {
        Self { n, pa, pb }
    }

    pub fn lattice(&self) -> LatticeExponent {
        LatticeExponent { int: self.n, half_sigma: self.pa as i32 - self.pb as i32 }
    }

    pub fn exponent(&self, sigma: C64) -> C64 {
        self.lattice().value(sigma)
    }

    fn times(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.n + o.n, self.pa + o.pa, self.pb + o.pb)
    }
}

/// Series whose coefficients are kept per monomial in `(a, b)`, at fixed
/// numeric `σ`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabelledSeries {
    terms: BTreeMap<Monomial, C64>,
}

impl LabelledSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(key: Monomial, c: C64) -> Self {
        let mut s = Self::zero();
        s.push(key, c);
        s
    }

    pub fn push(&mut self, key: Monomial, c: C64) {
        if c.norm() == 0.0 {
            return;
        }
        let e = self.terms.entry(key).or_insert(C64::new(0.0, 0.0));
        *e += c;
        if e.norm() == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C64)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn get(&self, key: Monomial) -> C64 {
        self.terms.get(&key).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.push(*k, *c);
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.push(*key, c * k);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                out.push(k1.times(k2), c1 * c2);
            }
        }
        out
    }

    /// Multiplies by `s^k`.
    pub fn shift_int(&self, k: i32) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.push(Monomial::new(key.n + k, key.pa, key.pb), *c);
        }
        out
    }

    /// Substitutes numeric `a`, `b`.
    pub fn instantiate(&self, sigma: C64, a: C64, b: C64) -> PowerLogSeries {
        PowerLogSeries::from_terms(
            self.terms.iter().map(|(k, c)| (c * a.powu(k.pa) * b.powu(k.pb), k.exponent(sigma))),
        )
    }

    /// Drops every term carrying a positive power of `a`.
    pub fn b_branch(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms.iter().filter(|(k, _)| k.pa == 0) {
            out.push(*k, *c);
        }
        out
    }
}
