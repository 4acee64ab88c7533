use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::numerics::{ComplexPath, IntegratorConfig};
use crate::piii::TracyCase;
use crate::{Error, Result, C64};

/// Which solution to follow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CaseSelector {
    /// `ŷ ≈ B s^{σ/2}`.
    CaseI { b_const: C64, sigma: C64 },
    #[serde(rename = "case_ii")]
    CaseII,
    #[serde(rename = "case_iii")]
    CaseIII { nu: f64 },
    /// Series constants given directly.
    Direct { sigma: C64, a: C64, b: C64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mu: C64,
    pub case: CaseSelector,
    pub s_min: f64,
    pub s_max: f64,
    pub ray_angle: f64,
    pub points_per_decade: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.s_min > 0.0 && self.s_min < self.s_max && self.s_max < 1.0) {
            return bad(format!("need 0 < s_min < s_max < 1, got s_min = {}, s_max = {}", self.s_min, self.s_max));
        }
        if self.points_per_decade < 4 {
            return bad(format!("points_per_decade must be at least 4, got {}", self.points_per_decade));
        }
        if !self.ray_angle.is_finite() || !self.mu.is_finite() {
            return bad("mu and ray_angle must be finite".into());
        }
        if !(self.tolerances.rel > 0.0 && self.tolerances.abs > 0.0) {
            return bad("tolerances must be positive".into());
        }
        Ok(())
    }

    pub fn tracy_case(&self) -> Result<Option<TracyCase>> {
        let invalid = |e: crate::piii::PiiiError| Error::Config(e.to_string());
        Ok(match self.case {
            CaseSelector::CaseI { b_const, sigma } => Some(TracyCase::case_i(b_const, sigma, self.mu).map_err(invalid)?),
            CaseSelector::CaseII => Some(TracyCase::case_ii(self.mu).map_err(invalid)?),
            CaseSelector::CaseIII { nu } => Some(TracyCase::case_iii(nu, self.mu).map_err(invalid)?),
            CaseSelector::Direct { .. } => None,
        })
    }

    /// `(σ, a, b)` of the power-series families.
    pub fn series_constants(&self) -> Result<Option<(C64, C64, C64)>> {
        Ok(match self.case {
            CaseSelector::Direct { sigma, a, b } => Some((sigma, a, b)),
            CaseSelector::CaseI { sigma, .. } => {
                let (a, b) = self.tracy_case()?.and_then(|c| c.ab()).expect("case I");
                Some((sigma, a, b))
            }
            _ => None,
        })
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig::with_tolerances(self.tolerances.rel, self.tolerances.abs)
    }

    pub fn direction(&self) -> C64 {
        C64::from_polar(1.0, self.ray_angle)
    }

    pub fn path(&self) -> Result<ComplexPath> {
        Ok(ComplexPath::ray(self.ray_angle, self.s_min, self.s_max)?)
    }

    /// Log-spaced points from `s_min` to `s_max` on the ray, both ends included.
    pub fn grid(&self) -> Vec<C64> {
        let decades = (self.s_max / self.s_min).log10();
        let n = (decades * self.points_per_decade as f64).ceil().max(1.0) as usize;
        let dir = self.direction();
        (0..=n)
            .map(|k| {
                let r = if k == n { self.s_max } else { self.s_min * (decades * k as f64 / n as f64 * std::f64::consts::LN_10).exp() };
                dir * r
            })
            .collect()
    }
}
