use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::numerics::fit_log_log_slope;
use crate::omega::OmegaState;
use crate::{Result, C64};

/// One grid point. Fields a command does not produce stay `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SampleRecord {
    pub s: C64,
    pub omega: Option<OmegaState>,
    pub omega_a: Option<OmegaState>,
    /// `|Ωj − Ωj⁽ᵃ⁾|`.
    pub diff: Option<[f64; 3]>,
    pub y: Option<C64>,
    pub y_predicted: Option<C64>,
    /// `|y/y_pred − 1|`.
    pub deviation: Option<f64>,
    pub defect: Option<f64>,
    pub flag: Option<String>,
}

impl SampleRecord {
    pub fn at(s: C64) -> Self {
        Self { s, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedSlope {
    pub name: String,
    pub slope: f64,
    /// RMS deviation of `ln v` from the fitted line.
    pub residual: f64,
    pub points: usize,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
}

impl FittedSlope {
    /// Fits `ln v` against `ln |s|`.
    pub fn fit(name: &str, pairs: &[(f64, f64)]) -> Result<Self> {
        let f = fit_log_log_slope(pairs)?;
        Ok(Self { name: name.into(), slope: f.slope, residual: f.residual, points: pairs.len(), expected: None, tolerance: None })
    }

    pub fn expect(mut self, expected: f64, tolerance: f64) -> Self {
        self.expected = Some(expected);
        self.tolerance = Some(tolerance);
        self
    }

    pub fn check(&self) -> Option<Check> {
        let (e, t) = (self.expected?, self.tolerance?);
        Some(Check::at_most(&format!("slope {}", self.name), (self.slope - e).abs(), t))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value <= threshold, value, threshold }
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value >= threshold, value, threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub records: Vec<SampleRecord>,
    pub slopes: Vec<FittedSlope>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str, config: &ExperimentConfig) -> Self {
        Self {
            command: command.into(),
            config: config.clone(),
            records: Vec::new(),
            slopes: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            passed: true,
        }
    }

    pub fn push_slope(&mut self, slope: FittedSlope) {
        if let Some(c) = slope.check() {
            self.push_check(c);
        }
        self.slopes.push(slope);
    }

    pub fn push_check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn slope(&self, name: &str) -> Option<&FittedSlope> {
        self.slopes.iter().find(|c| c.name == name)
    }

    pub fn samples_path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}_samples.csv", self.command))
    }

    pub fn summary_path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}_report.json", self.command))
    }

    /// Writes the sample table (CSV) and the summary (JSON) into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = self.samples_path(dir);
        write_samples(&self.records, &csv_path)?;
        let json_path = self.summary_path(dir);
        std::fs::write(&json_path, serde_json::to_string_pretty(self)?)?;
        Ok((csv_path, json_path))
    }
}

fn complex_cols(name: &str, out: &mut Vec<String>) {
    out.push(format!("{name}_re"));
    out.push(format!("{name}_im"));
}

fn push_complex(v: Option<C64>, out: &mut Vec<String>) {
    match v {
        Some(z) => {
            out.push(z.re.to_string());
            out.push(z.im.to_string());
        }
        None => out.extend([String::new(), String::new()]),
    }
}

/// Columns are those used by any record; complex values become `_re`/`_im` pairs.
pub fn write_samples(records: &[SampleRecord], path: &Path) -> Result<()> {
    let any = |f: &dyn Fn(&SampleRecord) -> bool| records.iter().any(f);
    let (has_w, has_wa, has_diff) = (any(&|r| r.omega.is_some()), any(&|r| r.omega_a.is_some()), any(&|r| r.diff.is_some()));
    let (has_y, has_yp, has_dev) = (any(&|r| r.y.is_some()), any(&|r| r.y_predicted.is_some()), any(&|r| r.deviation.is_some()));
    let (has_defect, has_flag) = (any(&|r| r.defect.is_some()), any(&|r| r.flag.is_some()));

    let mut header = Vec::new();
    complex_cols("s", &mut header);
    for (on, names) in [(has_w, ["omega1", "omega2", "omega3"]), (has_wa, ["omega1_a", "omega2_a", "omega3_a"])] {
        if on {
            names.iter().for_each(|n| complex_cols(n, &mut header));
        }
    }
    if has_diff {
        header.extend(["diff1", "diff2", "diff3"].map(String::from));
    }
    if has_y {
        complex_cols("y", &mut header);
    }
    if has_yp {
        complex_cols("y_pred", &mut header);
    }
    if has_dev {
        header.push("deviation".into());
    }
    if has_defect {
        header.push("defect".into());
    }
    if has_flag {
        header.push("flag".into());
    }

    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&header)?;
    for r in records {
        let mut row = Vec::with_capacity(header.len());
        push_complex(Some(r.s), &mut row);
        for (on, st) in [(has_w, r.omega), (has_wa, r.omega_a)] {
            if on {
                for k in 0..3 {
                    push_complex(st.map(|w| w.components()[k]), &mut row);
                }
            }
        }
        if has_diff {
            (0..3).for_each(|k| row.push(opt(r.diff.map(|d| d[k]))));
        }
        if has_y {
            push_complex(r.y, &mut row);
        }
        if has_yp {
            push_complex(r.y_predicted, &mut row);
        }
        if has_dev {
            row.push(opt(r.deviation));
        }
        if has_defect {
            row.push(opt(r.defect));
        }
        if has_flag {
            row.push(r.flag.clone().unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
