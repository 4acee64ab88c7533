use super::config::{CaseSelector, ExperimentConfig};
use super::report::{Check, FittedSlope, RunReport, SampleRecord};
use crate::omega::{error_exponents, first_integral_defect, integrate_omega, OmegaRun, OmegaState, SystemKind};
use crate::piii::{omega_a_from_case, pole_guard, reduced_behavior, TracyCase, Truncation, POLE_GUARD};
use crate::pvi::{behavior_eval, y_of_omega, CriticalBehavior, PviError};
use crate::series::{
    complete_on_shell, direct_formal_series, extend, geometric_closed_form, geometric_partial_sum, geometric_ratio,
    order0, SeriesSolution,
};
use crate::{Error, Result, C64};

/// Order of the series used to seed case I runs.
pub const SEED_ORDER: usize = 3;
/// Ω⁽ᵃ⁾ samples with `|sin(ν ln s + D)|` below this are left out of behaviour fits.
pub const BEHAVIOR_GUARD: f64 = 0.1;
/// Slopes are fitted on `|s| ≥ FIT_WINDOW · s_min`.
pub const FIT_WINDOW: f64 = 100.0;
/// Allowed slope deviation in `reduce-compare`.
pub const SLOPE_TOL: f64 = 0.1;
/// Differences below this fraction of `|Ω|` count as round-off.
pub const NOISE: f64 = 1e-12;
/// `integrate` passes while the defect stays below this multiple of `rel_tol`.
pub const DEFECT_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Integrate,
    ReduceCompare,
    BehaviorFit,
    SeriesCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Integrate => "integrate",
            Command::ReduceCompare => "reduce-compare",
            Command::BehaviorFit => "behavior-fit",
            Command::SeriesCheck => "series-check",
        }
    }

    pub fn run(self, cfg: &ExperimentConfig) -> Result<RunReport> {
        match self {
            Command::Integrate => cmd_integrate(cfg),
            Command::ReduceCompare => cmd_reduce_compare(cfg),
            Command::BehaviorFit => cmd_behavior_fit(cfg),
            Command::SeriesCheck => cmd_series_check(cfg),
        }
    }
}

fn series_seed(cfg: &ExperimentConfig, sigma: C64, a: C64, b: C64, s0: C64) -> Result<OmegaState> {
    let sol = direct_formal_series(SystemKind::Full, sigma, a, b, SEED_ORDER)?;
    Ok(complete_on_shell(sol.evaluate(s0)?, cfg.mu)?)
}

/// Initial point `(s_min e^{iφ}, Ω)`: the full-system series for power-type
/// cases, `Ω⁽ᵃ⁾` of the PIII expansion otherwise, moved onto the first
/// integral in both cases.
pub fn seed(cfg: &ExperimentConfig) -> Result<(C64, OmegaState)> {
    let s0 = cfg.direction() * cfg.s_min;
    if let Some((sigma, a, b)) = cfg.series_constants()? {
        return Ok((s0, series_seed(cfg, sigma, a, b, s0)?));
    }
    let case = cfg.tracy_case()?.expect("non-series case");
    let trunc = match case {
        TracyCase::CaseII { .. } => Truncation::Printed,
        _ => Truncation::Leading,
    };
    let w = omega_a_from_case(&case, s0, trunc, POLE_GUARD)?;
    Ok((s0, complete_on_shell(w, cfg.mu)?))
}

pub fn integrate_from(cfg: &ExperimentConfig, kind: SystemKind, seed: (C64, OmegaState)) -> Result<OmegaRun> {
    Ok(integrate_omega(kind, cfg.mu, seed, &cfg.path()?, &cfg.integrator())?)
}

fn in_window(cfg: &ExperimentConfig, s: C64) -> bool {
    s.norm() >= FIT_WINDOW * cfg.s_min * (1.0 - 1e-12)
}

pub fn cmd_integrate(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut rep = RunReport::new(Command::Integrate.name(), cfg);
    let run = integrate_from(cfg, SystemKind::Full, seed(cfg)?)?;
    let mut worst = 0.0f64;
    for s in cfg.grid() {
        let w = run.state_at(s)?;
        let d = first_integral_defect(&w, cfg.mu).norm();
        worst = worst.max(d);
        rep.records.push(SampleRecord { omega: Some(w), defect: Some(d), ..SampleRecord::at(s) });
    }
    rep.push_check(Check::at_most("max defect", worst.max(run.max_defect()), DEFECT_FACTOR * cfg.tolerances.rel));
    Ok(rep)
}

/// `|Ωj − Ωj⁽ᵃ⁾|` of two runs on the grid.
pub fn compare_runs(a: &OmegaRun, b: &OmegaRun, grid: &[C64]) -> Result<Vec<(OmegaState, OmegaState, [f64; 3])>> {
    grid.iter()
        .map(|&s| {
            let (u, v) = (a.state_at(s)?, b.state_at(s)?);
            let d = u - v;
            Ok((u, v, [d.o1.norm(), d.o2.norm(), d.o3.norm()]))
        })
        .collect()
}

pub fn cmd_reduce_compare(cfg: &ExperimentConfig) -> Result<RunReport> {
    let Some((sigma, _, _)) = cfg.series_constants()? else {
        return Err(Error::Config("reduce-compare needs case_i or direct constants".into()));
    };
    let mut rep = RunReport::new(Command::ReduceCompare.name(), cfg);
    let start = seed(cfg)?;
    let full = integrate_from(cfg, SystemKind::Full, start)?;
    let reduced = integrate_from(cfg, SystemKind::Reduced, start)?;
    let grid = cfg.grid();
    let mut pairs: [Vec<(f64, f64)>; 3] = Default::default();
    for (&s, (u, v, d)) in grid.iter().zip(compare_runs(&full, &reduced, &grid)?) {
        if in_window(cfg, s) {
            for k in 0..3 {
                if d[k] > NOISE * u.max_norm().max(v.max_norm()) {
                    pairs[k].push((s.norm(), d[k]));
                }
            }
        }
        rep.records.push(SampleRecord { omega: Some(u), omega_a: Some(v), diff: Some(d), ..SampleRecord::at(s) });
    }
    let expected = error_exponents(sigma).ok();
    if expected.is_none() {
        rep.notes.push(format!("no predicted exponents for σ = {sigma}"));
    }
    for (k, p) in pairs.iter().enumerate() {
        let name = format!("omega{}", k + 1);
        if p.len() < 3 {
            rep.notes.push(format!("{name}: difference vanishes on the fit window"));
            continue;
        }
        let mut f = FittedSlope::fit(&name, p)?;
        if let Some(e) = expected {
            f = f.expect([e.0, e.1, e.2][k], SLOPE_TOL);
        }
        rep.push_slope(f);
    }
    Ok(rep)
}

/// Prediction for `y` and the tolerance at `s_min`.
fn behavior_of(cfg: &ExperimentConfig, case: Option<&TracyCase>) -> Result<(CriticalBehavior, f64, f64)> {
    let behavior = match (case, cfg.case) {
        (Some(c), _) => reduced_behavior(c, cfg.mu)?,
        (None, CaseSelector::Direct { sigma, b, .. }) => {
            let mu = cfg.mu;
            if sigma.norm() < 1e-14 {
                if mu.norm() == 0.0 {
                    return Err(Error::Config("σ = 0 needs μ ≠ 0".into()));
                }
                CriticalBehavior::Taylor { a: b * b / (mu * mu) }
            } else if sigma.re > 0.0 && sigma.re < 1.0 {
                let d = mu * 2.0 - sigma;
                CriticalBehavior::SmallPower { sigma, a: b * b * 4.0 / (d * d) }
            } else {
                return Err(Error::Config(format!("no behaviour family for direct σ = {sigma}")));
            }
        }
        _ => unreachable!("tracy cases carry their own behaviour"),
    };
    let (tol, min_slope) = match behavior {
        CriticalBehavior::SmallPower { .. } | CriticalBehavior::Taylor { .. } => (1e-2, 0.0),
        CriticalBehavior::Sine { .. } | CriticalBehavior::LogType { .. } => (5e-2, 0.0),
        CriticalBehavior::InverseSine { .. } => (0.1, 0.4),
    };
    Ok((behavior, tol, min_slope))
}

/// `|y/y_pred − 1|`, or `|y − y_pred|/|s|` for the sine family whose
/// prediction has zeros.
pub fn deviation(behavior: &CriticalBehavior, s: C64, y: C64, y_pred: C64) -> f64 {
    match behavior {
        CriticalBehavior::Sine { .. } => (y - y_pred).norm() / s.norm(),
        _ => (y / y_pred - 1.0).norm(),
    }
}

pub fn cmd_behavior_fit(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut rep = RunReport::new(Command::BehaviorFit.name(), cfg);
    let case = cfg.tracy_case()?;
    let (behavior, tol, min_slope) = behavior_of(cfg, case.as_ref())?;
    let run = integrate_from(cfg, SystemKind::Full, seed(cfg)?)?;
    let mut rejected = 0usize;
    let mut flagged = 0usize;
    let mut pairs = Vec::new();
    for s in cfg.grid() {
        if let Some(c @ TracyCase::CaseIII { .. }) = case.as_ref() {
            if pole_guard(c, s)? < BEHAVIOR_GUARD {
                rejected += 1;
                continue;
            }
        }
        let w = run.state_at(s)?;
        let yp = behavior_eval(&behavior, s)?;
        let mut rec = SampleRecord { omega: Some(w), y_predicted: Some(yp), ..SampleRecord::at(s) };
        match y_of_omega(s, &w, cfg.mu) {
            Ok(y) => {
                let dev = deviation(&behavior, s, y, yp);
                rec.y = Some(y);
                rec.deviation = Some(dev);
                if dev > 0.0 && dev.is_finite() {
                    pairs.push((s.norm(), dev));
                }
            }
            Err(PviError::PoleOfY(_)) => {
                flagged += 1;
                rec.flag = Some("pole_of_y".into());
            }
            Err(e) => return Err(e.into()),
        }
        rep.records.push(rec);
    }
    if rejected > 0 {
        rep.notes.push(format!("{rejected} samples rejected by the pole guard"));
    }
    if flagged > 0 {
        rep.notes.push(format!("{flagged} samples at poles of y"));
    }
    let first = rep.records.iter().find_map(|r| r.deviation).unwrap_or(f64::INFINITY);
    rep.push_check(Check::at_most("deviation at smallest s", first, tol));
    if pairs.len() >= 3 {
        let f = FittedSlope::fit("deviation", &pairs)?;
        rep.push_check(Check::at_least("deviation trend", f.slope, min_slope));
        rep.slopes.push(f);
    } else {
        rep.push_check(Check::at_least("deviation trend", f64::NAN, min_slope));
    }
    Ok(rep)
}

/// Whether `n + dσ/2 = ±σ/2` for an admissible `d = pa − pb` at order `n`
/// (odd, `|d| ≤ 2n + 1`).
pub fn resonant_at(sigma: C64, n: usize) -> bool {
    if n == 0 || sigma.norm() == 0.0 {
        return false;
    }
    [1.0, -1.0].iter().any(|&sign| {
        let d = -(C64::new(2.0 * n as f64, 0.0) / sigma) + sign;
        let k = d.re.round();
        d.im.abs() < 1e-9 && (d.re - k).abs() < 1e-9 && k.abs() <= (2 * n + 1) as f64 && k.rem_euclid(2.0) == 1.0
    })
}

fn omitted_size(next: &SeriesSolution, n: usize, s: C64) -> Result<f64> {
    let mut m = 0.0f64;
    for c in &next.orders[n] {
        m = m.max(c.eval(s)?.norm());
    }
    Ok(m)
}

pub fn cmd_series_check(cfg: &ExperimentConfig) -> Result<RunReport> {
    let Some((sigma, a, b)) = cfg.series_constants()? else {
        return Err(Error::Config("series-check needs case_i or direct constants".into()));
    };
    if !(sigma.re > 0.0 && sigma.re < 1.0) {
        return Err(Error::Config(format!("series-check needs 0 < Re σ < 1, got {sigma}")));
    }
    let mut rep = RunReport::new(Command::SeriesCheck.name(), cfg);
    let kind = SystemKind::Full;
    let grid = cfg.grid();

    // Order-1 series against the flow started from it.
    let sol = direct_formal_series(kind, sigma, a, b, 2)?;
    let mut first = sol.clone();
    first.orders.truncate(2);
    let s0 = grid[0];
    let run = integrate_from(cfg, kind, (s0, first.evaluate_unchecked(s0)?))?;
    let mut worst = 0.0f64;
    for &s in &grid {
        let (w, ser) = (run.state_at(s)?, first.evaluate_unchecked(s)?);
        let d = w - ser;
        if in_window(cfg, s) {
            let omitted = omitted_size(&sol, 2, s)?;
            worst = worst.max(d.max_norm() / omitted);
        }
        let diff = [d.o1.norm(), d.o2.norm(), d.o3.norm()];
        rep.records.push(SampleRecord { omega: Some(w), omega_a: Some(ser), diff: Some(diff), ..SampleRecord::at(s) });
    }
    rep.push_check(Check::at_most("order 1 vs flow / omitted order", worst, 10.0));

    // Both constructions of the series.
    let order = if resonant_at(sigma, 1) {
        rep.notes.push(format!("σ = {sigma} is resonant at order 1; routes compared at order 0"));
        0
    } else {
        1
    };
    let direct = direct_formal_series(kind, sigma, a, b, order)?;
    let eps = extend(&order0(kind, sigma, a, b)?, order)?;
    rep.push_check(Check::at_most("routes coefficient distance", eps.distance(&direct), 1e-12));

    // Geometric identity on up to 20 grid points.
    let step = grid.len().div_ceil(20).max(1);
    let mut geo = 0.0f64;
    let mut used = 0;
    for &s in grid.iter().step_by(step) {
        let w = geometric_ratio(sigma, b, s)?.norm();
        if w >= 0.5 {
            continue;
        }
        let depth = ((1e-17f64).ln() / w.ln()).ceil().clamp(1.0, 400.0) as usize;
        let err = (geometric_partial_sum(sigma, b, s, depth)? - geometric_closed_form(sigma, b, s)?).norm();
        geo = geo.max(err);
        used += 1;
    }
    if used == 0 {
        rep.notes.push("geometric ratio too large on the whole grid".into());
    }
    rep.push_check(Check::at_most("geometric identity", geo, 1e-14));
    Ok(rep)
}
