//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are evaluated at their full
//! tolerance and reported as FAIL; the process exits non-zero only when an
//! outcome differs from that list.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};

use pbridge::harness::{cmd_integrate, cmd_reduce_compare, integrate_from, seed, CaseSelector, ExperimentConfig};
use pbridge::numerics::{derivative_stencil, fit_log_log_slope, principal_log};
use pbridge::omega::{OmegaRun, SystemKind};
use pbridge::piii::{
    frame_from_s, omega_a_of_yhat, pole_guard, piii_residual, reduced_behavior, s_jet_to_theta, sine_gordon_residual,
    theta_jet_to_sine_gordon, tracy_jet, Jet, TracyCase, Truncation,
};
use pbridge::pvi::{pvi_residual, y_of_omega, CriticalBehavior};
use pbridge::series::{
    direct_formal_series, direct_labelled, extend, geometric_closed_form, geometric_partial_sum, geometric_ratio,
    log_case_closed_forms, order0, resum_inverse_sine, Monomial,
};
use pbridge::C64;
use rand::{Rng, SeedableRng};

const KNOWN_FAILURES: [&str; 3] = ["A3", "A5", "A7"];

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn config(mu: C64, case: CaseSelector, s_min: f64, s_max: f64, ppd: usize) -> ExperimentConfig {
    let cfg = ExperimentConfig {
        mu,
        case,
        s_min,
        s_max,
        ray_angle: 0.0,
        points_per_decade: ppd,
        tolerances: Default::default(),
        output_dir: std::env::temp_dir(),
    };
    cfg.validate().unwrap();
    cfg
}

fn case_i(b: f64, sigma: C64) -> CaseSelector {
    CaseSelector::CaseI { b_const: c(b, 0.0), sigma }
}

fn full_run(cfg: &ExperimentConfig) -> OmegaRun {
    integrate_from(cfg, SystemKind::Full, seed(cfg).unwrap()).unwrap()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn a1_conservation() -> Outcome {
    let mut worst = 0.0f64;
    for mu in [c(0.1, 0.0), c(0.3, 0.2)] {
        let cfg = config(mu, case_i(1.0, c(0.5, 0.0)), 1e-6, 1e-1, 10);
        worst = worst.max(full_run(&cfg).max_defect());
        worst = worst.max(cmd_integrate(&cfg).unwrap().check("max defect").unwrap().value);
    }
    (worst < 1e-9, format!("max |Ω1²+Ω2²+Ω3²+μ²| = {worst:.2e} (< 1e-9)"))
}

fn a2_reduced_identity() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..2000 {
        let mut z = |lo: f64, hi: f64| C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI));
        let (s, y, dy, r) = (z(1e-6, 0.9), z(0.2, 5.0), z(0.0, 3.0), z(0.05, 2.0));
        let w = omega_a_of_yhat(s, y, dy, r).unwrap();
        worst = worst.max((w.o1 * w.o1 + w.o3 * w.o3 - r * r).norm() / (r * r).norm());
    }
    (worst < 1e-13, format!("max relative |(Ω1ᵃ)²+(Ω3ᵃ)²−R²| = {worst:.2e} over 2000 draws (< 1e-13)"))
}

fn a3_small_power() -> Outcome {
    let mu = c(0.1, 0.0);
    let s = c(1e-6, 0.0);
    let mut ok = true;
    let mut parts = Vec::new();
    for sigma in [c(0.3, 0.0), c(0.5, 0.0), c(0.7, 0.1)] {
        let cfg = config(mu, case_i(1.0, sigma), 1e-9, 1e-1, 10);
        let (_, b) = cfg.tracy_case().unwrap().unwrap().ab().unwrap();
        let run = full_run(&cfg);
        let scaled = |p: C64| {
            let y = y_of_omega(p, &run.state_at(p).unwrap(), mu).unwrap();
            y * ((sigma - 1.0) * principal_log(p).unwrap()).exp()
        };
        // Removes the leading s^{1−σ} correction using a second point s/10.
        let q = ((C64::new(1.0, 0.0) - sigma) * principal_log(C64::new(10.0, 0.0)).unwrap()).exp();
        let limit = (scaled(s / 10.0) * q - scaled(s)) / (q - 1.0);
        let d = mu * 2.0 - sigma;
        let dev = (limit / (b * b * 4.0 / (d * d)) - 1.0).norm();
        ok &= dev < 1e-2;
        parts.push(format!("σ={sigma}: {dev:.1e}"));
    }
    // σ = 0 against a·s with a = b²/μ².
    let cfg = config(mu, case_i(1.0, c(0.0, 0.0)), 1e-9, 1e-1, 10);
    let (_, b) = cfg.tracy_case().unwrap().unwrap().ab().unwrap();
    let y = y_of_omega(s, &full_run(&cfg).state_at(s).unwrap(), mu).unwrap();
    let dev = (y / (b * b / (mu * mu) * s) - 1.0).norm();
    ok &= dev < 1e-2;
    parts.push(format!("σ=0 Taylor: {dev:.1e}"));
    (ok, format!("relative deviation at s=1e-6 (< 1e-2): {}", parts.join(", ")))
}

fn a4_sine() -> Outcome {
    let (nu, mu) = (0.4, c(0.1, 0.0));
    let hi = 1e-4;
    let lo = hi * (-2.0 * PI / nu).exp();
    let cfg = config(mu, case_i(1.0, c(0.0, 2.0 * nu)), 1e-12, hi, 10);
    let case = cfg.tracy_case().unwrap().unwrap();
    let CriticalBehavior::Sine { c: cc, .. } = reduced_behavior(&case, mu).unwrap() else {
        return (false, "unexpected behaviour family".into());
    };
    let run = full_run(&cfg);
    let (mut worst, mut amp) = (0.0f64, 0.0f64);
    for x in logspace(lo, hi, 400) {
        let s = c(x, 0.0);
        let y = y_of_omega(s, &run.state_at(s).unwrap(), mu).unwrap();
        let sn = (principal_log(s).unwrap() * nu + cc).sin();
        worst = worst.max((y / s - sn * sn).norm());
        amp = amp.max((sn * sn).norm());
    }
    let dev = worst / amp;
    (dev < 0.05, format!("max |y/s − sin²(ν ln s + C)| / max|sin²| = {dev:.2e} on [{lo:.1e}, 1e-4] (< 0.05)"))
}

fn a5_log() -> Outcome {
    let mu = c(0.2, 0.0);
    let cfg = config(mu, CaseSelector::CaseII, 1e-10, 1e-2, 10);
    let case = cfg.tracy_case().unwrap().unwrap();
    let cc = case.log_constant().unwrap();
    let s = c(1e-8, 0.0);
    let y = y_of_omega(s, &full_run(&cfg).state_at(s).unwrap(), mu).unwrap();
    let l = principal_log(s).unwrap() + cc;
    let target = -4.0 / ((mu * 2.0 - 1.0) * (mu * 2.0 - 1.0));
    let dev = (y * l * l / target - 1.0).norm();
    (dev < 0.05, format!("|y (ln s + C)² / (−4/(2μ−1)²) − 1| = {dev:.3} at s=1e-8 (< 0.05)"))
}

fn a6_inverse_sine() -> Outcome {
    let (nu, mu) = (0.3, c(0.2, 0.0));
    let cfg = config(mu, CaseSelector::CaseIII { nu }, 1e-12, 1e-6, 10);
    let case = cfg.tracy_case().unwrap().unwrap();
    let d = case.phase_constant().unwrap();
    let m = mu * 2.0 - 1.0;
    let cc = d - I * 0.5 * principal_log((m - I * 2.0 * nu) / (m + I * 2.0 * nu)).unwrap();
    let k = (m * m + 4.0 * nu * nu) / (4.0 * nu * nu);
    let run = full_run(&cfg);
    let mut pairs = Vec::new();
    let mut worst = 0.0f64;
    for x in logspace(1e-12, 1e-6, 121) {
        let s = c(x, 0.0);
        if pole_guard(&case, s).unwrap() <= 0.1 {
            continue;
        }
        let y = y_of_omega(s, &run.state_at(s).unwrap(), mu).unwrap();
        let sn = (principal_log(s).unwrap() * nu + cc).sin();
        let pred = C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) - k * sn * sn);
        let dev = (y / pred - 1.0).norm();
        worst = worst.max(dev);
        pairs.push((x, dev));
    }
    let slope = fit_log_log_slope(&pairs).unwrap().slope;
    let ok = worst < 0.1 && slope >= 0.4;
    (ok, format!("max deviation {worst:.2e} (< 0.1) at {} accepted samples, slope {slope:.2} (≥ 0.4)", pairs.len()))
}

fn a7_error_exponents() -> Outcome {
    let mu = c(0.1, 0.0);
    let mut ok = true;
    let mut parts = Vec::new();
    // B = 1 at σ = 0 gives a = b and a constant solution; B = 2 does not.
    for (sigma, b) in [(0.0, 2.0), (0.5, 1.0)] {
        let cfg = config(mu, case_i(b, c(sigma, 0.0)), 1e-7, 1e-1, 10);
        let rep = cmd_reduce_compare(&cfg).unwrap();
        for (name, want) in [("omega2", 2.0 - sigma), ("omega3", 1.0 - sigma / 2.0)] {
            let got = rep.slope(name).map_or(f64::NAN, |f| f.slope);
            ok &= (got - want).abs() <= 0.1;
            parts.push(format!("σ={sigma} {name} {got:.3} vs {want}"));
        }
    }
    (ok, format!("slopes ± 0.1: {}", parts.join(", ")))
}

fn a8_residuals() -> Outcome {
    let mu = c(0.1, 0.0);
    let sigma = c(0.5, 0.0);

    // (a) PVI residual on jets of the integrated solution.
    let cfg = config(mu, case_i(1.0, sigma), 1e-6, 1e-1, 10);
    let run = full_run(&cfg);
    let s = c(1e-2, 0.0);
    let y_at = |p: C64| -> Result<C64, String> {
        let w = run.state_by_local_flow(p).map_err(|e| e.to_string())?;
        y_of_omega(p, &w, mu).map_err(|e| e.to_string())
    };
    let y = y_at(s).unwrap();
    let (dy, ddy) = derivative_stencil(y_at, s, 1e-4).unwrap();
    let res_a = pvi_residual(s, y, dy, ddy, mu).unwrap().norm();

    // (b) PIII residual of the printed truncation against the first omitted order.
    let case = TracyCase::case_i(c(1.0, 0.0), sigma, mu).unwrap();
    let r = case.r();
    let printed = pbridge::piii::case_i_series(&case, Truncation::Printed).unwrap();
    let next = pbridge::piii::case_i_series(&case, Truncation::Derived(2)).unwrap().sub(&printed);
    let scale = next.max_coefficient();
    let beta = next.terms().iter().filter(|t| t.c.norm() > 1e-12 * scale).map(|t| t.alpha.re).fold(f64::INFINITY, f64::min);
    let pairs: Vec<_> = logspace(1e-5, 1e-2, 13)
        .into_iter()
        .map(|x| {
            let s = c(x, 0.0);
            let th = frame_from_s(s, r).unwrap().theta;
            let j = s_jet_to_theta(s, th, tracy_jet(&case, s, Truncation::Printed).unwrap());
            (x, piii_residual(th, j.value, j.d1, j.d2).unwrap().norm())
        })
        .collect();
    let slope = fit_log_log_slope(&pairs).unwrap().slope;
    let want = beta - 1.0;

    // (c) PIII and sine-Gordon residuals of the same jets.
    let mut both_small = 0.0f64;
    let mut mismatch = 0.0f64;
    let mut rng = rand::rngs::StdRng::seed_from_u64(8);
    for x in [1e-6, 1e-5, 1e-4] {
        let s = c(x, 0.0);
        let fr = frame_from_s(s, r).unwrap();
        let exact = s_jet_to_theta(s, fr.theta, tracy_jet(&case, s, Truncation::Derived(6)).unwrap());
        let mut perturbed = exact;
        perturbed.d2 += C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * exact.d2.norm() * 1e-3;
        for (k, j) in [exact, perturbed].into_iter().enumerate() {
            let p3 = piii_residual(fr.theta, j.value, j.d1, j.d2).unwrap();
            let u: Jet = theta_jet_to_sine_gordon(j).unwrap();
            let sg = sine_gordon_residual(fr.x, u.value, u.d1, u.d2).unwrap();
            if k == 0 {
                both_small = both_small.max(p3.norm()).max(sg.norm());
            }
            mismatch = mismatch.max((sg - I / (j.value * 2.0) * p3).norm() / (1.0 + sg.norm()));
        }
    }
    let ok = res_a < 1e-5 && (slope - want).abs() <= 0.15 && both_small < 1e-8 && mismatch < 1e-8;
    (
        ok,
        format!(
            "(a) {res_a:.1e} (< 1e-5); (b) slope {slope:.3} vs {want:.3} ± 0.15; (c) residuals {both_small:.1e}, mismatch {mismatch:.1e} (< 1e-8)"
        ),
    )
}

fn a9_series_oracle() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut drawn = 0;
    while drawn < 20 {
        let sigma = c(rng.gen_range(0.05..0.95), rng.gen_range(-0.2..0.2));
        if pbridge::harness::resonant_at(sigma, 1) {
            continue;
        }
        let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for kind in [SystemKind::Full, SystemKind::Reduced] {
            let direct = direct_formal_series(kind, sigma, a, b, 1).unwrap();
            let eps = extend(&order0(kind, sigma, a, b).unwrap(), 1).unwrap();
            for (oe, od) in eps.orders.iter().zip(&direct.orders) {
                for (e, d) in oe.iter().zip(od) {
                    for t in e.sub(d).terms() {
                        worst = worst.max(t.c.norm() / d.coefficient(t.alpha).norm().max(1.0));
                    }
                }
            }
        }
        drawn += 1;
    }

    // The displayed first terms, monomial by monomial.
    let mut printed = 0.0f64;
    for sigma in [c(0.3, 0.0), c(0.45, 0.15)] {
        let sol = direct_labelled(SystemKind::Full, sigma, 1).unwrap();
        let one = C64::new(1.0, 0.0);
        let (m, p) = ((one - sigma) * (one - sigma), (one + sigma) * (one + sigma));
        let m4 = (one - sigma) * 4.0;
        let p4 = (one + sigma) * 4.0;
        let table = [
            (0, (1, 0, 3), -one / m),
            (0, (1, 0, 1), sigma * sigma / m4),
            (0, (1, 2, 1), one / p),
            (0, (1, 1, 2), one / m),
            (0, (1, 1, 0), sigma * sigma / p4),
            (0, (1, 3, 0), -one / p),
            (2, (1, 0, 3), -I / m),
            (2, (1, 0, 1), I * sigma * (sigma - 2.0) / m4),
            (2, (1, 2, 1), I / p),
            (2, (1, 1, 2), -I / m),
            (2, (1, 1, 0), -I * sigma * (sigma + 2.0) / p4),
            (2, (1, 3, 0), I / p),
            (1, (1, 0, 2), I / (one - sigma)),
            (1, (1, 2, 0), -I / (one + sigma)),
        ];
        for (comp, (n, pa, pb), want) in table {
            let got = sol.coefficient(comp, Monomial::new(n, pa, pb));
            printed = printed.max((got - want).norm() / want.norm());
        }
    }
    let ok = worst < 1e-12 && printed < 1e-14;
    (ok, format!("route distance {worst:.1e} relative to max(1, |c|) over 20 draws (< 1e-12); displayed terms max rel. error {printed:.1e}"))
}

fn a10_resummation() -> Outcome {
    let mut geo = 0.0f64;
    for (sigma, b) in [(c(0.5, 0.0), c(1.0, 0.0)), (c(0.3, 0.0), c(0.6, 0.0)), (c(0.7, 0.0), c(0.4, 0.0))] {
        for x in [1e-8, 1e-6, 1e-4, 1e-3] {
            let s = c(x, 0.0);
            let w = geometric_ratio(sigma, b, s).unwrap().norm();
            let depth = (1e-14f64.ln() / w.ln()).ceil() as usize;
            let err = (geometric_partial_sum(sigma, b, s, depth).unwrap() - geometric_closed_form(sigma, b, s).unwrap()).norm();
            geo = geo.max(err);
        }
    }
    let sine = resum_inverse_sine(0.3, c(0.6, -0.4)).unwrap();
    let log = log_case_closed_forms(c(0.2, 0.7));
    let mut ratio = 0.0f64;
    for x in logspace(1e-10, 1e-2, 50) {
        let s = c(x, 0.0);
        for w in [sine.state(s).unwrap(), log.state(s).unwrap()] {
            ratio = ratio.max((w.o1 / w.o3 + I).norm());
        }
    }
    (geo < 1e-14 && ratio < 1e-14, format!("geometric error {geo:.1e} (< 1e-14); max |Ω1/Ω3 + i| = {ratio:.1e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("A1", a1_conservation),
        ("A2", a2_reduced_identity),
        ("A3", a3_small_power),
        ("A4", a4_sine),
        ("A5", a5_log),
        ("A6", a6_inverse_sine),
        ("A7", a7_error_exponents),
        ("A8", a8_residuals),
        ("A9", a9_series_oracle),
        ("A10", a10_resummation),
    ];
    let mut unexpected = Vec::new();
    for (id, f) in criteria {
        let (passed, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        println!("{id} {} {detail}", if passed { "PASS" } else { "FAIL" });
        if passed == KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
