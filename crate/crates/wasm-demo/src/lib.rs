//! Browser bindings for three pbridge experiments. Each takes and returns
//! JSON so the page stays framework-free.

use pbridge::harness::{cmd_behavior_fit, cmd_reduce_compare, ExperimentConfig, RunReport};
use pbridge::omega::SystemKind;
use pbridge::series::direct_formal_series;
use pbridge::C64;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Point {
    s: f64,
    values: Vec<f64>,
}

fn checks(rep: &RunReport) -> serde_json::Value {
    json!({ "passed": rep.passed, "checks": rep.checks, "slopes": rep.slopes, "notes": rep.notes })
}

/// `|y|`, `|y_pred|` and the deviation along the grid.
pub fn behavior_curve_json(config: &str) -> Result<String, String> {
    let cfg = ExperimentConfig::from_json(config).map_err(|e| e.to_string())?;
    let rep = cmd_behavior_fit(&cfg).map_err(|e| e.to_string())?;
    let points: Vec<Point> = rep
        .records
        .iter()
        .filter_map(|r| {
            Some(Point { s: r.s.norm(), values: vec![r.y?.norm(), r.y_predicted?.norm(), r.deviation?] })
        })
        .collect();
    Ok(json!({ "columns": ["|y|", "|y_pred|", "deviation"], "points": points, "summary": checks(&rep) }).to_string())
}

/// `|Ωj − Ωj⁽ᵃ⁾|` of full against reduced flow, with fitted slopes.
pub fn reduce_compare_json(config: &str) -> Result<String, String> {
    let cfg = ExperimentConfig::from_json(config).map_err(|e| e.to_string())?;
    let rep = cmd_reduce_compare(&cfg).map_err(|e| e.to_string())?;
    let points: Vec<Point> =
        rep.records.iter().filter_map(|r| Some(Point { s: r.s.norm(), values: r.diff?.to_vec() })).collect();
    Ok(json!({ "columns": ["|ΔΩ1|", "|ΔΩ2|", "|ΔΩ3|"], "points": points, "summary": checks(&rep) }).to_string())
}

/// Term list of the full-system series through `order`.
pub fn series_terms_json(sigma: [f64; 2], a: [f64; 2], b: [f64; 2], order: usize) -> Result<String, String> {
    let z = |v: [f64; 2]| C64::new(v[0], v[1]);
    let sol = direct_formal_series(SystemKind::Full, z(sigma), z(a), z(b), order).map_err(|e| e.to_string())?;
    let comps: Vec<_> = sol.components().iter().map(|c| c.to_records()).collect();
    Ok(json!({ "omega1": comps[0], "omega2": comps[1], "omega3": comps[2] }).to_string())
}

#[wasm_bindgen]
pub fn behavior_curve(config: &str) -> Result<String, JsError> {
    behavior_curve_json(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn reduce_compare(config: &str) -> Result<String, JsError> {
    reduce_compare_json(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn series_terms(
    sigma_re: f64,
    sigma_im: f64,
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    order: usize,
) -> Result<String, JsError> {
    series_terms_json([sigma_re, sigma_im], [a_re, a_im], [b_re, b_im], order).map_err(|e| JsError::new(&e))
}
