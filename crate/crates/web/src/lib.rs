//! Browser bindings: each export takes textual surface/class specs and
//! returns a JSON string, or throws an `Error` whose message names the
//! failing condition.

use serde_json::{json, Value};
use stablebps::cli::{bounds_json, bps_json, parse_class, parse_surface, SurfaceSpec};
use stablebps::{bounds, genfun};
use wasm_bindgen::prelude::*;

/// Largest class coordinate accepted from the page for Picard rank `rho`;
/// keeps the splitting search interactive.
pub fn max_coordinate(rho: usize) -> i64 {
    // the splitting box has roughly d^rho points
    match rho {
        0..=4 => 14,
        5..=6 => 10,
        7 => 8,
        8 => 6,
        _ => 5,
    }
}

fn parse(surface: &str, beta: &str) -> Result<(stablebps::Surface, stablebps::CurveClass), String> {
    let s = parse_surface(surface).map_err(|e| e.to_string())?;
    let b = parse_class(s.kind(), beta).map_err(|e| e.to_string())?;
    let limit = max_coordinate(s.rho());
    if b.coords().iter().any(|c| c.abs() > limit) {
        return Err(format!(
            "coordinates are limited to |c| <= {limit} on this surface in the demo"
        ));
    }
    Ok((s, b))
}

pub fn bounds_value(surface: &str, beta: &str) -> Result<Value, String> {
    let (s, b) = parse(surface, beta)?;
    let bounds = bounds::compute(&s, &b).map_err(|e| e.to_string())?;
    Ok(bounds_json(&s, &b, &bounds))
}

pub fn bps_value(surface: &str, beta: &str) -> Result<Value, String> {
    let (s, b) = parse(surface, beta)?;
    let bounds = bounds::compute(&s, &b).map_err(|e| e.to_string())?;
    let table = genfun::bps_table(&s, &b).map_err(|e| e.to_string())?;
    Ok(bps_json(&table, &bounds))
}

pub fn hilb_value(surface: &str, n: u32) -> Result<Value, String> {
    let s = parse_surface(surface).map_err(|e| e.to_string())?;
    let max_degree = 4 * n;
    genfun::check_cap(n + max_degree).map_err(|e| e.to_string())?;
    let row = genfun::hilb_betti_row(&s, n, max_degree).map_err(|e| e.to_string())?;
    Ok(json!({
        "surface": SurfaceSpec(s.kind()).to_string(),
        "n": n,
        "betti": row.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Stability bounds and best splitting of `beta` on `surface`.
#[wasm_bindgen]
pub fn bounds(surface: &str, beta: &str) -> Result<String, JsError> {
    to_js(bounds_value(surface, beta))
}

/// Refined BPS table up to `N(beta)`.
#[wasm_bindgen]
pub fn bps(surface: &str, beta: &str) -> Result<String, JsError> {
    to_js(bps_value(surface, beta))
}

/// Betti numbers `b_0 .. b_{4n}` of the Hilbert scheme of `n` points.
#[wasm_bindgen]
pub fn hilb_betti(surface: &str, n: u32) -> Result<String, JsError> {
    to_js(hilb_value(surface, n))
}
