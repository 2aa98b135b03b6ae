//! Browser bindings: products, the curve `q -> Zbar_q(e)`, and the
//! dimension table.

use wasm_bindgen::prelude::*;

use qmzv::checks::{ProductKind, Products};
use qmzv::parse::{parse_element, ParsedElement};
use qmzv::products::shuffle_x;
use qmzv::qeval::{homogeneous_weight, zbar_q, QContext};
use qmzv::relations::dims_table;
use qmzv::AElement;

/// Largest weight the page lets the table run to.
pub const MAX_BROWSER_WEIGHT: usize = 6;

fn to_a(e: ParsedElement) -> Result<AElement, String> {
    match e {
        ParsedElement::A(e) => Ok(e),
        ParsedElement::X(e) => e.contract_to_a().map_err(|e| e.to_string()),
    }
}

pub fn product_text(kind: &str, left: &str, right: &str) -> Result<String, String> {
    let kind: ProductKind = kind.parse().map_err(|e: qmzv::Error| e.to_string())?;
    let l = parse_element(left).map_err(|e| e.to_string())?;
    let r = parse_element(right).map_err(|e| e.to_string())?;
    if let (ProductKind::Shuffle, ParsedElement::X(a), ParsedElement::X(b)) = (kind, &l, &r) {
        return Ok(shuffle_x(a, b).to_string());
    }
    Products::new()
        .apply(kind, &to_a(l)?, &to_a(r)?)
        .map(|e| e.to_string())
        .map_err(|e| e.to_string())
}

/// `[q_0, v_0, q_1, v_1, ...]` for `samples` values of `q` spread over
/// `[q_min, q_max]`.
pub fn zbar_samples(expr: &str, q_min: f64, q_max: f64, samples: usize) -> Result<Vec<f64>, String> {
    if !(0.0 < q_min && q_min < q_max && q_max < 1.0) {
        return Err("need 0 < q_min < q_max < 1".into());
    }
    if samples < 2 {
        return Err("need at least two samples".into());
    }
    let e = to_a(parse_element(expr).map_err(|e| e.to_string())?)?;
    homogeneous_weight(&e).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * samples);
    for i in 0..samples {
        let q = q_min + (q_max - q_min) * i as f64 / (samples - 1) as f64;
        let ctx = QContext::new(q, 300, 1e-10).map_err(|e| e.to_string())?;
        let r = zbar_q(&e, &ctx).map_err(|e| e.to_string())?;
        out.push(q);
        out.push(r.value);
    }
    Ok(out)
}

/// The table as JSON rows `{weight, indices, relations, bound}`.
pub fn dims_json(max_weight: usize, hbar_lifts: bool) -> Result<String, String> {
    if !(2..=MAX_BROWSER_WEIGHT).contains(&max_weight) {
        return Err(format!("weight must be between 2 and {MAX_BROWSER_WEIGHT}"));
    }
    let rows = dims_table(max_weight, hbar_lifts).map_err(|e| e.to_string())?;
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn product(kind: &str, left: &str, right: &str) -> Result<String, JsError> {
    product_text(kind, left, right).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn zbar_curve(expr: &str, q_min: f64, q_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    zbar_samples(expr, q_min, q_max, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn dims(max_weight: usize, hbar_lifts: bool) -> Result<String, JsError> {
    dims_json(max_weight, hbar_lifts).map_err(|e| JsError::new(&e))
}
