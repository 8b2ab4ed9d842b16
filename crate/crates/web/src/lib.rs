//! Browser bindings: resolve a curve, list its jumping numbers, present an ideal.
//!
//! Curves are given in the line format (`C1 = (y^2+x^3)^2+x^6*y`, one factor per
//! line, `C [2] = …` for multiplicities) or as a JSON curve document.

use serde_json::json;
use torres_core::json::{analyze, ideal_json, jumping_json, resolve_json, Analysis, CurveDoc};
use torres_core::parse::parse_rational;
use torres_core::{ideal_presentation, jumping_numbers, Rat};
use wasm_bindgen::prelude::*;

fn load(curve: &str) -> Result<Analysis, String> {
    let doc = if curve.trim_start().starts_with('{') { CurveDoc::from_json(curve) } else { CurveDoc::from_text(curve) };
    analyze(&doc.map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn positive(s: &str) -> Result<Rat, String> {
    let r = parse_rational(s.trim()).map_err(|e| e.to_string())?;
    if r <= Rat::from_integer(0.into()) {
        return Err("the bound must be positive".into());
    }
    Ok(r)
}

/// Fan tree, decorations and valuation table as JSON.
pub fn resolve_curve(curve: &str) -> Result<String, String> {
    let a = load(curve)?;
    resolve_json(&a).map(|v| v.to_string()).map_err(|e| e.to_string())
}

/// Jumping numbers in `(0, max)` as JSON.
pub fn jumping_below(curve: &str, max: &str) -> Result<String, String> {
    let max = positive(max)?;
    let a = load(curve)?;
    let list: Vec<Rat> = jumping_numbers(&a.table, &max).into_iter().filter(|r| r < &max).collect();
    Ok(jumping_json(&list).to_string())
}

/// The presentation of `J(ξ·C)` as JSON, with a one-line `text` rendering.
pub fn ideal_at(curve: &str, xi: &str) -> Result<String, String> {
    let xi = positive(xi)?;
    let a = load(curve)?;
    let p = ideal_presentation(&a.table, &xi).map_err(|e| e.to_string())?;
    let mut v = ideal_json(&p);
    v["elements"] = json!(a.table.elements);
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn resolve(curve: &str) -> Result<String, JsValue> {
    resolve_curve(curve).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn jumping(curve: &str, max: &str) -> Result<String, JsValue> {
    jumping_below(curve, max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ideal(curve: &str, xi: &str) -> Result<String, JsValue> {
    ideal_at(curve, xi).map_err(|e| JsValue::from_str(&e))
}
