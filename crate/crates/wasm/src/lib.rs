//! JSON-in, JSON-out bindings for the browser demo in `www/`.

use std::sync::Arc;

use serde_json::{json, Value};
use veronese_core::pg::sublines_in_line;
use veronese_core::{analyze, build_code, build_variety, FieldCtx, SearchPlan, SigmaVector, VarietyMatrix};
use wasm_bindgen::prelude::*;

/// Searches in the page stop after this many subsets.
pub const PAGE_BUDGET: u64 = 5_000_000;

fn parse_sigma(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| format!("bad sigma entry {s:?}")))
        .collect()
}

fn variety_of(p: u32, e: u32, t: u32, n: usize, sigma: &str) -> Result<VarietyMatrix, String> {
    let ctx = Arc::new(FieldCtx::from_tower(p, e, t).map_err(|e| e.to_string())?);
    let s = SigmaVector::new(&ctx, &parse_sigma(sigma)?).map_err(|e| e.to_string())?;
    if (ctx.order() as u64).pow(n as u32 - 1) > 4096 {
        return Err("too many points for the page; keep q^(t(n-1)) at most 4096".into());
    }
    build_variety(n, &s, ctx).map_err(|e| e.to_string())
}

pub fn field_value(p: u32, m: u32) -> Result<Value, String> {
    let f = FieldCtx::new(p, m).map_err(|e| e.to_string())?;
    Ok(json!({
        "order": f.order(),
        "modulus": f.modulus_string(),
        "generator": f.generator(),
        "subfields": f.subfield_orders(),
    }))
}

pub fn variety_value(p: u32, e: u32, t: u32, n: usize, sigma: &str) -> Result<Value, String> {
    let v = variety_of(p, e, t, n, sigma)?;
    let b = v.basis();
    let mut out = serde_json::to_value(v.to_json()).expect("json");
    out["collapsed"] = json!(b.collapsed());
    out["rank"] = json!(v.rank());
    Ok(out)
}

pub fn code_value(p: u32, e: u32, t: u32, n: usize, sigma: &str) -> Result<Value, String> {
    let v = variety_of(p, e, t, n, sigma)?;
    let ctx = v.ctx().clone();
    let q_sub = v.sigma().q_sub();
    let points = v.points().to_vec();
    let code = build_code(v).map_err(|e| e.to_string())?;
    let plan = SearchPlan { budget: PAGE_BUDGET, workers: 1, ..SearchPlan::default() };
    let report = analyze(&code, &plan, true).map_err(|e| e.to_string())?;
    let mut out = serde_json::to_value(&report).expect("json");
    if n == 2 && q_sub < ctx.order() as u64 {
        let line: Vec<usize> = (0..points.len()).collect();
        let subs = sublines_in_line(&ctx, &points, &line, q_sub).map_err(|e| e.to_string())?;
        out["sublines"] = json!(subs);
    }
    Ok(out)
}

fn respond(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Modulus, generator and subfield orders of GF(p^m).
#[wasm_bindgen]
pub fn field_info(p: u32, m: u32) -> Result<String, JsError> {
    respond(field_value(p, m))
}

/// Monomial basis, points and coordinate table; `sigma` is a comma list of powers of p.
#[wasm_bindgen]
pub fn variety(p: u32, e: u32, t: u32, n: usize, sigma: &str) -> Result<String, JsError> {
    respond(variety_value(p, e, t, n, sigma))
}

/// Code report with minimum-weight supports, plus the q'-sublines when n = 2.
#[wasm_bindgen]
pub fn code_report(p: u32, e: u32, t: u32, n: usize, sigma: &str) -> Result<String, JsError> {
    respond(code_value(p, e, t, n, sigma))
}
