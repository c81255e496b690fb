//! Structural validation of every report against the shipped schemas
//! (see `schemas/`): required fields and types are checked before printing.

use serde_json::Value;

fn ty(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "bool",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn need<'a>(v: &'a Value, key: &str, kind: &str) -> Result<&'a Value, String> {
    let field = v
        .get(key)
        .ok_or_else(|| format!("missing field '{key}'"))?;
    if kind != "any" && ty(field) != kind {
        return Err(format!("field '{key}' has type {}, want {kind}", ty(field)));
    }
    Ok(field)
}

fn complex(v: &Value, key: &str) -> Result<(), String> {
    let c = need(v, key, "object")?;
    need(c, "re", "number")?;
    need(c, "im", "number")?;
    Ok(())
}

pub fn validate_face(v: &Value) -> Result<(), String> {
    need(v, "e", "number")?;
    need(v, "polar", "array")?;
    need(v, "primitive", "array")?;
    need(v, "lambda", "array")?;
    need(v, "face_poly", "string")?;
    need(v, "nondegenerate", "bool")?;
    let w = need(v, "witness", "any")?;
    if !w.is_null() && !w.is_array() {
        return Err("witness must be an array of rational strings or null".into());
    }
    Ok(())
}

pub fn validate_gamma_table(v: &Value) -> Result<(), String> {
    need(v, "bound", "number")?;
    need(v, "C", "string")?;
    for e in need(v, "entries", "array")?.as_array().unwrap() {
        need(e, "beta", "array")?;
        need(e, "gamma", "string")?;
    }
    Ok(())
}

pub fn validate_eval_report(v: &Value) -> Result<(), String> {
    complex(v, "value")?;
    need(v, "delta", "number")?;
    need(v, "m_delta", "number")?;
    need(v, "beta_bound", "number")?;
    need(v, "tail_bound", "number")?;
    for h in need(v, "factors_near_singularity", "array")?.as_array().unwrap() {
        need(h, "beta", "array")?;
        complex(h, "s_dot")?;
        need(h, "kind", "string")?;
    }
    Ok(())
}

pub fn validate_analysis(v: &Value) -> Result<(), String> {
    need(v, "input", "string")?;
    need(v, "version", "string")?;
    need(v, "seed", "number")?;
    need(v, "c", "string")?;
    let g = need(v, "gamma", "object")?;
    need(g, "bound", "number")?;
    need(g, "max_nonzero_norm", "number")?;
    need(g, "bound_margin", "string")?;
    let cy = need(v, "cyclotomy", "object")?;
    let verdict = need(cy, "verdict", "string")?.as_str().unwrap();
    match verdict {
        "certificate" => {
            need(cy, "factors", "array")?;
        }
        "witness" => {
            need(cy, "theta", "array")?;
            complex(cy, "root")?;
            need(cy, "modulus", "number")?;
        }
        "inconclusive" => {
            need(cy, "exponent_bound", "number")?;
        }
        other => return Err(format!("unknown cyclotomy verdict '{other}'")),
    }
    for f in need(v, "cyclotomic_factors", "array")?.as_array().unwrap() {
        need(f, "d", "number")?;
        need(f, "lambda", "array")?;
    }
    for f in need(v, "faces", "array")?.as_array().unwrap() {
        validate_face(f)?;
    }
    for b in need(v, "boundary", "array")?.as_array().unwrap() {
        need(b, "e", "number")?;
        let verdict = need(b, "verdict", "string")?.as_str().unwrap();
        if verdict != "certified" && verdict != "inconclusive" {
            return Err(format!("unknown boundary verdict '{verdict}'"));
        }
        need(b, "reason", "string")?;
    }
    Ok(())
}

pub fn validate_zeros_summary(v: &Value) -> Result<(), String> {
    need(v, "input", "string")?;
    need(v, "face", "number")?;
    need(v, "records", "number")?;
    need(v, "candidates", "number")?;
    need(v, "skipped_primes", "number")?;
    for row in need(v, "ladder", "array")?.as_array().unwrap() {
        need(row, "eps", "number")?;
        need(row, "count", "number")?;
        need(row, "survivors", "number")?;
        let p = need(row, "predicted", "any")?;
        if !p.is_null() && !p.is_number() {
            return Err("predicted must be a number or null".into());
        }
    }
    Ok(())
}

pub fn validate_toric(v: &Value) -> Result<(), String> {
    need(v, "n", "number")?;
    need(v, "v_poly", "string")?;
    let z = need(v, "zeta_prefactor", "object")?;
    need(z, "numerators", "array")?;
    need(z, "denominator", "array")?;
    let d = need(v, "domain", "object")?;
    need(d, "delta", "string")?;
    need(d, "inequalities", "array")?;
    for f in need(v, "faces", "array")?.as_array().unwrap() {
        validate_face(f)?;
    }
    need(v, "all_faces_nondegenerate", "bool")?;
    Ok(())
}
