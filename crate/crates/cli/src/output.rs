//! Documents printed by the commands, and their plain-text rendering.

use lieflow::flowsim::{Evidence, ResidualReport};
use lieflow::matrix::QMatrix;
use lieflow::rational::{format_rational, Rational};
use lieflow::spectral::Spectrum;
use serde_json::{json, Map, Value};

pub fn rational(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

pub fn matrix(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(rational).collect())).collect())
}

pub fn residual(r: &ResidualReport) -> Value {
    json!({
        "max_residual": r.max_residual,
        "argmax_t": r.argmax_t,
        "samples": r.samples,
        "horizon": r.horizon,
    })
}

pub fn evidence(e: &Evidence) -> Value {
    json!({
        "outcome": e.outcome.as_str(),
        "closure": e.closure.as_ref().map(residual),
        "minimality": e.minimality.iter().map(|(t, r)| json!({"t": t, "residual": r})).collect::<Vec<_>>(),
        "grid_minimum": e.grid_minimum.map(|(t, r)| json!({"t": t, "residual": r})),
        "note": e.note,
    })
}

pub fn spectrum(s: &Spectrum) -> Value {
    json!({
        "exact": s.is_exact(),
        "char_poly": s.char_poly.as_ref().map(ToString::to_string),
        "eigenvalues": s.classes.iter().map(|c| json!({
            "value": c.value.to_string(),
            "algebraic": c.algebraic,
            "geometric": c.geometric,
            "semisimple": c.is_semisimple(),
        })).collect::<Vec<_>>(),
    })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let items = v.as_array()?;
    let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
    parts.map(|p| format!("[{}]", p.join(", ")))
}

/// Indented `key: value` lines carrying the same content as the JSON document.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => write_object(out, map, depth),
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, item, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn write_object(out: &mut String, map: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        match inline(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_value(out, v, depth + 1);
            }
        }
    }
}
