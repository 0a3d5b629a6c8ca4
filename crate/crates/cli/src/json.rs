//! Prescription JSON and the canonical artifact writer.

use hritz_core::prescription::UNIT_TOL;
use hritz_core::{HarmonicRitzValue, Prescription, ResidualSchedule, RitzPrescription, C64};
use serde_json::{json, Map, Value};

use crate::CliError;

const TOP_LEVEL: [&str; 4] = [
    "first_row_signs",
    "harmonic_ritz",
    "residual_norms",
    "rho_signs",
];

/// Parse prescription JSON. Shape, arity and sign moduli are checked here;
/// admissibility is left to [`hritz_core::validate`].
pub fn parse_prescription(text: &[u8]) -> Result<Prescription, CliError> {
    let root: Value =
        serde_json::from_slice(text).map_err(|e| CliError::json("$", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| CliError::json("$", "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !TOP_LEVEL.contains(&k.as_str())) {
        return Err(CliError::json(&format!("$.{k}"), "unknown field"));
    }

    let norms_v = array(obj.get("residual_norms"), "$.residual_norms")?;
    let norms = norms_v
        .iter()
        .enumerate()
        .map(|(i, v)| number(v, &format!("$.residual_norms[{i}]")))
        .collect::<Result<Vec<f64>, _>>()?;
    if norms.is_empty() {
        return Err(CliError::json("$.residual_norms", "must not be empty"));
    }
    let n = norms.len();

    let steps_v = array(obj.get("harmonic_ritz"), "$.harmonic_ritz")?;
    if steps_v.len() != n {
        return Err(CliError::json(
            "$.harmonic_ritz",
            format!(
                "expected {n} steps to match residual_norms, found {}",
                steps_v.len()
            ),
        ));
    }
    let mut steps = Vec::with_capacity(n);
    for (k, step) in steps_v.iter().enumerate() {
        let path = format!("$.harmonic_ritz[{k}]");
        let tuple = array(Some(step), &path)?;
        if tuple.len() != k + 1 {
            return Err(CliError::json(
                &path,
                format!(
                    "step {} needs {} values, found {}",
                    k + 1,
                    k + 1,
                    tuple.len()
                ),
            ));
        }
        let values = tuple
            .iter()
            .enumerate()
            .map(|(i, v)| ritz_value(v, &format!("{path}[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        steps.push(values);
    }

    let mut p = Prescription::new(ResidualSchedule::new(norms), RitzPrescription::new(steps));
    p.first_row_signs = signs(obj.get("first_row_signs"), "$.first_row_signs", n)?;
    p.rho_signs = signs(obj.get("rho_signs"), "$.rho_signs", n - 1)?;
    Ok(p)
}

fn array<'a>(v: Option<&'a Value>, path: &str) -> Result<&'a Vec<Value>, CliError> {
    match v {
        None => Err(CliError::json(path, "missing")),
        Some(v) => v
            .as_array()
            .ok_or_else(|| CliError::json(path, "expected an array")),
    }
}

fn number(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64()
        .ok_or_else(|| CliError::json(path, "expected a number"))
}

fn complex(v: &Value, path: &str) -> Result<C64, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::json(path, "expected {\"re\": .., \"im\": ..}"))?;
    if let Some(k) = obj.keys().find(|k| *k != "re" && *k != "im") {
        return Err(CliError::json(&format!("{path}.{k}"), "unknown field"));
    }
    let re = obj
        .get("re")
        .ok_or_else(|| CliError::json(&format!("{path}.re"), "missing"))?;
    let im = obj
        .get("im")
        .ok_or_else(|| CliError::json(&format!("{path}.im"), "missing"))?;
    Ok(C64::new(
        number(re, &format!("{path}.re"))?,
        number(im, &format!("{path}.im"))?,
    ))
}

fn ritz_value(v: &Value, path: &str) -> Result<HarmonicRitzValue, CliError> {
    match v {
        Value::String(s) if s == "inf" => Ok(HarmonicRitzValue::Infinite),
        Value::String(s) => Err(CliError::json(
            path,
            format!("unknown value {s:?}, only \"inf\" is allowed"),
        )),
        _ => complex(v, path).map(HarmonicRitzValue::Finite),
    }
}

fn signs(v: Option<&Value>, path: &str, len: usize) -> Result<Option<Vec<C64>>, CliError> {
    let Some(v) = v else { return Ok(None) };
    let list = array(Some(v), path)?;
    if list.len() != len {
        return Err(CliError::json(
            path,
            format!("expected {len} entries, found {}", list.len()),
        ));
    }
    let out = list
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let p = format!("{path}[{i}]");
            let z = complex(z, &p)?;
            if (z.norm() - 1.0).abs() > UNIT_TOL {
                return Err(CliError::json(&p, format!("modulus {} is not 1", z.norm())));
            }
            Ok(z)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(out))
}

/// JSON number, or the strings `"inf"`, `"-inf"`, `"nan"` for non-finite values.
pub fn num(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => json!("nan"),
        None if x > 0.0 => json!("inf"),
        None => json!("-inf"),
    }
}

pub fn complex_value(z: C64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

pub fn ritz_json(v: &HarmonicRitzValue) -> Value {
    match v {
        HarmonicRitzValue::Finite(z) => complex_value(*z),
        HarmonicRitzValue::Infinite => json!("inf"),
    }
}

pub fn tuples_json(steps: &[Vec<HarmonicRitzValue>]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|t| Value::Array(t.iter().map(ritz_json).collect()))
            .collect(),
    )
}

/// Prescription in the schema read by [`parse_prescription`].
pub fn prescription_json(p: &Prescription) -> Value {
    let mut m = Map::new();
    m.insert(
        "residual_norms".into(),
        Value::Array(p.schedule.norms().iter().map(|&x| num(x)).collect()),
    );
    m.insert("harmonic_ritz".into(), tuples_json(p.ritz.steps()));
    if let Some(s) = &p.first_row_signs {
        m.insert(
            "first_row_signs".into(),
            Value::Array(s.iter().map(|&z| complex_value(z)).collect()),
        );
    }
    if let Some(s) = &p.rho_signs {
        m.insert(
            "rho_signs".into(),
            Value::Array(s.iter().map(|&z| complex_value(z)).collect()),
        );
    }
    Value::Object(m)
}

/// Format a float with 17 significant digits; negative zero prints as zero.
pub fn format_float(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// Pretty JSON with sorted keys, two-space indent and every float written
/// with 17 significant digits. Integers stay integers.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (_, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(depth + 1, out);
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(&map[*k], depth + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push('}');
        }
    }
}
