use anyhow::Result;
use serde_json::Value;

/// Scalar leaf as written in JSON, strings unquoted.
fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `(dotted.path, value)` pairs for every leaf, in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if path.is_empty() {
                k.to_string()
            } else {
                format!("{path}.{k}")
            }
        };
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, x) in map {
                    walk(x, join(k), out);
                }
            }
            Value::Array(items) if !items.is_empty() => {
                for (i, x) in items.iter().enumerate() {
                    walk(x, join(&i.to_string()), out);
                }
            }
            Value::Object(_) => out.push((path, "{}".to_string())),
            Value::Array(_) => out.push((path, "[]".to_string())),
            leaf => out.push((path, scalar(leaf))),
        }
    }
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

pub fn json(doc: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(doc)? + "\n")
}

/// Human report: verdict lines first, then every leaf of the document.
pub fn human(doc: &Value, failures: &[String]) -> String {
    let mut out = String::new();
    if let Some(checks) = doc["results"]["checks"].as_array() {
        for c in checks {
            let tag = if c["pass"].as_bool() == Some(true) {
                "PASS"
            } else {
                "FAIL"
            };
            out.push_str(&format!(
                "{tag}  {}: {} (expected {}, tolerance {})\n",
                scalar(&c["title"]),
                scalar(&c["value"]),
                scalar(&c["expected"]),
                scalar(&c["tolerance"])
            ));
        }
    }
    if let Some(items) = doc["discrepancies"].as_array() {
        for d in items {
            out.push_str(&format!(
                "DISCREPANCY  {}: printed {}, computed {}\n",
                scalar(&d["title"]),
                scalar(&d["printed"]),
                scalar(&d["computed"])
            ));
        }
    }
    for f in failures {
        out.push_str(&format!("FAILED  {f}\n"));
    }
    if !out.is_empty() {
        out.push('\n');
    }
    for (k, v) in flatten(doc) {
        out.push_str(&format!("{k}: {v}\n"));
    }
    out
}

pub fn csv(header: &[String], rows: &[Vec<Value>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(scalar))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
