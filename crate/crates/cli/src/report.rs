use std::io::Write;

use serde_json::{Map, Value};

/// A finished command: the report and whether its answer is `Open`.
pub struct Report {
    pub body: Value,
    pub unsettled: bool,
}

impl Report {
    pub fn settled(body: Value) -> Self {
        Report { body, unsettled: false }
    }
}

/// Anything that makes the input unusable; reported with exit status 2.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
}

impl Failure {
    pub fn new(message: impl Into<String>) -> Self {
        Failure { message: message.into() }
    }
}

impl From<paracalc::Error> for Failure {
    fn from(e: paracalc::Error) -> Self {
        Failure::new(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(e.to_string())
    }
}

/// `inf` for infinite exponents, a plain number otherwise.
pub fn ext(v: f64) -> Value {
    if v.is_infinite() {
        Value::from("inf")
    } else {
        Value::from(v)
    }
}

pub fn write_json(body: &Value) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, body)?;
    writeln!(out)
}

/// The `rows` table when the report has one, otherwise a single row of all
/// scalar leaves keyed by their dotted path.
pub fn write_csv(body: &Value) -> std::io::Result<()> {
    let rows: Vec<Map<String, Value>> = match body.get("rows").and_then(Value::as_array) {
        Some(rows) => rows.iter().map(flatten).collect(),
        None => vec![flatten(body)],
    };
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for key in row.keys() {
            if !header.contains(key) {
                header.push(key.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    w.write_record(&header)?;
    for row in &rows {
        w.write_record(header.iter().map(|k| row.get(k).map(cell).unwrap_or_default()))?;
    }
    w.flush()
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(v: &Value) -> Map<String, Value> {
    let mut out = Map::new();
    flatten_into(String::new(), v, &mut out);
    out
}

fn flatten_into(prefix: String, v: &Value, out: &mut Map<String, Value>) {
    let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if prefix.is_empty() && k == "rows" {
                    continue;
                }
                flatten_into(join(k), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.insert(prefix, Value::from(items.iter().map(cell).collect::<Vec<_>>().join(";")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten_into(join(&i.to_string()), x, out);
            }
        }
        scalar => {
            out.insert(prefix, scalar.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_leaves() {
        let m = flatten(&json!({"a": {"b": 1, "c": [1, 2]}, "d": [{"e": "x"}], "rows": [1]}));
        assert_eq!(m.get("a.b"), Some(&json!(1)));
        assert_eq!(m.get("a.c"), Some(&json!("1;2")));
        assert_eq!(m.get("d.0.e"), Some(&json!("x")));
        assert!(!m.contains_key("rows"));
    }
}
