//! Report emission: versioned JSON with fixed key order and rounded floats,
//! and plain CSV.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "cuspgamma/1";

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

/// Wraps `body` (which must serialize to an object) as
/// `{"schema": .., "command": .., ..body}` and prints it.
pub fn emit_json<T: Serialize>(command: &str, body: &T) -> io::Result<()> {
    let mut out = Map::new();
    out.insert("schema".into(), Value::from(SCHEMA));
    out.insert("command".into(), Value::from(command));
    match serde_json::to_value(body)? {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("result".into(), other);
        }
    }
    let text = serde_json::to_string_pretty(&normalize(Value::Object(out)))?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{text}")
}

pub fn emit_csv(header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{}", header.join(","))?;
    for row in rows {
        writeln!(stdout, "{}", row.join(","))?;
    }
    Ok(())
}

/// Float cell with 12 significant digits in scientific notation.
pub fn cell(x: f64) -> String {
    format!("{x:.11e}")
}
