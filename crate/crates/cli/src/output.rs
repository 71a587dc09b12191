use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};
use siegel_core::exactnum::{format_significant, rational_string, LogMagnitude};

/// Rendered report plus the exit code it implies.
pub struct Rendered {
    pub body: String,
    pub code: i32,
}

/// Pretty JSON, with `generated_at` (Unix seconds) first unless suppressed.
pub fn json(command: &str, value: Value, timestamp: bool) -> String {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::String(command.into()));
    if timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        obj.insert("generated_at".into(), Value::from(secs));
    }
    match value {
        Value::Object(m) => obj.extend(m),
        other => {
            obj.insert("result".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn decimal(v: &LogMagnitude) -> String {
    format_significant(&v.midpoint(), 15)
}

/// Exact endpoints and 15-digit decimals.
pub fn interval_json(v: &LogMagnitude) -> Value {
    serde_json::json!({
        "lo": rational_string(v.lo()),
        "hi": rational_string(v.hi()),
        "lo_decimal": format_significant(v.lo(), 15),
        "hi_decimal": format_significant(v.hi(), 15),
    })
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
