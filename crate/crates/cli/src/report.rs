//! Report envelopes, CSV flattening and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// What a command produced.
pub struct Outcome {
    /// One line for standard output.
    pub headline: String,
    pub result: Value,
    /// Command-specific table; the generic `key,value` flattening is used
    /// when absent.
    pub csv: Option<String>,
}

impl Outcome {
    pub fn new<T: Serialize>(headline: impl Into<String>, result: &T) -> Self {
        Self { headline: headline.into(), result: to_value(result), csv: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn envelope(command: &str, config: Value, result: &Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": result,
    })
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, rows)),
        Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, rows)),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(format: Format, command: &str, config: Value, outcome: &Outcome) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(command, config, &outcome.result))
                .expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# schema_version={SCHEMA_VERSION}");
            let _ = writeln!(out, "# command={command}");
            let _ = writeln!(out, "# config={config}");
            match &outcome.csv {
                Some(table) => out.push_str(table),
                None => {
                    let mut rows = Vec::new();
                    flatten("", &outcome.result, &mut rows);
                    out.push_str("key,value\n");
                    for (k, v) in rows {
                        let _ = writeln!(out, "{},{}", csv_field(&k), csv_field(&v));
                    }
                }
            }
            out
        }
    }
}

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial report.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattening() {
        let out = Outcome::new("x", &json!({"a": 1, "b": [true, "c,d"], "n": null}));
        let csv = render(Format::Csv, "t", json!({}), &out);
        assert!(csv.ends_with("key,value\na,1\nb.0,true\nb.1,\"c,d\"\nn,\n"));
        assert!(csv.starts_with("# schema_version=1\n"));
    }

    #[test]
    fn json_envelope() {
        let out = Outcome::new("x", &json!({"v": 2}));
        let s = render(Format::Json, "t", json!({"seed": 0}), &out);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["result"]["v"], 2);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
