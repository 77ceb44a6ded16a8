use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::args::Format;

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn rational(num: &str, den: &str) -> Value {
    json!({ "num": num, "den": den })
}

#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub command: &'static str,
    pub summary: Map<String, Value>,
    pub table: Option<Table>,
    /// Preformatted text shown by the ascii format.
    pub diagram: Option<String>,
    pub violations: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, ..Default::default() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    /// Records `value` under `key` and notes a violation when it exceeds `tol`.
    pub fn check(&mut self, what: String, value: f64, tol: f64) {
        if !(value <= tol) {
            self.violations.push(format!("{what}: {value:e} > {tol:e}"));
        }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn status(&self) -> &'static str {
        if self.ok() {
            "ok"
        } else {
            "tolerance-violation"
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Ascii => self.ascii(),
        }
    }

    fn json(&self) -> String {
        let mut top = self.summary.clone();
        top.insert("command".into(), self.command.into());
        top.insert("status".into(), self.status().into());
        top.insert("violations".into(), self.violations.clone().into());
        if let Some(t) = &self.table {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Object(t.headers.iter().map(|h| h.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            top.insert("rows".into(), rows.into());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json values serialize");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        };
        match &self.table {
            Some(t) => {
                // complex columns are split into re and im
                let split: Vec<bool> = (0..t.headers.len())
                    .map(|c| t.rows.iter().any(|r| is_complex(&r[c])))
                    .collect();
                let mut header = Vec::new();
                for (h, &sp) in t.headers.iter().zip(&split) {
                    if sp {
                        header.push(format!("{h}-re"));
                        header.push(format!("{h}-im"));
                    } else {
                        header.push(h.to_string());
                    }
                }
                w.write_record(&header).expect("in-memory csv");
                for row in &t.rows {
                    let mut rec = Vec::new();
                    for (v, &sp) in row.iter().zip(&split) {
                        if sp {
                            rec.push(v.get("re").map(cell).unwrap_or_default());
                            rec.push(v.get("im").map(cell).unwrap_or_default());
                        } else {
                            rec.push(cell(v));
                        }
                    }
                    w.write_record(&rec).expect("in-memory csv");
                }
            }
            None => {
                w.write_record(["key", "value"]).expect("in-memory csv");
                for (k, v) in &self.summary {
                    w.write_record([k.clone(), cell(v)]).expect("in-memory csv");
                }
                w.write_record(["status".to_string(), self.status().to_string()]).expect("in-memory csv");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    fn ascii(&self) -> String {
        let mut out = String::new();
        if let Some(d) = &self.diagram {
            out.push_str(d);
            out.push('\n');
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k}: {v}");
        }
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| r.iter().map(ascii_cell).collect())
                .collect();
            let widths: Vec<usize> = (0..t.headers.len())
                .map(|c| cells.iter().map(|r| r[c].len()).chain([t.headers[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |row: Vec<&str>| {
                row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
            };
            let _ = writeln!(out, "{}", line(t.headers.clone()));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        let _ = writeln!(out, "status: {}", self.status());
        for v in &self.violations {
            let _ = writeln!(out, "  {v}");
        }
        out
    }
}

fn is_complex(v: &Value) -> bool {
    matches!(v, Value::Object(m) if m.contains_key("re") && m.contains_key("im"))
}

fn ascii_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("re") => {
            let (re, im) = (m["re"].as_f64().unwrap_or(f64::NAN), m["im"].as_f64().unwrap_or(f64::NAN));
            format!("{re:.12e}{}{:.12e}i", if im < 0.0 { "-" } else { "+" }, im.abs())
        }
        Value::Object(m) if m.contains_key("num") => match (m["num"].as_str(), m["den"].as_str()) {
            (Some(n), Some("1")) => n.to_string(),
            (Some(n), Some(d)) => format!("{n}/{d}"),
            _ => v.to_string(),
        },
        other => other.to_string(),
    }
}

pub fn emit(text: &str, out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
