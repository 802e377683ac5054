//! Record rendering. Keys keep insertion order; exact rationals arrive here
//! already as strings.

use serde_json::{Map, Value};

pub type Record = Vec<(String, Value)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Tsv,
}

#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<Record>,
    /// Summary fields printed after the records.
    pub footer: Record,
    /// A tolerance or table check did not pass.
    pub failed: bool,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

fn object(rec: &Record) -> Value {
    let mut m = Map::new();
    for (k, v) in rec {
        m.insert(k.clone(), v.clone());
    }
    Value::Object(m)
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Json => {
                for rec in &self.records {
                    out.push_str(&object(rec).to_string());
                    out.push('\n');
                }
                if !self.footer.is_empty() {
                    out.push_str(&object(&self.footer).to_string());
                    out.push('\n');
                }
            }
            Format::Tsv => {
                if let Some(first) = self.records.first() {
                    out.push_str(&first.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join("\t"));
                    out.push('\n');
                }
                for rec in &self.records {
                    out.push_str(&rec.iter().map(|(_, v)| cell(v)).collect::<Vec<_>>().join("\t"));
                    out.push('\n');
                }
                for (k, v) in &self.footer {
                    out.push_str(&format!("# {k}\t{}\n", cell(v)));
                }
            }
            Format::Human => {
                if let Some(first) = self.records.first() {
                    let headers: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
                    let rows: Vec<Vec<String>> =
                        self.records.iter().map(|r| r.iter().map(|(_, v)| cell(v)).collect()).collect();
                    let widths: Vec<usize> = (0..headers.len())
                        .map(|i| rows.iter().map(|r| r.get(i).map_or(0, |c| c.chars().count())).fold(headers[i].len(), usize::max))
                        .collect();
                    let line = |cells: Vec<&str>| {
                        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
                    };
                    out.push_str(&line(headers.clone()));
                    out.push('\n');
                    for r in &rows {
                        out.push_str(&line(r.iter().map(String::as_str).collect()));
                        out.push('\n');
                    }
                }
                for (k, v) in &self.footer {
                    out.push_str(&format!("{k}: {}\n", cell(v)));
                }
            }
        }
        out
    }

    pub fn print(&self, format: Format) {
        print!("{}", self.render(format));
    }
}
