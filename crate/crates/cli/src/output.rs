use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// A command result: the JSON payload, plus a flat table and notes for the
/// csv and md renderings.
pub struct Document {
    pub json: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
    md_hidden: Vec<usize>,
}

impl Document {
    pub fn new(json: Value) -> Self {
        Document { json, headers: Vec::new(), rows: Vec::new(), notes: Vec::new(), md_hidden: Vec::new() }
    }

    pub fn table(mut self, headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.headers = headers.iter().map(|h| h.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Leaves a column out of the md rendering.
    pub fn hide_in_md(mut self, header: &str) -> Self {
        if let Some(i) = self.headers.iter().position(|h| h == header) {
            self.md_hidden.push(i);
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("plain JSON");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
            }
            Format::Md => {
                let mut s = String::new();
                for n in &self.notes {
                    s.push_str(&format!("> {n}\n\n"));
                }
                let shown = |r: &[String]| -> Vec<String> {
                    r.iter().enumerate().filter(|(i, _)| !self.md_hidden.contains(i)).map(|(_, c)| c.clone()).collect()
                };
                let headers = shown(&self.headers);
                s.push_str(&format!("| {} |\n", headers.join(" | ")));
                s.push_str(&format!("|{}\n", "---|".repeat(headers.len())));
                for r in &self.rows {
                    s.push_str(&format!("| {} |\n", shown(r).join(" | ")));
                }
                s
            }
        }
    }
}
