//! Deterministic result writers: CSV tables, JSON-lines streams and
//! two-column plot data. Floats are printed with a fixed 17-significant-
//! digit scientific format so identical runs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn create(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write(&self, name: &str, contents: &str) -> io::Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, contents)?;
        Ok(p)
    }

    pub fn write_bytes(&self, name: &str, contents: &[u8]) -> io::Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, contents)?;
        Ok(p)
    }
}

/// CSV with a header row; all cells stringified by the caller.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self {
            buf,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.columns, "CSV row arity mismatch");
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// One JSON object per line; only the value shapes used by the reports.
pub struct JsonLines {
    buf: String,
}

#[derive(Debug, Clone)]
pub enum JsonValue {
    Num(f64),
    Int(u64),
    Str(String),
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

impl JsonLines {
    pub fn new() -> Self {
        Self { buf: String::new() }
    }

    pub fn record(&mut self, fields: &[(&str, JsonValue)]) {
        let cells: Vec<String> = fields
            .iter()
            .map(|(k, v)| {
                let rendered = match v {
                    JsonValue::Num(x) => {
                        if x.is_finite() {
                            fmt_f64(*x)
                        } else {
                            format!("\"{x}\"")
                        }
                    }
                    JsonValue::Int(i) => i.to_string(),
                    JsonValue::Str(s) => format!("\"{}\"", escape_json(s)),
                };
                format!("\"{}\":{rendered}", escape_json(k))
            })
            .collect();
        self.buf.push('{');
        self.buf.push_str(&cells.join(","));
        self.buf.push_str("}\n");
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Two-column whitespace-separated plot data.
pub fn plot_data(rows: &[(f64, f64)]) -> String {
    let mut buf = String::new();
    for (x, y) in rows {
        buf.push_str(&fmt_f64(*x));
        buf.push(' ');
        buf.push_str(&fmt_f64(*y));
        buf.push('\n');
    }
    buf
}

/// File-name-safe rendering of a polynomial string.
pub fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' => c,
            '^' => 'p',
            '+' => 'a',
            '-' => 'm',
            '.' => '_',
            _ => '_',
        })
        .collect()
}
