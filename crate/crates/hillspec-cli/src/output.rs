use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use hillspec::C64;
use serde_json::{json, Map, Value};

use crate::config::Format;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    /// Split into `<name>_re`, `<name>_im` in CSV; `{re, im}` in JSON.
    Complex(C64),
}

/// 17 significant digits, so values round-trip exactly.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn json_real(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn complex_json(z: C64) -> Value {
    json!({ "re": json_real(z.re), "im": json_real(z.im) })
}

pub struct Table {
    pub columns: Vec<&'static str>,
    /// Columns holding [`Cell::Complex`], so the CSV header is right even without rows.
    pub complex: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, complex: Vec::new(), rows: Vec::new() }
    }

    pub fn complex(mut self, cols: &[&'static str]) -> Self {
        self.complex.extend_from_slice(cols);
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        debug_assert!(self
            .columns
            .iter()
            .zip(&row)
            .all(|(c, v)| matches!(v, Cell::Complex(_)) == self.complex.contains(c)));
        self.rows.push(row);
    }

    fn csv_header(&self) -> String {
        let mut names = Vec::new();
        for c in &self.columns {
            if self.complex.contains(c) {
                names.push(format!("{c}_re"));
                names.push(format!("{c}_im"));
            } else {
                names.push((*c).to_string());
            }
        }
        names.join(",")
    }

    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{}", self.csv_header())?;
        for row in &self.rows {
            let mut fields = Vec::with_capacity(row.len() + 2);
            for cell in row {
                match cell {
                    Cell::Real(x) => fields.push(fmt_real(*x)),
                    Cell::Int(n) => fields.push(n.to_string()),
                    Cell::Text(s) => fields.push(s.clone()),
                    Cell::Complex(z) => {
                        fields.push(fmt_real(z.re));
                        fields.push(fmt_real(z.im));
                    }
                }
            }
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self, command: &str, params: Value) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Real(x) => json_real(*x),
                        Cell::Int(n) => json!(n),
                        Cell::Text(s) => json!(s),
                        Cell::Complex(z) => complex_json(*z),
                    };
                    m.insert((*name).to_string(), v);
                }
                Value::Object(m)
            })
            .collect();
        json!({ "schema_version": SCHEMA_VERSION, "command": command, "params": params, "rows": rows })
    }

    pub fn emit(&self, command: &str, params: Value, format: Format, path: Option<&Path>) -> anyhow::Result<()> {
        with_writer(path, |w| match format {
            Format::Csv => self.write_csv(w),
            Format::Json => write_json(w, &self.to_json(command, params)),
        })
    }
}

pub fn write_json<W: Write + ?Sized>(w: &mut W, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)
}

pub fn with_writer(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
