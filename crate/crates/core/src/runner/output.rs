use std::io::Write;

use serde_json::{json, Map, Value as Json};

use super::config::Format;

/// One cell of a result row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(v) if v.is_nan() => "nan".into(),
            Value::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            // 17 significant digits always round-trip; `+ 0.0` drops the sign of zero
            Value::Float(v) => format!("{:.16e}", v + 0.0),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(i) => json!(i),
            Value::Float(v) => serde_json::Number::from_f64(v + 0.0).map_or(Json::Null, Json::Number),
        }
    }
}

/// Rows of one sweep plus the metadata that reproduces it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// `key=value` pairs: the effective configuration, then `info.*` entries.
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl SweepResult {
    pub fn write<W: Write>(&self, format: Format, mut w: W) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                for (k, v) in &self.metadata {
                    writeln!(w, "# {k}={v}")?;
                }
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Value::csv).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let metadata: Map<String, Json> =
                    self.metadata.iter().map(|(k, v)| (k.clone(), Json::String(v.clone()))).collect();
                let rows: Vec<Json> =
                    self.rows.iter().map(|r| Json::Array(r.iter().map(Value::json).collect())).collect();
                let doc = json!({ "metadata": metadata, "columns": self.columns, "rows": rows });
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    pub fn to_string(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("output is UTF-8")
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Value::Int(v) => v as f64,
                    Value::Float(v) => v,
                })
                .collect(),
        )
    }
}
