//! Key-value reports and fixed-precision number formatting.

use serde_json::{Map, Value};

use crate::config::OutputFormat;

/// 12 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

/// `x` rounded to 12 significant digits, for JSON output.
pub fn round12(x: f64) -> Value {
    if x.is_finite() {
        Value::from(fmt_f64(x).parse::<f64>().expect("formatted float parses"))
    } else {
        Value::Null
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Int(u64),
    Float(f64),
    Text(String),
    Flag(bool),
}

/// Ordered list of named values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Field)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn int(&mut self, key: &str, v: u64) -> &mut Self {
        self.entries.push((key.into(), Field::Int(v)));
        self
    }

    pub fn float(&mut self, key: &str, v: f64) -> &mut Self {
        self.entries.push((key.into(), Field::Float(v)));
        self
    }

    pub fn text(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), Field::Text(v.into())));
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.entries.push((key.into(), Field::Flag(v)));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Field::Float(x) => Some(*x),
            Field::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = String::from("key,value\n");
                for (k, v) in &self.entries {
                    let v = match v {
                        Field::Int(i) => i.to_string(),
                        Field::Float(x) => fmt_f64(*x),
                        Field::Text(s) => s.clone(),
                        Field::Flag(b) => b.to_string(),
                    };
                    out.push_str(&format!("{k},{v}\n"));
                }
                out
            }
            OutputFormat::Json => {
                let mut map = Map::new();
                for (k, v) in &self.entries {
                    let v = match v {
                        Field::Int(i) => Value::from(*i),
                        Field::Float(x) => round12(*x),
                        Field::Text(s) => Value::from(s.clone()),
                        Field::Flag(b) => Value::from(*b),
                    };
                    map.insert(k.clone(), v);
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json");
                s.push('\n');
                s
            }
        }
    }
}
