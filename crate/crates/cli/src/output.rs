use std::fmt::Display;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flag values echoed at the top of every output, in insertion order.
#[derive(Debug, Default)]
pub struct Config {
    entries: Vec<(String, String)>,
}

impl Config {
    pub fn new(subcommand: &str) -> Self {
        let mut c = Self::default();
        c.set("subcommand", subcommand);
        c
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    fn comment(&self) -> String {
        let pairs: Vec<String> = self.entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# config: {}\n", pairs.join(" "))
    }

    fn json(&self) -> Value {
        let map: Map<String, Value> = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        Value::Object(map)
    }
}

/// A finished result: CSV body (header included) and the JSON payload.
pub struct Rendered {
    pub config: Config,
    pub csv: String,
    pub json: Value,
}

impl Rendered {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.config.comment();
                out.push_str(&self.csv);
                out
            }
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("config".into(), self.config.json());
                doc.insert("result".into(), self.json.clone());
                let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json value serializes");
                text.push('\n');
                text
            }
        }
    }
}

/// Comma-joined row of `sig6` numbers.
pub fn row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|&v| opconv::format::sig6(v)).collect();
    cells.join(",")
}
