//! Report assembly and JSON/CSV rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use qbrach_core::{ComplexMatrix2, ComplexMatrix4, ComplexScalar, StateVector, StateVector4};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Column-major numeric table.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        let columns: Map<String, Value> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, name)| {
                let col: Vec<Value> = self.rows.iter().map(|r| num(r[k])).collect();
                (name.to_string(), Value::Array(col))
            })
            .collect();
        Value::Object(columns)
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub checks: BTreeMap<String, Check>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            outputs: Map::new(),
            checks: BTreeMap::new(),
            table: None,
        }
    }

    pub fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.insert(key.into(), value);
        self
    }

    pub fn output(&mut self, key: &str, value: Value) -> &mut Self {
        self.outputs.insert(key.into(), value);
        self
    }

    /// Records `value <= tolerance`.
    pub fn check_below(&mut self, name: &str, value: f64, tolerance: f64) -> &mut Self {
        self.checks.insert(
            name.into(),
            Check {
                value,
                tolerance,
                pass: value <= tolerance,
            },
        );
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            Format::Json => {
                let mut outputs = self.outputs.clone();
                if let Some(table) = &self.table {
                    outputs.insert("table".into(), table.to_json());
                }
                let doc = json!({
                    "command": self.command,
                    "config": config.to_json(),
                    "inputs": self.inputs,
                    "outputs": outputs,
                    "checks": self.checks,
                });
                let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
                text.push('\n');
                text
            }
            Format::Csv => match &self.table {
                Some(table) => table.to_csv(),
                None => self.flat_csv(),
            },
        }
    }

    /// `key,value` lines for reports without a natural table.
    fn flat_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        let mut rows = Vec::new();
        flatten("", &Value::Object(self.outputs.clone()), &mut rows);
        for (name, check) in &self.checks {
            rows.push((format!("checks.{name}.value"), num(check.value)));
            rows.push((format!("checks.{name}.pass"), Value::Bool(check.pass)));
        }
        for (key, value) in rows {
            let cell = match value {
                Value::Number(n) => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
                Value::String(s) => s,
                Value::Null => String::new(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{key},{cell}");
        }
        out
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, Value)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (k, v) in items.iter().enumerate() {
                flatten(&join(&k.to_string()), v, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

/// Finite numbers as JSON numbers, anything else as `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex(z: ComplexScalar) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

pub fn vector(v: &StateVector) -> Value {
    Value::Array(v.iter().map(|z| complex(*z)).collect())
}

pub fn vector4(v: &StateVector4) -> Value {
    Value::Array(v.iter().map(|z| complex(*z)).collect())
}

pub fn matrix2(m: &ComplexMatrix2) -> Value {
    Value::Array(
        (0..2)
            .map(|i| Value::Array((0..2).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix4(m: &ComplexMatrix4) -> Value {
    Value::Array(
        (0..4)
            .map(|i| Value::Array((0..4).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}
