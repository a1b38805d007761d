//! JSON reports, manifests and the CSV results table.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use twinopt_core::generators::RNG_ALGORITHM;
use twinopt_core::RunReport;

use crate::error::{CliError, CliResult};
use crate::formats::write_file;

pub const CSV_HEADER: &str =
    "algo,axis,rep,utility,value_queries,independence_checks,wall_time_s,solution_size";

/// One line of the results table. `wall_time_s` is blank when timing is omitted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub algo: String,
    pub axis: String,
    pub rep: usize,
    pub utility: f64,
    pub value_queries: u64,
    pub independence_checks: u64,
    pub wall_time_s: Option<f64>,
    pub solution_size: usize,
}

impl CsvRow {
    pub fn from_report(report: &RunReport, axis: String, rep: usize, timing: bool) -> Self {
        CsvRow {
            algo: report.algorithm.clone(),
            axis,
            rep,
            utility: report.f_star,
            value_queries: report.value_queries,
            independence_checks: report.independence_checks,
            wall_time_s: timing.then_some(report.wall_time_s),
            solution_size: report.s_star.len(),
        }
    }
}

pub fn csv_string(rows: &[CsvRow]) -> CliResult<String> {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::usage(format!("csv: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::usage(format!("csv: {e}")))?;
    let mut text = String::from_utf8(bytes).expect("csv output is utf-8");
    if rows.is_empty() {
        text = format!("{CSV_HEADER}\n");
    }
    Ok(text)
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> CliResult<String> {
    write_file(path, &csv_string(rows)?)
}

/// Full JSON form of a solver run plus the context needed to reproduce it.
pub fn run_json(report: &RunReport, context: Value, timing: bool) -> Value {
    let mut value = serde_json::to_value(report).expect("reports serialize");
    let map = value.as_object_mut().expect("report is an object");
    if !timing {
        map.remove("wall_time_s");
    }
    map.insert("solution_size".into(), json!(report.s_star.len()));
    map.insert("rng".into(), json!(RNG_ALGORITHM));
    map.insert("context".into(), context);
    value
}

/// What a command read, wrote and was asked to do.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub rng: &'static str,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            command: command.into(),
            parameters: BTreeMap::new(),
            seed: None,
            rng: RNG_ALGORITHM,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key.into(),
            serde_json::to_value(value).expect("parameters serialize"),
        );
        self
    }

    pub fn output(&mut self, path: &Path, hash: String) {
        self.outputs.insert(path.display().to_string(), hash);
    }

    pub fn to_json(&self) -> String {
        pretty(&serde_json::to_value(self).expect("manifest serializes"))
    }
}

pub fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    text
}
