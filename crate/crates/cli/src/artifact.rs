use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, Format};
use crate::CliError;

/// One named invariant and whether this run upheld it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub invariant: String,
    pub passed: bool,
    pub detail: String,
}

/// Tabular result of one command. Column schemas are fixed per command.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifact {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Map<String, Value>,
    pub checks: Vec<Check>,
    /// Sampled rather than exact.
    pub approximate: bool,
    /// Replaces the rendered table, as for character-table files.
    pub document: Option<Value>,
}

impl Artifact {
    pub fn new(columns: &[&'static str]) -> Self {
        Artifact { columns: columns.to_vec(), ..Default::default() }
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).expect("summary values serialize"));
    }

    pub fn check(&mut self, invariant: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { invariant: invariant.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn render(&self, config: &ExperimentConfig) -> Result<String, CliError> {
        let metadata = metadata(self, config)?;
        if let Some(doc) = &self.document {
            let mut doc = doc.clone();
            if let Value::Object(map) = &mut doc {
                map.insert("metadata".into(), metadata);
            }
            return Ok(serde_json::to_string_pretty(&doc)? + "\n");
        }
        match config.format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                    .collect();
                Ok(serde_json::to_string_pretty(&json!({ "metadata": metadata, "rows": rows }))? + "\n")
            }
            Format::Csv => self.render_csv(&metadata),
        }
    }

    fn render_csv(&self, metadata: &Value) -> Result<String, CliError> {
        let mut out = String::new();
        for (key, value) in metadata.as_object().expect("metadata is an object") {
            match (key.as_str(), value) {
                ("summary", Value::Object(summary)) => {
                    for (k, v) in summary {
                        out.push_str(&format!("# summary.{k}: {}\n", scalar(v)));
                    }
                }
                ("checks", Value::Array(checks)) => {
                    for c in checks {
                        let status = if c["passed"] == Value::Bool(true) { "pass" } else { "FAIL" };
                        out.push_str(&format!("# check {}: {status} ({})\n", scalar(&c["invariant"]), scalar(&c["detail"])));
                    }
                }
                _ => out.push_str(&format!("# {key}: {}\n", scalar(value))),
            }
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(scalar)).map_err(csv_error)?;
        }
        let body = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
        Ok(out)
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn metadata(artifact: &Artifact, config: &ExperimentConfig) -> Result<Value, CliError> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("wordmaplab"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("core_version".into(), json!(wordmaplab::VERSION));
    m.insert("command".into(), json!(config.command.name()));
    m.insert("config".into(), serde_json::to_value(config)?);
    m.insert("seed".into(), json!(config.seed));
    if config.timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        m.insert("timestamp_unix".into(), json!(secs));
    }
    m.insert("approximate".into(), json!(artifact.approximate));
    m.insert("summary".into(), Value::Object(artifact.summary.clone()));
    m.insert("checks".into(), serde_json::to_value(&artifact.checks)?);
    Ok(Value::Object(m))
}
