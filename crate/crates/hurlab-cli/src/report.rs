//! Reports: config echo, version, a table of results, and a SHA-256
//! fingerprint of everything that should reproduce.
//!
//! JSON schema 1: `{tool, version, schema, experiment, config, summary,
//! columns, rows, fingerprint, wall_clock_seconds?}`. The CSV form carries the
//! same metadata as leading `# key: value` lines before the table.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;
use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Serialize, Debug)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: u32,
    pub experiment: &'static str,
    pub config: Value,
    pub summary: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

/// Results of one experiment before the metadata is attached.
#[derive(Debug, Default)]
pub struct Table {
    pub summary: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { summary: Map::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }
}

impl Report {
    pub fn new(experiment: &'static str, config: Value, table: Table, wall_clock_seconds: Option<f64>) -> Self {
        let payload = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
            "summary": table.summary,
            "columns": table.columns,
            "rows": table.rows,
        });
        let digest = Sha256::digest(payload.to_string().as_bytes());
        let fingerprint = digest.iter().map(|b| format!("{b:02x}")).collect();
        Report {
            tool: "hurlab",
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA,
            experiment,
            config,
            summary: table.summary,
            columns: table.columns,
            rows: table.rows,
            fingerprint,
            wall_clock_seconds,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self).expect("reports serialize") + "\n"),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut head = format!(
            "# tool: hurlab {}\n# schema: {}\n# experiment: {}\n# config: {}\n# summary: {}\n# fingerprint: {}\n",
            self.version,
            self.schema,
            self.experiment,
            self.config,
            Value::Object(self.summary.clone()),
            self.fingerprint
        );
        if let Some(t) = self.wall_clock_seconds {
            head.push_str(&format!("# wall_clock_seconds: {t:.3}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(cell)).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(head + &String::from_utf8(body).expect("csv output is UTF-8"))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
