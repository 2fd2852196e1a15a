use serde_json::{json, Map, Value};

use crate::RunConfig;

/// Output of one subcommand: JSON fields, a plot-ready table and the exit code.
#[derive(Debug, Default)]
pub struct Report {
    pub body: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub exit: u8,
    pub error: Option<String>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Report::default()
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.body.insert(key.to_string(), value.into());
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    /// A failed verification exits with 1.
    pub fn verdict(&mut self, passed: bool) -> &mut Self {
        self.set("passed", passed);
        if !passed && self.exit == 0 {
            self.exit = 1;
        }
        self
    }

    pub fn failure(exit: u8, message: String) -> Self {
        Report {
            exit,
            error: Some(message),
            ..Report::default()
        }
    }
}

fn status(r: &Report) -> &'static str {
    match (r.exit, &r.error) {
        (0, _) => "ok",
        (1, None) => "failed",
        _ => "error",
    }
}

pub fn json(r: &Report, config: &RunConfig) -> String {
    let mut out = Map::new();
    out.insert("schema".into(), json!(1));
    out.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    out.insert("status".into(), json!(status(r)));
    if let Some(e) = &r.error {
        out.insert("error".into(), json!(e));
    }
    for (k, v) in &r.body {
        out.insert(k.clone(), v.clone());
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(out)).expect("report serializes");
    text.push('\n');
    text
}

fn cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The config as a `#` comment, then a header and the rows.
pub fn csv(r: &Report, config: &RunConfig) -> String {
    let mut text = format!(
        "# schema 1 {}\n",
        serde_json::to_string(config).expect("config serializes")
    );
    if let Some(e) = &r.error {
        text.push_str(&format!("# error: {e}\n"));
        return text;
    }
    text.push_str(
        &r.columns
            .iter()
            .map(|c| cell(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    text.push('\n');
    for row in &r.rows {
        text.push_str(&row.iter().map(|c| cell(c)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    text
}
