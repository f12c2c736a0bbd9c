use serde::Serialize;
use serde_json::Value;

use crate::format::FORMAT_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Refuted,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Refuted => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format: u32,
    pub command: String,
    pub params: Value,
    pub status: Status,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    /// Human-readable lines for the text rendering.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Report {
        Report { format: FORMAT_VERSION, command: command.to_string(), params, status: Status::Ok, results: Value::Null, timing_ms: None, lines: Vec::new() }
    }

    pub fn error(command: &str, params: Value, message: impl Into<String>) -> Report {
        let message = message.into();
        let mut r = Report::new(command, params);
        r.status = Status::Error;
        r.lines.push(format!("error: {message}"));
        r.results = serde_json::json!({ "error": message });
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.command);
        if let Value::Object(p) = &self.params {
            for (k, v) in p {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!("status: {}\n", serde_json::to_value(self.status).expect("status").as_str().unwrap_or_default()));
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("time: {t:.3} ms\n"));
        }
        out
    }
}
