//! The uniform result record printed by every subcommand.

use serde::Serialize;
use serde_json::{Map, Value};

/// Verdict for commands whose only outcome is a computed value.
pub const OK: &str = "ok";

/// One command's outcome. The structured form serializes every field; the
/// text form prints `verdict: ...` (unless the verdict is [`OK`]) followed by
/// the human-readable body.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub verdict: String,
    pub data: Value,
    pub assertions_checked: Vec<&'static str>,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: Map::new(),
            verdict: OK.to_string(),
            data: Value::Null,
            assertions_checked: Vec::new(),
            text: String::new(),
        }
    }

    pub fn input(mut self, name: &str, canonical: impl ToString) -> Self {
        self.inputs
            .insert(name.to_string(), Value::String(canonical.to_string()));
        self
    }

    pub fn verdict(mut self, verdict: impl Into<String>) -> Self {
        self.verdict = verdict.into();
        self
    }

    pub fn data(mut self, data: Value) -> Self {
        self.data = data;
        self
    }

    pub fn assertions(mut self, checked: &[&'static str]) -> Self {
        self.assertions_checked = checked.to_vec();
        self
    }

    pub fn text(mut self, text: impl Into<String>) -> Self {
        self.text = text.into();
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        if self.verdict != OK {
            out.push_str(&format!("verdict: {}\n", self.verdict));
        }
        out.push_str(&self.text);
        if !out.ends_with('\n') {
            out.push('\n');
        }
        out
    }
}

/// `key: value` lines.
pub fn lines<'a>(pairs: impl IntoIterator<Item = (&'a str, String)>) -> String {
    pairs
        .into_iter()
        .map(|(k, v)| format!("{k}: {v}\n"))
        .collect()
}
