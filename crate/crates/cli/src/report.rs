//! Structured command reports: deterministic, renderable as text or JSON.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Serialize)]
pub struct CommandReport {
    pub index: usize,
    pub op: String,
    pub target: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub records: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub messages: Vec<String>,
}

impl CommandReport {
    pub fn new(index: usize, op: &str, target: &str) -> Self {
        CommandReport {
            index,
            op: op.to_string(),
            target: target.to_string(),
            outcome: Outcome::Info,
            records: BTreeMap::new(),
            messages: Vec::new(),
        }
    }

    pub fn record(&mut self, key: &str, value: impl Serialize) {
        self.records.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable record"),
        );
    }

    pub fn note(&mut self, message: impl Into<String>) {
        self.messages.push(message.into());
    }

    pub fn pass(&mut self) {
        self.outcome = Outcome::Pass;
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.outcome = Outcome::Fail;
        self.messages.push(message.into());
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub field: String,
    pub commands: Vec<CommandReport>,
    pub failures: usize,
}

impl Report {
    pub fn new(field: String) -> Self {
        Report {
            field,
            commands: Vec::new(),
            failures: 0,
        }
    }

    pub fn push(&mut self, c: CommandReport) {
        if c.outcome == Outcome::Fail {
            self.failures += 1;
        }
        self.commands.push(c);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("field: {}\n", self.field));
        for c in &self.commands {
            let tag = match c.outcome {
                Outcome::Pass => "pass",
                Outcome::Fail => "FAIL",
                Outcome::Info => "info",
            };
            out.push_str(&format!("[{}] {} {}: {}\n", c.index, c.op, c.target, tag));
            for (k, v) in &c.records {
                out.push_str(&format!("    {k} = {v}\n"));
            }
            for m in &c.messages {
                out.push_str(&format!("    # {m}\n"));
            }
        }
        out.push_str(&format!(
            "{} command(s), {} failure(s)\n",
            self.commands.len(),
            self.failures
        ));
        out
    }
}
