//! Deterministic report assembly. JSON output relies on serde_json's
//! sorted object keys; markdown is rendered in insertion order. Timing is
//! attached only on request so byte-for-byte stability holds by default.

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Informational rows (listings, summaries); never affect the status.
    Info,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Info => "info",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Finding {
    pub check: String,
    pub outcome: Outcome,
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub findings: Vec<Finding>,
    pub error: Option<String>,
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            findings: Vec::new(),
            error: None,
            timing_ms: None,
        }
    }

    pub fn push(&mut self, check: impl Into<String>, outcome: Outcome, witness: Option<String>) {
        self.findings.push(Finding {
            check: check.into(),
            outcome,
            witness,
        });
    }

    /// Pass/fail shorthand; the witness is kept either way.
    pub fn check(&mut self, check: impl Into<String>, ok: bool, witness: Option<String>) {
        self.push(
            check,
            if ok { Outcome::Pass } else { Outcome::Fail },
            witness,
        );
    }

    pub fn info(&mut self, check: impl Into<String>, witness: impl Into<String>) {
        self.push(check, Outcome::Info, Some(witness.into()));
    }

    pub fn status(&self) -> &'static str {
        if self.error.is_some() {
            "error"
        } else if self.findings.iter().any(|f| f.outcome == Outcome::Fail) {
            "fail"
        } else {
            "pass"
        }
    }

    pub fn to_json(&self) -> Value {
        let findings: Vec<Value> = self
            .findings
            .iter()
            .map(|f| {
                json!({
                    "check": f.check,
                    "outcome": f.outcome.as_str(),
                    "witness": f.witness,
                })
            })
            .collect();
        let mut doc = json!({
            "schema": "extrifact/1",
            "command": self.command,
            "status": self.status(),
            "findings": findings,
        });
        if let Some(e) = &self.error {
            doc["error"] = json!(e);
        }
        if let Some(ms) = self.timing_ms {
            doc["timing"] = json!({ "total_ms": ms });
        }
        doc
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# extrifact: {}\n\n", self.command));
        out.push_str(&format!("status: **{}**\n", self.status()));
        if let Some(e) = &self.error {
            out.push_str(&format!("\nerror: {}\n", md_cell(e)));
        }
        if !self.findings.is_empty() {
            out.push_str("\n| check | outcome | witness |\n|---|---|---|\n");
            for f in &self.findings {
                out.push_str(&format!(
                    "| {} | {} | {} |\n",
                    md_cell(&f.check),
                    f.outcome.as_str(),
                    f.witness.as_deref().map(md_cell).unwrap_or_default(),
                ));
            }
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("\ntiming: {ms} ms\n"));
        }
        out
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}
