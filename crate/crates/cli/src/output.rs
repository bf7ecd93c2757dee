//! Machine-readable check records: one object per check, streamed as
//! json-lines or rendered as text. Field order is fixed by the struct so
//! identical invocations emit byte-identical output.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub check: String,
    pub inputs: BTreeMap<&'static str, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub verdict: String,
    pub budget: u64,
    pub provenance: &'static str,
}

impl Record {
    pub fn new(check: impl Into<String>, provenance: &'static str) -> Self {
        Record {
            check: check.into(),
            inputs: BTreeMap::new(),
            witness: None,
            verdict: String::new(),
            budget: 0,
            provenance,
        }
    }

    pub fn input(mut self, key: &'static str, value: impl ToString) -> Self {
        self.inputs.insert(key, value.to_string());
        self
    }

    pub fn witness(mut self, w: impl ToString) -> Self {
        self.witness = Some(w.to_string());
        self
    }

    pub fn verdict(mut self, v: impl Into<String>) -> Self {
        self.verdict = v.into();
        self
    }

    pub fn budget(mut self, b: u64) -> Self {
        self.budget = b;
        self
    }
}

/// Verdicts that do not count against the exit status.
fn acceptable(verdict: &str) -> bool {
    matches!(
        verdict,
        "yes" | "vacuous" | "value" | "ok" | "diagnostic-expected"
    )
}

pub struct Emitter {
    format: Format,
    pub violations: usize,
    pub checks: usize,
}

impl Emitter {
    pub fn new(format: Format) -> Self {
        Emitter {
            format,
            violations: 0,
            checks: 0,
        }
    }

    pub fn emit(&mut self, r: Record) {
        self.checks += 1;
        if !acceptable(&r.verdict) {
            self.violations += 1;
        }
        match self.format {
            Format::JsonLines => {
                println!("{}", serde_json::to_string(&r).expect("serializable"));
            }
            Format::Text => {
                let inputs = r
                    .inputs
                    .iter()
                    .map(|(k, v)| format!("{}={}", k, v))
                    .collect::<Vec<_>>()
                    .join(" ");
                let mut line = format!("[{}] {}", r.verdict, r.check);
                if !inputs.is_empty() {
                    line.push_str(&format!(" ({})", inputs));
                }
                if let Some(w) = &r.witness {
                    let w = if w.len() > 64 {
                        format!("{}... ({} digits)", &w[..24], w.len())
                    } else {
                        w.clone()
                    };
                    line.push_str(&format!(" witness={}", w));
                }
                println!("{}", line);
            }
        }
    }

    pub fn all_ok(&self) -> bool {
        self.violations == 0
    }
}
