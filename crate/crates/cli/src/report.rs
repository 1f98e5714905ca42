//! Machine-readable verification reports.

use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub witness: Option<String>,
    pub timing: Option<f64>,
}

pub enum Outcome {
    Pass,
    /// A negative test that failed the way it should.
    Expected(String),
    Fail(String),
    Skip(String),
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub group: String,
    pub entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub passed: bool,
}

/// Collects entries for one run.
pub struct Recorder {
    timings: bool,
    entries: Vec<Entry>,
}

impl Recorder {
    pub fn new(timings: bool) -> Recorder {
        Recorder {
            timings,
            entries: vec![],
        }
    }

    pub fn check(&mut self, name: &str, anchor: &str, f: impl FnOnce() -> anyhow::Result<Outcome>) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed().as_secs_f64();
        let (status, witness) = match result {
            Ok(Outcome::Pass) => (Status::Pass, None),
            Ok(Outcome::Expected(w)) => (Status::Pass, Some(w)),
            Ok(Outcome::Fail(w)) => (Status::Fail, Some(w)),
            Ok(Outcome::Skip(w)) => (Status::Skip, Some(w)),
            Err(e) => (Status::Error, Some(format!("{e:#}"))),
        };
        self.entries.push(Entry {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status,
            witness,
            timing: self.timings.then_some(elapsed),
        });
    }

    pub fn finish(mut self, command: &str, seed: u64, group: &str, data: Option<serde_json::Value>) -> Report {
        self.entries.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = self
            .entries
            .iter()
            .all(|e| matches!(e.status, Status::Pass | Status::Skip));
        Report {
            command: command.to_string(),
            seed,
            group: group.to_string(),
            entries: self.entries,
            data,
            passed,
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
