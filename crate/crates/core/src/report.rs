//! Machine-readable run summaries.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything except `timings` is a deterministic function of the inputs
/// and seeds; maps are ordered so the JSON form is byte-stable.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub measurements: BTreeMap<String, Value>,
    /// Wall-clock seconds per phase.
    pub timings: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn measure(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.measurements.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        self
    }

    /// Runs `f` and records its duration under `phase`.
    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.insert(phase.into(), start.elapsed().as_secs_f64());
        out
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without the timing map, for comparing runs.
    pub fn stable_json(&self) -> String {
        let mut c = self.clone();
        c.timings.clear();
        c.to_json()
    }
}
