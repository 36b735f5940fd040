use std::collections::BTreeMap;

use gradet::multidegree::Engine;
use serde::Serialize;
use serde_json::Value;

/// Everything one invocation prints on stdout.
///
/// `timings` is present only when requested, so that two runs with the
/// same seed print identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub inputs: Value,
    /// Master seed, then the seeds derived from it for each tracker run.
    pub seeds: Vec<u64>,
    pub engine: Vec<Engine>,
    pub result: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conjecture_refs: Vec<ConjectureRef>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

/// An expected value that comes from a conjectured formula rather than a
/// theorem. A disagreement is reported, not treated as a failure.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRef {
    pub id: String,
    pub statement: String,
    pub status: &'static str,
    pub expected: String,
    pub observed: Option<String>,
    pub agrees: Option<bool>,
}

impl ConjectureRef {
    /// The conjectured ML-degree `(n - 3) 2^(n - 2) + 1` of the `n`-cycle model.
    pub fn cycle_ml_degree(n: usize, observed: Option<usize>) -> gradet::Result<Self> {
        let expected = gradet::invariants::cycle_ml_degree_conjecture(n as u32)?.to_string();
        let observed = observed.map(|o| o.to_string());
        Ok(ConjectureRef {
            id: "cycle-ml-degree".into(),
            statement: format!("the ML-degree of the {n}-cycle model is (n-3)*2^(n-2)+1"),
            status: "conjectural",
            agrees: observed.as_ref().map(|o| *o == expected),
            expected,
            observed,
        })
    }
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        RunReport {
            command: command.into(),
            status: Status::Ok,
            inputs,
            seeds: Vec::new(),
            engine: Vec::new(),
            result: Value::Null,
            conjecture_refs: Vec::new(),
            warnings: Vec::new(),
            error: None,
            timings: None,
        }
    }

    pub fn to_json(&self, compact: bool) -> String {
        let out = if compact { serde_json::to_string(self) } else { serde_json::to_string_pretty(self) };
        out.expect("reports serialize")
    }
}
