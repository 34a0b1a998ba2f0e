use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A resource or stabilization budget ran out; not a counterexample.
    Budget,
}

impl Status {
    /// fail dominates budget, which dominates pass.
    pub fn combine(self, o: Status) -> Status {
        use Status::*;
        match (self, o) {
            (Fail, _) | (_, Fail) => Fail,
            (Budget, _) | (_, Budget) => Budget,
            _ => Pass,
        }
    }
}

/// One checked instance of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub ring: String,
    pub inputs: BTreeMap<String, String>,
    pub values: BTreeMap<String, Value>,
    pub expected: String,
    pub pass: bool,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Instance {
    pub fn new(ring: &str, expected: impl Into<String>) -> Self {
        Instance {
            ring: ring.to_string(),
            inputs: BTreeMap::new(),
            values: BTreeMap::new(),
            expected: expected.into(),
            pass: false,
            status: Status::Fail,
            error: None,
        }
    }

    pub fn input(mut self, k: &str, v: impl ToString) -> Self {
        self.inputs.insert(k.to_string(), v.to_string());
        self
    }

    pub fn set(&mut self, k: &str, v: impl Into<Value>) {
        self.values.insert(k.to_string(), v.into());
    }

    pub fn value(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.set(k, v);
        self
    }

    pub fn verdict(mut self, ok: bool) -> Self {
        self.pass = ok;
        self.status = if ok { Status::Pass } else { Status::Fail };
        self
    }

    /// Records a core error: budget errors give status `budget`, the rest `fail`.
    pub fn error(mut self, e: &subext_core::Error) -> Self {
        use subext_core::Error::*;
        self.pass = false;
        self.status = match e {
            ResourceBudget(_) | StabilizationBudget(_) => Status::Budget,
            _ => Status::Fail,
        };
        self.error = Some(format!("{}: {e}", e.code()));
        self
    }
}

/// The report of one scenario run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub claim: String,
    pub rings: Vec<String>,
    pub status: Status,
    pub pass: bool,
    pub instances: Vec<Instance>,
    pub seed: u64,
    pub budget: u64,
    /// Ext¹ classes visited by enumeration.
    pub budget_consumed: u64,
    pub wall_time_ms: u64,
}

impl ScenarioResult {
    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.pass)
    }

    /// Pretty JSON; keys of value maps come out sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// The JSON text with the wall-time field zeroed, for byte comparisons.
    pub fn to_json_timeless(&self) -> String {
        let mut c = self.clone();
        c.wall_time_ms = 0;
        c.to_json()
    }
}

pub fn aggregate(instances: &[Instance]) -> Status {
    instances.iter().fold(Status::Pass, |s, i| s.combine(i.status))
}
