//! JSON-lines records shared by every verification harness.

use serde::Serialize;
use serde_json::Value;

/// Outcome of a bounded evaluation, relative to its ranges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedInRange,
    RefutedInRange,
    CapExhausted,
}

/// Whether an instance agrees with the property under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Violation,
    /// Not decided within caps; counted separately.
    Excluded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub lemma: String,
    pub instance: Value,
    pub verdict: Verdict,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub caps: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Record {
    pub fn new(lemma: &str, instance: Value, verdict: Verdict, status: Status, caps: Value) -> Self {
        Record { lemma: lemma.to_string(), instance, verdict, status, witness: None, caps, runtime_ms: None }
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serialises")
    }
}

/// Counts over a batch of records.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub pass: usize,
    pub violations: usize,
    pub excluded: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = Summary { instances: records.len(), ..Default::default() };
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Violation => s.violations += 1,
                Status::Excluded => s.excluded += 1,
            }
        }
        s
    }

    pub fn merge(&mut self, o: Summary) {
        self.instances += o.instances;
        self.pass += o.pass;
        self.violations += o.violations;
        self.excluded += o.excluded;
    }
}
