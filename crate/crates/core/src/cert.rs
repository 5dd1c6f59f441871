//! Check records and build certificates.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::gauss::Leg;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped(String),
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail)
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub leg: Option<Leg>,
    pub result: Outcome,
    pub witness: Value,
    pub elapsed_ms: u64,
    pub bad_locus_size: Option<usize>,
    pub seed: Option<u64>,
}

impl CheckRecord {
    pub fn new(name: &str, result: Outcome, witness: Value) -> CheckRecord {
        CheckRecord {
            name: name.to_string(),
            leg: None,
            result,
            witness,
            elapsed_ms: 0,
            bad_locus_size: None,
            seed: None,
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> CheckRecord {
        CheckRecord::new(name, Outcome::Skipped(reason.into()), Value::Null)
    }

    pub fn with_leg(mut self, leg: Leg) -> CheckRecord {
        self.leg = Some(leg);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> CheckRecord {
        self.seed = Some(seed);
        self
    }

    pub fn with_bad_locus(mut self, n: usize) -> CheckRecord {
        self.bad_locus_size = Some(n);
        self
    }
}

/// Run `f` and stamp the wall time on the record it returns.
pub fn timed(f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let start = Instant::now();
    let mut rec = f();
    rec.elapsed_ms = start.elapsed().as_millis() as u64;
    rec
}

/// Result of a construction plus verification run.
#[derive(Clone, Debug, Serialize)]
pub struct MainBuildCertificate {
    /// Serialized description of the verified curve.
    pub curve: Value,
    pub checks: Vec<CheckRecord>,
    pub witnesses: BTreeMap<String, Value>,
}

impl MainBuildCertificate {
    pub fn new(curve: Value) -> MainBuildCertificate {
        MainBuildCertificate {
            curve,
            checks: Vec::new(),
            witnesses: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.checks.push(rec);
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.result.is_fail()).map(|c| c.name.as_str()).collect()
    }

    /// No check failed.
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}
