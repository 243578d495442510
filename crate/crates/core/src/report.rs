//! Verification reports: a list of named checks plus free-form data.
//!
//! Reports concatenate under `merge`, which is associative. Timings are kept
//! for diagnostics but never serialized, so equal inputs give byte-identical
//! JSON.

use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The mathematical statement the check exercises.
    pub anchor: String,
    pub pass: bool,
    /// Counts, counterexamples and other payload.
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub rank: usize,
    pub checks: Vec<CheckRecord>,
    pub data: Map<String, Value>,
}

impl VerificationReport {
    pub fn new(rank: usize) -> Self {
        VerificationReport {
            rank,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn push(&mut self, id: &str, anchor: &str, pass: bool, detail: Value) {
        self.checks.push(CheckRecord {
            id: id.to_string(),
            anchor: anchor.to_string(),
            pass,
            detail,
            elapsed: Duration::ZERO,
        });
    }

    /// Runs `f`, records its verdict and how long it took.
    pub fn timed<F>(&mut self, id: &str, anchor: &str, f: F)
    where
        F: FnOnce() -> (bool, Value),
    {
        let start = Instant::now();
        let (pass, detail) = f();
        self.checks.push(CheckRecord {
            id: id.to_string(),
            anchor: anchor.to_string(),
            pass,
            detail,
            elapsed: start.elapsed(),
        });
    }

    pub fn set_data(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    /// Appends `other`'s checks; data keys from `other` win on collision.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.checks.extend(other.checks);
        self.data.extend(other.data);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rep(ids: &[(&str, bool)]) -> VerificationReport {
        let mut r = VerificationReport::new(2);
        for &(id, pass) in ids {
            r.push(id, "test", pass, json!(null));
        }
        r
    }

    #[test]
    fn overall_status() {
        assert!(rep(&[]).passed());
        assert!(rep(&[("a", true), ("b", true)]).passed());
        assert!(!rep(&[("a", true), ("b", false)]).passed());
    }

    #[test]
    fn merge_is_associative() {
        let (a, b, c) = (
            rep(&[("a", true)]),
            rep(&[("b", false)]),
            rep(&[("c", true)]),
        );
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(
            serde_json::to_string(&left).unwrap(),
            serde_json::to_string(&right).unwrap()
        );
    }

    #[test]
    fn timings_are_not_serialized() {
        let mut r = VerificationReport::new(1);
        r.timed("x", "y", || (true, json!(1)));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"rank":1,"checks":[{"id":"x","anchor":"y","pass":true,"detail":1}],"data":{}}"#
        );
    }
}
