//! Machine-readable outcome of a verification run.

use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyStatus {
    Verified,
    Violated,
    Inconclusive,
}

/// Result of re-checking one claim: what was checked, with which parameters,
/// whether it held, and the violating witnesses if it did not.
///
/// Reports serialize to JSON as
/// `{claim, params, status, witnesses, elapsed_ms}`. Equality ignores
/// `elapsed_ms`, so re-runs with identical parameters compare equal; the
/// enumeration orders behind every verifier are deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub status: VerifyStatus,
    pub witnesses: Vec<serde_json::Value>,
    pub elapsed_ms: u64,
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.claim == other.claim
            && self.params == other.params
            && self.status == other.status
            && self.witnesses == other.witnesses
    }
}

impl Eq for VerificationReport {}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.status == VerifyStatus::Verified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One-line human summary for stderr.
    pub fn summary(&self) -> String {
        let status = match self.status {
            VerifyStatus::Verified => "verified",
            VerifyStatus::Violated => "VIOLATED",
            VerifyStatus::Inconclusive => "inconclusive",
        };
        if self.witnesses.is_empty() {
            format!("{}: {} ({} ms)", self.claim, status, self.elapsed_ms)
        } else {
            format!(
                "{}: {} with {} witness(es) ({} ms)",
                self.claim,
                status,
                self.witnesses.len(),
                self.elapsed_ms
            )
        }
    }
}

/// Accumulates parameters and violations while a verifier runs, then stamps
/// the elapsed time.
pub struct ReportBuilder {
    claim: String,
    params: BTreeMap<String, serde_json::Value>,
    witnesses: Vec<serde_json::Value>,
    inconclusive: bool,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(claim: &str) -> Self {
        ReportBuilder {
            claim: claim.to_string(),
            params: BTreeMap::new(),
            witnesses: Vec::new(),
            inconclusive: false,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter serializes"),
        );
    }

    pub fn violation(&mut self, witness: serde_json::Value) {
        self.witnesses.push(witness);
    }

    pub fn violation_count(&self) -> usize {
        self.witnesses.len()
    }

    /// Mark the run as not having covered the full claim (budget exhausted).
    pub fn mark_inconclusive(&mut self) {
        self.inconclusive = true;
    }

    /// Status is `Violated` when any witness was recorded, otherwise
    /// `Inconclusive` if coverage was incomplete, otherwise `Verified`.
    pub fn finish(self) -> VerificationReport {
        let status = if !self.witnesses.is_empty() {
            VerifyStatus::Violated
        } else if self.inconclusive {
            VerifyStatus::Inconclusive
        } else {
            VerifyStatus::Verified
        };
        VerificationReport {
            claim: self.claim,
            params: self.params,
            status,
            witnesses: self.witnesses,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_witnesses() {
        let mut b = ReportBuilder::new("demo");
        b.param("n", 5);
        assert_eq!(b.finish().status, VerifyStatus::Verified);

        let mut b = ReportBuilder::new("demo");
        b.violation(serde_json::json!({"bad": 1}));
        assert_eq!(b.finish().status, VerifyStatus::Violated);

        let mut b = ReportBuilder::new("demo");
        b.mark_inconclusive();
        assert_eq!(b.finish().status, VerifyStatus::Inconclusive);

        // a violation trumps incompleteness
        let mut b = ReportBuilder::new("demo");
        b.mark_inconclusive();
        b.violation(serde_json::json!(1));
        assert_eq!(b.finish().status, VerifyStatus::Violated);
    }

    #[test]
    fn equality_ignores_elapsed_time() {
        let make = || {
            let mut b = ReportBuilder::new("demo");
            b.param("n", 5);
            let mut r = b.finish();
            r.elapsed_ms = rand_elapsed();
            r
        };
        assert_eq!(make(), make());
    }

    fn rand_elapsed() -> u64 {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .subsec_nanos() as u64
    }

    #[test]
    fn json_schema_fields_present() {
        let mut b = ReportBuilder::new("demo");
        b.param("n", 5);
        let r = b.finish();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["claim", "params", "status", "witnesses", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["status"], "verified");
    }
}
