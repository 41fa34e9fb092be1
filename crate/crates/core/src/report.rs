use serde::{Deserialize, Serialize};

/// Where an expected value comes from: a closed form stated by the source
/// tables ("paper"), an immediate consequence of definitions ("trivial"),
/// or an independent computation done by this artifact ("derived").
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Trivial,
    Derived,
}

/// One verified fact: a named quantity, the expected value with its
/// provenance anchor, the computed value, and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub provenance: Provenance,
    /// Short stable label tying the expectation to its source table or
    /// identity (mirrors the suite vocabulary).
    pub anchor: String,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        name: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
        provenance: Provenance,
        anchor: impl Into<String>,
    ) -> Self {
        let expected = expected.to_string();
        let actual = actual.to_string();
        let pass = expected == actual;
        CheckRecord {
            name: name.into(),
            expected,
            actual,
            provenance,
            anchor: anchor.into(),
            pass,
        }
    }

    /// A record that is informational only and never fails.
    pub fn info(name: impl Into<String>, actual: impl ToString, anchor: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            expected: "(recorded)".into(),
            actual: actual.to_string(),
            provenance: Provenance::Derived,
            anchor: anchor.into(),
            pass: true,
        }
    }

    /// A record asserting a boolean condition.
    pub fn assert_true(
        name: impl Into<String>,
        ok: bool,
        provenance: Provenance,
        anchor: impl Into<String>,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            expected: "true".into(),
            actual: ok.to_string(),
            provenance,
            anchor: anchor.into(),
            pass: ok,
        }
    }
}

/// Structured result of one verification suite run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: Vec<(String, String)>,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    /// Filled by the orchestration layer; excluded from equality-sensitive
    /// comparisons by callers that diff reports.
    pub wall_ms: u64,
    pub artifact_version: String,
    pub cache_hits: u64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            params: Vec::new(),
            records: Vec::new(),
            pass: true,
            wall_ms: 0,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            cache_hits: 0,
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.pass &= record.pass;
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        for r in records {
            self.push(r);
        }
    }

    /// Merges another report's records (used by aggregate runs).
    pub fn absorb(&mut self, other: VerificationReport) {
        self.pass &= other.pass;
        self.cache_hits += other.cache_hits;
        let prefix = other.suite;
        for mut r in other.records {
            r.name = format!("{prefix}: {}", r.name);
            self.records.push(r);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_tracks_records() {
        let mut rep = VerificationReport::new("demo");
        rep.push(CheckRecord::new("x", 3, 3, Provenance::Trivial, "t"));
        assert!(rep.pass);
        rep.push(CheckRecord::new("y", 3, 4, Provenance::Paper, "t"));
        assert!(!rep.pass);
        assert_eq!(rep.failures().count(), 1);
    }

    #[test]
    fn serialization_round_trips() {
        let mut rep = VerificationReport::new("demo").with_param("p", 2);
        rep.push(CheckRecord::new("x", 3, 3, Provenance::Derived, "t"));
        let json = serde_json::to_string(&rep).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(rep, back);
    }
}
