use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// SHA-256 of an input file's bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
        }
    }
}

/// Pass/fail count of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    /// Unasserted checks are recorded but never fail the run.
    pub asserted: bool,
}

impl Verdict {
    pub fn single(check: &str, ok: bool) -> Self {
        Verdict {
            check: check.to_string(),
            passed: ok as u64,
            failed: (!ok) as u64,
            skipped: 0,
            asserted: true,
        }
    }

    pub fn holds(&self) -> bool {
        !self.asserted || self.failed == 0
    }
}

/// Machine-readable result of one subcommand. Values print `⊤`/`⊥` as `top`/`bot`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub subcommand: String,
    pub inputs: Vec<InputDigest>,
    #[serde(flatten)]
    pub values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub duration_ms: u64,
}

impl AnalysisReport {
    pub fn new(subcommand: &str) -> Self {
        AnalysisReport {
            subcommand: subcommand.to_string(),
            ..Default::default()
        }
    }

    pub fn value(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn verdicts_hold(&self) -> bool {
        self.verdicts.iter().all(Verdict::holds)
    }

    /// Pretty JSON with the duration zeroed, for byte-level comparisons.
    pub fn to_deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.duration_ms = 0;
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = AnalysisReport::new("global");
        r.inputs.push(InputDigest::of("x.tsys", b"dioid maxplus\n"));
        r.value("gc", "top");
        r.matrices.insert("alpha1".into(), vec![vec!["e".into(), "bot".into()]]);
        r.verdicts.push(Verdict::single("correct", true));
        r.counterexamples.push("dioid maxplus\n".into());
        r.duration_ms = 12;
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"gc\":\"top\""));
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn digest_is_stable() {
        let d = InputDigest::of("a", b"abc");
        assert_eq!(d.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn unasserted_failures_are_recorded_only() {
        let v = Verdict {
            check: "rho".into(),
            passed: 3,
            failed: 1,
            skipped: 0,
            asserted: false,
        };
        assert!(v.holds());
        assert!(!Verdict::single("x", false).holds());
    }
}
