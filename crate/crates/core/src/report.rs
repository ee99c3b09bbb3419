//! JSON report records and serialization helpers.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub tested: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    /// First counterexample, or a short certificate summary.
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Accumulates per-case outcomes into a [`CheckRecord`].
pub struct Tally {
    name: String,
    anchor: String,
    parameters: BTreeMap<String, Value>,
    tested: usize,
    passed: usize,
    failed: usize,
    inconclusive: usize,
    detail: Option<String>,
    started: Instant,
}

impl Tally {
    pub fn new(name: &str, anchor: &str) -> Self {
        Tally {
            name: name.into(),
            anchor: anchor.into(),
            parameters: BTreeMap::new(),
            tested: 0,
            passed: 0,
            failed: 0,
            inconclusive: 0,
            detail: None,
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn pass(&mut self) {
        self.tested += 1;
        self.passed += 1;
    }

    pub fn fail(&mut self, why: impl FnOnce() -> String) {
        self.tested += 1;
        self.failed += 1;
        if self.detail.is_none() {
            self.detail = Some(why());
        }
    }

    pub fn unresolved(&mut self, why: impl FnOnce() -> String) {
        self.tested += 1;
        self.inconclusive += 1;
        if self.detail.is_none() {
            self.detail = Some(why());
        }
    }

    pub fn check(&mut self, ok: bool, why: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(why)
        }
    }

    pub fn note(&mut self, text: String) {
        if self.detail.is_none() {
            self.detail = Some(text);
        }
    }

    pub fn finish(self) -> CheckRecord {
        let verdict = if self.failed > 0 {
            Verdict::Fail
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        CheckRecord {
            name: self.name,
            anchor: self.anchor,
            parameters: self.parameters,
            verdict,
            tested: self.tested,
            passed: self.passed,
            failed: self.failed,
            inconclusive: self.inconclusive,
            detail: self.detail,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arith::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for rational matrices as nested `"p/q"` string arrays.
pub mod rational_matrix {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arith::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        serde::Serialize::serialize(&text, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let text: Vec<Vec<String>> = Vec::deserialize(d)?;
        text.iter()
            .map(|r| r.iter().map(|x| parse_rational(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}
