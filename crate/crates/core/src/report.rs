//! Structured, deterministic reports shared by validation, lemma suites and
//! certificate verification. All numbers are rendered as decimal strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check could not be decided within the configured bounds.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    /// Pass iff all pass; any failure dominates inconclusive results.
    pub fn aggregate<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        let mut out = Verdict::Pass;
        for v in it {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub key: String,
    pub description: String,
    pub verdict: Verdict,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instance: String,
    pub cases: Vec<Case>,
    pub verdict: Verdict,
    /// Empirically observed constants, as exact decimal strings.
    pub constants: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl LemmaReport {
    pub fn new(lemma: &str, instance: &str) -> Self {
        LemmaReport {
            lemma: lemma.into(),
            instance: instance.into(),
            cases: Vec::new(),
            verdict: Verdict::Pass,
            constants: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, description: impl Into<String>, verdict: Verdict, witness: Value) {
        self.cases.push(Case { key: key.into(), description: description.into(), verdict, witness });
        self.verdict = Verdict::aggregate(self.cases.iter().map(|c| c.verdict));
    }

    pub fn constant(&mut self, name: &str, value: impl ToString) {
        self.constants.insert(name.into(), value.to_string());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn failing(&self) -> Vec<&Case> {
        self.cases.iter().filter(|c| c.verdict == Verdict::Fail).collect()
    }
}

/// One named check in a validation or verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl CheckReport {
    pub fn new(subject: &str) -> Self {
        CheckReport { subject: subject.into(), checks: Vec::new(), verdict: Verdict::Pass }
    }

    pub fn push(&mut self, name: &str, verdict: Verdict, detail: Value) {
        self.checks.push(Check { name: name.into(), verdict, detail });
        self.verdict = Verdict::aggregate(self.checks.iter().map(|c| c.verdict));
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: Value) {
        self.push(name, Verdict::from_bool(ok), detail);
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.name.as_str()).collect()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.failing().into_iter().next()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation() {
        assert_eq!(Verdict::aggregate([]), Verdict::Pass);
        assert_eq!(Verdict::aggregate([Verdict::Pass, Verdict::Inconclusive]), Verdict::Inconclusive);
        assert_eq!(Verdict::aggregate([Verdict::Inconclusive, Verdict::Fail]), Verdict::Fail);
        let mut r = LemmaReport::new("t", "i");
        r.push("a", "ok", Verdict::Pass, Value::Null);
        assert!(r.verdict.is_pass());
        r.push("b", "bad", Verdict::Fail, Value::Null);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(serde_json::to_string(&Verdict::Inconclusive).unwrap(), "\"inconclusive\"");
    }
}
