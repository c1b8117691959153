//! Versioned JSON reports. Every number is an exact rational string plus a
//! decimal rendering; maps are ordered so output is byte-stable.

use std::collections::BTreeMap;

use serde::Serialize;
use smallcancel::rational::{fmt_decimal, fmt_exact, qu};
use smallcancel::Q;

pub const SCHEMA: &str = "sc-arrays-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Num {
    pub exact: String,
    pub decimal: String,
}

impl Num {
    pub fn of(x: &Q) -> Num {
        Num { exact: fmt_exact(x), decimal: fmt_decimal(x, 6) }
    }

    pub fn count(n: usize) -> Num {
        Num::of(&qu(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub pairs_tested: usize,
    pub bound: Option<Num>,
    pub max_observed: Option<Num>,
    pub verdict: Verdict,
    /// Set for relaxed-mode bound checks, whose bounds are not guaranteed.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            params: BTreeMap::new(),
            pairs_tested: 0,
            bound: None,
            max_observed: None,
            verdict: Verdict::Pass,
            informational: false,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Check {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn with_verdict(mut self, ok: bool) -> Check {
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Check {
        self.notes.push(s.into());
        self
    }

    /// Counts toward the exit status.
    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail && !self.informational
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub informational_fail: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Report {
        Report { schema: SCHEMA, command: command.into(), config, checks: Vec::new(), data: None, summary: Summary::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn finish(&mut self) {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Skipped => s.skipped += 1,
                Verdict::Fail if c.informational => s.informational_fail += 1,
                Verdict::Fail => s.fail += 1,
            }
        }
        self.summary = s;
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(Check::failed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
