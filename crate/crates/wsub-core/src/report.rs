//! Verification reports: named checks with pass/fail status and, on
//! failure, both sides in canonical text form.

use serde::Serialize;
use serde_json::{json, Value};
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub diff: Option<String>,
    pub elapsed: Option<Duration>,
}

impl Check {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check { name: name.into(), anchor: anchor.into(), status: Status::Pass, lhs: None, rhs: None, diff: None, elapsed: None }
    }

    pub fn fail(name: impl Into<String>, anchor: impl Into<String>, lhs: String, rhs: String, diff: String) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Fail,
            lhs: Some(lhs),
            rhs: Some(rhs),
            diff: Some(diff),
            elapsed: None,
        }
    }

    pub fn skipped(name: impl Into<String>, anchor: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Skipped,
            lhs: None,
            rhs: None,
            diff: Some(why.into()),
            elapsed: None,
        }
    }

    /// Pass if `ok`, else a failure carrying the given texts.
    pub fn compare(name: impl Into<String>, anchor: impl Into<String>, ok: bool, lhs: impl FnOnce() -> (String, String, String)) -> Self {
        if ok {
            Check::pass(name, anchor)
        } else {
            let (l, r, d) = lhs();
            Check::fail(name, anchor, l, r, d)
        }
    }

    pub fn with_elapsed(mut self, d: Duration) -> Self {
        self.elapsed = Some(d);
        self
    }

    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = json!({
            "check": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "diff": self.diff,
        });
        if timing {
            v["seconds"] = json!(self.elapsed.map(|d| d.as_secs_f64()));
        }
        v
    }
}

/// A sorted collection of checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report { checks }
    }

    pub fn extend(&mut self, more: impl IntoIterator<Item = Check>) {
        self.checks.extend(more);
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    /// Pass iff every non-skipped check passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self, timing: bool) -> Value {
        json!({
            "status": if self.passed() { "pass" } else { "fail" },
            "checks": self.checks.iter().map(|c| c.to_json(timing)).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self, timing: bool) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            s.push_str(&format!("{tag} {}", c.name));
            if timing {
                if let Some(d) = c.elapsed {
                    s.push_str(&format!(" ({:.3}s)", d.as_secs_f64()));
                }
            }
            s.push('\n');
            if c.status == Status::Fail {
                if let (Some(l), Some(r)) = (&c.lhs, &c.rhs) {
                    s.push_str(&format!("  computed: {l}\n  expected: {r}\n"));
                }
                if let Some(d) = &c.diff {
                    s.push_str(&format!("  diff:     {d}\n"));
                }
            } else if c.status == Status::Skipped {
                if let Some(d) = &c.diff {
                    s.push_str(&format!("  {d}\n"));
                }
            }
        }
        let pass = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        s.push_str(&format!("{} {pass}/{} checks passed\n", if self.passed() { "PASS" } else { "FAIL" }, self.checks.len()));
        s
    }
}
