//! Pass/fail reports for validators.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub law: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, law: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { law: law.to_string(), ok, detail: if ok { String::new() } else { detail.into() } });
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failed_laws(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.checks.iter().filter(|c| !c.ok).map(|c| c.law.as_str()).collect();
        v.dedup();
        v
    }

    pub fn failed(&self, law: &str) -> bool {
        self.checks.iter().any(|c| !c.ok && c.law == law)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.ok {
                writeln!(f, "ok   {}", c.law)?;
            } else {
                writeln!(f, "FAIL {}: {}", c.law, c.detail)?;
            }
        }
        Ok(())
    }
}
