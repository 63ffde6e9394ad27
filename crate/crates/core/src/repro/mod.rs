//! Reproduction harness: named suites of numbered checks, each producing a
//! pass/fail verdict with the values it computed.
//!
//! Reports carry no timings or other run-dependent data, so the same suite and
//! seed always serialize to the same bytes, whatever the thread count.

mod criteria;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::strategy::{Named, Registry};

pub use criteria::{criterion, CRITERIA};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            s.push_str(&format!("[{}] {:>2} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name));
        }
        s.push_str(&format!("suite {}: {}\n", self.suite, if self.passed { "PASS" } else { "FAIL" }));
        s
    }
}

pub trait Suite: Named + Send + Sync {
    /// Identifiers of the checks this suite runs, in report order.
    fn criteria(&self) -> &'static [u8];
}

struct Fixed {
    name: &'static str,
    ids: &'static [u8],
}

impl Named for Fixed {
    fn name(&self) -> &'static str {
        self.name
    }
}

impl Suite for Fixed {
    fn criteria(&self) -> &'static [u8] {
        self.ids
    }
}

pub fn suites() -> Registry<dyn Suite> {
    let mut r: Registry<dyn Suite> = Registry::new("suite");
    for (name, ids) in [
        ("metric", &[10u8, 11][..]),
        ("coding", &[1, 2, 3, 8, 9][..]),
        ("measure", &[4, 5, 6][..]),
        ("af", &[7, 12][..]),
        ("all", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12][..]),
    ] {
        r.register(Box::new(Fixed { name, ids }));
    }
    r
}

/// Runs every check of the named suite. A check that errors is reported as
/// failed with the error message.
pub fn run(suite: &str, seed: u64) -> Result<Report> {
    let registry = suites();
    let ids = registry.get(suite)?.criteria();
    let criteria: Vec<CriterionReport> = ids.iter().map(|&id| criterion(id, seed)).collect();
    let passed = criteria.iter().all(|c| c.passed);
    Ok(Report { suite: suite.to_string(), seed, passed, criteria })
}
