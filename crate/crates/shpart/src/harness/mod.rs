//! Verification suites and parameter sweeps behind the command-line front end.

mod suites;
mod sweep;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::measures::Budget;

pub use sweep::{run_sweep, GridRange, SweepOptions, SweepSpec, SWEEP_FAMILIES};

/// Grid bounds for the verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Small,
    Medium,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scale> {
        match s {
            "small" => Ok(Scale::Small),
            "medium" => Ok(Scale::Medium),
            _ => Err(Error::InvalidParams(format!(
                "unknown scale '{s}' (small, medium)"
            ))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Small => "small",
            Scale::Medium => "medium",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub scale: Scale,
    /// Field for rank computations that do not fix their own.
    pub field: Field,
    pub budget: Budget,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            scale: Scale::Small,
            field: Field::Rational,
            budget: Budget::default(),
        }
    }
}

/// One failed case, with enough parameters to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Measured quantities worth recording that carry no pass/fail verdict.
    pub notes: Vec<String>,
    pub wall: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Deterministic JSON; the wall time is left out so reruns compare equal.
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.passed(),
            "failures": self.failures.iter().map(|f| json!({"case": f.case, "detail": f.detail})).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

/// Collects case outcomes for one suite.
pub(crate) struct Tally {
    cases: usize,
    failures: Vec<Failure>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn check(
        &mut self,
        ok: bool,
        case: impl FnOnce() -> String,
        detail: impl FnOnce() -> String,
    ) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure {
                case: case(),
                detail: detail(),
            });
        }
    }

    pub(crate) fn fail(&mut self, case: String, detail: String) {
        self.cases += 1;
        self.failures.push(Failure { case, detail });
    }

    /// Records a case whose computation returned an error as a failure.
    pub(crate) fn result<T>(&mut self, r: Result<T>, case: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(case(), e.to_string());
                None
            }
        }
    }

    pub(crate) fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

pub const SUITES: [&str; 14] = [
    "residue",
    "binomial",
    "containment",
    "product-bounds",
    "subadditivity",
    "trees",
    "degseq",
    "uptk",
    "decompose-lowdepth",
    "decompose-upt",
    "hardpolys",
    "nw-identities",
    "app-vs-skewp",
    "rank-fields",
];

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let run: fn(&VerifyConfig, &mut Tally) = match name {
        "residue" => suites::residue,
        "binomial" => suites::binomial,
        "containment" => suites::containment,
        "product-bounds" => suites::product_bounds,
        "subadditivity" => suites::subadditivity,
        "trees" => suites::trees,
        "degseq" => suites::degseq,
        "uptk" => suites::uptk,
        "decompose-lowdepth" => suites::decompose_lowdepth,
        "decompose-upt" => suites::decompose_upt,
        "hardpolys" => suites::hardpolys,
        "nw-identities" => suites::nw_identities,
        "app-vs-skewp" => suites::app_vs_skewp,
        "rank-fields" => suites::rank_fields,
        _ => return Err(Error::InvalidParams(format!("unknown suite '{name}'"))),
    };
    let start = Instant::now();
    let mut t = Tally::new();
    run(cfg, &mut t);
    Ok(VerifyReport {
        suite: name.to_string(),
        cases: t.cases,
        failures: t.failures,
        notes: t.notes,
        wall: start.elapsed(),
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<VerifyReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s, cfg).expect("known suite"))
        .collect()
}
