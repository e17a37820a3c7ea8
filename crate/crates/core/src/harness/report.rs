use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::witness::Witness;
use crate::num;

/// What a single case observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// An expected violation was found; the case passes.
    Counterexample(Witness),
    Fail {
        detail: String,
        witness: Option<Witness>,
    },
}

impl Outcome {
    /// Pass iff the witness satisfies its identity.
    pub fn expect_holds(result: crate::Result<Witness>) -> Outcome {
        match result {
            Ok(w) if w.holds() => Outcome::Pass,
            Ok(w) => Outcome::Fail {
                detail: format!("{} discrepancy {}", w.kind(), num::show(&w.discrepancy())),
                witness: Some(w),
            },
            Err(e) => Outcome::Fail {
                detail: e.to_string(),
                witness: None,
            },
        }
    }

    pub fn failure(detail: impl Into<String>) -> Outcome {
        Outcome::Fail {
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        !matches!(self, Outcome::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: usize,
    pub check: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub case: usize,
    pub check: String,
    pub witness: Witness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub cases: usize,
    pub passed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: BTreeMap<String, CheckTally>,
    pub failures: Vec<CaseFailure>,
    pub counterexamples: Vec<Counterexample>,
    /// Not part of the machine format, which must be reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    /// Assembles a report from outcomes listed in case order.
    pub fn assemble(suite: &str, seed: u64, trials: usize, outcomes: Vec<(&str, Outcome)>, wall_time: Duration) -> Self {
        let mut checks: BTreeMap<String, CheckTally> = BTreeMap::new();
        let mut failures = Vec::new();
        let mut counterexamples = Vec::new();
        let cases = outcomes.len();
        for (case, (check, outcome)) in outcomes.into_iter().enumerate() {
            let tally = checks.entry(check.to_string()).or_default();
            tally.cases += 1;
            match outcome {
                Outcome::Pass => tally.passed += 1,
                Outcome::Counterexample(witness) => {
                    tally.passed += 1;
                    counterexamples.push(Counterexample {
                        case,
                        check: check.to_string(),
                        witness,
                    });
                }
                Outcome::Fail { detail, witness } => failures.push(CaseFailure {
                    case,
                    check: check.to_string(),
                    detail,
                    witness,
                }),
            }
        }
        SuiteReport {
            suite: suite.to_string(),
            seed,
            trials,
            cases,
            passed: cases - failures.len(),
            failed: failures.len(),
            checks,
            failures,
            counterexamples,
            wall_time,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// Every recorded witness, failures first.
    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.failures
            .iter()
            .filter_map(|f| f.witness.as_ref())
            .chain(self.counterexamples.iter().map(|c| &c.witness))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

pub fn emit_report(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Human => human(report),
    }
}

fn human(r: &SuiteReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "suite {}  seed {}  trials {}  ({:.2}s)",
        r.suite,
        r.seed,
        r.trials,
        r.wall_time.as_secs_f64()
    );
    let width = r.checks.keys().map(String::len).max().unwrap_or(5).max(5);
    let _ = writeln!(s, "  {:<width$}  {:>6}  {:>6}  {:>6}", "check", "cases", "pass", "fail");
    for (name, t) in &r.checks {
        let _ = writeln!(
            s,
            "  {:<width$}  {:>6}  {:>6}  {:>6}",
            name,
            t.cases,
            t.passed,
            t.cases - t.passed
        );
    }
    let _ = writeln!(s, "  {:<width$}  {:>6}  {:>6}  {:>6}", "total", r.cases, r.passed, r.failed);
    for c in &r.counterexamples {
        let _ = writeln!(
            s,
            "  counterexample #{} ({}): {} discrepancy {}",
            c.case,
            c.check,
            c.witness.kind(),
            num::show(&c.witness.discrepancy())
        );
    }
    for f in &r.failures {
        let _ = writeln!(s, "  FAIL #{} ({}): {}", f.case, f.check, f.detail);
    }
    let _ = writeln!(s, "{}", if r.ok() { "PASS" } else { "FAIL" });
    s
}
