//! Seeded property suites, replayable witnesses, input documents and
//! reports.

mod io;
mod report;
mod suites;
mod witness;

pub use io::{parse_document, parse_inputs, read_document, to_json, Document};
pub use report::{emit_report, CaseFailure, CheckTally, Counterexample, Format, Outcome, SuiteReport};
pub use suites::{paraboloid_approximation, run, run_suite, shadow_area_monte_carlo, Suite, MONTE_CARLO_SAMPLES};
pub use witness::{BodyOperator, Replay, Witness};
