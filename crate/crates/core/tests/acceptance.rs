//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use convval::convex::{conjugate, conjugate_cd};
use convval::harness::{emit_report, parse_document, run, Document, Format, Suite, SuiteReport, Witness};
use convval::num;
use convval::random::Sampler;

const SEED: u64 = 1;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn tally(report: &SuiteReport, check: &str) -> (usize, usize) {
    report.checks.get(check).map_or((0, 0), |t| (t.cases, t.passed))
}

fn all_pass(report: &SuiteReport, check: &str, expected: usize) -> bool {
    tally(report, check) == (expected, expected)
}

fn conjugation_involution() -> Verdict {
    let start = Instant::now();
    let mut bad = 0;
    for k in 0..200u64 {
        let mut rng = Sampler::for_trial(SEED, k);
        let dim = 1 + (k % 3) as usize;
        let f = rng.max_affine(dim);
        if conjugate_cd(&conjugate(&f)) != f {
            bad += 1;
        }
    }
    let t = start.elapsed();
    verdict(bad == 0 && within(t, 10), format!("200 functions, {bad} mismatches, {t:.2?}"))
}

fn thm_a(report: &SuiteReport) -> Verdict {
    let checks = [
        "valuation_identity",
        "dual_invariance",
        "gl_equivariance",
        "homogeneity",
        "output_convexity",
        "expansion_agreement",
        "locality",
    ];
    let exact = checks.iter().all(|c| all_pass(report, c, 500));
    let violations = report
        .counterexamples
        .iter()
        .filter(|c| c.check == "dual_invariance_violated" && c.witness.discrepancy() != num::int(0))
        .count();
    let ok = report.ok() && exact && violations == 5 && within(report.wall_time, 60);
    verdict(
        ok,
        format!(
            "{} cases, {} failed, {violations}/5 invariance violations witnessed, {:.2?}",
            report.cases, report.failed, report.wall_time
        ),
    )
}

fn thm_2_1(report: &SuiteReport) -> Verdict {
    let exact = ["decomposition", "polar_symmetry", "polar_diagonal"]
        .iter()
        .all(|c| all_pass(report, c, 50));
    verdict(
        report.ok() && exact,
        format!("{} cases, {} failed, {:.2?}", report.cases, report.failed, report.wall_time),
    )
}

fn thm_b(report: &SuiteReport) -> Verdict {
    let gap_one = report.counterexamples.iter().any(|c| {
        c.check == "canonical_witness" && num::abs(&c.witness.discrepancy()) == num::int(1)
    });
    let ok = report.ok()
        && all_pass(report, "sl2_contravariance", 100)
        && all_pass(report, "constant_contravariance", 100)
        && gap_one
        && within(report.wall_time, 30);
    verdict(
        ok,
        format!(
            "{} cases, {} failed, canonical gap 1: {gap_one}, {:.2?}",
            report.cases, report.failed, report.wall_time
        ),
    )
}

fn cor_e(report: &SuiteReport) -> Verdict {
    let (cases, _) = tally(report, "nonlinearity");
    let witnessed = report
        .counterexamples
        .iter()
        .filter(|c| c.check == "nonlinearity" && c.witness.discrepancy() != num::int(0))
        .count();
    let ok = report.ok()
        && cases > 0
        && witnessed == cases
        && all_pass(report, "zero_map", report.trials)
        && within(report.wall_time, 30);
    verdict(
        ok,
        format!("{witnessed}/{cases} nonlinearity witnesses, zero map exact, {:.2?}", report.wall_time),
    )
}

fn classical(report: &SuiteReport) -> Verdict {
    let ok = report.ok()
        && all_pass(report, "cut_difference", 50)
        && all_pass(report, "cut_projection", 50)
        && ["difference_cube", "difference_triangle_ratio", "projection_cube_axes", "projection_monte_carlo", "square_cut"]
            .iter()
            .all(|c| {
                let (n, p) = tally(report, c);
                n > 0 && n == p
            })
        && within(report.wall_time, 120);
    verdict(
        ok,
        format!("{} cases, {} failed, {:.2?}", report.cases, report.failed, report.wall_time),
    )
}

fn determinism_and_replay(reports: &[SuiteReport]) -> Verdict {
    let mut identical = 0;
    for suite in Suite::ALL {
        let a = emit_report(&run(suite, 7, 5), Format::Machine);
        let b = emit_report(&run(suite, 7, 5), Format::Machine);
        if a == b {
            identical += 1;
        }
    }
    let mut replayed = 0;
    let mut mismatched = 0;
    for report in reports {
        // replay from the emitted document, not the in-memory report
        let text = emit_report(report, Format::Machine);
        let parsed = match parse_document(&text, &report.suite) {
            Ok(Document::Report(r)) => r,
            _ => return verdict(false, format!("{} report does not parse back", report.suite)),
        };
        let witnesses: Vec<&Witness> = parsed.witnesses().collect();
        for w in witnesses {
            replayed += 1;
            match w.replay() {
                Ok(r) if r.matches() => {}
                _ => mismatched += 1,
            }
        }
    }
    let suites = Suite::ALL.len();
    verdict(
        identical == suites && mismatched == 0 && replayed > 0,
        format!("{identical}/{suites} suites byte-identical, {replayed} witnesses replayed, {mismatched} mismatches"),
    )
}

fn main() -> ExitCode {
    let mut lines: Vec<(&str, Verdict)> = Vec::new();
    let mut report_line = |name: &'static str, v: Verdict| {
        println!("criterion {name}: {} ({})", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        lines.push((name, v));
    };

    report_line("1 conjugation involution", conjugation_involution());
    let a = run(Suite::ThmA, SEED, 100);
    report_line("2 thm-a", thm_a(&a));
    let t21 = run(Suite::Thm21, SEED, 50);
    report_line("3 thm-2-1", thm_2_1(&t21));
    let b = run(Suite::ThmB, SEED, 100);
    report_line("4 thm-b", thm_b(&b));
    let e = run(Suite::CorE, SEED, 50);
    report_line("5 cor-e", cor_e(&e));
    let c = run(Suite::Classical, SEED, 50);
    report_line("6 classical", classical(&c));
    report_line("7 determinism and replay", determinism_and_replay(&[a, t21, b, e, c]));

    let failed = lines.iter().filter(|(_, v)| !v.ok).count();
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
