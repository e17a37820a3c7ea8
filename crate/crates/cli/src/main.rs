use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use convval::analysis::{falsify_contravariance, Falsification};
use convval::convex::{conjugate, conjugate_cd, Extended};
use convval::harness::{self, emit_report, read_document, to_json, Document, Format, Suite, SuiteReport, Witness};
use convval::num::{self, Rational, Vector};
use convval::polytope::{area_vectors, difference_body, volume, SupportEvaluator};
use convval::valuation::{psi_eval, psi_expand, DiscreteMeasure, ValuationSpec};

#[derive(Parser)]
#[command(name = "convval", version, about = "Exact valuations on max-affine functions and polytopes")]
struct Cli {
    /// Seed for generated inputs.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Trials per randomized check.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    /// Also write the machine-format report (or command output) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Machine,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Human => Format::Human,
            OutputFormat::Machine => Format::Machine,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function or lifted-polytope file at a point.
    Eval {
        file: PathBuf,
        /// Comma-separated rationals, e.g. `1/2,0,-3`.
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Legendre conjugate of a function or lifted-polytope file.
    Conjugate { file: PathBuf },
    /// Projection body of a 2- or 3-polytope: area vectors, or the support value along --direction.
    Projbody {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
    /// Difference body K + (−K) of a polytope.
    Diffbody { file: PathBuf },
    /// Apply a valuation spec to a function, at --at or expanded.
    Psi {
        spec: PathBuf,
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Run a named property suite, or all of them.
    Check {
        #[arg(long)]
        suite: String,
    },
    /// Search for a contravariance counterexample of an equivariant spec.
    Falsify {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Spec file; defaults to the symmetric pair ν = {(1, 1), (−1, 1)}.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Recompute a witness file or every witness of a machine report.
    Replay { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_point(text: &str) -> Result<Vector> {
    text.split(',')
        .map(|s| num::parse_rational(s.trim()).with_context(|| format!("bad coordinate {s:?}")))
        .collect()
}

fn load(path: &Path) -> Result<Document> {
    Ok(read_document(path)?)
}

fn emit(cli: &Cli, human: String, machine: String) -> Result<()> {
    match cli.format {
        OutputFormat::Human => println!("{human}"),
        OutputFormat::Machine => println!("{machine}"),
    }
    if let Some(out) = &cli.out {
        fs::write(out, machine + "\n").with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn show_extended(v: &Extended) -> String {
    match v {
        Extended::Finite(x) => num::format_rational(x),
        Extended::PosInfinity => "+inf".into(),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Eval { file, point } => {
            let x = parse_point(point)?;
            let value = match load(file)? {
                Document::Function(f) => Extended::Finite(f.eval(&x)?),
                Document::Lifted(g) => g.eval(&x)?,
                other => bail!("cannot evaluate a {}", other.kind()),
            };
            let text = show_extended(&value);
            emit(cli, text.clone(), serde_json::to_string(&text)?)?;
        }
        Command::Conjugate { file } => {
            let doc = match load(file)? {
                Document::Function(f) => Document::Lifted(conjugate(&f)),
                Document::Lifted(g) => Document::Function(conjugate_cd(&g)),
                other => bail!("cannot conjugate a {}", other.kind()),
            };
            let text = doc.to_json();
            emit(cli, text.clone(), text)?;
        }
        Command::Projbody { file, direction } => {
            let Document::Polytope(k) = load(file)? else {
                bail!("projbody expects a polytope file");
            };
            match direction {
                Some(u) => {
                    let u = parse_point(u)?;
                    if num::is_zero_vec(&u) {
                        bail!("direction must be nonzero");
                    }
                    let h = SupportEvaluator::projection(&k)?.eval(&u)?;
                    let text = num::format_rational(&h);
                    emit(cli, text.clone(), serde_json::to_string(&text)?)?;
                }
                None => {
                    let areas: Vec<Vec<String>> = area_vectors(&k)?.iter().map(|v| num::format_vector(v)).collect();
                    let text = serde_json::to_string_pretty(&serde_json::json!({ "area_vectors": areas }))?;
                    emit(cli, text.clone(), text)?;
                }
            }
        }
        Command::Diffbody { file } => {
            let Document::Polytope(k) = load(file)? else {
                bail!("diffbody expects a polytope file");
            };
            let d = difference_body(&k)?;
            let machine = to_json(&d);
            let human = format!("{d}\nvolume {}", num::show(&volume(&d)));
            emit(cli, human, machine)?;
        }
        Command::Psi { spec, function, at } => {
            let Document::Spec(spec) = load(spec)? else {
                bail!("expected a valuation spec file");
            };
            let Document::Function(f) = load(function)? else {
                bail!("expected a function file");
            };
            match at {
                Some(x) => {
                    let v = psi_eval(&spec, &f, &parse_point(x)?)?;
                    let text = num::format_rational(&v);
                    emit(cli, text.clone(), serde_json::to_string(&text)?)?;
                }
                None => {
                    let g = psi_expand(&spec, &f)?;
                    emit(cli, g.to_string(), to_json(&g))?;
                }
            }
        }
        Command::Check { suite } => return check(cli, suite),
        Command::Falsify { dim, budget, spec } => {
            let spec = match spec {
                Some(p) => match load(p)? {
                    Document::Spec(s) => s,
                    other => bail!("expected a valuation spec file, got a {}", other.kind()),
                },
                None => ValuationSpec::eq1(*dim, Rational::from_integer(0.into()), DiscreteMeasure::symmetric_pair())?,
            };
            return match falsify_contravariance(&spec, *budget)? {
                Falsification::Witness { candidate, witness } => {
                    let human = format!(
                        "witness at candidate {candidate}: g = {}, f = {}, x = {}, Psi(f o g)[x] = {}, Psi(f)[g^-T x] = {}, gap {}",
                        witness.g,
                        witness.f,
                        num::show_vec(&witness.x),
                        num::show(&witness.composed),
                        num::show(&witness.transported),
                        num::show(&witness.gap())
                    );
                    emit(cli, human, to_json(&Witness::Equivariance(witness)))?;
                    Ok(true)
                }
                Falsification::Exhausted { candidates } => {
                    let text = format!("no witness within {candidates} candidates");
                    emit(cli, text.clone(), serde_json::to_string(&text)?)?;
                    Ok(false)
                }
            };
        }
        Command::Replay { file } => return replay(cli, file),
    }
    Ok(true)
}

fn check(cli: &Cli, name: &str) -> Result<bool> {
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse()?]
    };
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| harness::run(s, cli.seed, cli.trials)).collect();
    let ok = reports.iter().all(SuiteReport::ok);
    let human: String = reports.iter().map(|r| emit_report(r, Format::Human)).collect();
    let machine = if reports.len() == 1 {
        emit_report(&reports[0], Format::Machine)
    } else {
        serde_json::to_string_pretty(&reports)? + "\n"
    };
    match cli.format {
        OutputFormat::Human => print!("{human}"),
        OutputFormat::Machine => print!("{machine}"),
    }
    if let Some(out) = &cli.out {
        fs::write(out, &machine).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(ok)
}

fn replay(cli: &Cli, file: &Path) -> Result<bool> {
    let witnesses: Vec<Witness> = match load(file)? {
        Document::Witness(w) => vec![*w],
        Document::Report(r) => r.witnesses().cloned().collect(),
        other => bail!("cannot replay a {}", other.kind()),
    };
    let mut all_match = true;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for (i, w) in witnesses.iter().enumerate() {
        let r = w.replay()?;
        all_match &= r.matches();
        lines.push(format!(
            "{i}: {} recorded {} recomputed {} {}",
            w.kind(),
            num::show(&r.recorded),
            num::show(&r.recomputed),
            if r.matches() { "ok" } else { "MISMATCH" }
        ));
        rows.push(serde_json::json!({
            "kind": w.kind(),
            "recorded": num::format_rational(&r.recorded),
            "recomputed": num::format_rational(&r.recomputed),
            "matches": r.matches(),
        }));
    }
    if witnesses.is_empty() {
        lines.push("no witnesses".into());
    }
    emit(cli, lines.join("\n"), serde_json::to_string_pretty(&rows)?)?;
    Ok(all_match)
}
