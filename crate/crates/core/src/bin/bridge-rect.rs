use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use bridge_rect::arrangement::{superpose, Owner};
use bridge_rect::catalog;
use bridge_rect::criteria::{
    certify_no_rc_partner, classify_adjacent_pairs, find_waves, normal_form_report, rectangle_report,
    rectangle_tuples_by_scan, PairClass,
};
use bridge_rect::format::{load_system, parse_raw, save_system, to_text, FormatError};
use bridge_rect::harness::verify_85;
use bridge_rect::moves::{apply_twist, enumerate_systems, TwistCircle, TwistSpec};
use bridge_rect::sphere::{are_isotopic, validate_system, ArcSystem};
use bridge_rect::svg::{render_pair, render_system};

/// Bridge-arc systems on the 6-punctured sphere: rectangle condition, waves,
/// normal form, and the bounded 8_5 verification.
///
/// SYSTEM arguments are file paths in the `bridge-arc-system v1` format or
/// built-ins: @epsilon, @delta85, @rc-positive-A, @rc-positive-B.
#[derive(Parser)]
#[command(name = "bridge-rect", version)]
struct Cli {
    /// Exit 0 only when the command's verdict equals this value, 1 otherwise.
    #[arg(long, global = true)]
    expect: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every invariant of a system and report all violations.
    Validate { system: String },
    /// Decide whether two systems are isotopic.
    Isotopic { a: String, b: String },
    /// Intersection matrix, crossing count and face statistics of a pair.
    Intersections { a: String, b: String },
    /// Rectangle condition by face census.
    Rc {
        a: String,
        b: String,
        /// Include the face realizing each tuple.
        #[arg(long)]
        witnesses: bool,
    },
    /// Rectangle condition by the independent sign scan.
    ScanRc { a: String, b: String },
    /// Waves of TARGET with respect to REFERENCE.
    Waves { reference: String, target: String },
    /// Normal form of A and B with respect to each other.
    NormalForm { a: String, b: String },
    /// Classify adjacent same-arc crossing pairs along REFERENCE.
    Classify { reference: String, target: String },
    /// Look for an arc of GAMMA missing a pair of B's arcs.
    Certify { gamma: String, b: String },
    /// Enumerate systems of BASE's tangle by rewiring.
    Enumerate {
        #[arg(long, default_value = "@epsilon")]
        base: String,
        #[arg(long, default_value_t = 1)]
        rewires: usize,
        #[arg(long, default_value_t = 4)]
        max_crossings: usize,
        #[arg(long, default_value_t = 100_000)]
        max_classes: usize,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Directory receiving one file per class.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a catalog twist (eps1..eps3, pair12..pair61).
    Twist {
        system: String,
        #[arg(long)]
        circle: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        half_turns: i32,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded verification for @delta85 against the enumerated family.
    #[command(name = "verify-85")]
    Verify85 {
        #[arg(long, default_value_t = 2)]
        rewires: usize,
        #[arg(long, default_value_t = 8)]
        max_crossings: usize,
        #[arg(long, default_value_t = 100_000)]
        max_classes: usize,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include a per-system verdict list in the report.
        #[arg(long)]
        witnesses: bool,
    },
    /// Emit SVG for one system or a pair.
    Render {
        a: String,
        b: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("unknown built-in `{0}` (expected @epsilon, @delta85, @rc-positive-A or @rc-positive-B)")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("unknown twist circle `{0}`")]
    UnknownCircle(String),
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

fn load(arg: &str) -> Result<ArcSystem, CliError> {
    if arg.starts_with('@') {
        catalog::fixture(arg).map(|f| f.system).ok_or_else(|| CliError::UnknownBuiltin(arg.to_string()))
    } else {
        Ok(load_system(Path::new(arg))?)
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

/// The outcome of a command: a verdict word, a machine-readable record and
/// human-readable lines. `contradiction` marks a verdict that refutes an
/// expected property (exit 1 even without `--expect`).
struct Outcome {
    verdict: String,
    record: Value,
    text: Vec<String>,
    contradiction: bool,
}

impl Outcome {
    fn new(verdict: &str, record: Value, text: Vec<String>) -> Self {
        Outcome { verdict: verdict.to_string(), record, text, contradiction: false }
    }
}

fn tuples(ts: &[bridge_rect::criteria::Tuple]) -> Vec<String> {
    ts.iter().map(ToString::to_string).collect()
}

fn run(command: Command) -> Result<Outcome, CliError> {
    Ok(match command {
        Command::Validate { system } => {
            let (name, result) = if system.starts_with('@') {
                (system.clone(), Ok(load(&system)?))
            } else {
                let text = fs::read_to_string(&system)
                    .map_err(|source| FormatError::Io { path: system.clone(), source })?;
                let raw = parse_raw(&text)?;
                (raw.name.clone(), validate_system(&raw))
            };
            match result {
                Ok(sys) => Outcome::new(
                    "valid",
                    json!({"command": "validate", "verdict": "valid", "name": name, "crossings": sys.crossing_count()}),
                    vec![format!("{name}: valid, {} equator crossings", sys.crossing_count())],
                ),
                Err(e) => {
                    let violations: Vec<String> = e.violations.iter().map(ToString::to_string).collect();
                    let mut text = vec![format!("{name}: invalid")];
                    text.extend(violations.iter().map(|v| format!("  {v}")));
                    Outcome {
                        contradiction: true,
                        ..Outcome::new("invalid", json!({"command": "validate", "verdict": "invalid", "name": name, "violations": violations}), text)
                    }
                }
            }
        }
        Command::Isotopic { a, b } => {
            let iso = are_isotopic(&load(&a)?, &load(&b)?);
            let verdict = if iso { "isotopic" } else { "distinct" };
            Outcome::new(verdict, json!({"command": "isotopic", "verdict": verdict}), vec![format!("{a} and {b}: {verdict}")])
        }
        Command::Intersections { a, b } => {
            let (sa, sb) = (load(&a)?, load(&b)?);
            let raw = superpose(&sa, &sb);
            let arr = raw.reduce_to_minimal();
            let m = arr.intersection_matrix();
            let e = arr.euler();
            let n = arr.crossing_count();
            let mut text = vec![format!("{n} crossings in minimal position ({} before reduction)", raw.crossing_count())];
            text.extend(m.iter().enumerate().map(|(i, row)| format!("  {}_{}: {:?}", a, i + 1, row)));
            text.push(format!("  V={} E={} F={} C={}", e.vertices, e.edges, e.faces, e.components));
            Outcome::new(
                &n.to_string(),
                json!({"command": "intersections", "verdict": n, "matrix": m, "rawCrossings": raw.crossing_count(),
                       "vertices": e.vertices, "edges": e.edges, "faces": e.faces, "components": e.components, "eulerHolds": e.holds()}),
                text,
            )
        }
        Command::Rc { a, b, witnesses } => {
            let r = rectangle_report(&load(&a)?, &load(&b)?);
            let verdict = if r.holds { "holds" } else { "fails" };
            let mut record = json!({"command": "rc", "verdict": verdict, "realized": tuples(&r.realized),
                                    "missing": tuples(&r.missing), "diagnostic": r.diagnostic});
            if witnesses {
                record["witnesses"] = json!(r.witnesses.iter().map(|(t, f)| json!({"tuple": t.to_string(), "face": f})).collect::<Vec<_>>());
            }
            let mut text = vec![format!("rectangle condition {verdict}: {}/9 tuples realized", r.realized.len())];
            if let Some(d) = &r.diagnostic {
                text.push(format!("  {d}"));
            }
            text.extend(r.missing.iter().map(|t| format!("  missing {t}")));
            Outcome::new(verdict, record, text)
        }
        Command::ScanRc { a, b } => {
            let set: Vec<_> = rectangle_tuples_by_scan(&load(&a)?, &load(&b)?).into_iter().collect();
            let verdict = if set.len() == 9 { "holds" } else { "fails" };
            Outcome::new(
                verdict,
                json!({"command": "scan-rc", "verdict": verdict, "realized": tuples(&set)}),
                vec![format!("rectangle condition {verdict} by scan: {}/9 tuples realized", set.len())],
            )
        }
        Command::Waves { reference, target } => {
            let waves = find_waves(&load(&reference)?, &load(&target)?);
            let verdict = if waves.is_empty() { "none" } else { "found" };
            let text = std::iter::once(format!("{} wave(s)", waves.len()))
                .chain(waves.iter().map(|w| {
                    format!("  on {target}_{} based at {reference}_{} (edge {})", w.host_arc + 1, w.base_arc + 1, w.subarc.from)
                }))
                .collect();
            Outcome::new(verdict, json!({"command": "waves", "verdict": verdict, "count": waves.len(), "waves": waves}), text)
        }
        Command::NormalForm { a, b } => {
            let r = normal_form_report(&load(&a)?, &load(&b)?);
            let verdict = if r.holds { "normal" } else { "not-normal" };
            let text = std::iter::once(format!("{verdict}: {} violation(s)", r.violations.len()))
                .chain(r.violations.iter().map(|v| {
                    let (on, other) = match v.along {
                        Owner::A => (&a, &b),
                        Owner::B => (&b, &a),
                    };
                    format!("  along {on}_{} at position {}: two points of {other}_{}", v.arc + 1, v.position, v.other_arc + 1)
                }))
                .collect();
            Outcome::new(verdict, json!({"command": "normal-form", "verdict": verdict, "violations": r.violations}), text)
        }
        Command::Classify { reference, target } => {
            let pairs = classify_adjacent_pairs(&load(&reference)?, &load(&target)?);
            let unclassified = pairs.iter().filter(|p| p.class == PairClass::Unclassified).count();
            let verdict = if unclassified == 0 { "classified" } else { "unclassified" };
            let text = std::iter::once(format!("{} adjacent pair(s), {unclassified} unclassified", pairs.len()))
                .chain(pairs.iter().map(|p| format!("  {reference}_{} crossings {} {}: {:?}", p.ref_arc + 1, p.p, p.q, p.class)))
                .collect();
            Outcome::new(verdict, json!({"command": "classify", "verdict": verdict, "pairs": pairs, "unclassified": unclassified}), text)
        }
        Command::Certify { gamma, b } => match certify_no_rc_partner(&load(&gamma)?, &load(&b)?) {
            Ok(Some(c)) => Outcome::new(
                "certificate",
                json!({"command": "certify", "verdict": "certificate", "certificate": c}),
                vec![format!(
                    "{gamma}_{} has no subarc joining {b}_{} and {b}_{}",
                    c.witness_arc + 1,
                    c.missing_pair.0 + 1,
                    c.missing_pair.1 + 1
                )],
            ),
            Ok(None) => Outcome::new("none", json!({"command": "certify", "verdict": "none"}), vec!["no certificate".into()]),
            Err(e) => Outcome::new("degenerate", json!({"command": "certify", "verdict": "degenerate", "error": e}), vec![e.to_string()]),
        },
        Command::Enumerate { base, rewires, max_crossings, max_classes, jobs, out } => {
            let base = load(&base)?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
            let en = pool.install(|| enumerate_systems(&base, rewires, max_crossings, max_classes));
            if let Some(dir) = &out {
                fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.display().to_string(), source })?;
                for (i, e) in en.systems.iter().enumerate() {
                    let sys = e.system.clone().with_name(format!("class-{i:05}"));
                    save_system(&sys, &dir.join(format!("class-{i:05}.bas")))?;
                }
            }
            let verdict = if en.truncated { "truncated" } else { "complete" };
            Outcome::new(
                verdict,
                json!({"command": "enumerate", "verdict": verdict, "classes": en.systems.len(), "candidates": en.candidates,
                       "rewires": rewires, "maxCrossings": max_crossings}),
                vec![format!("{} classes from {} candidates ({verdict})", en.systems.len(), en.candidates)],
            )
        }
        Command::Twist { system, circle, half_turns, out } => {
            let c = TwistCircle::parse(&circle).ok_or_else(|| CliError::UnknownCircle(circle.clone()))?;
            let sys = load(&system)?;
            let name = sys.name.clone();
            let twisted = apply_twist(TwistSpec { circle: c, half_turns }, &sys).with_name(format!("{name}-{circle}^{half_turns}"));
            let text = to_text(&twisted);
            match &out {
                Some(path) => write(path, &text)?,
                None => emit_stdout(&text),
            }
            Outcome::new(
                "done",
                json!({"command": "twist", "verdict": "done", "circle": circle, "halfTurns": half_turns, "crossings": twisted.crossing_count()}),
                vec![format!("{} equator crossings after twisting", twisted.crossing_count())],
            )
        }
        Command::Verify85 { rewires, max_crossings, max_classes, jobs, out, witnesses } => {
            let report = verify_85(rewires, max_crossings, max_classes, jobs, witnesses);
            if let Some(path) = &out {
                write(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
            let verdict = if report.passed() { "verified" } else { "contradicted" };
            let mut text = vec![
                format!(
                    "{} classes (d={rewires}, N={max_crossings}){}: rectangle condition fails for {}",
                    report.classes_enumerated,
                    if report.truncated { ", truncated" } else { "" },
                    report.rc_failures
                ),
                format!("  certificates {} (coverage {:.3})", report.certificates, report.certificate_coverage()),
                format!(
                    "  wave violations {}, normal-form exceptions {}, unclassified pairs {}, oracle mismatches {}, Euler violations {}",
                    report.wave_lemma_violations,
                    report.normal_form_exceptions,
                    report.unclassified_pairs,
                    report.oracle_mismatches,
                    report.euler_violations
                ),
            ];
            for c in &report.counterexamples {
                text.push(format!("  counterexample #{}: {}", c.index, c.reason));
                text.extend(c.system.lines().map(|l| format!("    {l}")));
            }
            let mut record = serde_json::to_value(&report)?;
            record["command"] = json!("verify-85");
            record["verdict"] = json!(verdict);
            Outcome { contradiction: !report.passed(), ..Outcome::new(verdict, record, text) }
        }
        Command::Render { a, b, out } => {
            let sa = load(&a)?;
            let svg = match &b {
                Some(b) => render_pair(&sa, &load(b)?),
                None => render_system(&sa),
            };
            match &out {
                Some(path) => write(path, &svg)?,
                None => emit_stdout(&svg),
            }
            let markers = bridge_rect::svg::count_crossing_markers(&svg);
            Outcome::new("done", json!({"command": "render", "verdict": "done", "crossingMarkers": markers}), vec![format!("{markers} crossing markers")])
        }
    })
}

fn emit_stdout(payload: &str) {
    let _ = std::io::stdout().write_all(payload.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet_stdout = matches!(&cli.command, Command::Twist { out: None, .. } | Command::Render { out: None, .. });
    match run(cli.command) {
        Ok(outcome) => {
            // with the payload on stdout, the record and text go to stderr
            let emit = |line: &str| {
                // a closed pipe downstream is not an error of ours
                let _ = if quiet_stdout {
                    writeln!(std::io::stderr(), "{line}")
                } else {
                    writeln!(std::io::stdout(), "{line}")
                };
            };
            emit(&outcome.record.to_string());
            for line in &outcome.text {
                emit(line);
            }
            let ok = match &cli.expect {
                Some(expected) => outcome.verdict == *expected,
                None => !outcome.contradiction,
            };
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
