//! Command-line front end. [`run`] does all the work and returns the exit
//! code and output, so the binary is a thin shell and tests can drive
//! commands in-process.
//!
//! Exit codes: 0 certified/success, 1 refuted/violated, 2 unknown,
//! 3 precondition failure, 4 counterevidence, 64 usage or parse error.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{cell_dist_bounds, min_gap};
use crate::chains::{chain_decomposition, chain_level};
use crate::embedding::{
    certify_embedding, log_commensurability, openness_decision, OpennessError, OpennessOptions,
    SearchBudget,
};
use crate::error::Error;
use crate::example25::verify_example25;
use crate::figure::{export_figure, FigureStyle};
use crate::fixtures;
use crate::ifs::{Ifs, Word};
use crate::io;
use crate::rational::{format_rational, parse_rational};
use crate::report;
use crate::similitude::Similitude;
use crate::ssc::{check_ssc, dimension, SscResult};
use crate::symmetry::{symmetry_decision, SymmetryOutcome, SymmetryProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_COUNTEREVIDENCE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "selfsim",
    version,
    about = "Exact decision procedures for self-similar sets"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify or refute strong separation.
    CheckSsc {
        /// IFS file, or fixture:NAME.
        file: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Bounds on the minimal squared gap, or on the gap between two cells.
    Gap {
        file: String,
        u: Option<String>,
        v: Option<String>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Chain decomposition at the chain level (or at --level).
    Chains {
        file: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Similarity dimension of a homogeneous separated system.
    Dimension {
        file: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// SVG of the depth-n cover or of exact attractor points.
    Render {
        file: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Style::Boxes)]
        style: Style,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an embedding certificate for a map.
    Embed {
        file: String,
        #[arg(long)]
        map: String,
        /// Maximum relation word length.
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether f(K) is a finite union of cells.
    Openness {
        file: String,
        #[arg(long)]
        map: String,
        /// Certificate file; searched for when absent.
        #[arg(long)]
        evidence: Option<String>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        budget: usize,
    },
    /// Minimal (k, p) with rf^k = r^p.
    Commensurability {
        /// Common ratio r of the system, in (0, 1).
        r: String,
        /// Ratio rf of the map, in (0, 1).
        rf: String,
    },
    /// Symmetry constant c with -S = S + c for a 1d problem file.
    Symmetry {
        file: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        budget: usize,
    },
    /// Verify the nine-map planar counterexample end to end.
    Example25Verify {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Print a bundled fixture as JSON.
    Fixture { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Style {
    Boxes,
    Points,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    inputs: Vec<Value>,
    results: Value,
    certificates: Vec<Value>,
    timings: Value,
    exit_status: i32,
}

struct Output {
    code: i32,
    text: String,
    results: Value,
    certificates: Vec<Value>,
}

impl Output {
    fn new(code: i32, text: String, results: Value) -> Self {
        Self {
            code,
            text,
            results,
            certificates: Vec::new(),
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_USAGE,
            Error::BoundsTooLoose(_) => EXIT_UNKNOWN,
            _ => EXIT_PRECONDITION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Inputs read during a command, with their digests.
#[derive(Default)]
struct Inputs(Vec<Value>);

impl Inputs {
    fn read(&mut self, source: &str) -> Result<String, Failure> {
        let text = match source.strip_prefix("fixture:") {
            Some(name) => fixture_json(name)?,
            None => std::fs::read_to_string(source)
                .map_err(|e| fail(EXIT_USAGE, format!("{source}: {e}")))?,
        };
        self.0
            .push(json!({"source": source, "sha256": io::sha256_hex(text.as_bytes())}));
        Ok(text)
    }

    fn ifs(&mut self, source: &str) -> Result<Ifs, Failure> {
        let text = self.read(source)?;
        io::parse_ifs(&text).map_err(|e| fail(EXIT_USAGE, format!("{source}: {e}")))
    }

    fn map(&mut self, source: &str) -> Result<Similitude, Failure> {
        let text = self.read(source)?;
        io::parse_map(&text).map_err(|e| fail(EXIT_USAGE, format!("{source}: {e}")))
    }

    fn problem(&mut self, source: &str) -> Result<SymmetryProblem, Failure> {
        let text = self.read(source)?;
        io::parse_problem(&text).map_err(|e| fail(EXIT_USAGE, format!("{source}: {e}")))
    }
}

/// JSON text of a bundled fixture.
fn fixture_json(name: &str) -> Result<String, Failure> {
    Ok(match name {
        "cantor" => io::ifs_to_json(&fixtures::cantor()),
        "halves" => io::ifs_to_json(&fixtures::halves()),
        "fifths" => io::ifs_to_json(&fixtures::fifths()),
        "near-touching" => io::ifs_to_json(&fixtures::near_touching()),
        "example25" => io::ifs_to_json(&fixtures::example25()),
        "example25-f" => io::map_to_json(&fixtures::example25_f()),
        "cantor-pair" => io::problem_to_json(&fixtures::cantor_pair()),
        "fifths-pair" => io::problem_to_json(&fixtures::fifths_pair()),
        "broken-pair" => io::problem_to_json(&fixtures::broken_pair()),
        other => {
            return Err(fail(
                EXIT_USAGE,
                format!(
                    "unknown fixture {other:?}; known: {}",
                    fixtures::NAMES.join(", ")
                ),
            ))
        }
    })
}

fn budget(max_word_len: usize) -> SearchBudget {
    SearchBudget {
        max_word_len,
        ..SearchBudget::default()
    }
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Output, Failure> {
    match cmd {
        Command::CheckSsc { file, depth } => {
            let ifs = inputs.ifs(file)?;
            let result = check_ssc(&ifs, *depth);
            let (code, text) = match &result {
                SscResult::Certified { gap } => (
                    EXIT_OK,
                    format!(
                        "certified: delta^2 in [{}, {}] (depth {})",
                        format_rational(&gap.lower),
                        format_rational(&gap.upper),
                        gap.depth
                    ),
                ),
                SscResult::Violated { words, point } => (
                    EXIT_REFUTED,
                    format!(
                        "violated: {} and {} both name the point {point}",
                        words.0, words.1
                    ),
                ),
                SscResult::Unknown { depth, gap } => (
                    EXIT_UNKNOWN,
                    format!(
                        "unknown at depth {depth}: delta^2 in [{}, {}]",
                        format_rational(&gap.lower),
                        format_rational(&gap.upper)
                    ),
                ),
            };
            Ok(Output::new(code, text, report::ssc_json(&result)))
        }
        Command::Gap { file, u, v, depth } => {
            let ifs = inputs.ifs(file)?;
            let gap = match (u, v) {
                (Some(u), Some(v)) => {
                    let (u, v): (Word, Word) = (u.parse()?, v.parse()?);
                    cell_dist_bounds(&ifs, &u, &v, *depth)?
                }
                (None, None) => min_gap(&ifs, *depth).0,
                _ => return Err(fail(EXIT_USAGE, "give two cell words or none")),
            };
            Ok(Output::new(
                EXIT_OK,
                format!(
                    "gap^2 in [{}, {}] (depth {}), witness {} / {}",
                    format_rational(&gap.lower),
                    format_rational(&gap.upper),
                    gap.depth,
                    gap.witness.0,
                    gap.witness.1
                ),
                report::gap_json(&gap),
            ))
        }
        Command::Chains { file, depth, level } => {
            let ifs = inputs.ifs(file)?;
            let n = match level {
                Some(n) => *n,
                None => chain_level(&ifs, *depth)?,
            };
            let cs = chain_decomposition(&ifs, n, *depth)?;
            Ok(Output::new(
                EXIT_OK,
                report::chains_text(&cs),
                report::chains_json(&cs),
            ))
        }
        Command::Dimension { file, depth } => {
            let ifs = inputs.ifs(file)?;
            let d = dimension(&ifs, *depth)?;
            Ok(Output::new(
                EXIT_OK,
                format!(
                    "dimension = log {} / log {} ~ {:.6}",
                    d.maps,
                    format_rational(&d.ratio.recip()),
                    d.approx()
                ),
                json!({"maps": d.maps, "ratio": format_rational(&d.ratio), "approx": d.approx(), "is_one": d.is_one()}),
            ))
        }
        Command::Render {
            file,
            depth,
            style,
            out,
        } => {
            let ifs = inputs.ifs(file)?;
            let style = match style {
                Style::Boxes => FigureStyle::Boxes,
                Style::Points => FigureStyle::Points,
            };
            let svg = export_figure(&ifs, *depth, style)?;
            let digest = io::sha256_hex(svg.as_bytes());
            let text = match out {
                Some(path) => {
                    std::fs::write(path, &svg)
                        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
                    format!("wrote {} ({} bytes)", path.display(), svg.len())
                }
                None => svg.trim_end().to_string(),
            };
            Ok(Output::new(
                EXIT_OK,
                text,
                json!({"sha256": digest, "bytes": svg.len()}),
            ))
        }
        Command::Embed {
            file,
            map,
            budget: b,
            out,
        } => {
            let ifs = inputs.ifs(file)?;
            let f = inputs.map(map)?;
            if f.dim() != ifs.dim() {
                return Err(Error::DimensionMismatch {
                    expected: ifs.dim(),
                    found: f.dim(),
                }
                .into());
            }
            match certify_embedding(&f, &ifs, &[], budget(*b)) {
                Some(cert) => {
                    let doc = io::certificate_to_json(&cert);
                    if let Some(path) = out {
                        std::fs::write(path, &doc)
                            .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
                    }
                    let mut text = format!("certified: |G| = {}\n", cert.generators.len());
                    for (i, g) in cert.generators.iter().enumerate() {
                        text.push_str(&format!("g{i}: {g}\n"));
                    }
                    for r in &cert.relations {
                        let target = r.target.map_or("id".to_string(), |t| format!("g{t}"));
                        text.push_str(&format!(
                            "g{} o phi_{} = phi_{} o {}\n",
                            r.generator, r.letter, r.word, target
                        ));
                    }
                    text.push_str(&format!("sha256 {}", cert.digest()));
                    let mut o = Output::new(EXIT_OK, text, json!({"status": "certified"}));
                    o.certificates.push(report::certificate_json(&cert));
                    Ok(o)
                }
                None => Ok(Output::new(
                    EXIT_UNKNOWN,
                    format!("unknown: no certificate within word length {b}"),
                    json!({"status": "unknown"}),
                )),
            }
        }
        Command::Openness {
            file,
            map,
            evidence,
            depth,
            budget: b,
        } => {
            let ifs = inputs.ifs(file)?;
            let f = inputs.map(map)?;
            let cert = match evidence {
                Some(source) => {
                    let text = inputs.read(source)?;
                    io::parse_certificate(&text)
                        .map_err(|e| fail(EXIT_USAGE, format!("{source}: {e}")))?
                }
                None => certify_embedding(&f, &ifs, &[], budget(*b)).ok_or_else(|| {
                    fail(
                        EXIT_UNKNOWN,
                        "unknown: no embedding certificate found for f",
                    )
                })?,
            };
            let options = OpennessOptions {
                depth: *depth,
                budget: budget(*b),
                ..OpennessOptions::default()
            };
            match openness_decision(&f, &ifs, &cert, &options) {
                Ok(c) => {
                    let mut text = format!(
                        "open: f^{}(K) = union of {} cells of level {} over the power-{} system\n",
                        c.relation.k,
                        c.union.words.len(),
                        c.union.level,
                        c.relation.p
                    );
                    text.push_str(&format!(
                        "cells: {}",
                        c.union
                            .base_words
                            .iter()
                            .map(Word::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    ));
                    let mut o = Output::new(EXIT_OK, text, report::openness_json(&c));
                    o.certificates.push(report::certificate_json(&cert));
                    Ok(o)
                }
                Err(e) => {
                    let code = match &e {
                        OpennessError::NotHomogeneousOrthogonal(_)
                        | OpennessError::NotSeparated(_)
                        | OpennessError::InvalidEvidence(_) => EXIT_PRECONDITION,
                        OpennessError::Unknown(_) => EXIT_UNKNOWN,
                        OpennessError::Inconsistent(_) => EXIT_REFUTED,
                        OpennessError::Core(inner) => Failure::from(inner.clone()).code,
                    };
                    let mut message = e.to_string();
                    if matches!(e, OpennessError::NotHomogeneousOrthogonal(_)) {
                        message.push_str(
                            "\nopenness is only guaranteed for a common orthogonal part; \
                             when orthogonal parts vary f(K) need not be relatively open in K \
                             (see example25-verify)",
                        );
                    }
                    Err(fail(code, message))
                }
            }
        }
        Command::Commensurability { r, rf } => {
            let (r, rf) = (parse_rational(r)?, parse_rational(rf)?);
            Ok(match log_commensurability(&r, &rf)? {
                Some(rel) => Output::new(
                    EXIT_OK,
                    format!(
                        "({})^{} = ({})^{}",
                        format_rational(&rf),
                        rel.k,
                        format_rational(&r),
                        rel.p
                    ),
                    json!({"k": rel.k, "p": rel.p}),
                ),
                None => Output::new(
                    EXIT_REFUTED,
                    "incommensurable: log rf / log r is irrational".into(),
                    Value::Null,
                ),
            })
        }
        Command::Symmetry {
            file,
            depth,
            budget: b,
        } => {
            let problem = inputs.problem(file)?;
            let outcome = symmetry_decision(&problem, *depth, budget(*b))?;
            let value = report::symmetry_json(&outcome);
            Ok(match outcome {
                SymmetryOutcome::Symmetric(res) => {
                    let mut text = format!(
                        "symmetric: -S = S + c with c = {} (normalized c = {}), hull [{}, {}]\n",
                        format_rational(&res.c),
                        format_rational(&res.c_normalized),
                        format_rational(&res.hull.0),
                        format_rational(&res.hull.1)
                    );
                    text.push_str("a_i      b_i - r\n");
                    for (a, b) in &res.endpoints {
                        text.push_str(&format!(
                            "{:<8} {}\n",
                            format_rational(a),
                            format_rational(b)
                        ));
                    }
                    let refl: Vec<String> = res
                        .reflection
                        .iter()
                        .map(|(i, j)| format!("{i}->{j}"))
                        .collect();
                    text.push_str(&format!("reflection: {}", refl.join(" ")));
                    let mut o = Output::new(EXIT_OK, text, value);
                    o.certificates
                        .extend(res.same_attractor.iter().map(report::certificate_json));
                    o
                }
                SymmetryOutcome::Counterevidence(rep) => Output::new(
                    EXIT_COUNTEREVIDENCE,
                    format!("counterevidence:\n{rep}"),
                    value,
                ),
                SymmetryOutcome::Unknown(why) => {
                    Output::new(EXIT_UNKNOWN, format!("unknown: {why}"), value)
                }
            })
        }
        Command::Example25Verify { nmax, depth } => {
            let run = verify_example25(*nmax, *depth)?;
            let code = if run.passed() { EXIT_OK } else { EXIT_REFUTED };
            let mut o = Output::new(code, run.to_string(), report::example25_json(&run));
            if let Some(c) = &run.certificate {
                o.certificates.push(report::certificate_json(c));
            }
            if let Some(step) = run.failed_step() {
                o.text.push_str(&format!("\nfailed at step ({})", step.id));
            }
            Ok(o)
        }
        Command::Fixture { name } => {
            let text = fixture_json(name)?;
            let value: Value = serde_json::from_str(&text).expect("fixture JSON");
            Ok(Output::new(EXIT_OK, text.trim_end().to_string(), value))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::CheckSsc { .. } => "check-ssc",
        Command::Gap { .. } => "gap",
        Command::Chains { .. } => "chains",
        Command::Dimension { .. } => "dimension",
        Command::Render { .. } => "render",
        Command::Embed { .. } => "embed",
        Command::Openness { .. } => "openness",
        Command::Commensurability { .. } => "commensurability",
        Command::Symmetry { .. } => "symmetry",
        Command::Example25Verify { .. } => "example25-verify",
        Command::Fixture { .. } => "fixture",
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), rendered)
            } else {
                (rendered, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let started = Instant::now();
    let mut inputs = Inputs::default();
    let result = dispatch(&cli.command, &mut inputs);
    let elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;
    let name = command_name(&cli.command);
    match (cli.format, result) {
        (Format::Text, Ok(o)) => Outcome {
            code: o.code,
            stdout: format!("{}\n", o.text),
            stderr: String::new(),
        },
        (Format::Text, Err(f)) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
        (Format::Structured, result) => {
            let (code, results, certificates, stderr) = match result {
                Ok(o) => (o.code, o.results, o.certificates, String::new()),
                Err(f) => (
                    f.code,
                    json!({"error": f.message}),
                    Vec::new(),
                    format!("error: {}\n", f.message),
                ),
            };
            let report = RunReport {
                command: name,
                inputs: inputs.0,
                results,
                certificates,
                timings: json!({"total_ms": elapsed_ms}),
                exit_status: code,
            };
            let mut stdout = serde_json::to_string_pretty(&report).expect("report serializes");
            stdout.push('\n');
            Outcome {
                code,
                stdout,
                stderr,
            }
        }
    }
}
