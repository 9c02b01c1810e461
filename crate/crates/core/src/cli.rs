//! Command-line interface.
//!
//! Six commands over structure-matrix files: `analyze`, `derive`, `certify`,
//! `classify`, `check <algebra> <matrix>`, and `batch <dir>`. `--json`
//! switches from human-readable text to deterministic JSON.
//!
//! Exit codes: 0 success; 1 usage error; 2 unreadable or malformed input;
//! 3 internal inconsistency (a certified zero cell contradicted by the exact
//! solver, which soundness says should never happen); 4 failed derivation
//! check. Every failure prints one `error: <kind>: <detail>` line to stderr.

use crate::algebra::{parse_algebra, parse_derivation, DerivationMatrix, EvolutionAlgebra};
use crate::classify3::{template_check, template_parameter_count, TypeMatch};
use crate::graph::VertexCycle;
use crate::rational::{format_rational, Rational};
use crate::report::{
    analyze, build_report, classification_report, consistency, emit_report, Analysis,
    ClassificationReport, Report,
};
use crate::solver::{is_derivation, RowOrigin};
use crate::structural::{Witness, WitnessValue, ZeroCertificate};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "evoalg",
    version,
    about = "Exact derivation spaces of evolution algebras",
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit deterministic JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for commands that generate random inputs (none currently do).
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph, twin partition, certificates, and derivation space of one algebra.
    Analyze {
        /// Structure-matrix file.
        path: PathBuf,
    },
    /// Derivation dimension and an exact basis.
    Derive {
        /// Structure-matrix file.
        path: PathBuf,
    },
    /// Zero certificates, cross-checked against the exact solver.
    Certify {
        /// Structure-matrix file.
        path: PathBuf,
    },
    /// Match a three-dimensional algebra against the classification table.
    Classify {
        /// Structure-matrix file.
        path: PathBuf,
    },
    /// Verify a candidate derivation matrix against an algebra.
    Check {
        /// Structure-matrix file.
        algebra: PathBuf,
        /// Candidate matrix file, same format without the product semantics.
        matrix: PathBuf,
    },
    /// Run derive over every file under a directory, output ordered by path.
    Batch {
        /// Directory searched recursively.
        dir: PathBuf,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim();
            let detail = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: usage: {detail}");
            return 1;
        }
    };
    // --seed is reserved for future generating commands; accepted, unused.
    let _ = cli.seed;
    match &cli.command {
        Command::Analyze { path } => cmd_analyze(path, cli.json),
        Command::Derive { path } => cmd_derive(path, cli.json),
        Command::Certify { path } => cmd_certify(path, cli.json),
        Command::Classify { path } => cmd_classify(path, cli.json),
        Command::Check { algebra, matrix } => cmd_check(algebra, matrix, cli.json),
        Command::Batch { dir } => cmd_batch(dir, cli.json),
    }
}

// --- failure plumbing ---------------------------------------------------------

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    detail: String,
}

impl Failure {
    fn emit(&self, code: i32) -> i32 {
        eprintln!("error: {}: {}", self.kind, self.detail);
        code
    }
}

fn read_algebra(path: &Path) -> Result<EvolutionAlgebra, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        kind: "io",
        detail: format!("{}: {e}", path.display()),
    })?;
    parse_algebra(&text).map_err(|e| Failure {
        kind: "parse",
        detail: format!("{}: {e}", path.display()),
    })
}

fn read_matrix(path: &Path) -> Result<DerivationMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        kind: "io",
        detail: format!("{}: {e}", path.display()),
    })?;
    parse_derivation(&text).map_err(|e| Failure {
        kind: "parse",
        detail: format!("{}: {e}", path.display()),
    })
}

// --- human rendering ------------------------------------------------------------

fn aligned(rows: &[Vec<Rational>]) -> Vec<String> {
    let strings: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect();
    let ncols = strings.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| strings.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    strings
        .iter()
        .map(|r| {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>width$}", width = w))
                .collect();
            format!("  [ {} ]", cells.join("  "))
        })
        .collect()
}

fn fmt_set(indices: &[usize]) -> String {
    let inner: Vec<String> = indices.iter().map(|&v| (v + 1).to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn fmt_cycle(c: &VertexCycle) -> String {
    let mut hops: Vec<String> = c.vertices.iter().map(|&v| (v + 1).to_string()).collect();
    if let Some(first) = hops.first().cloned() {
        hops.push(first);
    }
    hops.join(" -> ")
}

fn fmt_witness(w: &Witness) -> String {
    let value = match &w.value {
        WitnessValue::Index(v) => (v + 1).to_string(),
        WitnessValue::Indices(vs) => fmt_set(vs),
        WitnessValue::Cell(r, c) => format!("({},{})", r + 1, c + 1),
        WitnessValue::Scalar(q) => format_rational(q),
    };
    format!("{}={}", w.label, value)
}

fn fmt_certificate(c: &ZeroCertificate) -> String {
    let witnesses: Vec<String> = c.witnesses.iter().map(fmt_witness).collect();
    format!(
        "  ({},{}) {} {}",
        c.row + 1,
        c.col + 1,
        c.rule.name(),
        witnesses.join(" ")
    )
}

fn fmt_origin(origin: &RowOrigin) -> String {
    match origin {
        RowOrigin::CrossTerm { i, j, k } => {
            format!("cross term (i={}, j={}, k={})", i + 1, j + 1, k + 1)
        }
        RowOrigin::SquareTerm { i, j } => {
            format!("square term (i={}, j={})", i + 1, j + 1)
        }
    }
}

fn fmt_classification(m: &TypeMatch) -> String {
    match m {
        TypeMatch::Type { id, assignment } => format!(
            "type {id}, assignment i={} j={} k={}",
            assignment.i + 1,
            assignment.j + 1,
            assignment.k + 1
        ),
        TypeMatch::TwinFree => "twin-free (trivial derivation space)".to_string(),
        TypeMatch::NotApplicable { reason } => format!("not applicable: {reason}"),
    }
}

fn print_basis(analysis: &Analysis) {
    println!("derivation dimension: {}", analysis.space.dimension);
    for (idx, b) in analysis.space.basis.iter().enumerate() {
        println!("basis element {}:", idx + 1);
        for line in aligned(b.rows()) {
            println!("{line}");
        }
    }
}

// --- commands -------------------------------------------------------------------

fn cmd_analyze(path: &Path, json: bool) -> i32 {
    let a = match read_algebra(path) {
        Ok(a) => a,
        Err(f) => return f.emit(2),
    };
    let analysis = analyze(&a);
    if json {
        println!("{}", emit_report(&analysis, false));
        return 0;
    }
    let n = a.dimension();
    println!("dimension: {n}");
    println!("structure matrix:");
    for line in aligned(a.rows()) {
        println!("{line}");
    }
    println!("graph arrows:");
    for i in 0..n {
        let targets = analysis.graph.out_neighbors(i);
        let rendered = if targets.is_empty() {
            "(none)".to_string()
        } else {
            targets
                .iter()
                .map(|&t| (t + 1).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!("  {} -> {rendered}", i + 1);
    }
    let sinks = &analysis.properties.sinks;
    println!(
        "sinks: {}",
        if sinks.is_empty() { "none".to_string() } else { fmt_set(sinks) }
    );
    println!(
        "connected: {}",
        if analysis.properties.connected { "yes" } else { "no" }
    );
    println!(
        "non-degenerate: {}",
        if analysis.properties.non_degenerate { "yes" } else { "no" }
    );
    println!(
        "cycle: {}",
        match &analysis.properties.cycle {
            Some(c) => fmt_cycle(c),
            None => "none".to_string(),
        }
    );
    println!("twin partition:");
    for class in &analysis.partition.classes {
        println!(
            "  {} with loop {} without loop {}",
            fmt_set(&class.members),
            fmt_set(&class.with_loop),
            fmt_set(&class.without_loop)
        );
    }
    println!(
        "twin-free: {}",
        if analysis.partition.is_twin_free() { "yes" } else { "no" }
    );
    println!(
        "certified zero cells: {} of {}",
        analysis.pattern.proven_count(),
        n * n
    );
    println!("derivation dimension: {}", analysis.space.dimension);
    if let Some(m) = &analysis.classification {
        println!("classification: {}", fmt_classification(m));
    }
    0
}

fn cmd_derive(path: &Path, json: bool) -> i32 {
    let a = match read_algebra(path) {
        Ok(a) => a,
        Err(f) => return f.emit(2),
    };
    let analysis = analyze(&a);
    if json {
        println!("{}", emit_report(&analysis, false));
    } else {
        print_basis(&analysis);
    }
    0
}

fn first_inconsistency(analysis: &Analysis) -> Option<&ZeroCertificate> {
    analysis.pattern.certificates().find(|c| {
        analysis
            .space
            .basis
            .iter()
            .any(|b| !num::Zero::is_zero(b.entry(c.row, c.col)))
    })
}

fn cmd_certify(path: &Path, json: bool) -> i32 {
    let a = match read_algebra(path) {
        Ok(a) => a,
        Err(f) => return f.emit(2),
    };
    let analysis = analyze(&a);
    let consistent = consistency(&analysis);
    if json {
        println!("{}", emit_report(&analysis, true));
    } else {
        let n = a.dimension();
        println!(
            "zero certificates ({} of {} cells):",
            analysis.pattern.proven_count(),
            n * n
        );
        for c in analysis.pattern.certificates() {
            println!("{}", fmt_certificate(c));
        }
        println!(
            "consistency: {}",
            if consistent { "confirmed" } else { "CONTRADICTED" }
        );
    }
    if consistent {
        0
    } else {
        let detail = match first_inconsistency(&analysis) {
            Some(c) => format!(
                "cell ({},{}) certified zero by {} but the solver basis is nonzero there",
                c.row + 1,
                c.col + 1,
                c.rule.name()
            ),
            None => "consistency verdict false without a witness".to_string(),
        };
        Failure { kind: "internal inconsistency", detail }.emit(3)
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    classification: ClassificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    template_check: Option<TemplateCheckReport>,
    derivation_dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    template_parameters: Option<usize>,
}

#[derive(Serialize)]
struct TemplateCheckReport {
    verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<ViolationReport>,
}

#[derive(Serialize)]
struct ViolationReport {
    row: usize,
    col: usize,
    expected: String,
    found: String,
}

fn cmd_classify(path: &Path, json: bool) -> i32 {
    let a = match read_algebra(path) {
        Ok(a) => a,
        Err(f) => return f.emit(2),
    };
    let analysis = analyze(&a);
    let verdict = analysis.classification.clone().unwrap_or(TypeMatch::NotApplicable {
        reason: "n must be 3".into(),
    });
    let checked = match &verdict {
        TypeMatch::Type { id, assignment } => {
            Some((*id, template_check(&a, *id, assignment, &analysis.space)))
        }
        _ => None,
    };
    if json {
        let output = ClassifyOutput {
            classification: classification_report(&verdict),
            template_check: checked.as_ref().map(|(_, check)| TemplateCheckReport {
                verdict: check.verdict,
                violation: check.violation.as_ref().map(|v| ViolationReport {
                    row: v.row + 1,
                    col: v.col + 1,
                    expected: format_rational(&v.expected),
                    found: format_rational(&v.found),
                }),
            }),
            derivation_dimension: analysis.space.dimension,
            template_parameters: checked.as_ref().map(|(id, _)| template_parameter_count(*id)),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&output).expect("classify output serialization")
        );
        return 0;
    }
    println!("classification: {}", fmt_classification(&verdict));
    if let Some((id, check)) = &checked {
        println!(
            "template parameters: {}, solver dimension: {}",
            template_parameter_count(*id),
            analysis.space.dimension
        );
        if check.verdict {
            println!("template check: passes");
        } else {
            match &check.violation {
                Some(v) => println!(
                    "template check: table discrepancy at ({},{}): expected {}, found {}",
                    v.row + 1,
                    v.col + 1,
                    format_rational(&v.expected),
                    format_rational(&v.found)
                ),
                None => println!(
                    "template check: table discrepancy (expression failed to evaluate)"
                ),
            }
        }
    } else {
        println!("derivation dimension: {}", analysis.space.dimension);
    }
    0
}

#[derive(Serialize)]
struct CheckOutput {
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_residual: Option<ResidualReport>,
}

#[derive(Serialize)]
struct ResidualReport {
    origin: OriginReport,
    value: String,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum OriginReport {
    CrossTerm { i: usize, j: usize, k: usize },
    SquareTerm { i: usize, j: usize },
}

fn cmd_check(algebra: &Path, matrix: &Path, json: bool) -> i32 {
    let a = match read_algebra(algebra) {
        Ok(a) => a,
        Err(f) => return f.emit(2),
    };
    let d = match read_matrix(matrix) {
        Ok(d) => d,
        Err(f) => return f.emit(2),
    };
    let check = match is_derivation(&a, &d) {
        Ok(check) => check,
        Err(e) => return Failure { kind: "input", detail: e.to_string() }.emit(2),
    };
    if json {
        let output = CheckOutput {
            holds: check.holds,
            first_residual: check.first_residual.as_ref().map(|r| ResidualReport {
                origin: match r.origin {
                    RowOrigin::CrossTerm { i, j, k } => {
                        OriginReport::CrossTerm { i: i + 1, j: j + 1, k: k + 1 }
                    }
                    RowOrigin::SquareTerm { i, j } => {
                        OriginReport::SquareTerm { i: i + 1, j: j + 1 }
                    }
                },
                value: format_rational(&r.value),
            }),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&output).expect("check output serialization")
        );
    } else {
        println!(
            "derivation check: {}",
            if check.holds { "confirmed" } else { "rejected" }
        );
        if let Some(r) = &check.first_residual {
            println!(
                "first residual: {} = {}",
                fmt_origin(&r.origin),
                format_rational(&r.value)
            );
        }
    }
    if check.holds {
        0
    } else {
        4
    }
}

#[derive(Serialize)]
struct BatchEntry {
    path: String,
    report: Report,
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure {
        kind: "io",
        detail: format!("{}: {e}", dir.display()),
    })?;
    for entry in entries {
        let entry = entry.map_err(|e| Failure {
            kind: "io",
            detail: format!("{}: {e}", dir.display()),
        })?;
        let path = entry.path();
        if path.is_dir() {
            collect_files(&path, out)?;
        } else {
            out.push(path);
        }
    }
    Ok(())
}

fn cmd_batch(dir: &Path, json: bool) -> i32 {
    let mut files = Vec::new();
    if let Err(f) = collect_files(dir, &mut files) {
        return f.emit(2);
    }
    files.sort();
    let results: Vec<(PathBuf, Result<Analysis, Failure>)> = files
        .par_iter()
        .map(|p| (p.clone(), read_algebra(p).map(|a| analyze(&a))))
        .collect();
    if let Some((_, Err(f))) = results.iter().find(|(_, r)| r.is_err()) {
        return f.emit(2);
    }
    if json {
        let entries: Vec<BatchEntry> = results
            .iter()
            .map(|(p, r)| BatchEntry {
                path: p.display().to_string(),
                report: build_report(r.as_ref().expect("errors handled above"), false),
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&entries).expect("batch output serialization")
        );
    } else {
        for (p, r) in &results {
            let analysis = r.as_ref().expect("errors handled above");
            println!("== {}", p.display());
            print_basis(analysis);
        }
    }
    0
}
