//! `gdd` — check, build, verify, decompose, and survey GDD(m, n; 3, λ) designs.
//!
//! A GDD(m, n; 3, λ) is a list of 3-element blocks over two groups of points
//! (M of size m, N of size n) in which every same-group pair lies in exactly
//! three blocks and every cross pair in exactly λ. The heavy lifting lives in
//! the `gdd-core` library; this binary is the thin, scriptable surface:
//!
//! * `check m n λ` — classify parameters without building anything.
//! * `build m n λ` — construct a design, re-verify it, and print it.
//! * `verify path` — re-count an existing design file pair by pair.
//! * `decompose v k` — split K_v into k Hamiltonian cycles, an optional
//!   1-factor, and triangles.
//! * `survey m_max n_max` — classification table over a parameter range.
//!
//! Exit codes are a stable contract: 0 success (or constructible), 1 failed
//! verification, 2 rejected/infeasible, 3 open/not constructible, 4 search
//! budget exhausted, 64 usage error, 65 unreadable or unparseable file,
//! 70 internal error.
//!
//! All output is deterministic: the same arguments with the same seed yield
//! byte-identical bytes on standard output.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use gdd_core::builder::{build_with_budget, BuildError, GddDesign};
use gdd_core::decomp::{
    decompose_mixed_with_budget, DecompError, MixedDecomposition, DEFAULT_NODE_BUDGET,
};
use gdd_core::feasibility::{classify, gamma_set, lambda_max, Classification};
use gdd_core::verify::verify_gdd;
use gdd_core::{Triple, Vertex};

// ---------------------------------------------------------------------------
// Exit codes
// ---------------------------------------------------------------------------

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_REJECTED: u8 = 2;
const EXIT_OPEN: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_USAGE: u8 = 64;
const EXIT_UNREADABLE: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "gdd",
    version,
    about = "Construct and verify group divisible designs GDD(m, n; 3, lambda)",
    after_help = "Exit codes: 0 ok/constructible, 1 failed verification, 2 rejected/infeasible, \
                  3 open/not constructible, 4 search budget exhausted, 64 usage error, \
                  65 unreadable file."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify (m, n, lambda): rejected, constructible, or open.
    ///
    /// Also prints lambda_max(m, n) and the set of feasible lambda above the
    /// plain group bound. Exits 0 when constructible, 2 when rejected, 3 when
    /// open.
    Check {
        /// Size of the larger group M.
        m: u32,
        /// Size of the smaller group N (m > n >= 1).
        n: u32,
        /// Cross-pair multiplicity (>= 4).
        lambda: u32,
    },

    /// Build a design, re-verify it, and print it to standard output.
    Build {
        /// Size of the larger group M.
        m: u32,
        /// Size of the smaller group N (m > n >= 1).
        n: u32,
        /// Cross-pair multiplicity (>= 4).
        lambda: u32,
        /// Seed for the decomposition searches; equal seeds reproduce the
        /// design byte for byte.
        #[arg(long, env = "GDD_SEED", default_value_t = 0)]
        seed: u64,
        /// Backtracking budget in search nodes.
        #[arg(long, env = "GDD_SEARCH_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = DesignFormat::Json)]
        format: DesignFormat,
    },

    /// Re-count a design file pair by pair; exit 0 iff it is a valid design.
    ///
    /// Reads the JSON or text format emitted by `build` (sniffed from the
    /// content). Every pair whose block count is off is listed on its own
    /// line. Exits 1 on a failed count, 65 on an unreadable file.
    Verify {
        /// Design file to check.
        path: PathBuf,
    },

    /// Decompose K_v into k Hamiltonian cycles, an optional 1-factor, and
    /// triangles.
    ///
    /// Even v requires --factor (triangles alone cannot absorb odd degrees);
    /// odd v forbids it. Infeasible shapes exit 2 with the violated
    /// admissibility rule.
    Decompose {
        /// Number of vertices of the complete graph.
        v: u32,
        /// Number of Hamiltonian cycles to carve out.
        k: u32,
        /// Also carve one perfect matching (required for even v).
        #[arg(long)]
        factor: bool,
        /// Seed for the decomposition searches.
        #[arg(long, env = "GDD_SEED", default_value_t = 0)]
        seed: u64,
        /// Backtracking budget in search nodes.
        #[arg(long, env = "GDD_SEARCH_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = DesignFormat::Text)]
        format: DesignFormat,
    },

    /// Classification table over all m <= m_max, n <= min(m - 1, n_max).
    ///
    /// One row per (m, n, lambda); rows are sorted by (m, n, lambda) and the
    /// summary counts go to standard error.
    Survey {
        /// Largest group size M to scan.
        m_max: u32,
        /// Largest group size N to scan.
        n_max: u32,
        /// Which lambda values get a row per (m, n) pair.
        #[arg(long, value_enum, default_value_t = LambdaPolicy::AllFeasible)]
        lambda_policy: LambdaPolicy,
        /// Output format.
        #[arg(long, value_enum, default_value_t = SurveyFormat::Csv)]
        format: SurveyFormat,
        /// Build and verify every constructible row (parallelized).
        #[arg(long)]
        certify: bool,
        /// Seed used when certifying.
        #[arg(long, env = "GDD_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignFormat {
    /// Canonical JSON: keys sorted, blocks sorted, byte-identical per seed.
    Json,
    /// Header lines `m= n= lambda= seed=`, then one block per line.
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LambdaPolicy {
    /// Every lambda >= 4 passing all three necessary conditions: rows are
    /// never rejected.
    AllFeasible,
    /// Every integer lambda in [4, lambda_max(m, n)], including ones failing
    /// divisibility or parity; rejected rows appear with their reasons.
    UpToLambdaMax,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SurveyFormat {
    Csv,
    Markdown,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; they are not usage errors.
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Check { m, n, lambda } => cmd_check(m, n, lambda),
        Command::Build { m, n, lambda, seed, budget, format } => {
            cmd_build(m, n, lambda, seed, budget, format)
        }
        Command::Verify { path } => cmd_verify(&path),
        Command::Decompose { v, k, factor, seed, budget, format } => {
            cmd_decompose(v, k, factor, seed, budget, format)
        }
        Command::Survey { m_max, n_max, lambda_policy, format, certify, seed } => {
            cmd_survey(m_max, n_max, lambda_policy, format, certify, seed)
        }
    };
    ExitCode::from(code)
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(m: u32, n: u32, lambda: u32) -> u8 {
    let verdict = match classify(m, n, lambda) {
        Ok(verdict) => verdict,
        Err(err) => {
            eprintln!("gdd: {err}");
            return EXIT_USAGE;
        }
    };
    println!("classification: {verdict}");
    match lambda_max(m, n) {
        Some(top) => println!("lambda_max: {top}"),
        None => println!("lambda_max: none"),
    }
    let gamma: Vec<String> = gamma_set(m, n).iter().map(u32::to_string).collect();
    println!("above-group-bound lambdas: {{{}}}", gamma.join(", "));
    match verdict {
        Classification::Constructible { .. } => EXIT_OK,
        Classification::Rejected { .. } => EXIT_REJECTED,
        Classification::Open { .. } => EXIT_OPEN,
    }
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

fn cmd_build(m: u32, n: u32, lambda: u32, seed: u64, budget: u64, format: DesignFormat) -> u8 {
    let design = match build_with_budget(m, n, lambda, seed, budget) {
        Ok(design) => design,
        Err(BuildError::NotConstructible { classification }) => {
            eprintln!("gdd: cannot build: the parameters are {classification}");
            return EXIT_OPEN;
        }
        Err(BuildError::Parameter(err)) => {
            eprintln!("gdd: {err}");
            return EXIT_USAGE;
        }
        Err(BuildError::Decomposition(DecompError::SearchExhausted { .. })) => {
            eprintln!("gdd: search budget exhausted; retry with a larger --budget or another --seed");
            return EXIT_BUDGET;
        }
        Err(err) => {
            eprintln!("gdd: internal error: {err}");
            return EXIT_INTERNAL;
        }
    };
    // Never emit an unchecked design: re-count every pair first.
    let blocks: Vec<[Vertex; 3]> = design.blocks.iter().map(Triple::points).collect();
    match verify_gdd(design.m, design.n, design.lambda, &blocks) {
        Ok(report) if report.ok => {}
        _ => {
            eprintln!("gdd: internal error: built design failed re-verification");
            return EXIT_INTERNAL;
        }
    }
    print!("{}", render_design(&DesignFile::from_design(&design), format));
    EXIT_OK
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(path: &std::path::Path) -> u8 {
    let content = match fs::read_to_string(path) {
        Ok(content) => content,
        Err(err) => {
            eprintln!("gdd: cannot read {}: {err}", path.display());
            return EXIT_UNREADABLE;
        }
    };
    let file = match parse_design(&content) {
        Ok(file) => file,
        Err(err) => {
            eprintln!("gdd: cannot parse {}: {err}", path.display());
            return EXIT_UNREADABLE;
        }
    };
    let header = &file.header;
    let report = match verify_gdd(header.m, header.n, header.lambda, &file.blocks) {
        Ok(report) => report,
        Err(err) => {
            // Malformed blocks and oversized orders are file-level problems.
            eprintln!("gdd: {err}");
            return EXIT_UNREADABLE;
        }
    };
    if report.ok {
        println!(
            "ok: GDD({}, {}; 3, {}) with {} blocks",
            header.m, header.n, header.lambda, report.block_count
        );
        EXIT_OK
    } else {
        for violation in &report.violations {
            println!(
                "pair ({}, {}): expected {} blocks, observed {}",
                label(header.m, violation.a),
                label(header.m, violation.b),
                violation.expected,
                violation.observed
            );
        }
        if let Some(expected) = report.expected_block_count {
            if report.block_count != expected {
                println!("block count: expected {expected}, observed {}", report.block_count);
            }
        }
        eprintln!("gdd: verification failed: {} pair(s) off target", report.violations.len());
        EXIT_VERIFY_FAILED
    }
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

fn cmd_decompose(v: u32, k: u32, factor: bool, seed: u64, budget: u64, format: DesignFormat) -> u8 {
    match decompose_mixed_with_budget(v, k, factor, seed, budget) {
        Ok(decomposition) => {
            print!("{}", render_decomposition(&decomposition, k, seed, format));
            EXIT_OK
        }
        Err(err @ DecompError::Infeasible { .. }) => {
            eprintln!("gdd: {err}");
            EXIT_REJECTED
        }
        Err(err @ DecompError::SearchExhausted { .. }) => {
            eprintln!("gdd: {err}");
            EXIT_BUDGET
        }
    }
}

// ---------------------------------------------------------------------------
// survey
// ---------------------------------------------------------------------------

struct SurveyRow {
    m: u32,
    n: u32,
    lambda: u32,
    lambda_max: Option<u32>,
    verdict: &'static str,
    detail: String,
    /// `Some(ok)` when the row was certified by a build + verify run.
    certified: Option<bool>,
}

fn cmd_survey(
    m_max: u32,
    n_max: u32,
    policy: LambdaPolicy,
    format: SurveyFormat,
    certify: bool,
    seed: u64,
) -> u8 {
    let mut rows = Vec::new();
    for m in 2..=m_max {
        for n in 1..=n_max.min(m.saturating_sub(1)) {
            let Some(top) = lambda_max(m, n) else { continue };
            for lambda in 4..=top {
                let keep = match policy {
                    LambdaPolicy::AllFeasible => {
                        gdd_core::feasibility::in_feasible_set(m, n, lambda)
                    }
                    LambdaPolicy::UpToLambdaMax => true,
                };
                if !keep {
                    continue;
                }
                let verdict = classify(m, n, lambda)
                    .expect("survey enumerates only m > n >= 1 and lambda >= 4");
                let (name, detail) = match &verdict {
                    Classification::Constructible { method } => ("constructible", method.to_string()),
                    Classification::Open { case } => ("open", case.to_string()),
                    Classification::Rejected { violated } => {
                        let reasons: Vec<String> =
                            violated.iter().map(|c| c.to_string()).collect();
                        ("rejected", reasons.join("; "))
                    }
                };
                rows.push(SurveyRow {
                    m,
                    n,
                    lambda,
                    lambda_max: Some(top),
                    verdict: name,
                    detail,
                    certified: None,
                });
            }
        }
    }

    if certify {
        // Each row's pipeline is pure given its seed, so certify in parallel;
        // row order stays sorted because the map preserves positions.
        let status: Vec<Option<bool>> = rows
            .par_iter()
            .map(|row| {
                if row.verdict != "constructible" {
                    return None;
                }
                let design = build_with_budget(row.m, row.n, row.lambda, seed, DEFAULT_NODE_BUDGET);
                Some(design.is_ok_and(|design| {
                    let blocks: Vec<[Vertex; 3]> =
                        design.blocks.iter().map(Triple::points).collect();
                    verify_gdd(design.m, design.n, design.lambda, &blocks)
                        .is_ok_and(|report| report.ok)
                }))
            })
            .collect();
        for (row, certified) in rows.iter_mut().zip(status) {
            row.certified = certified;
        }
    }

    print!("{}", render_survey(&rows, format));

    let constructible = rows.iter().filter(|r| r.verdict == "constructible").count();
    let open = rows.iter().filter(|r| r.verdict == "open").count();
    let rejected = rows.iter().filter(|r| r.verdict == "rejected").count();
    let mut summary = format!(
        "survey: {} row(s): {constructible} constructible, {open} open, {rejected} rejected",
        rows.len()
    );
    if certify {
        let passed = rows.iter().filter(|r| r.certified == Some(true)).count();
        let _ = write!(summary, "; certified {passed}/{constructible}");
    }
    eprintln!("{summary}");
    EXIT_OK
}

fn render_survey(rows: &[SurveyRow], format: SurveyFormat) -> String {
    let mut out = String::new();
    let cell = |row: &SurveyRow| {
        let top = row.lambda_max.map(|t| t.to_string()).unwrap_or_default();
        let certified = match row.certified {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        (top, certified)
    };
    match format {
        SurveyFormat::Csv => {
            out.push_str("m,n,lambda,lambda_max,verdict,detail,certified\n");
            for row in rows {
                let (top, certified) = cell(row);
                // The detail field may contain separators; quote it.
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},\"{}\",{}",
                    row.m, row.n, row.lambda, top, row.verdict, row.detail, certified
                );
            }
        }
        SurveyFormat::Markdown => {
            out.push_str("| m | n | lambda | lambda_max | verdict | detail | certified |\n");
            out.push_str("|---|---|--------|------------|---------|--------|-----------|\n");
            for row in rows {
                let (top, certified) = cell(row);
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} |",
                    row.m, row.n, row.lambda, top, row.verdict, row.detail, certified
                );
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Design files
// ---------------------------------------------------------------------------

/// On-disk form of a design. Fields are declared in sorted key order so the
/// JSON output is canonical; `parse_design ∘ render_design` is the identity
/// on everything `build` emits.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
struct DesignFile {
    /// Sorted triples of point indices: 0..m is group M, m..m+n is group N.
    blocks: Vec<[Vertex; 3]>,
    header: DesignHeader,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
struct DesignHeader {
    /// Name and version of the producing tool.
    generator: String,
    /// Human-readable point labels, one per index: m0..m{m−1}, n0..n{n−1}.
    labels: Vec<String>,
    lambda: u32,
    m: u32,
    n: u32,
    seed: u64,
}

/// Label for point index `v`: `m{v}` in the first group, `n{v−m}` in the second.
fn label(m: u32, v: Vertex) -> String {
    if v < m {
        format!("m{v}")
    } else {
        format!("n{}", v - m)
    }
}

fn canonical_labels(m: u32, n: u32) -> Vec<String> {
    (0..m + n).map(|v| label(m, v)).collect()
}

impl DesignFile {
    fn from_design(design: &GddDesign) -> Self {
        let mut blocks: Vec<[Vertex; 3]> = design.blocks.iter().map(Triple::points).collect();
        blocks.sort_unstable();
        DesignFile {
            blocks,
            header: DesignHeader {
                generator: format!("gdd {}", env!("CARGO_PKG_VERSION")),
                labels: canonical_labels(design.m, design.n),
                lambda: design.lambda,
                m: design.m,
                n: design.n,
                seed: design.seed,
            },
        }
    }
}

fn render_design(file: &DesignFile, format: DesignFormat) -> String {
    match format {
        DesignFormat::Json => {
            let mut out = serde_json::to_string_pretty(file)
                .expect("design files serialize without fallible types");
            out.push('\n');
            out
        }
        DesignFormat::Text => {
            let header = &file.header;
            let mut out = String::new();
            let _ = writeln!(out, "m={}", header.m);
            let _ = writeln!(out, "n={}", header.n);
            let _ = writeln!(out, "lambda={}", header.lambda);
            let _ = writeln!(out, "seed={}", header.seed);
            for &[a, b, c] in &file.blocks {
                let _ = writeln!(
                    out,
                    "{} {} {}",
                    label(header.m, a),
                    label(header.m, b),
                    label(header.m, c)
                );
            }
            out
        }
    }
}

/// Parses either design format, sniffing JSON by a leading `{`.
fn parse_design(content: &str) -> Result<DesignFile, String> {
    if content.trim_start().starts_with('{') {
        parse_design_json(content)
    } else {
        parse_design_text(content)
    }
}

fn parse_design_json(content: &str) -> Result<DesignFile, String> {
    let file: DesignFile = serde_json::from_str(content).map_err(|e| e.to_string())?;
    let header = &file.header;
    let expected = canonical_labels(header.m, header.n);
    if header.labels != expected {
        return Err(format!(
            "label list does not match m = {} and n = {}",
            header.m, header.n
        ));
    }
    Ok(file)
}

fn parse_design_text(content: &str) -> Result<DesignFile, String> {
    let mut lines = content.lines();
    let mut header_field = |name: &str| -> Result<u64, String> {
        let line = lines.next().ok_or_else(|| format!("missing header line {name}="))?;
        let value = line
            .strip_prefix(name)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| format!("expected header line {name}=..., found {line:?}"))?;
        value.trim().parse::<u64>().map_err(|e| format!("bad {name} value {value:?}: {e}"))
    };
    let m = header_field("m")? as u32;
    let n = header_field("n")? as u32;
    let lambda = header_field("lambda")? as u32;
    let seed = header_field("seed")?;

    let parse_point = |token: &str| -> Result<Vertex, String> {
        let (group, index) = token.split_at(1);
        let index: u32 = index.parse().map_err(|_| format!("bad point label {token:?}"))?;
        match group {
            "m" if index < m => Ok(index),
            "n" if index < n => Ok(m + index),
            "m" | "n" => Err(format!("point label {token:?} is out of range")),
            _ => Err(format!("bad point label {token:?}")),
        }
    };
    let mut blocks = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let points: Vec<&str> = line.split_whitespace().collect();
        if points.len() != 3 {
            return Err(format!("expected three point labels per block, found {line:?}"));
        }
        blocks.push([parse_point(points[0])?, parse_point(points[1])?, parse_point(points[2])?]);
    }
    Ok(DesignFile {
        blocks,
        header: DesignHeader {
            generator: format!("gdd {}", env!("CARGO_PKG_VERSION")),
            labels: canonical_labels(m, n),
            lambda,
            m,
            n,
            seed,
        },
    })
}

// ---------------------------------------------------------------------------
// Decomposition rendering
// ---------------------------------------------------------------------------

/// JSON form of a decomposition; field names are in sorted key order.
#[derive(Serialize)]
struct DecompositionFile {
    cycles: Vec<Vec<Vertex>>,
    k: u32,
    one_factor: Option<Vec<(Vertex, Vertex)>>,
    seed: u64,
    triangles: Vec<[Vertex; 3]>,
    v: u32,
}

fn render_decomposition(d: &MixedDecomposition, k: u32, seed: u64, format: DesignFormat) -> String {
    match format {
        DesignFormat::Json => {
            let file = DecompositionFile {
                cycles: d.cycles.iter().map(|c| c.vertices().to_vec()).collect(),
                k,
                one_factor: d.one_factor.as_ref().map(|f| f.pairs().to_vec()),
                seed,
                triangles: d.triangles.iter().map(Triple::points).collect(),
                v: d.v,
            };
            let mut out = serde_json::to_string_pretty(&file)
                .expect("decomposition files serialize without fallible types");
            out.push('\n');
            out
        }
        DesignFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "v={}", d.v);
            let _ = writeln!(out, "k={k}");
            let _ = writeln!(out, "factor={}", d.one_factor.is_some());
            let _ = writeln!(out, "seed={seed}");
            for cycle in &d.cycles {
                let stops: Vec<String> = cycle.vertices().iter().map(u32::to_string).collect();
                let _ = writeln!(out, "cycle {}", stops.join(" "));
            }
            if let Some(factor) = &d.one_factor {
                let pairs: Vec<String> =
                    factor.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
                let _ = writeln!(out, "factor {}", pairs.join(" "));
            }
            for triangle in &d.triangles {
                let [a, b, c] = triangle.points();
                let _ = writeln!(out, "triangle {a} {b} {c}");
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gdd_core::builder::build;

    #[test]
    fn design_files_round_trip_in_both_formats() {
        let design = build(7, 3, 6, 11).expect("(7,3,6) is constructible");
        let file = DesignFile::from_design(&design);
        for format in [DesignFormat::Json, DesignFormat::Text] {
            let rendered = render_design(&file, format);
            let parsed = parse_design(&rendered).expect("own output parses");
            assert_eq!(parsed, file);
            // A second render of the parsed file is byte-identical.
            assert_eq!(render_design(&parsed, format), rendered);
        }
    }

    #[test]
    fn json_keys_are_sorted() {
        let design = build(5, 3, 4, 0).expect("(5,3,4) is constructible");
        let rendered = render_design(&DesignFile::from_design(&design), DesignFormat::Json);
        let blocks_at = rendered.find("\"blocks\"").unwrap();
        let header_at = rendered.find("\"header\"").unwrap();
        assert!(blocks_at < header_at);
        let generator_at = rendered.find("\"generator\"").unwrap();
        let labels_at = rendered.find("\"labels\"").unwrap();
        let lambda_at = rendered.find("\"lambda\"").unwrap();
        let m_at = rendered.find("\"m\"").unwrap();
        let n_at = rendered.find("\"n\"").unwrap();
        let seed_at = rendered.find("\"seed\"").unwrap();
        assert!(generator_at < labels_at && labels_at < lambda_at && lambda_at < m_at);
        assert!(m_at < n_at && n_at < seed_at);
    }

    #[test]
    fn text_parser_rejects_malformed_input() {
        assert!(parse_design_text("").is_err());
        assert!(parse_design_text("m=5\nn=3\nlambda=4\n").is_err());
        assert!(parse_design_text("m=5\nn=3\nlambda=4\nseed=0\nm0 m1\n").is_err());
        assert!(parse_design_text("m=5\nn=3\nlambda=4\nseed=0\nm0 m1 x2\n").is_err());
        assert!(parse_design_text("m=5\nn=3\nlambda=4\nseed=0\nm0 m1 n7\n").is_err());
        assert!(parse_design_text("m=5\nn=3\nlambda=4\nseed=0\nm0 m1 n2\n").is_ok());
    }

    #[test]
    fn json_parser_validates_labels() {
        let design = build(5, 3, 4, 0).unwrap();
        let mut file = DesignFile::from_design(&design);
        file.header.labels[0] = "bogus".into();
        let rendered = render_design(&file, DesignFormat::Json);
        assert!(parse_design(&rendered).is_err());
    }
}
