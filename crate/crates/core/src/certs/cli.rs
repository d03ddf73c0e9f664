//! The `ramsey` command line.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::{
    builtin_bundle, builtin_closure, load_certificate_file, load_error_report, resolve_cert_path, verify_in_order,
    CertError, CERT_PATH_VAR,
};
use crate::deduction::{CheckOptions, Registry};
use crate::lattice::{
    builtin_gadget, core_mismatch, enumerate, pattern_mod5, verify_gadget, LatticeColoring, LatticeRules, Patch,
    GADGET_NAMES,
};
use crate::report::{emit_report, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "ramsey", about = "Exact checker for red/blue colouring certificates in 3-space")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Fractional digits of decimal renderings.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=60))]
    digits: u32,
    /// Record wall time in reports (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify certificates.
    Verify(VerifyArgs),
    /// Lattice colouring tools.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Print every step of a certificate with its checks and decimal renderings.
    Explain { id: String },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    /// Every bundled certificate, in dependency order.
    #[arg(long)]
    all: bool,
    /// One bundled certificate, after its dependencies.
    #[arg(long)]
    builtin: Option<String>,
    /// A certificate file; bundled dependencies are verified first.
    #[arg(long)]
    cert: Option<String>,
}

#[derive(Subcommand, Debug)]
enum LatticeCommand {
    /// Enumerate total colourings of a rhombus patch.
    Enumerate {
        /// a0:a1,b0:b1
        #[arg(long, allow_hyphen_values = true)]
        patch: String,
        /// JSON list of {"at": [a, b], "color": "red"|"blue"}.
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        /// Forbidden red squared distances.
        #[arg(long, value_delimiter = ',', default_value = "1,4,9,16")]
        sq_dists: Vec<i64>,
        /// Forbidden blue progression length.
        #[arg(long, default_value_t = 6)]
        ap_len: usize,
        /// Margin of the core compared against the period-5 pattern.
        #[arg(long, default_value_t = 5)]
        margin: i64,
    },
    /// Check a named gadget against its expectation.
    Gadget {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(GADGET_NAMES))]
        name: String,
    },
}

/// Exit codes: 0 verified, 1 rejected, 2 usage, I/O or format error.
pub fn run_cli<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let options = CheckOptions { digits: cli.digits, timings: cli.timings, ..CheckOptions::default() };
    let result = match &cli.command {
        Command::Verify(v) => verify(v, &cli, &options),
        Command::Lattice(LatticeCommand::Gadget { name }) => gadget(name, &cli),
        Command::Lattice(LatticeCommand::Enumerate { patch, seed, limit, sq_dists, ap_len, margin }) => {
            lattice_enumerate(patch, seed, *limit, sq_dists, *ap_len, *margin, &cli)
        }
        Command::Explain { id } => explain(id, &cli, &options),
    };
    match result {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

type Outcome = Result<(String, i32), String>;

fn exit_code(verified: bool) -> i32 {
    if verified {
        0
    } else {
        1
    }
}

fn summary_line(r: &VerificationReport) -> String {
    let verdict = if r.is_verified() { "Verified" } else { "Rejected" };
    match r.elapsed_ms {
        Some(ms) => format!("{:<12} {verdict} ({ms} ms)\n", r.id),
        None => format!("{:<12} {verdict}\n", r.id),
    }
}

fn render_all(reports: &[VerificationReport], json: bool) -> String {
    if json {
        return serde_json::to_string(reports).expect("reports serialize") + "\n";
    }
    let mut out = String::new();
    for r in reports {
        if r.is_verified() {
            out.push_str(&summary_line(r));
        } else {
            out.push_str(&emit_report(r, false));
        }
    }
    out
}

fn verify(v: &VerifyArgs, cli: &Cli, options: &CheckOptions) -> Outcome {
    let mut registry = Registry::new();
    if v.all {
        let outcomes = verify_in_order(&builtin_bundle(), &mut registry, options);
        let reports: Vec<VerificationReport> = outcomes.into_iter().map(|o| o.report).collect();
        let ok = reports.iter().all(VerificationReport::is_verified);
        return Ok((render_all(&reports, cli.json), exit_code(ok)));
    }
    let (cert, deps) = if let Some(id) = &v.builtin {
        let mut chain = builtin_closure(std::slice::from_ref(id)).map_err(|e| e.to_string())?;
        let cert = chain.pop().expect("closure ends with the requested certificate");
        (cert, chain)
    } else {
        let name = v.cert.as_deref().expect("argument group requires one option");
        let search = std::env::var(CERT_PATH_VAR).ok();
        let path = resolve_cert_path(name, search.as_deref()).ok_or_else(|| format!("{name}: file not found"))?;
        let cert = match load_certificate_file(&path) {
            Ok(c) => c,
            Err(e @ CertError::Io { .. }) => return Err(e.to_string()),
            Err(e) => {
                let report = load_error_report(name, &e);
                eprintln!("error: {e}");
                let text = emit_report(&report, cli.json);
                return Ok((if cli.json { text + "\n" } else { text }, 2));
            }
        };
        let deps = builtin_closure(&cert.dependencies).map_err(|e| e.to_string())?;
        (cert, deps)
    };
    let dep_outcomes = verify_in_order(&deps, &mut registry, options);
    let mut text = String::new();
    if !cli.json {
        for o in &dep_outcomes {
            let _ = write!(text, "dependency {}", summary_line(&o.report));
        }
    }
    let outcome = verify_in_order(std::slice::from_ref(&cert), &mut registry, options).remove(0);
    text.push_str(&emit_report(&outcome.report, cli.json));
    if cli.json {
        text.push('\n');
    } else if let Some(export) = &outcome.export {
        let _ = writeln!(text, "exports: {export}");
    }
    Ok((text, exit_code(outcome.report.is_verified())))
}

fn explain(id: &str, cli: &Cli, options: &CheckOptions) -> Outcome {
    let mut chain = builtin_closure(&[id.to_string()]).map_err(|e| e.to_string())?;
    let cert = chain.pop().expect("closure ends with the requested certificate");
    let mut registry = Registry::new();
    verify_in_order(&chain, &mut registry, options);
    let outcome = verify_in_order(std::slice::from_ref(&cert), &mut registry, options).remove(0);
    let report = &outcome.report;
    if cli.json {
        return Ok((emit_report(report, true) + "\n", exit_code(report.is_verified())));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{} ({:?})", cert.id, report.verdict);
    if let Some(note) = &cert.note {
        let _ = writeln!(out, "note: {note}");
    }
    if !cert.dependencies.is_empty() {
        let _ = writeln!(out, "depends on: {}", cert.dependencies.join(", "));
    }
    for c in &report.checks {
        let _ = writeln!(out, "  [{}] {}: {}", mark(c.pass), c.label, c.approx);
    }
    for (i, step) in report.steps.iter().enumerate() {
        let _ = writeln!(out, "{:>3}. {} ({:?})", i + 1, step.rule, step.status);
        for c in &step.checks {
            let _ = writeln!(out, "      [{}] {}", mark(c.pass), c.label);
            let _ = writeln!(out, "            {} {} {}", c.lhs, c.relation, c.rhs);
            if c.approx != format!("{} {} {}", c.lhs, c.relation, c.rhs) {
                let _ = writeln!(out, "            ~ {}", c.approx);
            }
        }
    }
    if let Some(export) = &outcome.export {
        let _ = writeln!(out, "exports: {export}");
    }
    Ok((out, exit_code(report.is_verified())))
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}

fn gadget(name: &str, cli: &Cli) -> Outcome {
    let g = builtin_gadget(name).ok_or_else(|| format!("unknown gadget {name:?}"))?;
    let outcome = verify_gadget(&g).map_err(|e| e.to_string())?;
    let mut report = outcome.report;
    if !cli.timings {
        report.elapsed_ms = None;
    }
    let text = if cli.json {
        #[derive(Serialize)]
        struct GadgetJson<'a> {
            summary: &'a str,
            report: &'a VerificationReport,
        }
        serde_json::to_string(&GadgetJson { summary: &outcome.summary, report: &report }).expect("serializes") + "\n"
    } else {
        format!("{}{}\n", emit_report(&report, false), outcome.summary)
    };
    Ok((text, exit_code(report.is_verified())))
}

fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (lo, hi) = s.split_once(':')?;
    let (lo, hi) = (lo.trim().parse().ok()?, hi.trim().parse().ok()?);
    (lo <= hi).then_some((lo, hi))
}

fn parse_patch(s: &str) -> Option<Patch> {
    let (a, b) = s.split_once(',')?;
    Some(Patch::rhombus(parse_range(a)?, parse_range(b)?))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedEntry {
    at: [i64; 2],
    color: crate::Color,
}

fn lattice_enumerate(
    patch: &str,
    seed: &PathBuf,
    limit: usize,
    sq_dists: &[i64],
    ap_len: usize,
    margin: i64,
    cli: &Cli,
) -> Outcome {
    let patch = parse_patch(patch).ok_or_else(|| format!("bad patch {patch:?}; expected a0:a1,b0:b1"))?;
    let text = std::fs::read_to_string(seed).map_err(|e| format!("{}: {e}", seed.display()))?;
    let entries: Vec<SeedEntry> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", seed.display()))?;
    let seed: LatticeColoring =
        entries.iter().map(|e| (crate::lattice::LatticePoint::new(e.at[0], e.at[1]), e.color)).collect();
    let rules = LatticeRules::new(sq_dists, ap_len);
    let e = enumerate(&patch, &seed, &rules, limit).map_err(|e| e.to_string())?;
    let matching = e.colorings.iter().filter(|c| core_mismatch(c, &patch, margin, pattern_mod5).is_none()).count();
    let out = if cli.json {
        #[derive(Serialize)]
        struct EnumJson {
            colorings: usize,
            nodes: u64,
            truncated: bool,
            core_points: usize,
            matching_pattern: usize,
        }
        let j = EnumJson {
            colorings: e.colorings.len(),
            nodes: e.nodes as u64,
            truncated: e.truncated,
            core_points: patch.core(margin).len(),
            matching_pattern: matching,
        };
        serde_json::to_string(&j).expect("serializes") + "\n"
    } else {
        let mut out = format!("colourings: {}, nodes explored: {}\n", e.colorings.len(), e.nodes);
        if e.truncated {
            out.push_str("limit reached; results are partial\n");
        }
        let _ = writeln!(
            out,
            "matching the period-5 pattern on the margin-{margin} core ({} points): {matching}",
            patch.core(margin).len()
        );
        out
    };
    Ok((out, exit_code(!e.truncated)))
}
