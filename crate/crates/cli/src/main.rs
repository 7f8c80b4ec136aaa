//! `powroot`: k-th root decisions for triangular matrix groups.
//!
//! Exit codes: 0 covered / success, 1 definitive negative, 2 usage,
//! validation or internal error.

mod cert;
mod element;
mod specfile;
mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use powroot_core::oracle::enumerate_group;
use powroot_core::roots_core::Probe;
use powroot_core::{compare_all, RootEngine, SeriesStrategy, TriangularGroup};
use serde_json::Value;

use crate::specfile::SpecFile;

#[derive(Parser)]
#[command(name = "powroot", version, about = "Decide which cosets of a triangular matrix group consist of k-th powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether every element of the coset xN is a k-th power
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        out: Output,
        /// Ask whether x itself is a k-th power instead of the whole coset
        #[arg(long)]
        element_level: bool,
        /// With --element-level, probe every k from 1 to this bound
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Construct an explicit k-th root of the element
    Root {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        out: Output,
    },
    /// Compare the coset criterion with brute force on a finite group
    Oracle {
        spec: PathBuf,
        #[arg(long)]
        kmax: u64,
        #[arg(long, default_value = "superdiag")]
        series: SeriesStrategy,
        #[arg(long)]
        cap: Option<usize>,
        /// Emit CSV instead of a table
        #[arg(long)]
        csv: bool,
    },
    /// Report P_k-regularity of an element from its layer spectra
    Regular {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        out: Output,
    },
    /// Recheck a certificate file against its spec
    Verify { spec: PathBuf, certificate: PathBuf },
}

#[derive(Args)]
struct Common {
    /// Group spec (JSON)
    spec: PathBuf,
    /// Generator word such as "g1^2*n(1,1)", "e", or a matrix literal
    #[arg(long)]
    element: String,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, default_value = "superdiag")]
    series: SeriesStrategy,
    /// Override the enumeration cap of the spec file
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Print the certificate JSON instead of a summary
    #[arg(long)]
    json: bool,
    /// Write the certificate JSON to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recheck the emitted certificate with the independent verifier
    #[arg(long)]
    verify: bool,
}

/// A run that completed; `negative` selects exit code 1.
struct Outcome {
    text: String,
    negative: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            print!("{}", o.text);
            if o.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Analyze { common, out, element_level: false, kmax: None } => decide(&common, &out, false),
        Command::Analyze { common, out, element_level: true, kmax } => probe(&common, &out, kmax),
        Command::Analyze { kmax: Some(_), .. } => bail!("--kmax needs --element-level (use `oracle` for tables)"),
        Command::Root { common, out } => decide(&common, &out, true),
        Command::Oracle { spec, kmax, series, cap, csv } => oracle(&spec, kmax, series, cap, csv),
        Command::Regular { common, out } => regular(&common, &out),
        Command::Verify { spec, certificate } => verify_file(&spec, &certificate),
    }
}

fn load(path: &Path, cap: Option<usize>) -> anyhow::Result<(SpecFile, TriangularGroup)> {
    let spec = SpecFile::load(path).with_context(|| format!("reading {}", path.display()))?;
    let group = spec.to_group_spec(cap).validate().with_context(|| format!("validating {}", path.display()))?;
    Ok((spec, group))
}

fn require_k(common: &Common) -> anyhow::Result<u64> {
    common.k.context("--k is required")
}

fn emit(spec: &SpecFile, value: &Value, out: &Output, summary: String, negative: bool) -> anyhow::Result<Outcome> {
    let body = cert::to_text(value);
    let mut text = if out.json { body.clone() } else { summary };
    if let Some(path) = &out.out {
        std::fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
    }
    if out.verify {
        let log = verify::verify(spec, value).context("independent verification")?;
        if !out.json {
            let _ = writeln!(text, "verified independently: {}", log.join("; "));
        }
    }
    Ok(Outcome { text, negative })
}

fn decide(common: &Common, out: &Output, want_root: bool) -> anyhow::Result<Outcome> {
    let k = require_k(common)?;
    let (spec, group) = load(&common.spec, common.cap)?;
    let x = element::parse_element(&spec, &common.element)?;
    let engine = RootEngine::new(&group, common.series)?;
    let certificate = engine.coset_root_decision(&x, k)?;
    let kind = if want_root { "root" } else { "coset-decision" };
    let value = cert::certificate(&engine, &cert::Query { kind, input: &common.element, element: &x, k }, &certificate)?;

    let mut text = String::new();
    let _ = writeln!(text, "element {x} class {} k = {k}", certificate.class);
    for line in &certificate.transcript {
        let _ = writeln!(text, "  {line}");
    }
    match (&certificate.witness, want_root) {
        (Some(w), true) => {
            let _ = writeln!(text, "y = {}", w.root);
            let _ = writeln!(text, "y^{k} = {}", w.root_power);
        }
        (Some(w), false) => {
            let _ = writeln!(text, "covered: every element of xN is a k-th power (witness class {})", w.b);
        }
        (None, _) => {
            let _ = writeln!(text, "not covered: some element of xN has no k-th root");
        }
    }
    emit(&spec, &value, out, text, !certificate.decision)
}

fn probe(common: &Common, out: &Output, kmax: Option<u64>) -> anyhow::Result<Outcome> {
    let ks: Vec<u64> = match (common.k, kmax) {
        (_, Some(m)) => (1..=m).collect(),
        (Some(k), None) => vec![k],
        (None, None) => bail!("--element-level needs --k or --kmax"),
    };
    let (spec, group) = load(&common.spec, common.cap)?;
    let x = element::parse_element(&spec, &common.element)?;
    let engine = RootEngine::new(&group, common.series)?;
    let results = engine.multi_k_probe(&x, &ks)?;
    let value = cert::probe(&engine, &common.element, &x, &results);
    let mut text = String::new();
    let mut negative = false;
    let mut undecided = false;
    for (k, p) in &results {
        let _ = match p {
            Probe::Root(y) => writeln!(text, "k = {k}: root {y}"),
            Probe::NoRoot => {
                negative = true;
                writeln!(text, "k = {k}: no root")
            }
            Probe::Unsupported(why) => {
                undecided = true;
                writeln!(text, "k = {k}: undecided ({why})")
            }
        };
    }
    let outcome = emit(&spec, &value, out, text, negative)?;
    if undecided && !negative {
        print!("{}", outcome.text);
        bail!("at least one k is undecided");
    }
    Ok(outcome)
}

fn regular(common: &Common, out: &Output) -> anyhow::Result<Outcome> {
    let k = require_k(common)?;
    let (spec, group) = load(&common.spec, common.cap)?;
    let x = element::parse_element(&spec, &common.element)?;
    if !group.contains(&x) {
        bail!("element is not in the group");
    }
    let engine = RootEngine::new(&group, common.series)?;
    let report = engine.pk_regularity(&x, k)?;
    let value = cert::regularity(&engine, &cert::Query { kind: "regularity", input: &common.element, element: &x, k }, &report)?;
    let mut text = String::new();
    for l in &report.layers {
        let _ = writeln!(text, "layer {}: char poly {}, gcd with 1 + x + ... + x^{} = {}", l.layer, l.char_poly, k - 1, l.gcd);
    }
    let _ = writeln!(text, "{}", if report.regular { format!("P_{k}-regular") } else { format!("not P_{k}-regular") });
    emit(&spec, &value, out, text, !report.regular)
}

fn oracle(path: &Path, kmax: u64, series: SeriesStrategy, cap: Option<usize>, csv_out: bool) -> anyhow::Result<Outcome> {
    let (spec, group) = load(path, cap)?;
    let limit = cap.or(spec.cap).unwrap_or(powroot_core::group_ctx::DEFAULT_CAP);
    let enumerated = enumerate_group(&group, limit)?;
    let ks: Vec<u64> = (1..=kmax).collect();
    let report = compare_all(&group, &enumerated, &ks, series)?;
    let mark = |b: bool| if b { "✓" } else { "✗" };

    let mut text = String::new();
    if csv_out {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["class", "k", "criterion", "oracle", "match", "power_image_size", "note"])?;
        for r in &report.rows {
            w.write_record([
                r.class.to_string(),
                r.k.to_string(),
                r.criterion.to_string(),
                r.oracle.to_string(),
                r.matches().to_string(),
                r.power_image_size.to_string(),
                String::new(),
            ])?;
        }
        let p = group.field().characteristic();
        for k in &report.skipped {
            w.write_record(["", &k.to_string(), "", "", "", "", &format!("skipped: not coprime to {p}")])?;
        }
        text = String::from_utf8(w.into_inner()?)?;
    } else {
        let _ = writeln!(text, "|G| = {}, series {series}", report.group_order);
        let _ = writeln!(text, "{:<16} {:>3} {:>9} {:>7} {:>5} {:>8}", "class", "k", "criterion", "oracle", "match", "|P_k(G)|");
        let mut skipped = report.skipped.iter().peekable();
        let mut last_k = 0;
        for r in &report.rows {
            while let Some(&&s) = skipped.peek() {
                if s > last_k && s < r.k {
                    let _ = writeln!(text, "{:<16} {:>3} skipped: not coprime to {}", "-", s, group.field().characteristic());
                    skipped.next();
                } else {
                    break;
                }
            }
            last_k = r.k;
            let _ = writeln!(
                text,
                "{:<16} {:>3} {:>9} {:>7} {:>5} {:>8}",
                r.class.to_string(),
                r.k,
                r.criterion,
                r.oracle,
                mark(r.matches()),
                r.power_image_size
            );
        }
        for s in skipped {
            let _ = writeln!(text, "{:<16} {:>3} skipped: not coprime to {}", "-", s, group.field().characteristic());
        }
        let mismatches = report.mismatches().len();
        let _ = writeln!(text, "{} comparisons, {mismatches} mismatches", report.rows.len());
    }
    Ok(Outcome { text, negative: !report.passed() })
}

fn verify_file(spec_path: &Path, cert_path: &Path) -> anyhow::Result<Outcome> {
    let spec = SpecFile::load(spec_path).with_context(|| format!("reading {}", spec_path.display()))?;
    let text = std::fs::read_to_string(cert_path).with_context(|| format!("reading {}", cert_path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", cert_path.display()))?;
    match verify::verify(&spec, &value) {
        Ok(log) => {
            let mut out = String::new();
            for line in log {
                let _ = writeln!(out, "ok: {line}");
            }
            out.push_str("certificate verified\n");
            Ok(Outcome { text: out, negative: false })
        }
        Err(verify::VerifyError::Rejected(why)) => Ok(Outcome { text: format!("certificate rejected: {why}\n"), negative: true }),
        Err(e) => Err(e.into()),
    }
}

