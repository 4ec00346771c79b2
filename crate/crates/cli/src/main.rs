//! `odoni` — hypothesis checks, exact Galois certificates, wreath-group
//! tables, and Frobenius statistics for iterated polynomials over
//! `F_p(t)`.
//!
//! Reports go to stdout as versioned JSON (`--out` additionally writes
//! the same bytes to a file; `--csv` writes tables). Exit codes follow a
//! scripting contract: 0 means the run's claim was positively verified,
//! 1 means a definite failure or an honest "could not decide", and 2
//! means the invocation itself was unusable (bad flags, bad polynomial,
//! caps exceeded). All randomized pipelines take explicit seeds and
//! reproduce byte-identically, independent of worker counts.

mod json;
mod parse;
mod scan;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use odoni_core::bipoly::{bp_deg_t, bp_deg_x, bp_discriminant_x, bp_iterate, BiPoly};
use odoni_core::certify::{
    certify_full_symmetric, certify_iterate_irreducible, verify_certificate, CertificateKind,
};
use odoni_core::chebotarev::{
    chebotarev_sample, compare_distribution, ComparisonVerdict, SampleSpec, DEFAULT_TOLERANCE,
    MIN_USABLE_SAMPLES,
};
use odoni_core::checks::{
    check_odoni, critical_points, orbit_values, primitive_prime_divisors, Conclusion,
    OrbitPrimeTable, SearchBudget,
};
use odoni_core::ff::FieldSpec;
use odoni_core::poly::{PolyRing, Ring};
use odoni_core::wreath::{
    exact_cycle_type_distribution, montecarlo_cycle_type_distribution, TreeSpec,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "odoni", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full hypothesis battery on f at level n.
    Check(CheckArgs),
    /// Orders and cycle-type distributions of the iterated wreath group.
    Wreath(WreathArgs),
    /// Sample Frobenius cycle types and compare against the full group.
    Chebotarev(ChebotarevArgs),
    /// Produce and independently re-verify an exact Galois certificate.
    Certify(CertifyArgs),
    /// Enumerate a trinomial family and run the battery on every member.
    Scan(ScanArgs),
    /// Pretty-print the n-th iterate and its discriminant.
    Iterate(IterateArgs),
    /// Critical points, orbit values, and primitive prime divisors.
    Orbit(OrbitArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Order of the prime coefficient field F_p (odd prime).
    #[arg(long)]
    field: u64,
    /// The polynomial f(t, x), e.g. "x^3 + t*x^2 + t + 1".
    #[arg(long)]
    poly: String,
    /// Iterate level the hypotheses are checked up to.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Seed for the factorization pipeline.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extension-degree cap for specialization witness searches.
    #[arg(long, default_value_t = 3)]
    max_m: u32,
    /// Points tried per extension during witness searches.
    #[arg(long, default_value_t = 4096)]
    point_cap: u64,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WreathArgs {
    /// Arity d of the tree (d >= 2).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    /// Height n of the tree (n >= 1).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Enumerate the whole group for the exact distribution.
    #[arg(long, conflicts_with = "samples")]
    exact: bool,
    /// Sample this many uniform elements instead of enumerating.
    #[arg(long, requires = "seed", value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,
    /// Seed for sampling.
    #[arg(long, requires = "samples")]
    seed: Option<u64>,
    /// Write the distribution as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChebotarevArgs {
    /// Order of the prime coefficient field F_p (odd prime).
    #[arg(long)]
    field: u64,
    /// The polynomial f(t, x).
    #[arg(long)]
    poly: String,
    /// Iterate level whose factor degrees are sampled.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Number of Frobenius samples to draw.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Extension degrees to cycle through, "LO..HI" or a single "M".
    #[arg(long, default_value = "1..4", value_parser = parse_m_range)]
    m: (u32, u32),
    /// Seed fixing the per-degree point streams.
    #[arg(long)]
    seed: u64,
    /// Total-variation tolerance for the consistency verdict.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Worker threads for the evaluation plan (output-invariant).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Write observed counts and expected probabilities as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertifyMode {
    /// Splitting-field degree d!, i.e. Galois group S_d.
    FullSymmetric,
    /// Irreducibility of the n-th iterate.
    IterateIrreducible,
}

impl CertifyMode {
    fn tag(self) -> &'static str {
        match self {
            CertifyMode::FullSymmetric => "full-symmetric",
            CertifyMode::IterateIrreducible => "iterate-irreducible",
        }
    }
}

#[derive(Args)]
struct CertifyArgs {
    /// Order of the prime coefficient field F_p (odd prime).
    #[arg(long)]
    field: u64,
    /// The polynomial f(t, x).
    #[arg(long)]
    poly: String,
    /// What to certify.
    #[arg(long, value_enum)]
    mode: CertifyMode,
    /// Iterate level (iterate-irreducible mode only).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    /// Extension-degree cap for specialization witness searches.
    #[arg(long, default_value_t = 3)]
    max_m: u32,
    /// Points tried per extension during witness searches.
    #[arg(long, default_value_t = 4096)]
    point_cap: u64,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Family to enumerate.
    #[arg(long, value_enum)]
    family: scan::Family,
    /// x-degree d of every member (d >= 2).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    /// Order of the prime coefficient field F_p (odd prime).
    #[arg(long)]
    field: u64,
    /// Upper bound on deg a and deg b (0 gives the empty family).
    #[arg(long)]
    deg_bound: usize,
    /// Iterate level the hypotheses are checked up to.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Seed for the factorization pipeline.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extension-degree cap for specialization witness searches.
    #[arg(long, default_value_t = 3)]
    max_m: u32,
    /// Points tried per extension during witness searches.
    #[arg(long, default_value_t = 4096)]
    point_cap: u64,
    /// CSV path for the per-member rows (a .progress sidecar makes the
    /// scan resumable).
    #[arg(long)]
    csv: PathBuf,
    /// Worker threads (default: one per core; output-invariant).
    #[arg(long)]
    workers: Option<usize>,
    /// Also write the summary JSON to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IterateArgs {
    /// Order of the prime coefficient field F_p (odd prime).
    #[arg(long)]
    field: u64,
    /// The polynomial f(t, x).
    #[arg(long)]
    poly: String,
    /// Iteration count.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrbitArgs {
    /// Order of the prime coefficient field F_p (odd prime).
    #[arg(long)]
    field: u64,
    /// The polynomial f(t, x).
    #[arg(long)]
    poly: String,
    /// Orbit depth.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Seed for the factorization pipeline.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the prime-divisor table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Largest decimal length of a group order the wreath command will
/// embed in a report.
const MAX_ORDER_DIGITS: f64 = 100_000.0;

/// Stirling estimate of `log10((d!)^nodes)`, good enough to refuse
/// configurations whose order could not even be printed.
fn order_digits_estimate(d: u64, nodes: u64) -> f64 {
    let d = d as f64;
    let log10_fact = if d <= 1.0 {
        0.0
    } else {
        (d * d.ln() - d + 0.5 * (2.0 * std::f64::consts::PI * d).ln()) / std::f64::consts::LN_10
    };
    nodes as f64 * log10_fact
}

/// "LO..HI" or a single "M" as an inclusive extension-degree range.
fn parse_m_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = match s.split_once("..") {
        Some(pair) => pair,
        None => (s, s),
    };
    let lo: u32 = lo.trim().parse().map_err(|_| format!("bad extension degree {lo:?}"))?;
    let hi: u32 = hi.trim().parse().map_err(|_| format!("bad extension degree {hi:?}"))?;
    Ok((lo, hi))
}

fn load_field(p: u64) -> Result<FieldSpec> {
    FieldSpec::prime_field(p).map_err(|e| anyhow!("--field {p}: {e}"))
}

fn load_poly(field: &FieldSpec, text: &str) -> Result<BiPoly> {
    parse::parse_bipoly(field, text).map_err(|e| anyhow!("--poly: {e}"))
}

/// Print the versioned report to stdout and optionally write the exact
/// same bytes to `--out`.
fn emit(command: &str, config: Value, result: Value, out: Option<&Path>) -> Result<()> {
    let doc = json!({
        "schema_version": 1,
        "command": command,
        "config": config,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).context("serializing the report")?;
    text.push('\n');
    print!("{text}");
    if let Some(path) = out {
        fs::write(path, text.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_check(a: CheckArgs) -> Result<i32> {
    let field = load_field(a.field)?;
    let f = load_poly(&field, &a.poly)?;
    let budget = SearchBudget { max_m: a.max_m, point_cap: a.point_cap };
    let verdict = check_odoni(&field, &f, a.n, &budget, a.seed);
    let config = json!({
        "field": a.field,
        "polynomial": json::bipoly_text(&field, &f),
        "n": a.n,
        "seed": a.seed,
        "max_m": a.max_m,
        "point_cap": a.point_cap,
    });
    emit("check", config, json::verdict_value(&field, &verdict), a.out.as_deref())?;
    Ok(match &verdict.conclusion {
        Conclusion::HypothesesHold(_) => 0,
        Conclusion::Fails(reasons) => {
            eprintln!("check failed: {}", reasons.join(", "));
            1
        }
        Conclusion::Inconclusive(reasons) => {
            eprintln!("check inconclusive: {}", reasons.join(", "));
            1
        }
    })
}

fn cmd_wreath(a: WreathArgs) -> Result<i32> {
    if !a.exact && a.samples.is_none() {
        bail!("choose a mode: --exact or --samples <count>");
    }
    let spec = TreeSpec::new(a.d as usize, a.n as usize).map_err(|e| anyhow!("wreath: {e}"))?;
    let digits = order_digits_estimate(a.d, spec.node_count());
    if digits > MAX_ORDER_DIGITS {
        bail!(
            "wreath: the group order has about {digits:.0} decimal digits; \
             choose a smaller d or n"
        );
    }
    let mut config = json!({ "d": a.d, "n": a.n });
    let mut result = json!({
        "order": spec.order().to_string(),
        "leaf_count": spec.leaf_count(),
        "node_count": spec.node_count(),
    });
    let csv_header: &[&str];
    let csv_rows: Vec<Vec<String>>;
    if a.exact {
        config["mode"] = json!("exact");
        let dist = exact_cycle_type_distribution(&spec).map_err(|e| anyhow!("wreath: {e}"))?;
        result["distribution"] = json::exact_distribution_value(&dist);
        csv_header = &["cycle_type", "numerator", "denominator"];
        csv_rows = dist
            .iter()
            .map(|(ty, (num, den))| {
                vec![json::cycle_type_text(ty), num.to_string(), den.to_string()]
            })
            .collect();
    } else {
        let samples = a.samples.expect("validated above");
        let seed = a.seed.expect("clap ties --seed to --samples");
        config["mode"] = json!("sampled");
        config["samples"] = json!(samples);
        config["seed"] = json!(seed);
        let dist = montecarlo_cycle_type_distribution(&spec, samples, seed);
        result["distribution"] = json::sampled_distribution_value(&dist, samples);
        csv_header = &["cycle_type", "count", "frequency"];
        csv_rows = dist
            .iter()
            .map(|(ty, c)| {
                vec![
                    json::cycle_type_text(ty),
                    c.to_string(),
                    (*c as f64 / samples as f64).to_string(),
                ]
            })
            .collect();
    }
    if let Some(path) = &a.csv {
        write_csv(path, csv_header, &csv_rows)?;
    }
    emit("wreath", config, result, a.out.as_deref())?;
    Ok(0)
}

fn cmd_chebotarev(a: ChebotarevArgs) -> Result<i32> {
    let field = load_field(a.field)?;
    let f = load_poly(&field, &a.poly)?;
    let (m_lo, m_hi) = a.m;
    let spec = SampleSpec { f: f.clone(), n: a.n, samples: a.samples, m_lo, m_hi, seed: a.seed };
    let report =
        chebotarev_sample(&field, &spec, a.workers).map_err(|e| anyhow!("chebotarev: {e}"))?;
    let tree =
        TreeSpec::new(bp_deg_x(&f), a.n as usize).map_err(|e| anyhow!("chebotarev: {e}"))?;
    let comparison = compare_distribution(&report, &tree, a.tolerance);
    let config = json!({
        "field": a.field,
        "polynomial": json::bipoly_text(&field, &f),
        "n": a.n,
        "samples": a.samples,
        "m_lo": m_lo,
        "m_hi": m_hi,
        "seed": a.seed,
        "tolerance": a.tolerance,
    });
    let result = json!({
        "sample": json::sample_report_value(&field, &report),
        "comparison": json::comparison_value(&comparison),
    });
    if let Some(path) = &a.csv {
        let keys: BTreeSet<&Vec<u64>> = report
            .counts
            .keys()
            .chain(comparison.reference_distribution.keys())
            .collect();
        let rows: Vec<Vec<String>> = keys
            .into_iter()
            .map(|ty| {
                vec![
                    json::cycle_type_text(ty),
                    report.counts.get(ty).copied().unwrap_or(0).to_string(),
                    comparison
                        .reference_distribution
                        .get(ty)
                        .copied()
                        .unwrap_or(0.0)
                        .to_string(),
                ]
            })
            .collect();
        write_csv(path, &["cycle_type", "count", "expected_probability"], &rows)?;
    }
    emit("chebotarev", config, result, a.out.as_deref())?;
    Ok(match comparison.verdict {
        ComparisonVerdict::ConsistentWithFullWreath { .. } => 0,
        ComparisonVerdict::Inconsistent => {
            eprintln!(
                "chebotarev: the observed cycle types are inconsistent with the full \
                 wreath group"
            );
            1
        }
        ComparisonVerdict::InsufficientData => {
            eprintln!(
                "chebotarev: fewer than {MIN_USABLE_SAMPLES} usable samples; no verdict"
            );
            1
        }
    })
}

fn cmd_certify(a: CertifyArgs) -> Result<i32> {
    let field = load_field(a.field)?;
    let f = load_poly(&field, &a.poly)?;
    let budget = SearchBudget { max_m: a.max_m, point_cap: a.point_cap };
    let cert = match a.mode {
        CertifyMode::FullSymmetric => {
            if a.n.is_some() {
                bail!("--n only applies to --mode iterate-irreducible");
            }
            certify_full_symmetric(&field, &f, &budget)
        }
        CertifyMode::IterateIrreducible => {
            let n = a.n.context("--mode iterate-irreducible requires --n")?;
            certify_iterate_irreducible(&field, &f, n, &budget)
        }
    };
    let positive = matches!(
        cert.kind,
        CertificateKind::FullSymmetric { .. } | CertificateKind::IterateIrreducible { .. }
    );
    let verified = positive && verify_certificate(&field, &f, &cert);
    let config = json!({
        "field": a.field,
        "polynomial": json::bipoly_text(&field, &f),
        "mode": a.mode.tag(),
        "n": a.n,
        "max_m": a.max_m,
        "point_cap": a.point_cap,
    });
    let result = json!({
        "certificate": json::certificate_value(&field, &cert),
        "verified": verified,
    });
    emit("certify", config, result, a.out.as_deref())?;
    if verified {
        Ok(0)
    } else {
        match &cert.kind {
            CertificateKind::Inconclusive { level, reason } => {
                eprintln!("certify: inconclusive at level {level}: {reason}");
            }
            _ => eprintln!("certify: the certificate failed independent re-verification"),
        }
        Ok(1)
    }
}

fn cmd_scan(a: ScanArgs) -> Result<i32> {
    let field = load_field(a.field)?;
    let cfg = scan::ScanConfig {
        family: a.family,
        d: a.d,
        p: a.field,
        deg_bound: a.deg_bound,
        n: a.n,
        seed: a.seed,
        max_m: a.max_m,
        point_cap: a.point_cap,
    };
    let summary = scan::run_scan(&field, &cfg, &a.csv, a.workers)?;
    emit("scan", scan::config_value(&cfg), summary, a.out.as_deref())?;
    Ok(0)
}

fn cmd_iterate(a: IterateArgs) -> Result<i32> {
    let field = load_field(a.field)?;
    let f = load_poly(&field, &a.poly)?;
    let g = bp_iterate(&field, &f, a.n);
    let disc = if g.deg0() >= 1 {
        bp_discriminant_x(&field, &g)
    } else {
        PolyRing::new(&field).zero()
    };
    let config = json!({
        "field": a.field,
        "polynomial": json::bipoly_text(&field, &f),
        "n": a.n,
    });
    let result = json!({
        "iterate": json::bipoly_text(&field, &g),
        "degree_x": bp_deg_x(&g),
        "degree_t": bp_deg_t(&g),
        "discriminant": json::poly_text(&field, &disc),
        "discriminant_degree": disc.deg0(),
    });
    emit("iterate", config, result, a.out.as_deref())?;
    Ok(0)
}

fn cmd_orbit(a: OrbitArgs) -> Result<i32> {
    let field = load_field(a.field)?;
    let f = load_poly(&field, &a.poly)?;
    let cps = match critical_points(&field, &f) {
        Ok(cps) => cps,
        Err(e) => {
            eprintln!("orbit: {e}");
            return Ok(1);
        }
    };
    let mut tables: Vec<OrbitPrimeTable> = Vec::new();
    for (i, cp) in cps.iter().enumerate() {
        let Some(gamma) = cp.rational_root.clone() else { continue };
        let table = match primitive_prime_divisors(&field, &f, cp, a.n, a.seed) {
            Ok(records) => OrbitPrimeTable {
                critical_point_index: i,
                gamma: gamma.clone(),
                level_values: orbit_values(&field, &f, &gamma, a.n)
                    .expect("records exist, so the values do"),
                records,
                note: None,
            },
            Err(e) => OrbitPrimeTable {
                critical_point_index: i,
                gamma,
                level_values: Vec::new(),
                records: Vec::new(),
                note: Some(e.to_string()),
            },
        };
        tables.push(table);
    }
    let config = json!({
        "field": a.field,
        "polynomial": json::bipoly_text(&field, &f),
        "n": a.n,
        "seed": a.seed,
    });
    let result = json!({
        "critical_points": cps
            .iter()
            .map(|cp| json::critical_point_value(&field, cp))
            .collect::<Vec<_>>(),
        "tables": tables.iter().map(|t| json::orbit_table_value(&field, t)).collect::<Vec<_>>(),
    });
    if let Some(path) = &a.csv {
        let mut rows: Vec<Vec<String>> = Vec::new();
        for t in &tables {
            for r in &t.records {
                rows.push(vec![
                    t.critical_point_index.to_string(),
                    json::poly_text(&field, &t.gamma),
                    r.level.to_string(),
                    json::poly_text(&field, &r.prime),
                    r.valuation.to_string(),
                    r.primitive.to_string(),
                    r.squarefree_primitive.to_string(),
                    r.coprime_to_shape_b.map(|b| b.to_string()).unwrap_or_default(),
                ]);
            }
        }
        write_csv(
            path,
            &[
                "critical_point_index",
                "gamma",
                "level",
                "prime",
                "valuation",
                "primitive",
                "squarefree_primitive",
                "coprime_to_shape_b",
            ],
            &rows,
        )?;
    }
    emit("orbit", config, result, a.out.as_deref())?;
    Ok(0)
}

fn run() -> Result<i32> {
    match Cli::parse().cmd {
        Cmd::Check(a) => cmd_check(a),
        Cmd::Wreath(a) => cmd_wreath(a),
        Cmd::Chebotarev(a) => cmd_chebotarev(a),
        Cmd::Certify(a) => cmd_certify(a),
        Cmd::Scan(a) => cmd_scan(a),
        Cmd::Iterate(a) => cmd_iterate(a),
        Cmd::Orbit(a) => cmd_orbit(a),
    }
}

fn main() {
    std::process::exit(match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    });
}
