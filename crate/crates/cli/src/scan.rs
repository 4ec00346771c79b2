//! Family scans: enumerate every `f = x^d + a(t)·x^(d-1) + b(t)` or
//! `x^d + a(t)·x + b(t)` with `a`, `b` monic irreducible of bounded
//! degree, run the full hypothesis battery on each member, and persist
//! one CSV row per member plus a pass-rate summary.
//!
//! Scans are resumable: a `<csv>.progress` sidecar records the exact
//! configuration and the number of rows already written, so an
//! interrupted run picks up where it stopped and a completed run is
//! never recomputed. Row order is the canonical enumeration order
//! (degree of `a` and `b` ascending, then encode order, `a`-major)
//! regardless of worker count, and reruns are byte-identical.

use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use odoni_core::bipoly::{bp_from_coeffs, BiPoly, OneSided};
use odoni_core::certify::CertificateKind;
use odoni_core::checks::{check_odoni, Conclusion, SearchBudget};
use odoni_core::factor::is_irreducible;
use odoni_core::ff::{Fe, FieldSpec};
use odoni_core::poly::{Poly, PolyRing, Ring};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::json::{bipoly_text, poly_text};

/// Cap on the number of candidate coefficient polynomials enumerated
/// across all degrees up to the bound.
pub const ENUM_CAP: u64 = 1 << 22;

/// Rows computed per progress checkpoint.
const CHUNK: u64 = 32;

/// CSV column set, one row per family member.
pub const CSV_HEADER: [&str; 14] = [
    "family",
    "a",
    "b",
    "polynomial",
    "monic_in_x",
    "degree_above_two",
    "characteristic_odd",
    "tame_degree",
    "separable",
    "irreducible_certified",
    "multiplicity_one",
    "separated",
    "iterates_certified",
    "verdict",
];

/// The two trinomial families the scan enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// f = x^d + a(t)·x^(d-1) + b(t)
    #[value(name = "trinomial-xd-1")]
    TrinomialXd1,
    /// f = x^d + a(t)·x + b(t)
    #[value(name = "trinomial-x1")]
    TrinomialX1,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::TrinomialXd1 => "trinomial-xd-1",
            Family::TrinomialX1 => "trinomial-x1",
        }
    }
}

/// Everything that determines a scan's mathematical output. Output
/// paths and worker counts are deliberately excluded: they must never
/// change a single byte of the CSV or the summary.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub family: Family,
    pub d: u64,
    pub p: u64,
    pub deg_bound: usize,
    pub n: u32,
    pub seed: u64,
    pub max_m: u32,
    pub point_cap: u64,
}

/// The configuration echo embedded in the summary JSON and compared
/// against the progress sidecar on resume.
pub fn config_value(cfg: &ScanConfig) -> Value {
    json!({
        "family": cfg.family.tag(),
        "d": cfg.d,
        "field": cfg.p,
        "deg_bound": cfg.deg_bound,
        "n": cfg.n,
        "seed": cfg.seed,
        "max_m": cfg.max_m,
        "point_cap": cfg.point_cap,
    })
}

/// Möbius function by trial division.
fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return 0;
            }
            mu = -mu;
        }
        q += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducibles of degree exactly `k` over `F_p`:
/// `(1/k) * sum over e | k of mu(e) * p^(k/e)` (necklace counting).
pub fn monic_irreducible_count(p: u64, k: u64) -> u64 {
    debug_assert!(k >= 1);
    let mut sum: i128 = 0;
    for e in 1..=k {
        if k % e == 0 {
            sum += i128::from(moebius(e)) * i128::from(p).pow((k / e) as u32);
        }
    }
    (sum / i128::from(k)) as u64
}

/// All monic irreducibles of `F_p[t]` with degree in `1..=max_deg`, in
/// canonical order: degree ascending, then ascending coefficient encode
/// `sum c_i p^i`. Errors when the candidate space exceeds [`ENUM_CAP`].
pub fn monic_irreducibles(field: &FieldSpec, max_deg: usize) -> Result<Vec<Poly<Fe>>> {
    let tr = PolyRing::new(field);
    let p = field.p();
    let mut out = Vec::new();
    let mut budget = ENUM_CAP;
    for k in 1..=max_deg {
        let total = p
            .checked_pow(k as u32)
            .filter(|&t| t <= budget)
            .ok_or_else(|| {
                anyhow!(
                    "degree bound {max_deg} over F_{p} needs more than {ENUM_CAP} \
                     candidate polynomials"
                )
            })?;
        budget -= total;
        for code in 0..total {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                coeffs.push(field.scalar(c % p));
                c /= p;
            }
            coeffs.push(field.one());
            let g = tr.from_coeffs(coeffs);
            if is_irreducible(field, &g) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// The member `x^d + a·x^(d-1) + b` or `x^d + a·x + b`.
pub fn family_member(
    field: &FieldSpec,
    family: Family,
    d: usize,
    a: &Poly<Fe>,
    b: &Poly<Fe>,
) -> BiPoly {
    assert!(d >= 2, "family degree must be at least 2");
    let tr = PolyRing::new(field);
    let mut coeffs = vec![tr.zero(); d + 1];
    coeffs[0] = b.clone();
    coeffs[d] = tr.one();
    let idx = match family {
        Family::TrinomialXd1 => d - 1,
        Family::TrinomialX1 => 1,
    };
    coeffs[idx] = tr.add(&coeffs[idx], a);
    bp_from_coeffs(field, coeffs)
}

/// One CSV row: run the hypothesis battery on the member built from
/// `(a, b)` and flatten the verdict into the fixed column set.
fn scan_row(field: &FieldSpec, cfg: &ScanConfig, a: &Poly<Fe>, b: &Poly<Fe>) -> Vec<String> {
    let f = family_member(field, cfg.family, cfg.d as usize, a, b);
    let budget = SearchBudget { max_m: cfg.max_m, point_cap: cfg.point_cap };
    let v = check_odoni(field, &f, cfg.n, &budget, cfg.seed);
    let iterates_certified = v
        .iterate_certificates
        .iter()
        .filter(|c| matches!(c.kind, CertificateKind::IterateIrreducible { .. }))
        .count();
    let verdict = match &v.conclusion {
        Conclusion::HypothesesHold(_) => "hypotheses-hold",
        Conclusion::Fails(_) => "fails",
        Conclusion::Inconclusive(_) => "inconclusive",
    };
    vec![
        cfg.family.tag().to_string(),
        poly_text(field, a),
        poly_text(field, b),
        bipoly_text(field, &f),
        v.basic.monic_in_x.to_string(),
        v.basic.degree_above_two.to_string(),
        v.basic.characteristic_odd.to_string(),
        v.basic.tame_degree.to_string(),
        v.basic.separable.to_string(),
        matches!(v.basic.irreducibility, OneSided::Irreducible(_)).to_string(),
        v.multiplicity_one_exists.to_string(),
        v.separation.as_ref().map(|s| s.separated).unwrap_or(false).to_string(),
        iterates_certified.to_string(),
        verdict.to_string(),
    ]
}

fn progress_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".progress");
    PathBuf::from(s)
}

fn write_progress(path: &Path, config: &Value, rows_written: u64, complete: bool) -> Result<()> {
    let doc = json!({
        "schema_version": 1,
        "config": config,
        "rows_written": rows_written,
        "complete": complete,
    });
    let mut text = serde_json::to_string_pretty(&doc).context("serializing progress")?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Run (or resume) a scan, leaving the CSV and its progress sidecar on
/// disk, and return the pass-rate summary computed by reading the CSV
/// back. The summary carries no resume state, so reruns of a finished
/// scan emit identical bytes.
pub fn run_scan(
    field: &FieldSpec,
    cfg: &ScanConfig,
    csv_path: &Path,
    workers: Option<usize>,
) -> Result<Value> {
    let irr = monic_irreducibles(field, cfg.deg_bound)?;
    let k = irr.len() as u64;
    let total = k * k;
    let expected: u64 =
        (1..=cfg.deg_bound as u64).map(|deg| monic_irreducible_count(cfg.p, deg)).sum();
    if expected * expected != total {
        bail!(
            "enumerated {k} coefficient polynomials but the closed form predicts {expected}"
        );
    }
    let config = config_value(cfg);
    let prog_path = progress_path(csv_path);

    let (mut written, already_complete) = if csv_path.exists() {
        let text = std::fs::read_to_string(&prog_path).with_context(|| {
            format!(
                "{} exists but its progress marker {} is unreadable; \
                 remove both to restart the scan",
                csv_path.display(),
                prog_path.display()
            )
        })?;
        let prog: Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", prog_path.display()))?;
        if prog["schema_version"] != 1 {
            bail!("{} has an unsupported schema version", prog_path.display());
        }
        if prog["config"] != config {
            bail!(
                "{} was produced by a different configuration; \
                 choose another --csv path or remove the old files",
                csv_path.display()
            );
        }
        let rows_written = prog["rows_written"]
            .as_u64()
            .with_context(|| format!("{} lacks rows_written", prog_path.display()))?;
        if rows_written > total {
            bail!("{} records more rows than the family has members", prog_path.display());
        }
        let complete = prog["complete"].as_bool().unwrap_or(false);
        (rows_written, complete && rows_written == total)
    } else {
        let file = File::create(csv_path)
            .with_context(|| format!("creating {}", csv_path.display()))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(CSV_HEADER)?;
        w.flush()?;
        write_progress(&prog_path, &config, 0, total == 0)?;
        (0, total == 0)
    };

    if !already_complete {
        let pool = match workers {
            Some(w) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(w.max(1))
                    .build()
                    .context("building the scan thread pool")?,
            ),
            None => None,
        };
        let file = OpenOptions::new()
            .append(true)
            .open(csv_path)
            .with_context(|| format!("opening {} for append", csv_path.display()))?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        while written < total {
            let end = (written + CHUNK).min(total);
            let compute = || -> Vec<Vec<String>> {
                (written..end)
                    .into_par_iter()
                    .map(|i| scan_row(field, cfg, &irr[(i / k) as usize], &irr[(i % k) as usize]))
                    .collect()
            };
            let rows = match &pool {
                Some(p) => p.install(compute),
                None => compute(),
            };
            for row in &rows {
                w.write_record(row)?;
            }
            w.flush()?;
            written = end;
            write_progress(&prog_path, &config, written, written == total)?;
        }
        // A resumed run may arrive here with nothing left to compute;
        // make sure the marker still ends up complete.
        write_progress(&prog_path, &config, written, written == total)?;
    }

    summarize(cfg, csv_path, total, k)
}

/// Tally the verdict column of the finished CSV into the summary and
/// check the row count against the closed-form family cardinality.
fn summarize(cfg: &ScanConfig, csv_path: &Path, expected: u64, choices: u64) -> Result<Value> {
    let mut rdr = csv::Reader::from_path(csv_path)
        .with_context(|| format!("reading back {}", csv_path.display()))?;
    let (mut members, mut passes, mut fails, mut inconclusive) = (0u64, 0u64, 0u64, 0u64);
    for rec in rdr.records() {
        let rec = rec?;
        members += 1;
        match rec.get(13) {
            Some("hypotheses-hold") => passes += 1,
            Some("fails") => fails += 1,
            Some("inconclusive") => inconclusive += 1,
            other => bail!(
                "{} row {members} has an unrecognized verdict {:?}",
                csv_path.display(),
                other
            ),
        }
    }
    if members != expected {
        bail!(
            "{} holds {members} rows but the family has {expected} members; \
             remove it and rerun",
            csv_path.display()
        );
    }
    Ok(json!({
        "family": cfg.family.tag(),
        "irreducible_choices": choices,
        "expected_members": expected,
        "members": members,
        "passes": passes,
        "fails": fails,
        "inconclusive": inconclusive,
        "pass_rate": if members == 0 {
            Value::Null
        } else {
            json!(passes as f64 / members as f64)
        },
    }))
}
