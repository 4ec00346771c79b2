//! Frobenius cycle-type statistics for iterated polynomials.
//!
//! For a monic `f(t, x)` of `x`-degree `d`, the Galois group of the
//! `n`-th iterate `f^(n)` over `F_q(t)` embeds into the `n`-fold wreath
//! power `[S_d]^n` acting on the `d^n` roots. Specializing `t := c` at a
//! point of `F_{q^m}` where the discriminant of `f^(n)` does not vanish,
//! and factoring the resulting univariate polynomial, yields the cycle
//! type of the Frobenius element at `c` acting on those roots. When the
//! group is all of `[S_d]^n`, the empirical distribution of these cycle
//! types over many specialization points converges to the distribution
//! of leaf cycle types of uniform wreath elements ([`crate::wreath`]); a
//! proper subgroup skews the distribution (index-two subgroups, for
//! instance, miss entire odd classes).
//!
//! Two caveats are inherent to the method and are surfaced in the
//! reports rather than hidden:
//!
//! * Frobenius elements at a fixed extension degree `m` sample a fixed
//!   coset of the geometric Galois group (over the algebraic closure of
//!   the constant field) inside the arithmetic one; cycling `m` over a
//!   range approximates uniform sampling of the whole arithmetic group.
//!   The per-`m` breakdown is kept in [`SampleReport::per_m`] so any
//!   fixed-`m` bias remains inspectable.
//! * This is a statistical identification, not a certificate: the
//!   verdict of [`compare_distribution`] is a consistency statement at
//!   an explicit tolerance, never a proof of equality. Exact
//!   certification of the first level is the job of [`crate::certify`].
//!
//! Sampling is reproducible: the sequence of specialization points is a
//! pure function of the seed and the requested extension range, so equal
//! seeds give byte-identical reports regardless of the worker count used
//! to evaluate them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bipoly::{
    bp_deg_x, bp_discriminant_x, bp_is_monic_x, bp_iterate, bp_specialize, eval_tpoly, BiPoly,
};
use crate::factor::squarefree_factor_degrees;
use crate::ff::{uniform_u64, Fe, FieldSpec};
use crate::poly::Poly;
use crate::wreath::{
    exact_cycle_type_distribution, montecarlo_cycle_type_distribution, TreeSpec,
};

/// Largest extension degree `m` the sampler will specialize over, both
/// as a requested bound and as the ceiling for automatic escalation.
pub const MAX_EXTENSION_DEGREE: u32 = 8;

/// Default total-variation tolerance for [`compare_distribution`].
pub const DEFAULT_TOLERANCE: f64 = 0.05;

/// Minimum number of unramified (counted) samples below which a
/// comparison refuses to render a verdict.
pub const MIN_USABLE_SAMPLES: u64 = 500;

/// Salt mixed into the sampling seed to derive the seed of the
/// Monte-Carlo reference draw, so the two random streams never coincide.
const MC_SEED_SALT: u64 = 0x517c_c1b7_2722_0a95;

/// Squared deviation bound of the per-class outlier test: a class fails
/// when `(observed - expected)^2 > 25 * variance`, i.e. deviates by more
/// than five binomial standard deviations (kept squared to avoid roots).
const SIGMA_BOUND_SQ: f64 = 25.0;

/// Ways sampling can be unsatisfiable before any point is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebotarevError {
    /// At least one sample must be requested.
    ZeroSamples,
    /// The extension-degree range must satisfy
    /// `1 <= lo <= hi <=` [`MAX_EXTENSION_DEGREE`].
    ExtensionRangeInvalid { lo: u32, hi: u32 },
    /// The polynomial must be monic in `x` for specialization to
    /// preserve the degree (and hence for factor degrees to partition
    /// `d^n`).
    NotMonicInX,
    /// Cycle types are only informative from `x`-degree two upwards.
    DegreeTooSmall { d: u64 },
    /// No canonical degree-`m` extension of the base field exists: the
    /// coefficient field itself is a proper extension, so its embedding
    /// into `F_{q^m}` would depend on a choice of root.
    ExtensionUnavailable { m: u32 },
    /// Even after escalating to degree [`MAX_EXTENSION_DEGREE`], the
    /// fields do not hold enough points for the requested budget.
    PointsExhausted { requested: u64, available: u64 },
}

impl core::fmt::Display for ChebotarevError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ChebotarevError::ZeroSamples => write!(f, "at least one sample is required"),
            ChebotarevError::ExtensionRangeInvalid { lo, hi } => write!(
                f,
                "extension-degree range {lo}..{hi} must satisfy 1 <= lo <= hi <= {}",
                MAX_EXTENSION_DEGREE
            ),
            ChebotarevError::NotMonicInX => write!(f, "f must be monic in x"),
            ChebotarevError::DegreeTooSmall { d } => {
                write!(f, "the x-degree must be at least 2, got {d}")
            }
            ChebotarevError::ExtensionUnavailable { m } => write!(
                f,
                "no canonical degree-{m} extension of the coefficient field is available"
            ),
            ChebotarevError::PointsExhausted { requested, available } => write!(
                f,
                "the sample budget {requested} exceeds the {available} points available \
                 at extension degrees up to {}",
                MAX_EXTENSION_DEGREE
            ),
        }
    }
}

impl core::error::Error for ChebotarevError {}

/// What to sample: the polynomial, the iterate level, the budget, the
/// inclusive extension-degree range to cycle through, and the seed that
/// fixes the point streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpec {
    pub f: BiPoly,
    pub n: u32,
    pub samples: u64,
    pub m_lo: u32,
    pub m_hi: u32,
    pub seed: u64,
}

/// The portion of a sampling run that landed in one extension field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSlice {
    /// Extension degree over the base field.
    pub m: u32,
    /// Defining modulus of the field sampled from (ascending
    /// coefficients over the prime field).
    pub modulus: Vec<u64>,
    /// Points drawn in this field.
    pub attempted: u64,
    /// Drawn points excluded because the discriminant vanished there.
    pub excluded: u64,
    /// Cycle-type counts from the unramified points.
    pub counts: BTreeMap<Vec<u64>, u64>,
}

/// Outcome of a sampling run. `counts` maps each observed cycle type (a
/// partition of `d^n` in decreasing order) to its frequency; the per-`m`
/// slices decompose the same data by extension degree.
///
/// Invariant: the counted types plus `excluded` sum to `attempted`, and
/// `attempted` equals the requested sample budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub spec: SampleSpec,
    pub counts: BTreeMap<Vec<u64>, u64>,
    pub excluded: u64,
    pub attempted: u64,
    pub per_m: Vec<ExtensionSlice>,
    /// True when some draws had to move beyond `m_hi` because every
    /// requested field ran out of fresh points.
    pub escalated: bool,
}

impl SampleReport {
    /// Number of samples that produced a cycle type (attempted minus
    /// excluded).
    pub fn usable(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Which reference distribution a comparison was made against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// Exact cycle-type distribution by full group enumeration.
    Exact,
    /// Monte-Carlo estimate from uniform group elements (used when the
    /// group order exceeds the enumeration cap).
    MonteCarlo { samples: u64, seed: u64 },
}

/// Verdict of a distribution comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComparisonVerdict {
    /// Total variation within tolerance and no class deviating by more
    /// than five standard deviations.
    ConsistentWithFullWreath { tolerance: f64 },
    /// The empirical distribution is incompatible with the full wreath
    /// product at the given tolerance.
    Inconsistent,
    /// Fewer than [`MIN_USABLE_SAMPLES`] usable samples: no verdict.
    InsufficientData,
}

/// Empirical-versus-reference comparison of cycle-type distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Samples that entered the comparison (unramified draws).
    pub usable_samples: u64,
    /// Reference distribution used.
    pub reference: ReferenceKind,
    /// The reference probabilities themselves, so reports are
    /// self-contained (expected columns in exports, re-checking).
    pub reference_distribution: BTreeMap<Vec<u64>, f64>,
    /// Total-variation distance, in `[0, 1]`.
    pub tv_distance: f64,
    /// Pearson chi-square statistic over the reference support.
    pub chi_square: f64,
    /// Reference support size minus one.
    pub degrees_of_freedom: u64,
    /// Observed fraction of samples with an irreducible specialization
    /// (cycle type a single `d^n`-cycle).
    pub irreducible_observed: f64,
    /// Expected fraction `1 / d^n` under the full wreath product.
    pub irreducible_expected: f64,
    pub verdict: ComparisonVerdict,
}

/// Cycle type of the Frobenius element at `t := c` acting on the roots
/// of the `n`-th iterate of `f`: the decreasing degree multiset of the
/// irreducible factors of `f^(n)(c, x)` over `ext`. Returns `None` when
/// the discriminant of the iterate vanishes at `c` (a ramified point,
/// where the dictionary between factor degrees and cycle types breaks).
///
/// `ext` must be the base field itself or, for a prime base field, one
/// of its canonical extensions; `f` must be monic in `x` of degree at
/// least 2 and `n` at least 1. This is a convenience wrapper that
/// recomputes the iterate and its discriminant on every call; bulk
/// sampling goes through [`chebotarev_sample`], which hoists both.
pub fn frobenius_cycle_type(
    field: &FieldSpec,
    f: &BiPoly,
    n: u32,
    ext: &FieldSpec,
    c: &Fe,
) -> Option<Vec<u64>> {
    assert!(n >= 1, "at least one iteration is required");
    assert!(bp_is_monic_x(field, f), "f must be monic in x");
    assert!(bp_deg_x(f) >= 2, "the x-degree must be at least 2");
    let iterate = bp_iterate(field, f, n);
    let disc = bp_discriminant_x(field, &iterate);
    evaluate_point_at(field, &iterate, &disc, ext, c)
}

/// Draws `spec.samples` specialization points, cycling the extension
/// degree round-robin through `spec.m_lo..=spec.m_hi` and never
/// repeating a point within one field. When a field runs out of fresh
/// points, draws scheduled for it move up to the next degree with
/// points remaining, escalating past `m_hi` (up to
/// [`MAX_EXTENSION_DEGREE`]) if the whole range fills up; any such
/// escalation is flagged in the report. Ramified points are recorded as
/// excluded, not redrawn.
///
/// The report depends only on `field` and `spec`; `workers` merely
/// splits the factorization work across threads (0 and 1 both mean
/// sequential) and never changes the result.
pub fn chebotarev_sample(
    field: &FieldSpec,
    spec: &SampleSpec,
    workers: u32,
) -> Result<SampleReport, ChebotarevError> {
    if spec.samples == 0 {
        return Err(ChebotarevError::ZeroSamples);
    }
    if spec.m_lo < 1 || spec.m_hi > MAX_EXTENSION_DEGREE || spec.m_lo > spec.m_hi {
        return Err(ChebotarevError::ExtensionRangeInvalid { lo: spec.m_lo, hi: spec.m_hi });
    }
    if !bp_is_monic_x(field, &spec.f) {
        return Err(ChebotarevError::NotMonicInX);
    }
    let d = bp_deg_x(&spec.f);
    if d < 2 {
        return Err(ChebotarevError::DegreeTooSmall { d: d as u64 });
    }
    assert!(spec.n >= 1, "at least one iteration is required");

    let (plan, fields, escalated) = plan_points(field, spec)?;
    let iterate = bp_iterate(field, &spec.f, spec.n);
    let disc = bp_discriminant_x(field, &iterate);
    let types = evaluate_plan(field, &iterate, &disc, &fields, &plan, workers);

    let mut slices: BTreeMap<u32, ExtensionSlice> = BTreeMap::new();
    let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut excluded = 0u64;
    for ((m, _), ty) in plan.iter().zip(&types) {
        let slice = slices.entry(*m).or_insert_with(|| ExtensionSlice {
            m: *m,
            modulus: fields[m].modulus().to_vec(),
            attempted: 0,
            excluded: 0,
            counts: BTreeMap::new(),
        });
        slice.attempted += 1;
        match ty {
            Some(t) => {
                *slice.counts.entry(t.clone()).or_insert(0) += 1;
                *counts.entry(t.clone()).or_insert(0) += 1;
            }
            None => {
                slice.excluded += 1;
                excluded += 1;
            }
        }
    }
    let report = SampleReport {
        spec: spec.clone(),
        counts,
        excluded,
        attempted: spec.samples,
        per_m: slices.into_values().collect(),
        escalated,
    };
    debug_assert_eq!(report.usable() + report.excluded, report.attempted);
    Ok(report)
}

/// Compares the sampled cycle-type distribution against the leaf-action
/// distribution of the full wreath product described by `tree` (which
/// must match the arity and height of the sampled iterate).
///
/// The reference is exact when the group fits under the enumeration
/// cap, otherwise a Monte-Carlo draw of at least ten times the usable
/// sample size whose seed is derived deterministically from the
/// sampling seed. The verdict is consistent when the total-variation
/// distance stays within `tolerance` and no single class deviates from
/// its expected count by more than five binomial standard deviations;
/// with fewer than [`MIN_USABLE_SAMPLES`] usable samples no verdict is
/// rendered.
pub fn compare_distribution(
    report: &SampleReport,
    tree: &TreeSpec,
    tolerance: f64,
) -> ComparisonReport {
    assert_eq!(
        tree.arity(),
        bp_deg_x(&report.spec.f),
        "tree arity must match the x-degree of the sampled polynomial"
    );
    assert_eq!(
        tree.height(),
        report.spec.n as usize,
        "tree height must match the sampled iterate level"
    );
    let usable: u64 = report.usable();
    let (reference, probs) = reference_distribution(tree, usable, report.spec.seed);

    let total = usable as f64;
    let mut tv = 0.0f64;
    let mut chi_square = 0.0f64;
    let mut cells = 0u64;
    let mut sigma_violation = false;
    if usable > 0 {
        let mut keys: BTreeSet<&Vec<u64>> = probs.keys().collect();
        keys.extend(report.counts.keys());
        for key in keys {
            let p = probs.get(key).copied().unwrap_or(0.0);
            let observed = report.counts.get(key).copied().unwrap_or(0) as f64;
            tv += abs_diff(observed / total, p);
            let expected = total * p;
            let variance = total * p * (1.0 - p);
            let dev = observed - expected;
            if dev * dev > SIGMA_BOUND_SQ * variance {
                sigma_violation = true;
            }
            if p > 0.0 {
                chi_square += dev * dev / expected;
                cells += 1;
            }
        }
        tv /= 2.0;
    } else {
        tv = 1.0;
        sigma_violation = true;
    }

    let leaves = tree.leaf_count();
    let irreducible_observed = if usable > 0 {
        report.counts.get(&vec![leaves]).copied().unwrap_or(0) as f64 / total
    } else {
        0.0
    };
    let verdict = if usable < MIN_USABLE_SAMPLES {
        ComparisonVerdict::InsufficientData
    } else if tv <= tolerance && !sigma_violation {
        ComparisonVerdict::ConsistentWithFullWreath { tolerance }
    } else {
        ComparisonVerdict::Inconsistent
    };
    ComparisonReport {
        usable_samples: usable,
        reference,
        reference_distribution: probs,
        tv_distance: tv,
        chi_square,
        degrees_of_freedom: cells.saturating_sub(1),
        irreducible_observed,
        irreducible_expected: 1.0 / leaves as f64,
        verdict,
    }
}

fn abs_diff(a: f64, b: f64) -> f64 {
    if a > b {
        a - b
    } else {
        b - a
    }
}

fn reference_distribution(
    tree: &TreeSpec,
    usable: u64,
    seed: u64,
) -> (ReferenceKind, BTreeMap<Vec<u64>, f64>) {
    match exact_cycle_type_distribution(tree) {
        Ok(map) => (
            ReferenceKind::Exact,
            map.into_iter().map(|(ty, (num, den))| (ty, num as f64 / den as f64)).collect(),
        ),
        Err(_) => {
            let samples = (10 * usable).max(1000);
            let mc_seed = seed ^ MC_SEED_SALT;
            let counts = montecarlo_cycle_type_distribution(tree, samples, mc_seed);
            let total = samples as f64;
            (
                ReferenceKind::MonteCarlo { samples, seed: mc_seed },
                counts.into_iter().map(|(ty, c)| (ty, c as f64 / total)).collect(),
            )
        }
    }
}

/// Non-repeating uniform stream over `0..pool` (a lazily materialized
/// Fisher-Yates shuffle: only the transpositions actually touched are
/// stored).
struct PointStream {
    pool: u64,
    drawn: u64,
    rng: ChaCha8Rng,
    swaps: BTreeMap<u64, u64>,
}

impl PointStream {
    fn new(pool: u64, seed: u64, m: u32) -> PointStream {
        PointStream {
            pool,
            drawn: 0,
            rng: ChaCha8Rng::seed_from_u64(stream_seed(seed, m)),
            swaps: BTreeMap::new(),
        }
    }

    fn exhausted(&self) -> bool {
        self.drawn >= self.pool
    }

    fn next_code(&mut self) -> u64 {
        debug_assert!(!self.exhausted());
        let i = self.drawn;
        let j = i + uniform_u64(&mut self.rng, self.pool - i);
        let at_j = self.swaps.get(&j).copied().unwrap_or(j);
        let at_i = self.swaps.get(&i).copied().unwrap_or(i);
        self.swaps.insert(j, at_i);
        self.drawn += 1;
        at_j
    }
}

/// Each extension degree gets its own stream seed so that widening the
/// range, or escalating into a new degree, never perturbs the points
/// drawn at the other degrees.
fn stream_seed(seed: u64, m: u32) -> u64 {
    seed ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn ensure_stream(
    field: &FieldSpec,
    seed: u64,
    m: u32,
    fields: &mut BTreeMap<u32, FieldSpec>,
    streams: &mut BTreeMap<u32, PointStream>,
) -> Result<(), ChebotarevError> {
    if streams.contains_key(&m) {
        return Ok(());
    }
    let ext = if m == 1 {
        field.clone()
    } else if field.k() == 1 {
        FieldSpec::make_extension(field.p(), m as usize, 0)
            .map_err(|_| ChebotarevError::ExtensionUnavailable { m })?
    } else {
        // A proper extension of a non-prime field would need a chosen
        // embedding of the coefficients; refuse rather than pick one.
        return Err(ChebotarevError::ExtensionUnavailable { m });
    };
    let pool = ext.q();
    fields.insert(m, ext);
    streams.insert(m, PointStream::new(pool, seed, m));
    Ok(())
}

/// Lays out the full draw sequence `(m, element code)` before any
/// evaluation happens. The sequence depends only on the seed, the range
/// and the field sizes, never on factorization outcomes, which is what
/// makes the evaluation embarrassingly parallel yet deterministic.
#[allow(clippy::type_complexity)]
fn plan_points(
    field: &FieldSpec,
    spec: &SampleSpec,
) -> Result<(Vec<(u32, u64)>, BTreeMap<u32, FieldSpec>, bool), ChebotarevError> {
    let mut fields = BTreeMap::new();
    let mut streams: BTreeMap<u32, PointStream> = BTreeMap::new();
    let mut plan = Vec::with_capacity(spec.samples as usize);
    let mut escalated = false;
    let width = (spec.m_hi - spec.m_lo + 1) as u64;
    for s in 0..spec.samples {
        let want = spec.m_lo + (s % width) as u32;
        let mut m = want;
        loop {
            if m > MAX_EXTENSION_DEGREE {
                let available = streams.values().map(|st| st.pool).sum::<u64>();
                return Err(ChebotarevError::PointsExhausted {
                    requested: spec.samples,
                    available,
                });
            }
            ensure_stream(field, spec.seed, m, &mut fields, &mut streams)?;
            if !streams[&m].exhausted() {
                break;
            }
            m += 1;
        }
        if m > spec.m_hi {
            escalated = true;
        }
        let code = streams.get_mut(&m).expect("stream ensured").next_code();
        plan.push((m, code));
    }
    Ok((plan, fields, escalated))
}

fn evaluate_plan(
    field: &FieldSpec,
    iterate: &BiPoly,
    disc: &Poly<Fe>,
    fields: &BTreeMap<u32, FieldSpec>,
    plan: &[(u32, u64)],
    workers: u32,
) -> Vec<Option<Vec<u64>>> {
    #[cfg(feature = "std")]
    if workers > 1 && plan.len() > 1 {
        return evaluate_plan_parallel(field, iterate, disc, fields, plan, workers);
    }
    #[cfg(not(feature = "std"))]
    let _ = workers;
    plan.iter()
        .map(|&(m, code)| evaluate_point(field, iterate, disc, &fields[&m], code))
        .collect()
}

#[cfg(feature = "std")]
fn evaluate_plan_parallel(
    field: &FieldSpec,
    iterate: &BiPoly,
    disc: &Poly<Fe>,
    fields: &BTreeMap<u32, FieldSpec>,
    plan: &[(u32, u64)],
    workers: u32,
) -> Vec<Option<Vec<u64>>> {
    let chunk = plan.len().div_ceil(workers as usize).max(1);
    let mut results: Vec<Option<Vec<u64>>> = vec![None; plan.len()];
    std::thread::scope(|scope| {
        for (points, out) in plan.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (slot, &(m, code)) in out.iter_mut().zip(points) {
                    *slot = evaluate_point(field, iterate, disc, &fields[&m], code);
                }
            });
        }
    });
    results
}

fn evaluate_point(
    field: &FieldSpec,
    iterate: &BiPoly,
    disc: &Poly<Fe>,
    ext: &FieldSpec,
    code: u64,
) -> Option<Vec<u64>> {
    let c = ext.decode(code);
    evaluate_point_at(field, iterate, disc, ext, &c)
}

fn evaluate_point_at(
    field: &FieldSpec,
    iterate: &BiPoly,
    disc: &Poly<Fe>,
    ext: &FieldSpec,
    c: &Fe,
) -> Option<Vec<u64>> {
    let disc_value =
        eval_tpoly(field, ext, disc, c).expect("no canonical embedding into the sample field");
    if ext.is_zero(&disc_value) {
        return None;
    }
    let specialized =
        bp_specialize(field, iterate, ext, c).expect("embedding verified on the discriminant");
    // Monic and away from the discriminant locus: full degree and
    // squarefree, so factor degrees are the Frobenius cycle type.
    Some(squarefree_factor_degrees(ext, &specialized))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::{bp_eval_point, bp_from_coeffs};
    use crate::factor::roots_in_field;
    use crate::poly::PolyRing;

    fn f5() -> FieldSpec {
        FieldSpec::prime_field(5).unwrap()
    }

    /// Bivariate from rows of ascending `t`-coefficients, one row per
    /// ascending `x`-power.
    fn bp(field: &FieldSpec, rows: &[&[u64]]) -> BiPoly {
        let tr = PolyRing::new(field);
        let coeffs = rows
            .iter()
            .map(|row| tr.from_coeffs(row.iter().map(|&c| field.scalar(c)).collect()))
            .collect();
        bp_from_coeffs(field, coeffs)
    }

    /// x^3 + t*x + t over F_5, with discriminant t^2 (t + 3).
    fn model(field: &FieldSpec) -> BiPoly {
        bp(field, &[&[0, 1], &[0, 1], &[], &[1]])
    }

    fn spec(f: BiPoly, n: u32, samples: u64, m_lo: u32, m_hi: u32, seed: u64) -> SampleSpec {
        SampleSpec { f, n, samples, m_lo, m_hi, seed }
    }

    #[test]
    fn cycle_types_at_rational_points_of_the_model_cubic() {
        let field = f5();
        let f = model(&field);
        // Unramified points and their factorization shapes.
        assert_eq!(
            frobenius_cycle_type(&field, &f, 1, &field, &field.scalar(1)),
            Some(vec![3])
        );
        assert_eq!(
            frobenius_cycle_type(&field, &f, 1, &field, &field.scalar(3)),
            Some(vec![3])
        );
        assert_eq!(
            frobenius_cycle_type(&field, &f, 1, &field, &field.scalar(4)),
            Some(vec![2, 1])
        );
        // disc = t^2 (t + 3) vanishes at t = 0 and t = 2: ramified.
        assert_eq!(frobenius_cycle_type(&field, &f, 1, &field, &field.scalar(0)), None);
        assert_eq!(frobenius_cycle_type(&field, &f, 1, &field, &field.scalar(2)), None);
    }

    #[test]
    fn cycle_types_match_a_naive_root_census() {
        let field = f5();
        let f = model(&field);
        for code in 0..field.q() {
            let c = field.decode(code);
            let Some(ty) = frobenius_cycle_type(&field, &f, 1, &field, &c) else {
                continue;
            };
            let roots = (0..field.q())
                .filter(|&x| field.is_zero(&bp_eval_point(&field, &f, &c, &field.decode(x))))
                .count();
            // A squarefree cubic has 0, 1 or 3 roots, pinning the shape.
            let expected = match roots {
                0 => vec![3],
                1 => vec![2, 1],
                3 => vec![1, 1, 1],
                other => panic!("impossible root count {other} for a squarefree cubic"),
            };
            assert_eq!(ty, expected);
        }
    }

    #[test]
    fn exhaustive_rational_slice_counts_and_ramification() {
        let field = f5();
        let f = model(&field);
        // Five samples at m = 1 exactly exhaust F_5, so the report is a
        // census: exclusions match the discriminant roots one for one.
        let report =
            chebotarev_sample(&field, &spec(model(&field), 1, 5, 1, 1, 9), 1).unwrap();
        assert_eq!(report.attempted, 5);
        assert_eq!(report.excluded, 2);
        let disc = bp_discriminant_x(&field, &bp_iterate(&field, &f, 1));
        assert_eq!(roots_in_field(&field, &disc).len(), 2);
        let mut expected = BTreeMap::new();
        expected.insert(vec![2, 1], 1);
        expected.insert(vec![3], 2);
        assert_eq!(report.counts, expected);
        assert!(!report.escalated);
        assert_eq!(report.per_m.len(), 1);
        assert_eq!(report.per_m[0].m, 1);
        assert_eq!(report.per_m[0].modulus, vec![0, 1]);
        assert_eq!(report.per_m[0].attempted, 5);
        assert_eq!(report.per_m[0].excluded, 2);
        assert_eq!(report.usable() + report.excluded, report.attempted);
    }

    #[test]
    fn exhausting_a_field_escalates_the_extension_degree() {
        let field = f5();
        let report =
            chebotarev_sample(&field, &spec(model(&field), 1, 10, 1, 1, 3), 1).unwrap();
        assert!(report.escalated);
        assert_eq!(report.per_m.len(), 2);
        assert_eq!(report.per_m[0].m, 1);
        assert_eq!(report.per_m[0].attempted, 5);
        assert_eq!(report.per_m[1].m, 2);
        assert_eq!(report.per_m[1].attempted, 5);
        // Degree-2 extension of F_5 with the seed-0 modulus x^2 + 2.
        assert_eq!(report.per_m[1].modulus, vec![2, 0, 1]);
        assert_eq!(report.usable() + report.excluded, report.attempted);
        for ty in report.counts.keys() {
            assert_eq!(ty.iter().sum::<u64>(), 3);
        }
    }

    #[test]
    fn reports_are_independent_of_the_worker_count() {
        let field = f5();
        let s = spec(model(&field), 2, 200, 1, 3, 11);
        let sequential = chebotarev_sample(&field, &s, 1).unwrap();
        let parallel = chebotarev_sample(&field, &s, 4).unwrap();
        assert_eq!(sequential, parallel);
        for ty in sequential.counts.keys() {
            assert_eq!(ty.iter().sum::<u64>(), 9);
        }
    }

    #[test]
    fn sampling_rejects_bad_requests() {
        let field = f5();
        let f = model(&field);
        assert_eq!(
            chebotarev_sample(&field, &spec(f.clone(), 1, 0, 1, 2, 0), 1),
            Err(ChebotarevError::ZeroSamples)
        );
        assert_eq!(
            chebotarev_sample(&field, &spec(f.clone(), 1, 10, 0, 2, 0), 1),
            Err(ChebotarevError::ExtensionRangeInvalid { lo: 0, hi: 2 })
        );
        assert_eq!(
            chebotarev_sample(&field, &spec(f.clone(), 1, 10, 3, 2, 0), 1),
            Err(ChebotarevError::ExtensionRangeInvalid { lo: 3, hi: 2 })
        );
        assert_eq!(
            chebotarev_sample(&field, &spec(f.clone(), 1, 10, 1, 9, 0), 1),
            Err(ChebotarevError::ExtensionRangeInvalid { lo: 1, hi: 9 })
        );
        // t*x^3 + x + t: not monic in x.
        let g = bp(&field, &[&[0, 1], &[1], &[], &[0, 1]]);
        assert_eq!(
            chebotarev_sample(&field, &spec(g, 1, 10, 1, 2, 0), 1),
            Err(ChebotarevError::NotMonicInX)
        );
        // x + t: degree too small for cycle statistics.
        let lin = bp(&field, &[&[0, 1], &[1]]);
        assert_eq!(
            chebotarev_sample(&field, &spec(lin, 1, 10, 1, 2, 0), 1),
            Err(ChebotarevError::DegreeTooSmall { d: 1 })
        );
    }

    #[test]
    fn non_prime_base_fields_only_sample_their_own_points() {
        let field = FieldSpec::make_extension(5, 2, 0).unwrap();
        let f = model(&field);
        // m = 1 over F_25 works and records the base modulus.
        let ok = chebotarev_sample(&field, &spec(f.clone(), 1, 6, 1, 1, 4), 1).unwrap();
        assert_eq!(ok.per_m[0].modulus, vec![2, 0, 1]);
        assert_eq!(ok.attempted, 6);
        // Asking for m = 2 needs an embedding choice: refused.
        assert_eq!(
            chebotarev_sample(&field, &spec(f, 1, 2, 1, 2, 4), 1),
            Err(ChebotarevError::ExtensionUnavailable { m: 2 })
        );
    }

    #[test]
    fn impossible_budgets_fail_before_any_factorization() {
        let field = FieldSpec::prime_field(3).unwrap();
        // x^3 + t*x + t over F_3; the planner never evaluates it.
        let f = model(&field);
        let total: u64 = (1..=8).map(|m| 3u64.pow(m)).sum();
        assert_eq!(total, 9840);
        assert_eq!(
            chebotarev_sample(&field, &spec(f, 1, total + 1, 1, 8, 0), 1),
            Err(ChebotarevError::PointsExhausted { requested: total + 1, available: total })
        );
    }

    #[test]
    fn the_model_cubic_is_consistent_with_the_symmetric_group() {
        let field = f5();
        let s = spec(model(&field), 1, 3000, 1, 4, 42);
        let report = chebotarev_sample(&field, &s, 1).unwrap();
        // 780 points live at m <= 4, so this run must escalate.
        assert!(report.escalated);
        assert!(report.per_m.iter().any(|slice| slice.m == 5));
        let tree = TreeSpec::new(3, 1).unwrap();
        let cmp = compare_distribution(&report, &tree, DEFAULT_TOLERANCE);
        assert_eq!(cmp.reference, ReferenceKind::Exact);
        assert_eq!(cmp.degrees_of_freedom, 2);
        assert_eq!(
            cmp.verdict,
            ComparisonVerdict::ConsistentWithFullWreath { tolerance: DEFAULT_TOLERANCE }
        );
        assert!(cmp.tv_distance <= DEFAULT_TOLERANCE);
        assert!(abs_diff(cmp.irreducible_observed, 1.0 / 3.0) < 0.05);
        assert_eq!(cmp.irreducible_expected, 1.0 / 3.0);
    }

    #[test]
    fn small_draws_render_no_verdict() {
        let field = f5();
        let s = spec(model(&field), 1, 10, 1, 2, 42);
        let report = chebotarev_sample(&field, &s, 1).unwrap();
        let tree = TreeSpec::new(3, 1).unwrap();
        let cmp = compare_distribution(&report, &tree, DEFAULT_TOLERANCE);
        assert_eq!(cmp.verdict, ComparisonVerdict::InsufficientData);
    }

    #[test]
    fn comparison_metrics_on_fabricated_counts() {
        let field = f5();
        let tree = TreeSpec::new(3, 1).unwrap();
        let base = chebotarev_sample(&field, &spec(model(&field), 1, 5, 1, 1, 0), 1).unwrap();

        // Counts exactly proportional to the S_3 distribution
        // {[1,1,1]: 1/6, [2,1]: 1/2, [3]: 1/3}: zero distance.
        let mut exact = base.clone();
        exact.counts = BTreeMap::new();
        exact.counts.insert(vec![1, 1, 1], 100);
        exact.counts.insert(vec![2, 1], 300);
        exact.counts.insert(vec![3], 200);
        let cmp = compare_distribution(&exact, &tree, DEFAULT_TOLERANCE);
        assert_eq!(cmp.usable_samples, 600);
        assert_eq!(cmp.tv_distance, 0.0);
        assert_eq!(cmp.chi_square, 0.0);
        assert_eq!(
            cmp.verdict,
            ComparisonVerdict::ConsistentWithFullWreath { tolerance: DEFAULT_TOLERANCE }
        );

        // All mass on a class outside the reference support: distance 1.
        let mut disjoint = base.clone();
        disjoint.counts = BTreeMap::new();
        disjoint.counts.insert(vec![4], 600);
        let cmp = compare_distribution(&disjoint, &tree, DEFAULT_TOLERANCE);
        assert!(abs_diff(cmp.tv_distance, 1.0) < 1e-12);
        assert_eq!(cmp.verdict, ComparisonVerdict::Inconsistent);

        // All mass on the identity class: on-support but wildly skewed.
        let mut skewed = base;
        skewed.counts = BTreeMap::new();
        skewed.counts.insert(vec![1, 1, 1], 600);
        let cmp = compare_distribution(&skewed, &tree, DEFAULT_TOLERANCE);
        assert_eq!(cmp.verdict, ComparisonVerdict::Inconsistent);
        assert!(cmp.tv_distance > 0.5);
    }

    #[test]
    fn oversized_groups_fall_back_to_a_seeded_montecarlo_reference() {
        let field = f5();
        // Height 5 binary tree: order 2^31 exceeds the enumeration cap.
        let tree = TreeSpec::new(2, 5).unwrap();
        let mut report =
            chebotarev_sample(&field, &spec(model(&field), 1, 5, 1, 1, 21), 1).unwrap();
        report.counts = montecarlo_cycle_type_distribution(&tree, 600, 17);
        // Compensate the fabricated counts so the x-degree assertion is
        // exercised against a matching quadratic.
        report.spec.f = bp(&field, &[&[0, 1], &[0, 1], &[1]]);
        report.spec.n = 5;
        let first = compare_distribution(&report, &tree, DEFAULT_TOLERANCE);
        let second = compare_distribution(&report, &tree, DEFAULT_TOLERANCE);
        assert_eq!(first, second);
        match first.reference {
            ReferenceKind::MonteCarlo { samples, seed } => {
                assert_eq!(samples, 6000);
                assert_eq!(seed, 21 ^ MC_SEED_SALT);
            }
            other => panic!("expected a Monte-Carlo reference, got {other:?}"),
        }
        assert_ne!(first.verdict, ComparisonVerdict::InsufficientData);
    }
}
