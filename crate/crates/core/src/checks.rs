//! Hypothesis checks for the arboreal Galois analysis of an iterated
//! polynomial `f(t, x)` over `F_q(t)`: ground-level degree and
//! separability conditions, critical points with multiplicities, the
//! Morse property, separation of critical orbits up to a level `n`, and
//! primitive prime divisors of critical orbit values.
//!
//! The top-level aggregator [`check_odoni`] combines these with
//! per-iterate irreducibility certificates into a single [`Verdict`]
//! naming the predicted Galois group (the `n`-fold iterated wreath
//! product of `S_d`) when every hypothesis is verified.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::bipoly::{
    bp_deg_x, bp_derivative_x, bp_discriminant_x, bp_eval_x, bp_factor_bruteforce,
    bp_from_coeffs, bp_gcd_x, bp_irreducible_oneside, bp_is_monic_x, bp_iterate,
    bp_rational_roots, bp_squarefree_x, BiPoly, BruteForceResult, OneSided,
};
use crate::certify::{certify_iterate_irreducible, divide_out_root, Certificate, CertificateKind};
use crate::factor::{factor_poly, Factorization};
use crate::ff::{Fe, FieldSpec};
use crate::poly::{Poly, PolyRing, Ring};
use crate::wreath::TreeSpec;

/// Errors for the checks that carry genuine preconditions. Everything
/// else reports failures as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    /// `df/dx = 0`: every point is critical and the analysis does not
    /// apply (the discriminant also vanishes).
    DerivativeVanishes,
    /// The Morse analysis requires the characteristic not to divide the
    /// `x`-degree.
    CharacteristicDividesDegree { p: u64, d: u64 },
    /// Primitive-prime analysis is defined for critical points with a
    /// rational (polynomial) root only.
    CriticalPointNotRational,
    /// An orbit value `f^(m)(t, gamma)` vanished: `gamma` falls onto a
    /// root of an iterate and valuations are undefined from that level.
    OrbitValueVanishes { level: u32 },
}

impl core::fmt::Display for CheckError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CheckError::DerivativeVanishes => {
                write!(f, "the x-derivative of f vanishes identically")
            }
            CheckError::CharacteristicDividesDegree { p, d } => {
                write!(f, "characteristic {p} divides the x-degree {d}")
            }
            CheckError::CriticalPointNotRational => {
                write!(f, "the critical point has no rational root in F_q[t]")
            }
            CheckError::OrbitValueVanishes { level } => {
                write!(f, "the orbit value vanishes at level {level}")
            }
        }
    }
}

impl core::error::Error for CheckError {}

/// Effort caps for one-sided certificate searches: `max_m` bounds the
/// extension degree tried for specializations `t := c`, `point_cap` the
/// number of points scanned per extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_m: u32,
    pub point_cap: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_m: 3, point_cap: 4096 }
    }
}

/// Outcome of the ground-level sanity checks. `failures` lists the
/// conditions that definitely fail; an uncertified irreducibility is not
/// among them (the certificate is one-sided) and is visible only through
/// `irreducibility`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicReport {
    pub monic_in_x: bool,
    pub degree_x: u64,
    /// `deg_x f > 2`.
    pub degree_above_two: bool,
    /// `p != 2`.
    pub characteristic_odd: bool,
    /// `p` does not divide `d(d-1)`.
    pub tame_degree: bool,
    /// `disc_x(f)` as a polynomial in `t`.
    pub discriminant: Poly<Fe>,
    /// Factorization of the discriminant (present when it is nonzero).
    pub discriminant_factored: Option<Factorization>,
    /// `disc_x(f) != 0`.
    pub separable: bool,
    pub irreducibility: OneSided,
    pub failures: Vec<String>,
}

impl BasicReport {
    /// Every condition verified, including a positive irreducibility
    /// certificate.
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && matches!(self.irreducibility, OneSided::Irreducible(_))
    }
}

/// Reason tags used in failure lists; kept short and stable so reports
/// can be matched textually.
pub const REASON_NOT_MONIC: &str = "not monic in x";
pub const REASON_DEGREE: &str = "d > 2";
pub const REASON_CHAR_TWO: &str = "p != 2";
pub const REASON_WILD: &str = "p | d(d-1)";
pub const REASON_DISC: &str = "discriminant vanishes";
pub const REASON_NO_MULT_ONE: &str = "no multiplicity-one critical point";
pub const REASON_SEPARATION: &str = "orbit-separation";
pub const REASON_DERIVATIVE: &str = "f' = 0";

/// Ground-level checks: monic in `x`, `deg_x > 2`, odd characteristic,
/// characteristic coprime to `d(d-1)`, nonvanishing `x`-discriminant,
/// and a one-sided irreducibility certificate over `F_q(t)`. Failures
/// are data, not errors.
pub fn check_basic(field: &FieldSpec, f: &BiPoly, budget: &SearchBudget) -> BasicReport {
    let tr = PolyRing::new(field);
    let mut failures = Vec::new();
    let monic_in_x = bp_is_monic_x(field, f);
    if !monic_in_x {
        failures.push(String::from(REASON_NOT_MONIC));
    }
    let d = bp_deg_x(f) as u64;
    let degree_above_two = d > 2;
    if !degree_above_two {
        failures.push(String::from(REASON_DEGREE));
    }
    let p = field.p();
    let characteristic_odd = p != 2;
    if !characteristic_odd {
        failures.push(String::from(REASON_CHAR_TWO));
    }
    let tame_degree = d >= 1 && d % p != 0 && (d - 1) % p != 0;
    if !tame_degree {
        failures.push(String::from(REASON_WILD));
    }
    let discriminant = if f.deg0() >= 1 { bp_discriminant_x(field, f) } else { tr.zero() };
    let separable = !discriminant.is_zero_poly();
    if !separable {
        failures.push(String::from(REASON_DISC));
    }
    let discriminant_factored = if separable {
        Some(factor_poly(field, &discriminant, 0))
    } else {
        None
    };
    let irreducibility = bp_irreducible_oneside(field, f, budget.max_m, budget.point_cap);
    BasicReport {
        monic_in_x,
        degree_x: d,
        degree_above_two,
        characteristic_odd,
        tame_degree,
        discriminant,
        discriminant_factored,
        separable,
        irreducibility,
        failures,
    }
}

/// A critical point of `f`: an irreducible factor of `df/dx` over
/// `F_q(t)`. `multiplicity` is the exponent of its squarefree part in the
/// squarefree decomposition of `df/dx`; the explicit root is extracted
/// exactly when the factor is linear in `x` (for normalized factors the
/// root then lies in `F_q[t]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPoint {
    /// Normalized (primitive, leading scalar 1) factor of `df/dx`.
    pub minpoly: BiPoly,
    /// Exponent in the squarefree decomposition of `df/dx`.
    pub multiplicity: u64,
    /// The root `r(t)` when `deg_x(minpoly) = 1` and the leading
    /// `x`-coefficient divides the constant one.
    pub rational_root: Option<Poly<Fe>>,
}

/// Split a squarefree, normalized part of `df/dx` into irreducible
/// factors as far as the exact tools reach: peel off every rational root,
/// after which degree 2 or 3 is irreducible outright, and degree 4 falls
/// to the capped exhaustive search when in range. A remainder that cannot
/// be decided is kept whole (this can only happen at degree 4 outside the
/// brute-force caps and never affects rational-root extraction).
fn split_part(field: &FieldSpec, part: BiPoly) -> Vec<BiPoly> {
    let tr = PolyRing::new(field);
    if part.deg0() <= 1 {
        return vec![part];
    }
    let mut factors = Vec::new();
    let mut rest = part;
    if rest.coeffs().last().map(|c| c.deg0() == 0).unwrap_or(false) {
        for r in bp_rational_roots(field, &rest) {
            factors.push(bp_from_coeffs(field, vec![tr.neg(&r), tr.one()]));
            rest = divide_out_root(&tr, &rest, &r).expect("verified root");
        }
    }
    if rest.deg0() == 0 {
        return factors;
    }
    if rest.deg0() <= 3 {
        // No rational root remains, so degree 2 or 3 cannot split.
        factors.push(rest);
        return factors;
    }
    match bp_factor_bruteforce(field, &rest) {
        BruteForceResult::Factored(a, b) => {
            factors.extend(split_part(field, a));
            factors.extend(split_part(field, b));
        }
        BruteForceResult::Irreducible | BruteForceResult::OutOfRange => factors.push(rest),
    }
    factors
}

/// Critical points of `f`: the irreducible factors of `df/dx` over
/// `F_q(t)` with their multiplicities, in canonical (degree, coefficient)
/// order. Components that are inseparable residues (possible over the
/// imperfect field `F_q(t)`) go through the same splitting.
pub fn critical_points(field: &FieldSpec, f: &BiPoly) -> Result<Vec<CriticalPoint>, CheckError> {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let fp = bp_derivative_x(field, f);
    if fp.is_zero_poly() {
        return Err(CheckError::DerivativeVanishes);
    }
    let sqf = bp_squarefree_x(field, &fp);
    let mut out = Vec::new();
    for (part, mult) in sqf.parts.into_iter().chain(sqf.inseparable_residues) {
        for factor in split_part(field, part) {
            let rational_root = if factor.deg0() == 1 {
                let lead = xr.lc(&factor);
                let c0 = xr.coeff(&factor, 0);
                tr.exact_div(&tr.neg(&c0), &lead)
            } else {
                None
            };
            out.push(CriticalPoint { minpoly: factor, multiplicity: mult, rational_root });
        }
    }
    out.sort_by(|a, b| {
        a.minpoly
            .deg0()
            .cmp(&b.minpoly.deg0())
            .then_with(|| xr.canonical_cmp(&a.minpoly, &b.minpoly))
    });
    Ok(out)
}

/// Details of the Morse test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseReport {
    pub morse: bool,
    /// `gcd_x(f', f'')` is constant: no degenerate critical point.
    pub nondegenerate: bool,
    /// The critical values are pairwise distinct: `N(s)` below has no
    /// repeated root.
    pub distinct_critical_values: bool,
    /// `N(s) = res_x(f - s, f')`, a polynomial in `s` over `F_q[t]`
    /// (outer variable `s`, inner variable `t`).
    pub critical_value_resultant: BiPoly,
}

/// Morse test: `f` is Morse iff its critical points are nondegenerate
/// (`gcd_x(f', f'')` constant) and its critical values are pairwise
/// distinct (`N(s) = res_x(f - s, f')` has no repeated root in `s` over
/// the algebraic closure). Requires the characteristic not to divide
/// `deg_x f`, which also pins the pole behavior for polynomial maps.
pub fn morse_check(field: &FieldSpec, f: &BiPoly) -> Result<MorseReport, CheckError> {
    let d = bp_deg_x(f) as u64;
    let p = field.p();
    if d == 0 || d % p == 0 {
        return Err(CheckError::CharacteristicDividesDegree { p, d });
    }
    let fp = bp_derivative_x(field, f);
    let fpp = bp_derivative_x(field, &fp);
    let nondegenerate = bp_deg_x(&bp_gcd_x(field, &fp, &fpp)) == 0;

    // N(s) in the tower F_q[t][s][x]: lift f and f' to x-polynomials
    // with s-polynomial coefficients, subtract s from the constant term.
    let tr = PolyRing::new(field);
    let sr = PolyRing::new(&tr);
    let xr = PolyRing::new(&sr);
    let lift = |g: &BiPoly| {
        xr.from_coeffs(g.coeffs().iter().map(|c| sr.constant(c.clone())).collect())
    };
    let f_minus_s = xr.sub(&lift(f), &xr.constant(sr.var()));
    let n = xr.resultant(&f_minus_s, &lift(&fp));
    debug_assert!(!n.is_zero_poly(), "res_x(f - s, f') cannot vanish for f' != 0");
    let ns = bp_derivative_x(field, &n);
    let distinct_critical_values =
        !ns.is_zero_poly() && bp_deg_x(&bp_gcd_x(field, &n, &ns)) == 0;
    Ok(MorseReport {
        morse: nondegenerate && distinct_critical_values,
        nondegenerate,
        distinct_critical_values,
        critical_value_resultant: n,
    })
}

/// The level-`l` orbit value of a critical point, encoded as a
/// polynomial in `y` over `F_q[t]` whose roots are `f^(l)(t, a)` for the
/// conjugate roots `a` of the critical point's minimal polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub source: CriticalPoint,
    pub level: u32,
    /// `R_l(y) = res_x(minpoly(x), y - f^(l)(t, x))`; for a rational
    /// critical point `gamma` this is `y - f^(l)(t, gamma)`. Outer
    /// variable `y`, inner variable `t`; monic in `y` of degree
    /// `deg_x(minpoly)`.
    pub rl: BiPoly,
}

/// `R_l` by resultant elimination in the tower `F_q[t][y][x]`.
fn orbit_resultant(field: &FieldSpec, minpoly: &BiPoly, f_l: &BiPoly) -> BiPoly {
    let tr = PolyRing::new(field);
    let yr = PolyRing::new(&tr);
    let xr = PolyRing::new(&yr);
    let lift = |g: &BiPoly| {
        xr.from_coeffs(g.coeffs().iter().map(|c| yr.constant(c.clone())).collect())
    };
    let y_minus_fl = xr.add(&xr.neg(&lift(f_l)), &xr.constant(yr.var()));
    xr.resultant(&lift(minpoly), &y_minus_fl)
}

/// Minimal-polynomial multiple of the level-`l` orbit value of a
/// critical point: the resultant `res_x(minpoly, y - f^(l))`, or the
/// direct evaluation `y - f^(l)(t, gamma)` when the root is rational.
pub fn orbit_minpoly(field: &FieldSpec, f: &BiPoly, cp: &CriticalPoint, l: u32) -> OrbitRecord {
    assert!(l >= 1, "orbit levels start at 1");
    let fl = bp_iterate(field, f, l);
    let rl = match &cp.rational_root {
        Some(r) => {
            let tr = PolyRing::new(field);
            let yr = PolyRing::new(&tr);
            let v = bp_eval_x(field, &fl, r);
            yr.from_coeffs(vec![tr.neg(&v), tr.one()])
        }
        None => orbit_resultant(field, &cp.minpoly, &fl),
    };
    OrbitRecord { source: cp.clone(), level: l, rl }
}

/// A witnessed equality of two critical orbit values: level `l` of
/// critical point `a_index` meets level `m` of critical point `b_index`.
/// The explicit values are included when the points are rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub a_index: usize,
    pub l: u32,
    pub b_index: usize,
    pub m: u32,
    pub value_a: Option<Poly<Fe>>,
    pub value_b: Option<Poly<Fe>>,
}

/// Outcome of the orbit-separation check up to level `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub separated: bool,
    /// The first collision in scan order (`m` ascending, then `l`, then
    /// both point indices), when one exists.
    pub first_collision: Option<Collision>,
    /// All orbit records examined, level-major: levels `1..=n`, critical
    /// points in canonical order within each level.
    pub records: Vec<OrbitRecord>,
    /// Whether some collision already occurs within a single critical
    /// point (between its own levels or conjugate roots) — i.e. whether
    /// the weaker reading of the separation hypothesis, quantifying only
    /// over conjugates of one point, also fails.
    pub conjugate_reading_fails: bool,
}

/// Is `R` squarefree in its outer variable over the algebraic closure
/// (no repeated roots)?
fn record_squarefree(field: &FieldSpec, rl: &BiPoly) -> bool {
    let d = bp_derivative_x(field, rl);
    if d.is_zero_poly() {
        return bp_deg_x(rl) == 0;
    }
    bp_deg_x(&bp_gcd_x(field, rl, &d)) == 0
}

/// Orbit separation for a given critical-point list (shared with the
/// aggregated verdict so critical points are computed once).
pub(crate) fn separation_with_points(
    field: &FieldSpec,
    f: &BiPoly,
    n: u32,
    cps: &[CriticalPoint],
) -> SeparationReport {
    assert!(n >= 1, "separation level must be at least 1");
    let k = cps.len();
    // records in level-major order: index (l, i) -> (l-1) * k + i.
    let mut records = Vec::with_capacity(k * n as usize);
    let mut values: Vec<Option<Poly<Fe>>> = Vec::with_capacity(k * n as usize);
    for l in 1..=n {
        let fl = bp_iterate(field, f, l);
        for cp in cps {
            records.push(orbit_minpoly(field, f, cp, l));
            values.push(cp.rational_root.as_ref().map(|r| bp_eval_x(field, &fl, r)));
        }
    }
    let at = |l: u32, i: usize| (l as usize - 1) * k + i;
    let mut first_collision: Option<Collision> = None;
    let mut conjugate_reading_fails = false;
    for m in 1..=n {
        for l in 1..=m {
            for a in 0..k {
                for b in 0..k {
                    let collides = if l == m && a == b {
                        !record_squarefree(field, &records[at(l, a)].rl)
                    } else {
                        bp_deg_x(&bp_gcd_x(
                            field,
                            &records[at(l, a)].rl,
                            &records[at(m, b)].rl,
                        )) >= 1
                    };
                    if collides {
                        if a == b {
                            conjugate_reading_fails = true;
                        }
                        if first_collision.is_none() {
                            first_collision = Some(Collision {
                                a_index: a,
                                l,
                                b_index: b,
                                m,
                                value_a: values[at(l, a)].clone(),
                                value_b: values[at(m, b)].clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    SeparationReport {
        separated: first_collision.is_none(),
        first_collision,
        records,
        conjugate_reading_fails,
    }
}

/// Check that the critical orbits are separated up to level `n`: for all
/// critical points `a, b` and `1 <= l <= m <= n`, the orbit values
/// `f^(l)(t, a)` and `f^(m)(t, b)` differ (as algebraic functions),
/// except the identical case `l = m`, `a = b`, where instead the
/// conjugate orbit values must be pairwise distinct (`R_l` squarefree).
/// Collisions are detected through `gcd_y` of the orbit records, so
/// algebraic critical points need no factorization.
pub fn orbit_separation(
    field: &FieldSpec,
    f: &BiPoly,
    n: u32,
) -> Result<SeparationReport, CheckError> {
    let cps = critical_points(field, f)?;
    Ok(separation_with_points(field, f, n, &cps))
}

/// One prime divisor of one critical-orbit value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDivisorRecord {
    /// Monic irreducible of `F_q[t]`.
    pub prime: Poly<Fe>,
    /// The orbit level whose value this prime divides.
    pub level: u32,
    /// `v_p(f^(level)(t, gamma))`.
    pub valuation: u64,
    /// Divides no orbit value of an earlier level (level 1 is vacuously
    /// primitive).
    pub primitive: bool,
    /// Primitive with valuation exactly 1.
    pub squarefree_primitive: bool,
    /// When `f` has a trinomial shape `x^d + a x^(d-1) + b` or
    /// `x^d + a x + b`: whether the prime is coprime to `b(t)`.
    pub coprime_to_shape_b: Option<bool>,
}

/// The orbit values `f^(m)(t, gamma)` for `m = 1..=n`, computed by
/// repeated substitution. Errors at the first vanishing value.
pub fn orbit_values(
    field: &FieldSpec,
    f: &BiPoly,
    gamma: &Poly<Fe>,
    n: u32,
) -> Result<Vec<Poly<Fe>>, CheckError> {
    assert!(n >= 1, "orbit levels start at 1");
    let mut out = Vec::with_capacity(n as usize);
    let mut cur = gamma.clone();
    for m in 1..=n {
        cur = bp_eval_x(field, f, &cur);
        if cur.is_zero_poly() {
            return Err(CheckError::OrbitValueVanishes { level: m });
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// The constant coefficient `b(t)` when `f` is monic with support in
/// `{x^d, x^(d-1), 1}` or `{x^d, x, 1}`.
fn trinomial_shape_b(field: &FieldSpec, f: &BiPoly) -> Option<Poly<Fe>> {
    if !bp_is_monic_x(field, f) {
        return None;
    }
    let d = bp_deg_x(f);
    if d < 2 {
        return None;
    }
    let nonzero: Vec<usize> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero_poly())
        .map(|(i, _)| i)
        .collect();
    let shape_high = nonzero.iter().all(|&i| i == 0 || i == d || i == d - 1);
    let shape_low = nonzero.iter().all(|&i| i == 0 || i == d || i == 1);
    if shape_high || shape_low {
        Some(f.coeffs()[0].clone())
    } else {
        None
    }
}

/// Factor every orbit value `f^(m)(t, gamma)` for `m = 1..=n` and record
/// each prime with its valuation, whether it is primitive at its level
/// (divides no earlier orbit value), and whether it is a squarefree
/// primitive divisor (primitive with valuation 1). Records are ordered
/// by level, then canonically by prime. The output is independent of the
/// factorization seed.
pub fn primitive_prime_divisors(
    field: &FieldSpec,
    f: &BiPoly,
    cp: &CriticalPoint,
    n: u32,
    seed: u64,
) -> Result<Vec<PrimeDivisorRecord>, CheckError> {
    let gamma = cp.rational_root.as_ref().ok_or(CheckError::CriticalPointNotRational)?;
    let values = orbit_values(field, f, gamma, n)?;
    let shape_b = trinomial_shape_b(field, f);
    let tr = PolyRing::new(field);
    let mut earlier: Vec<Poly<Fe>> = Vec::new();
    let mut out = Vec::new();
    for (idx, value) in values.iter().enumerate() {
        let level = idx as u32 + 1;
        let fac = factor_poly(field, value, seed);
        for (prime, mult) in &fac.factors {
            let primitive = !earlier.iter().any(|q| q == prime);
            let coprime_to_shape_b =
                shape_b.as_ref().map(|b| !tr.rem(b, prime).is_zero_poly());
            out.push(PrimeDivisorRecord {
                prime: prime.clone(),
                level,
                valuation: *mult,
                primitive,
                squarefree_primitive: primitive && *mult == 1,
                coprime_to_shape_b,
            });
        }
        for (prime, _) in fac.factors {
            earlier.push(prime);
        }
    }
    Ok(out)
}

/// Primitive-prime analysis of one rational critical point, as embedded
/// in a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPrimeTable {
    /// Index into the verdict's critical-point list.
    pub critical_point_index: usize,
    pub gamma: Poly<Fe>,
    /// Orbit values `f^(m)(t, gamma)`, `m = 1..=n` (empty when the orbit
    /// analysis aborted).
    pub level_values: Vec<Poly<Fe>>,
    pub records: Vec<PrimeDivisorRecord>,
    /// Set when the analysis aborted (e.g. a vanishing orbit value).
    pub note: Option<String>,
}

/// Aggregate conclusion of [`check_odoni`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conclusion {
    /// Every hypothesis verified with certificates up to level `n`; the
    /// Galois group of the `n`-th iterate is predicted to be the full
    /// iterated wreath product.
    HypothesesHold(u32),
    /// At least one hypothesis definitely fails.
    Fails(Vec<String>),
    /// No definite failure, but some certificate could not be found
    /// within budget.
    Inconclusive(Vec<String>),
}

/// Full hypothesis report for `f` at level `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub basic: BasicReport,
    /// `None` when the Morse precondition (characteristic coprime to the
    /// degree) fails; informational either way.
    pub morse: Option<MorseReport>,
    pub critical_points: Vec<CriticalPoint>,
    pub multiplicity_one_exists: bool,
    /// `None` when critical points are unavailable (`f' = 0`).
    pub separation: Option<SeparationReport>,
    /// One primitive-prime table per rational critical point.
    pub orbit_primes: Vec<OrbitPrimeTable>,
    /// Irreducibility certificates for `f^(m)`, `m = 1..=n`.
    pub iterate_certificates: Vec<Certificate>,
    /// Order of the predicted group (the iterated wreath product of
    /// `S_d`, `n` levels), when its tree parameters are in range.
    pub predicted_order: Option<BigUint>,
    pub conclusion: Conclusion,
}

/// Run every hypothesis check on `f` at level `n` and aggregate:
/// ground-level conditions, existence of a multiplicity-one critical
/// point, orbit separation up to `n`, primitive-prime tables for the
/// rational critical points (informational), the Morse property
/// (informational), and irreducibility certificates for every iterate
/// `f^(m)`, `m <= n`. The conclusion is `HypothesesHold(n)` only when
/// all required checks pass and every certificate is positive; definite
/// failures win over missing certificates.
pub fn check_odoni(
    field: &FieldSpec,
    f: &BiPoly,
    n: u32,
    budget: &SearchBudget,
    seed: u64,
) -> Verdict {
    assert!(n >= 1, "check level must be at least 1");
    let basic = check_basic(field, f, budget);
    let mut failures = basic.failures.clone();
    let mut unknowns: Vec<String> = Vec::new();

    let d = bp_deg_x(f) as u64;
    let morse = if d >= 1 && d % field.p() != 0 {
        morse_check(field, f).ok()
    } else {
        None
    };

    let (critical_points, separation) = match critical_points(field, f) {
        Ok(cps) => {
            let sep = separation_with_points(field, f, n, &cps);
            (cps, Some(sep))
        }
        Err(_) => {
            failures.push(String::from(REASON_DERIVATIVE));
            (Vec::new(), None)
        }
    };
    let multiplicity_one_exists = critical_points.iter().any(|cp| cp.multiplicity == 1);
    if !multiplicity_one_exists {
        failures.push(String::from(REASON_NO_MULT_ONE));
    }
    if let Some(sep) = &separation {
        if !sep.separated {
            failures.push(String::from(REASON_SEPARATION));
        }
    }

    let mut orbit_primes = Vec::new();
    for (i, cp) in critical_points.iter().enumerate() {
        let Some(gamma) = cp.rational_root.clone() else { continue };
        let table = match primitive_prime_divisors(field, f, cp, n, seed) {
            Ok(records) => OrbitPrimeTable {
                critical_point_index: i,
                gamma: gamma.clone(),
                level_values: orbit_values(field, f, &gamma, n)
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
        orbit_primes.push(table);
    }

    let mut iterate_certificates = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let cert = certify_iterate_irreducible(field, f, m, budget);
        if !matches!(cert.kind, CertificateKind::IterateIrreducible { .. }) {
            unknowns.push(format!("iterate {m} irreducibility not certified"));
        }
        iterate_certificates.push(cert);
    }

    let predicted_order = TreeSpec::new(d as usize, n as usize).ok().map(|spec| spec.order());
    let conclusion = if !failures.is_empty() {
        Conclusion::Fails(failures)
    } else if !unknowns.is_empty() {
        Conclusion::Inconclusive(unknowns)
    } else {
        Conclusion::HypothesesHold(n)
    };
    Verdict {
        basic,
        morse,
        critical_points,
        multiplicity_one_exists,
        separation,
        orbit_primes,
        iterate_certificates,
        predicted_order,
        conclusion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::{bp_from_coeffs, bp_render, IrreducibilityWitness};

    fn f5() -> FieldSpec {
        FieldSpec::prime_field(5).unwrap()
    }

    fn f7() -> FieldSpec {
        FieldSpec::prime_field(7).unwrap()
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

    fn tpoly(field: &FieldSpec, coeffs: &[u64]) -> Poly<Fe> {
        let tr = PolyRing::new(field);
        tr.from_coeffs(coeffs.iter().map(|&c| field.scalar(c)).collect())
    }

    #[test]
    fn basic_passes_on_model_cubic() {
        let f = f5();
        // x^3 + t*x^2 + t
        let g = bp(&f, &[&[0, 1], &[], &[0, 1], &[1]]);
        let report = check_basic(&f, &g, &SearchBudget::default());
        assert!(report.failures.is_empty());
        assert!(report.monic_in_x && report.degree_above_two);
        assert!(report.characteristic_odd && report.tame_degree && report.separable);
        // disc = t^4 + 3t^2 = t^2 (t^2 + 3)
        assert_eq!(report.discriminant, tpoly(&f, &[0, 0, 3, 0, 1]));
        let fac = report.discriminant_factored.as_ref().unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.factors[0], (tpoly(&f, &[0, 1]), 2));
        assert_eq!(fac.factors[1], (tpoly(&f, &[3, 0, 1]), 1));
        match &report.irreducibility {
            OneSided::Irreducible(IrreducibilityWitness::Eisenstein { prime }) => {
                assert_eq!(prime, &tpoly(&f, &[0, 1]));
            }
            other => panic!("expected an Eisenstein certificate, got {other:?}"),
        }
        assert!(report.all_pass());
    }

    #[test]
    fn basic_rejects_low_degree_and_wild_characteristic() {
        let f = f5();
        // x^2 + t: degree too small, everything else fine.
        let g = bp(&f, &[&[0, 1], &[], &[1]]);
        let report = check_basic(&f, &g, &SearchBudget::default());
        assert!(!report.degree_above_two);
        assert_eq!(report.failures, vec![String::from(REASON_DEGREE)]);
        assert!(!report.all_pass());

        // x^3 + t*x + t over F_3: p | d.
        let f3 = FieldSpec::prime_field(3).unwrap();
        let g = bp(&f3, &[&[0, 1], &[0, 1], &[], &[1]]);
        let report = check_basic(&f3, &g, &SearchBudget::default());
        assert!(!report.tame_degree);
        assert!(report.failures.contains(&String::from(REASON_WILD)));
    }

    #[test]
    fn critical_points_of_model_cubics() {
        let f = f5();
        // x^3 + t*x^2 + t: f' = 3x^2 + 2tx = 3 x (x + 4t).
        let g = bp(&f, &[&[0, 1], &[], &[0, 1], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        assert_eq!(cps.len(), 2);
        assert_eq!(cps[0].minpoly, bp(&f, &[&[], &[1]]));
        assert_eq!(cps[0].multiplicity, 1);
        assert_eq!(cps[0].rational_root, Some(tpoly(&f, &[])));
        assert_eq!(cps[1].minpoly, bp(&f, &[&[0, 4], &[1]]));
        assert_eq!(cps[1].multiplicity, 1);
        assert_eq!(cps[1].rational_root, Some(tpoly(&f, &[0, 1])));

        // x^3 + t*x + t: f' = 3x^2 + t, normalized x^2 + 2t, irreducible.
        let g = bp(&f, &[&[0, 1], &[0, 1], &[], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].minpoly, bp(&f, &[&[0, 2], &[], &[1]]));
        assert_eq!(cps[0].multiplicity, 1);
        assert_eq!(cps[0].rational_root, None);
    }

    #[test]
    fn critical_points_with_multiplicity() {
        let f = f7();
        // x^5 + t*x^4 + t over F_7: f' = 5x^4 + 4tx^3 = 5 x^3 (x + 5t).
        let g = bp(&f, &[&[0, 1], &[], &[], &[], &[0, 1], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        assert_eq!(cps.len(), 2);
        assert_eq!(cps[0].minpoly, bp(&f, &[&[], &[1]]));
        assert_eq!(cps[0].multiplicity, 3);
        assert_eq!(cps[0].rational_root, Some(tpoly(&f, &[])));
        assert_eq!(cps[1].minpoly, bp(&f, &[&[0, 5], &[1]]));
        assert_eq!(cps[1].multiplicity, 1);
        assert_eq!(cps[1].rational_root, Some(tpoly(&f, &[0, 2])));
    }

    #[test]
    fn critical_points_reject_vanishing_derivative() {
        let f = f5();
        // x^5 + t: f' = 0 over F_5.
        let g = bp(&f, &[&[0, 1], &[], &[], &[], &[], &[1]]);
        assert_eq!(critical_points(&f, &g), Err(CheckError::DerivativeVanishes));
    }

    #[test]
    fn morse_model_examples() {
        let f = f5();
        // x^3 + t*x: Morse, N(s) = 2s^2 + 4t^3.
        let g = bp(&f, &[&[], &[0, 1], &[], &[1]]);
        let report = morse_check(&f, &g).unwrap();
        assert!(report.morse && report.nondegenerate && report.distinct_critical_values);
        assert_eq!(
            report.critical_value_resultant,
            bp(&f, &[&[0, 0, 0, 4], &[], &[2]])
        );

        // x^4 + t*x: also Morse (p coprime to d(d-1)).
        let g = bp(&f, &[&[], &[0, 1], &[], &[], &[1]]);
        assert!(morse_check(&f, &g).unwrap().morse);

        // x^5 + t*x^4 + t over F_7: critical point 0 has multiplicity 3.
        let f7 = f7();
        let g = bp(&f7, &[&[0, 1], &[], &[], &[], &[0, 1], &[1]]);
        let report = morse_check(&f7, &g).unwrap();
        assert!(!report.morse && !report.nondegenerate);

        // p | d is rejected outright.
        let g = bp(&f, &[&[0, 1], &[], &[], &[], &[], &[1]]);
        assert_eq!(
            morse_check(&f, &g),
            Err(CheckError::CharacteristicDividesDegree { p: 5, d: 5 })
        );
    }

    #[test]
    fn trinomials_with_middle_term_are_never_morse() {
        // x^d + a(t) x^(d-1) + b(t) has the degenerate critical point 0
        // of multiplicity d-2 >= 3 whenever d >= 5, for any a != 0.
        for (d, p) in [(5usize, 7u64), (7, 11)] {
            let field = FieldSpec::prime_field(p).unwrap();
            for (a, b) in [(&[0u64, 1][..], &[0u64, 1][..]), (&[0, 2], &[1, 1]), (&[1, 1], &[0, 1])] {
                let tr = PolyRing::new(&field);
                let mut rows: Vec<Poly<Fe>> = vec![tr.zero(); d + 1];
                rows[0] = tpoly(&field, b);
                rows[d - 1] = tpoly(&field, a);
                rows[d] = tr.one();
                let g = bp_from_coeffs(&field, rows);
                let report = morse_check(&field, &g).unwrap();
                assert!(!report.morse, "x^{d} family over F_{p} must not be Morse");
                assert!(!report.nondegenerate);
            }
        }
    }

    #[test]
    fn orbit_minpoly_rational_and_algebraic() {
        let f = f5();
        // x^3 + t*x^2 + t, critical points 0 and t.
        let g = bp(&f, &[&[0, 1], &[], &[0, 1], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        let r1 = orbit_minpoly(&f, &g, &cps[0], 1);
        assert_eq!(r1.rl, bp(&f, &[&[0, 4], &[1]])); // y - t
        let r2 = orbit_minpoly(&f, &g, &cps[1], 1);
        assert_eq!(r2.rl, bp(&f, &[&[0, 4, 0, 3], &[1]])); // y - (2t^3 + t)

        // x^3 + t*x + t, critical minpoly x^2 + 2t:
        // R_1 = (y - t)^2 + 2t^3 = y^2 + 3ty + (t^2 + 2t^3).
        let g = bp(&f, &[&[0, 1], &[0, 1], &[], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        let r = orbit_minpoly(&f, &g, &cps[0], 1);
        assert_eq!(r.rl, bp(&f, &[&[0, 0, 1, 2], &[0, 3], &[1]]));
        assert_eq!(r.rl.deg0(), cps[0].minpoly.deg0());
    }

    #[test]
    fn orbit_minpoly_resultant_agrees_with_evaluation() {
        // For rational critical points the resultant elimination must
        // reproduce y - f^(l)(t, gamma) for every tested level.
        let f = f5();
        for rows in [
            &[&[0u64, 1][..], &[][..], &[0, 1][..], &[1][..]][..],   // x^3 + t x^2 + t
            &[&[1, 1][..], &[][..], &[0, 1][..], &[1][..]][..],      // x^3 + t x^2 + t + 1
        ] {
            let g = bp(&f, rows);
            let cps = critical_points(&f, &g).unwrap();
            for cp in cps.iter().filter(|cp| cp.rational_root.is_some()) {
                for l in 1..=3u32 {
                    let fl = bp_iterate(&f, &g, l);
                    let direct = orbit_minpoly(&f, &g, cp, l);
                    let eliminated = orbit_resultant(&f, &cp.minpoly, &fl);
                    assert_eq!(direct.rl, eliminated, "level {l} of {}", bp_render(&f, &cp.minpoly));
                }
            }
        }
    }

    #[test]
    fn separation_finds_the_model_collision() {
        let f = f5();
        // x^3 + t*x^2 + t: f(t) = f^(2)(0) = 2t^3 + t.
        let g = bp(&f, &[&[0, 1], &[], &[0, 1], &[1]]);
        let sep = orbit_separation(&f, &g, 2).unwrap();
        assert!(!sep.separated);
        let c = sep.first_collision.as_ref().unwrap();
        assert_eq!((c.a_index, c.l, c.b_index, c.m), (1, 1, 0, 2));
        let expected = tpoly(&f, &[0, 1, 0, 2]);
        assert_eq!(c.value_a.as_ref(), Some(&expected));
        assert_eq!(c.value_b.as_ref(), Some(&expected));
        // The collision is between two different critical points, so the
        // conjugates-only reading would not have caught it.
        assert!(!sep.conjugate_reading_fails);
        // At level 1 the same polynomial is still separated.
        assert!(orbit_separation(&f, &g, 1).unwrap().separated);
    }

    #[test]
    fn separation_passes_on_model_examples() {
        let f = f5();
        // x^3 + t*x^2 + (t+1) separates up to level 2.
        let g = bp(&f, &[&[1, 1], &[], &[0, 1], &[1]]);
        assert!(orbit_separation(&f, &g, 2).unwrap().separated);
        // x^3 + t*x + t at level 1: R_1 squarefree in y.
        let g = bp(&f, &[&[0, 1], &[0, 1], &[], &[1]]);
        assert!(orbit_separation(&f, &g, 1).unwrap().separated);
    }

    #[test]
    fn separation_is_monotone_in_the_level() {
        let f = f5();
        for rows in [
            &[&[0u64, 1][..], &[][..], &[0, 1][..], &[1][..]][..],  // collides at 2
            &[&[1, 1][..], &[][..], &[0, 1][..], &[1][..]][..],     // separated at 2
            &[&[0, 1][..], &[0, 1][..], &[][..], &[1][..]][..],     // algebraic point
        ] {
            let g = bp(&f, rows);
            let mut previous = true;
            for n in 1..=3u32 {
                let now = orbit_separation(&f, &g, n).unwrap().separated;
                assert!(previous || !now, "separation must be monotone in n");
                previous = now;
            }
        }
    }

    #[test]
    fn primitive_primes_of_model_orbit() {
        let f = f5();
        // x^3 + t*x^2 + t, gamma = 0: orbit t, then 2t(t^2 + 3).
        let g = bp(&f, &[&[0, 1], &[], &[0, 1], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        let t = tpoly(&f, &[0, 1]);

        let recs = primitive_prime_divisors(&f, &g, &cps[0], 1, 11).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].prime, t);
        assert_eq!((recs[0].level, recs[0].valuation), (1, 1));
        assert!(recs[0].primitive && recs[0].squarefree_primitive);
        // b(t) = t shares the prime t.
        assert_eq!(recs[0].coprime_to_shape_b, Some(false));

        let recs = primitive_prime_divisors(&f, &g, &cps[0], 2, 11).unwrap();
        assert_eq!(recs.len(), 3);
        // Level 2 value 2t^3 + t = 2 t (t^2 + 3): t is old, t^2+3 is new.
        assert_eq!(recs[1].prime, t);
        assert_eq!((recs[1].level, recs[1].valuation), (2, 1));
        assert!(!recs[1].primitive && !recs[1].squarefree_primitive);
        assert_eq!(recs[2].prime, tpoly(&f, &[3, 0, 1]));
        assert_eq!((recs[2].level, recs[2].valuation), (2, 1));
        assert!(recs[2].primitive && recs[2].squarefree_primitive);
        assert_eq!(recs[2].coprime_to_shape_b, Some(true));

        // Factorization seed must not matter.
        let again = primitive_prime_divisors(&f, &g, &cps[0], 2, 987_654).unwrap();
        assert_eq!(recs, again);
    }

    #[test]
    fn primitive_primes_of_shifted_model_orbit() {
        let f = f5();
        // x^3 + t*x^2 + (t+1), gamma = 0: orbit t+1, then
        // 2 (t+1) (t^2 + 4t + 1).
        let g = bp(&f, &[&[1, 1], &[], &[0, 1], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        let recs = primitive_prime_divisors(&f, &g, &cps[0], 2, 0).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].prime, tpoly(&f, &[1, 1]));
        assert!(recs[0].primitive);
        assert_eq!(recs[1].prime, tpoly(&f, &[1, 1]));
        assert_eq!(recs[1].level, 2);
        assert!(!recs[1].primitive);
        assert_eq!(recs[2].prime, tpoly(&f, &[1, 4, 1]));
        assert!(recs[2].primitive && recs[2].squarefree_primitive);
    }

    #[test]
    fn primitive_primes_preconditions() {
        let f = f5();
        // Algebraic critical point: not rational.
        let g = bp(&f, &[&[0, 1], &[0, 1], &[], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        assert_eq!(
            primitive_prime_divisors(&f, &g, &cps[0], 1, 0),
            Err(CheckError::CriticalPointNotRational)
        );

        // gamma = 0 is a root of f = x^3 + t*x^2: the orbit vanishes.
        let g = bp(&f, &[&[], &[], &[0, 1], &[1]]);
        let cps = critical_points(&f, &g).unwrap();
        let zero_cp = cps.iter().find(|cp| cp.rational_root == Some(tpoly(&f, &[]))).unwrap();
        assert_eq!(
            primitive_prime_divisors(&f, &g, zero_cp, 2, 0),
            Err(CheckError::OrbitValueVanishes { level: 1 })
        );
    }
}
