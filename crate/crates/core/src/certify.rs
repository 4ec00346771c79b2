//! Splitting-field certification over `F_q(t)`.
//!
//! For a monic squarefree `f` in `x` of degree `d`, the splitting field is
//! built one root at a time: adjoin a root `z` of the current minimal
//! polynomial, divide the quotient by `x - z`, and re-encode the extension
//! as a simple one via a shifted norm. Concretely, if `L = K[z]/(m)` and
//! `g` is the current quotient over `L`, the norm
//! `N(x) = res_z(m(z), g(x + shift * z))` is a polynomial over `K = F_q(t)`
//! whose roots are `beta - shift * zeta` for the roots `beta` of the
//! conjugates of `g` and the roots `zeta` of `m`. When `N` is squarefree,
//! `K[w]/(N)` is the compositum `L(beta)` and the chain continues there.
//!
//! Each level carries a one-sided witness. Level 0 certifies `f` itself
//! (Eisenstein or an irreducible specialization). At higher levels the norm
//! of an irreducible quotient factors over `K` into pieces whose degrees
//! are multiples of `[L : K]`, so a specialization whose factor-degree
//! multiset has no subset summing to a proper multiple of `[L : K]` proves
//! the quotient irreducible. Every witness can be re-verified from the
//! recorded data alone, with the search disabled.
//!
//! A completed chain pins `[M : K] = d!` for the splitting field `M`, i.e.
//! the Galois group is the full symmetric group `S_d`. The degree
//! obstruction certifies every step of a cubic chain; for `d = 4, 5` the
//! final quadratic step sits over a regular torsor (every available
//! Frobenius factor pattern already contains the forbidden degree), so
//! those inputs return an honest `Inconclusive` at that level.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::bipoly::{
    bp_deg_x, bp_derivative_x, bp_discriminant_x, bp_gcd_x, bp_irreducible_oneside,
    bp_is_monic_x, bp_iterate, bp_normalize, bp_specialize, eval_tpoly, BiPoly,
    IrreducibilityWitness, OneSided,
};
use crate::checks::SearchBudget;
use crate::factor::{factor_poly, is_irreducible};
use crate::ff::{Fe, FieldSpec};
use crate::poly::{FieldRing, Poly, PolyRing, Ring};

/// Errors from exact root division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyError {
    /// The claimed root does not divide the polynomial.
    NonzeroRemainder,
    /// The dividend has degree below 1.
    DegreeTooSmall,
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::NonzeroRemainder => write!(f, "the claimed root leaves a nonzero remainder"),
            CertifyError::DegreeTooSmall => write!(f, "cannot divide a root out of a constant"),
        }
    }
}

impl core::error::Error for CertifyError {}

/// Exact synthetic division of a monic-or-not polynomial by `x - root`
/// over any commutative ring. Fails unless the remainder is exactly zero.
pub fn divide_out_root<R: Ring>(
    ring: &R,
    g: &Poly<R::Elem>,
    root: &R::Elem,
) -> Result<Poly<R::Elem>, CertifyError> {
    let d = match g.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(CertifyError::DegreeTooSmall),
    };
    let coeffs = g.coeffs();
    let mut out = vec![ring.zero(); d];
    let mut carry = coeffs[d].clone();
    for i in (0..d).rev() {
        out[i] = carry.clone();
        carry = ring.add(&coeffs[i], &ring.mul(root, &carry));
    }
    if !ring.is_zero(&carry) {
        return Err(CertifyError::NonzeroRemainder);
    }
    Ok(PolyRing::new(ring).from_coeffs(out))
}

// ---------------------------------------------------------------------------
// The rational function field F_q(t) and quotient fields over it.
// ---------------------------------------------------------------------------

/// A rational function `num / den` in canonical form: `den` monic, the
/// fraction reduced, and zero represented as `0 / 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Rat {
    num: Poly<Fe>,
    den: Poly<Fe>,
}

fn rat_reduce(field: &FieldSpec, num: Poly<Fe>, den: Poly<Fe>) -> Rat {
    let tr = PolyRing::new(field);
    assert!(!den.is_zero_poly(), "zero denominator");
    if num.is_zero_poly() {
        return Rat { num, den: tr.one() };
    }
    let g = tr.gcd(&num, &den);
    let num = tr.exact_div(&num, &g).expect("gcd divides the numerator");
    let den = tr.exact_div(&den, &g).expect("gcd divides the denominator");
    let inv = field
        .inv_elem(&tr.lc(&den))
        .expect("nonzero leading coefficient");
    Rat {
        num: tr.mul_elem(&num, &inv),
        den: tr.mul_elem(&den, &inv),
    }
}

fn rat_const(field: &FieldSpec, num: Poly<Fe>) -> Rat {
    let tr = PolyRing::new(field);
    Rat { num, den: tr.one() }
}

fn rat_scalar(field: &FieldSpec, n: u64) -> Rat {
    let tr = PolyRing::new(field);
    rat_const(field, tr.constant(field.scalar(n)))
}

/// The field `F_q(t)` as a [`FieldRing`], so polynomial rings and quotient
/// fields can be stacked on top of it.
#[derive(Debug, Clone)]
struct RatField<'a> {
    field: &'a FieldSpec,
}

impl<'a> RatField<'a> {
    fn tr(&self) -> PolyRing<'a, FieldSpec> {
        PolyRing::new(self.field)
    }
}

impl<'a> Ring for RatField<'a> {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat { num: self.tr().zero(), den: self.tr().one() }
    }

    fn one(&self) -> Rat {
        Rat { num: self.tr().one(), den: self.tr().one() }
    }

    fn is_zero(&self, a: &Rat) -> bool {
        a.num.is_zero_poly()
    }

    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        let tr = self.tr();
        rat_reduce(
            self.field,
            tr.add(&tr.mul(&a.num, &b.den), &tr.mul(&b.num, &a.den)),
            tr.mul(&a.den, &b.den),
        )
    }

    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &Rat) -> Rat {
        Rat { num: self.tr().neg(&a.num), den: a.den.clone() }
    }

    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        let tr = self.tr();
        rat_reduce(self.field, tr.mul(&a.num, &b.num), tr.mul(&a.den, &b.den))
    }

    fn exact_div(&self, a: &Rat, b: &Rat) -> Option<Rat> {
        if b.num.is_zero_poly() {
            return None;
        }
        let tr = self.tr();
        Some(rat_reduce(self.field, tr.mul(&a.num, &b.den), tr.mul(&a.den, &b.num)))
    }

    fn canonical_cmp(&self, a: &Rat, b: &Rat) -> Ordering {
        let tr = self.tr();
        tr.canonical_cmp(&a.den, &b.den).then_with(|| tr.canonical_cmp(&a.num, &b.num))
    }
}

impl<'a> FieldRing for RatField<'a> {
    fn inv_elem(&self, a: &Rat) -> Option<Rat> {
        if a.num.is_zero_poly() {
            return None;
        }
        Some(rat_reduce(self.field, a.den.clone(), a.num.clone()))
    }
}

/// The quotient `F[z]/(modulus)` of a polynomial ring over a field.
/// Elements are reduced residues; inverses exist exactly for residues
/// coprime to the modulus, so this is a field when the modulus is
/// irreducible.
struct QuotField<'a, F: FieldRing> {
    base: &'a F,
    modulus: Poly<F::Elem>,
}

impl<'a, F: FieldRing> QuotField<'a, F> {
    fn pr(&self) -> PolyRing<'a, F> {
        PolyRing::new(self.base)
    }
}

impl<'a, F: FieldRing> Ring for QuotField<'a, F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Poly<F::Elem> {
        self.pr().zero()
    }

    fn one(&self) -> Poly<F::Elem> {
        self.pr().rem(&self.pr().one(), &self.modulus)
    }

    fn is_zero(&self, a: &Poly<F::Elem>) -> bool {
        a.is_zero_poly()
    }

    fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let pr = self.pr();
        pr.rem(&pr.add(a, b), &self.modulus)
    }

    fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let pr = self.pr();
        pr.rem(&pr.sub(a, b), &self.modulus)
    }

    fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let pr = self.pr();
        pr.rem(&pr.neg(a), &self.modulus)
    }

    fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let pr = self.pr();
        pr.rem(&pr.mul(a, b), &self.modulus)
    }

    fn exact_div(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        self.inv_elem(b).map(|bi| self.mul(a, &bi))
    }

    fn canonical_cmp(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Ordering {
        self.pr().canonical_cmp(a, b)
    }
}

impl<'a, F: FieldRing> FieldRing for QuotField<'a, F> {
    fn inv_elem(&self, a: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        let pr = self.pr();
        let a = pr.rem(a, &self.modulus);
        if a.is_zero_poly() {
            return None;
        }
        let (g, u, _) = pr.egcd(&a, &self.modulus);
        if g.deg0() != 0 {
            return None;
        }
        Some(pr.rem(&u, &self.modulus))
    }
}

// ---------------------------------------------------------------------------
// Norms.
// ---------------------------------------------------------------------------

/// Resultant norm: for `m` a polynomial in `z` over `F_q[t]` and `g` the
/// `x`-major coefficient list of `G(x) = sum_i g_i(z) x^i`, computes
/// `res_z(m(z), G(x))` as a polynomial in `x` over `F_q[t]`. Over the
/// roots `zeta` of `m` this is `lc(m)^{deg_z G} * prod G(x)|_{z=zeta}`.
pub fn norm_resultant(field: &FieldSpec, m: &BiPoly, g: &[BiPoly]) -> BiPoly {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let zr = PolyRing::new(&xr);
    let max_dz = g.iter().map(|gi| gi.coeffs().len()).max().unwrap_or(0);
    let mut by_z = Vec::with_capacity(max_dz);
    for j in 0..max_dz {
        by_z.push(xr.from_coeffs(
            g.iter()
                .map(|gi| gi.coeffs().get(j).cloned().unwrap_or_else(|| tr.zero()))
                .collect(),
        ));
    }
    let gz = zr.from_coeffs(by_z);
    let mz = zr.from_coeffs(m.coeffs().iter().map(|c| xr.constant(c.clone())).collect());
    zr.resultant(&mz, &gz)
}

/// Substitute `x := x + lam * z` into the `x`-major coefficient list of a
/// polynomial with `z`-polynomial coefficients.
fn shift_input(field: &FieldSpec, g: &[BiPoly], lam: u64) -> Vec<BiPoly> {
    let tr = PolyRing::new(field);
    let zr = PolyRing::new(&tr);
    let xr = PolyRing::new(&zr);
    let meta = PolyRing::new(&xr);
    let lifted = meta.from_coeffs(g.iter().map(|gi| xr.constant(gi.clone())).collect());
    let lam_z = zr.mul_elem(&zr.var(), &tr.constant(field.scalar(lam)));
    let subst = xr.from_coeffs(vec![lam_z, zr.one()]);
    meta.eval(&lifted, &subst).into_coeffs()
}

fn norm_shifted(field: &FieldSpec, m: &BiPoly, g: &[BiPoly], lam: u64) -> BiPoly {
    norm_resultant(field, m, &shift_input(field, g, lam))
}

/// Squarefreeness in `x` over `F_q(t)`: the derivative is nonzero and
/// coprime to the polynomial (nonzero constants count as squarefree).
fn biv_squarefree_x(field: &FieldSpec, h: &BiPoly) -> bool {
    if h.is_zero_poly() {
        return false;
    }
    if bp_deg_x(h) == 0 {
        return true;
    }
    let dh = bp_derivative_x(field, h);
    if dh.is_zero_poly() {
        return false;
    }
    bp_deg_x(&bp_gcd_x(field, h, &dh)) == 0
}

/// Outcome of the shifted-norm search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormOutcome {
    /// A squarefree norm was found at the recorded shift.
    Squarefree { shift: u64, norm: BiPoly },
    /// No shift in the search range produced a squarefree norm; `raw` is
    /// the unshifted norm, kept for diagnostics.
    Exhausted { raw: BiPoly },
}

/// Search the shifts `0, 1, 2, ...` (at most 16 nonzero shifts, fewer when
/// the characteristic is small) for one whose norm is squarefree in `x`.
pub fn norm_poly(field: &FieldSpec, m: &BiPoly, g: &[BiPoly]) -> NormOutcome {
    let raw = norm_resultant(field, m, g);
    if biv_squarefree_x(field, &raw) {
        return NormOutcome::Squarefree { shift: 0, norm: raw };
    }
    let cap = 16u64.min(field.p() - 1);
    for lam in 1..=cap {
        let n = norm_shifted(field, m, g, lam);
        if biv_squarefree_x(field, &n) {
            return NormOutcome::Squarefree { shift: lam, norm: n };
        }
    }
    NormOutcome::Exhausted { raw }
}

// ---------------------------------------------------------------------------
// Certificates.
// ---------------------------------------------------------------------------

/// Witness that a chain quotient is irreducible, phrased on its norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormWitness {
    /// The norm itself carries a one-sided irreducibility witness (used at
    /// level 0, where the norm is the polynomial itself).
    Irreducible(IrreducibilityWitness),
    /// A degree-preserving specialization `t := point` (in the degree-`m`
    /// extension built from `modulus`) whose factor-degree multiset has no
    /// subset summing to `block * k` for any `0 < k < e`. Since the norm of
    /// a degree-`e` quotient factors over `F_q(t)` into pieces of degree
    /// divisible by `block = [L : F_q(t)]`, this proves the quotient
    /// irreducible.
    DegreeObstruction {
        m: u32,
        modulus: Vec<u64>,
        point: Vec<u64>,
        block: u64,
    },
}

/// Per-level record in a chain certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelWitness {
    /// 0 for the input polynomial itself, then 1, 2, ... up the tower.
    pub level: u32,
    /// Degree of the quotient certified at this level.
    pub quotient_degree: u64,
    /// The shift whose norm was squarefree (0 at level 0).
    pub shift: u64,
    /// `x`-degree of the (normalized) norm the witness refers to.
    pub norm_degree: u64,
    pub witness: NormWitness,
}

/// A polynomial over a tower level in cleared-denominator form: the
/// coefficient of `x^i` is `numerators[i] / denominator`, where each
/// numerator is a polynomial in the current generator `z` over `F_q[t]`
/// and the common denominator is a monic polynomial in `t` alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMinpoly {
    pub numerators: Vec<BiPoly>,
    pub denominator: Poly<Fe>,
}

impl ChainMinpoly {
    /// Degree in `x`.
    pub fn degree(&self) -> u64 {
        self.numerators.len().saturating_sub(1) as u64
    }
}

/// State of the root-adjoining chain: the minimal polynomial adjoined at
/// each completed level (degrees `d, d-1, ...`) and the current quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainState {
    /// Number of completed re-encodings (equals `d - 1` at full success).
    pub level: u32,
    /// `minpolys[j]` is the minimal polynomial of the root adjoined at
    /// level `j` over the level-`j` field, in cleared-denominator form;
    /// `minpolys[0]` is the input itself.
    pub minpolys: Vec<ChainMinpoly>,
    /// The quotient still to be split (degree 1 at full success).
    pub current: ChainMinpoly,
}

impl ChainState {
    pub fn minpoly_degrees(&self) -> Vec<u64> {
        self.minpolys.iter().map(|m| m.degree()).collect()
    }

    pub fn current_degree(&self) -> u64 {
        self.current.degree()
    }
}

/// What a certificate claims.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    /// The splitting field has degree exactly `order = d!`, so the Galois
    /// group is the full symmetric group `S_d`.
    FullSymmetric { order: u64 },
    /// The `n`-th iterate is irreducible over `F_q(t)`.
    IterateIrreducible { n: u32 },
    /// Nothing was certified; `level` is where the chain (or precondition
    /// check) stopped.
    Inconclusive { level: u32, reason: String },
}

/// A self-contained, re-verifiable certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub witnesses: Vec<LevelWitness>,
    pub chain: Option<ChainState>,
}

fn small_factorial(d: u64) -> u64 {
    (1..=d).product()
}

// ---------------------------------------------------------------------------
// Degree obstruction search and verification.
// ---------------------------------------------------------------------------

fn rebuild_extension(field: &FieldSpec, m: u32, modulus: &[u64]) -> Option<FieldSpec> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        if modulus != field.modulus() {
            return None;
        }
        return Some(field.clone());
    }
    if field.k() != 1 || modulus.len() != m as usize + 1 {
        return None;
    }
    FieldSpec::from_modulus(field.p(), modulus.to_vec()).ok()
}

/// Check the subset-sum obstruction at one specialization point: the point
/// must preserve the `x`-degree, and no sub-multiset of the factor degrees
/// may sum to `block * k` for `0 < k < e`.
fn obstruction_holds(
    field: &FieldSpec,
    norm: &BiPoly,
    e: u64,
    block: u64,
    ext: &FieldSpec,
    c: &Fe,
) -> bool {
    let degx = bp_deg_x(norm) as u64;
    if e < 2 || degx == 0 || degx >= 128 || block * e != degx {
        return false;
    }
    let lead = norm.coeffs().last().expect("nonzero polynomial");
    let lead_at = match eval_tpoly(field, ext, lead, c) {
        Some(v) => v,
        None => return false,
    };
    if ext.is_zero(&lead_at) {
        return false;
    }
    let sp = match bp_specialize(field, norm, ext, c) {
        Some(s) => s,
        None => return false,
    };
    let fac = factor_poly(ext, &sp, 0);
    let mut sums: u128 = 1;
    for (prime, mult) in &fac.factors {
        for _ in 0..*mult {
            sums |= sums << prime.deg0();
        }
    }
    (1..e).all(|k| sums & (1u128 << (block * k)) == 0)
}

/// Search specialization points (prime field first, then extensions when
/// the base is a prime field) for a degree obstruction on the norm of a
/// degree-`e` quotient.
fn find_degree_obstruction(
    field: &FieldSpec,
    norm: &BiPoly,
    e: u64,
    budget: &SearchBudget,
) -> Option<NormWitness> {
    let degx = bp_deg_x(norm) as u64;
    if e < 2 || degx == 0 || degx % e != 0 || degx >= 128 {
        return None;
    }
    let block = degx / e;
    for m in 1..=budget.max_m {
        let ext = if m == 1 {
            field.clone()
        } else if field.k() == 1 {
            match FieldSpec::make_extension(field.p(), m as usize, 0) {
                Ok(x) => x,
                Err(_) => break,
            }
        } else {
            break;
        };
        let points = ext.q().min(budget.point_cap);
        for idx in 0..points {
            let c = ext.decode(idx);
            if obstruction_holds(field, norm, e, block, &ext, &c) {
                return Some(NormWitness::DegreeObstruction {
                    m,
                    modulus: ext.modulus().to_vec(),
                    point: c.coeffs().to_vec(),
                    block,
                });
            }
        }
    }
    None
}

/// Re-verify a one-sided irreducibility witness from its recorded data,
/// without running any search.
pub fn verify_witness(field: &FieldSpec, g: &BiPoly, w: &IrreducibilityWitness) -> bool {
    let d = match g.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    match w {
        IrreducibilityWitness::LinearInX => d == 1,
        IrreducibilityWitness::Eisenstein { prime } => {
            let tr = PolyRing::new(field);
            if prime.deg0() < 1 || !tr.is_monic(prime) || !is_irreducible(field, prime) {
                return false;
            }
            let lead = g.coeffs().last().expect("degree checked");
            if tr.rem(lead, prime).is_zero_poly() {
                return false;
            }
            for i in 0..d {
                if !tr.rem(&g.coeffs()[i], prime).is_zero_poly() {
                    return false;
                }
            }
            let (q, _) = tr.divmod(&g.coeffs()[0], prime);
            !tr.rem(&q, prime).is_zero_poly()
        }
        IrreducibilityWitness::Specialization { m, modulus, point } => {
            let Some(ext) = rebuild_extension(field, *m, modulus) else {
                return false;
            };
            let Ok(c) = ext.elem_from_coeffs(point.clone()) else {
                return false;
            };
            let Some(sp) = bp_specialize(field, g, &ext, &c) else {
                return false;
            };
            sp.deg0() == d && is_irreducible(&ext, &sp)
        }
    }
}

/// Re-verify a norm witness against the (normalized) norm of a degree-`e`
/// quotient.
fn verify_norm_witness(field: &FieldSpec, norm: &BiPoly, e: u64, w: &NormWitness) -> bool {
    match w {
        NormWitness::Irreducible(iw) => verify_witness(field, norm, iw),
        NormWitness::DegreeObstruction { m, modulus, point, block } => {
            if e < 2 {
                return false;
            }
            let degx = bp_deg_x(norm) as u64;
            if degx == 0 || degx % e != 0 || degx / e != *block {
                return false;
            }
            let Some(ext) = rebuild_extension(field, *m, modulus) else {
                return false;
            };
            let Ok(c) = ext.elem_from_coeffs(point.clone()) else {
                return false;
            };
            obstruction_holds(field, norm, e, *block, &ext, &c)
        }
    }
}

// ---------------------------------------------------------------------------
// The chain engine.
// ---------------------------------------------------------------------------

fn common_den(field: &FieldSpec, polys: &[Poly<Rat>]) -> Poly<Fe> {
    let tr = PolyRing::new(field);
    let mut den = tr.one();
    for p in polys {
        for c in p.coeffs() {
            let g = tr.gcd(&den, &c.den);
            let q = tr.exact_div(&c.den, &g).expect("gcd divides");
            den = tr.monic(&tr.mul(&den, &q));
        }
    }
    den
}

fn clear_rat_poly(field: &FieldSpec, p: &Poly<Rat>, den: &Poly<Fe>) -> BiPoly {
    let tr = PolyRing::new(field);
    let zr = PolyRing::new(&tr);
    zr.from_coeffs(
        p.coeffs()
            .iter()
            .map(|c| {
                let scale = tr.exact_div(den, &c.den).expect("common denominator");
                tr.mul(&c.num, &scale)
            })
            .collect(),
    )
}

fn cleared_coeffs(field: &FieldSpec, polys: &[Poly<Rat>]) -> (Vec<BiPoly>, Poly<Fe>) {
    let den = common_den(field, polys);
    let cleared = polys.iter().map(|p| clear_rat_poly(field, p, &den)).collect();
    (cleared, den)
}

fn chain_minpoly(field: &FieldSpec, polys: &[Poly<Rat>]) -> ChainMinpoly {
    let (numerators, denominator) = cleared_coeffs(field, polys);
    ChainMinpoly { numerators, denominator }
}

/// Re-encode `L(beta)` as the simple extension `K[w]/(n)` where
/// `w = beta - lam * zeta`: recover `zeta` as the unique common root of
/// the old minimal polynomial and the shifted quotient, then divide the
/// quotient by `x - beta` over the new field.
fn reencode(
    field: &FieldSpec,
    rat: &RatField<'_>,
    m_rat: &Poly<Rat>,
    g: &[Poly<Rat>],
    lam: u64,
    n_int: &BiPoly,
) -> Result<(Poly<Rat>, Vec<Poly<Rat>>), String> {
    let kr = PolyRing::new(rat);
    let n_rat = kr.monic(&kr.from_coeffs(
        n_int.coeffs().iter().map(|c| rat_const(field, c.clone())).collect(),
    ));
    let lp = QuotField { base: rat, modulus: n_rat.clone() };
    let lpr = PolyRing::new(&lp);
    let wbar = kr.rem(&kr.var(), &n_rat);
    let lam_elem = kr.constant(rat_scalar(field, lam));
    let lift = |p: &Poly<Rat>| -> Poly<Poly<Rat>> {
        lpr.from_coeffs(p.coeffs().iter().map(|c| kr.constant(c.clone())).collect())
    };
    let m_l = lift(m_rat);
    let subst = lpr.from_coeffs(vec![wbar.clone(), lam_elem.clone()]);
    let mut hz = lpr.zero();
    for gi in g.iter().rev() {
        hz = lpr.add(&lpr.mul(&hz, &subst), &lift(gi));
    }
    let lin = lpr.gcd(&m_l, &hz);
    if lin.deg0() != 1 {
        return Err(String::from(
            "re-encoding failed: the generator is not determined by the shifted root",
        ));
    }
    let alpha = lp.neg(&lpr.coeff(&lin, 0));
    let beta = lp.add(&wbar, &lp.mul(&lam_elem, &alpha));
    let gx = lpr.from_coeffs(g.iter().map(|gi| lpr.eval(&lift(gi), &alpha)).collect());
    let quot = divide_out_root(&lp, &gx, &beta)
        .map_err(|_| String::from("re-encoding failed: the recovered root does not divide the quotient"))?;
    Ok((n_rat, quot.into_coeffs()))
}

/// Run the root-adjoining chain. `per_level(level, e, m, h)` receives the
/// cleared minimal polynomial `m` and quotient coefficients `h` and must
/// return the accepted shift and its norm, or a reason to stop. The
/// returned state always reflects how far the chain got.
fn run_chain(
    field: &FieldSpec,
    f: &BiPoly,
    per_level: &mut dyn FnMut(u32, u64, &BiPoly, &[BiPoly]) -> Result<(u64, BiPoly), String>,
) -> (ChainState, Option<(u32, String)>) {
    let rat = RatField { field };
    let kr = PolyRing::new(&rat);
    let f_slices: Vec<Poly<Rat>> = f
        .coeffs()
        .iter()
        .map(|c| kr.constant(rat_const(field, c.clone())))
        .collect();
    let mut minpolys = vec![chain_minpoly(field, &f_slices)];
    let m_first = kr.from_coeffs(f.coeffs().iter().map(|c| rat_const(field, c.clone())).collect());
    let (mut m_rat, mut g) = {
        let lp = QuotField { base: &rat, modulus: m_first.clone() };
        let lpr = PolyRing::new(&lp);
        let f_l = lpr.from_coeffs(f_slices.clone());
        let root = kr.rem(&kr.var(), &m_first);
        let q = divide_out_root(&lp, &f_l, &root)
            .expect("the generator is a root of its own minimal polynomial");
        (m_first, q.into_coeffs())
    };
    let mut level: u32 = 1;
    let mut failure = None;
    while g.len() >= 3 {
        let e = (g.len() - 1) as u64;
        let (m_vec, _) = cleared_coeffs(field, core::slice::from_ref(&m_rat));
        let m_int = bp_normalize(field, &m_vec[0]);
        let (h, _) = cleared_coeffs(field, &g);
        match per_level(level, e, &m_int, &h) {
            Err(reason) => {
                failure = Some((level, reason));
                break;
            }
            Ok((lam, n_int)) => {
                minpolys.push(chain_minpoly(field, &g));
                match reencode(field, &rat, &m_rat, &g, lam, &n_int) {
                    Ok((nm, ng)) => {
                        m_rat = nm;
                        g = ng;
                        level += 1;
                    }
                    Err(reason) => {
                        failure = Some((level, reason));
                        break;
                    }
                }
            }
        }
    }
    let current = chain_minpoly(field, &g);
    (ChainState { level, minpolys, current }, failure)
}

// ---------------------------------------------------------------------------
// Public certification entry points.
// ---------------------------------------------------------------------------

fn full_symmetric_preconditions(field: &FieldSpec, f: &BiPoly) -> Option<String> {
    if !bp_is_monic_x(field, f) {
        return Some(String::from("f is not monic in x"));
    }
    let d = bp_deg_x(f) as u64;
    if d < 3 {
        return Some(String::from("degree in x must be at least 3"));
    }
    if d > 5 {
        return Some(String::from("degree in x exceeds the chain cap of 5"));
    }
    let p = field.p();
    if p == 2 {
        return Some(String::from("characteristic 2 is not supported"));
    }
    if d % p == 0 || (d - 1) % p == 0 {
        return Some(String::from("characteristic divides d(d-1)"));
    }
    if bp_discriminant_x(field, f).is_zero_poly() {
        return Some(String::from("discriminant vanishes"));
    }
    None
}

/// Try to certify that the Galois group of `f` over `F_q(t)` is the full
/// symmetric group, by running the root-adjoining chain and certifying
/// every quotient. One-sided: `FullSymmetric` is proved by the recorded
/// witnesses; `Inconclusive` makes no claim.
pub fn certify_full_symmetric(field: &FieldSpec, f: &BiPoly, budget: &SearchBudget) -> Certificate {
    if let Some(reason) = full_symmetric_preconditions(field, f) {
        return Certificate {
            kind: CertificateKind::Inconclusive { level: 0, reason },
            witnesses: Vec::new(),
            chain: None,
        };
    }
    let d = bp_deg_x(f) as u64;
    let mut witnesses = Vec::new();
    match bp_irreducible_oneside(field, f, budget.max_m, budget.point_cap) {
        OneSided::Irreducible(w) => witnesses.push(LevelWitness {
            level: 0,
            quotient_degree: d,
            shift: 0,
            norm_degree: d,
            witness: NormWitness::Irreducible(w),
        }),
        OneSided::Unknown => {
            return Certificate {
                kind: CertificateKind::Inconclusive {
                    level: 0,
                    reason: String::from(
                        "no one-sided irreducibility certificate for f within budget",
                    ),
                },
                witnesses: Vec::new(),
                chain: None,
            }
        }
    }
    let (state, failure) = {
        let witnesses = &mut witnesses;
        // Per level: find a squarefree shifted norm, then a degree
        // obstruction on it.
        let mut per_level = |level: u32, e: u64, m_int: &BiPoly, h: &[BiPoly]| -> Result<(u64, BiPoly), String> {
            match norm_poly(field, m_int, h) {
                NormOutcome::Squarefree { shift, norm } => {
                    let normalized = bp_normalize(field, &norm);
                    match find_degree_obstruction(field, &normalized, e, budget) {
                        Some(w) => {
                            witnesses.push(LevelWitness {
                                level,
                                quotient_degree: e,
                                shift,
                                norm_degree: bp_deg_x(&normalized) as u64,
                                witness: w,
                            });
                            Ok((shift, norm))
                        }
                        None => Err(format!(
                            "no specialization degree obstruction for the level-{level} norm within budget"
                        )),
                    }
                }
                NormOutcome::Exhausted { .. } => {
                    Err(String::from("no squarefree shifted norm within the shift cap"))
                }
            }
        };
        run_chain(field, f, &mut per_level)
    };
    match failure {
        None => Certificate {
            kind: CertificateKind::FullSymmetric { order: small_factorial(d) },
            witnesses,
            chain: Some(state),
        },
        Some((level, reason)) => Certificate {
            kind: CertificateKind::Inconclusive { level, reason },
            witnesses,
            chain: Some(state),
        },
    }
}

/// Try to certify that the `n`-th iterate of `f` is irreducible over
/// `F_q(t)` via a one-sided witness on the iterate itself.
pub fn certify_iterate_irreducible(
    field: &FieldSpec,
    f: &BiPoly,
    n: u32,
    budget: &SearchBudget,
) -> Certificate {
    assert!(n >= 1, "iterate index must be at least 1");
    let fi = bp_iterate(field, f, n);
    let dn = bp_deg_x(&fi) as u64;
    match bp_irreducible_oneside(field, &fi, budget.max_m, budget.point_cap) {
        OneSided::Irreducible(w) => Certificate {
            kind: CertificateKind::IterateIrreducible { n },
            witnesses: vec![LevelWitness {
                level: 0,
                quotient_degree: dn,
                shift: 0,
                norm_degree: dn,
                witness: NormWitness::Irreducible(w),
            }],
            chain: None,
        },
        OneSided::Unknown => Certificate {
            kind: CertificateKind::Inconclusive {
                level: 0,
                reason: format!("no one-sided irreducibility certificate for iterate {n} within budget"),
            },
            witnesses: Vec::new(),
            chain: None,
        },
    }
}

/// Re-verify a certificate from its recorded data: preconditions, every
/// witness, and (for chain certificates) a deterministic re-run of the
/// chain against the recorded shifts and state. The norm/obstruction
/// searches are disabled; only recorded choices are replayed.
pub fn verify_certificate(field: &FieldSpec, f: &BiPoly, cert: &Certificate) -> bool {
    match &cert.kind {
        CertificateKind::Inconclusive { .. } => false,
        CertificateKind::IterateIrreducible { n } => {
            if *n < 1 || cert.chain.is_some() || cert.witnesses.len() != 1 {
                return false;
            }
            let w = &cert.witnesses[0];
            let fi = bp_iterate(field, f, *n);
            let dn = bp_deg_x(&fi) as u64;
            if w.level != 0 || w.shift != 0 || w.quotient_degree != dn || w.norm_degree != dn {
                return false;
            }
            let NormWitness::Irreducible(iw) = &w.witness else {
                return false;
            };
            verify_witness(field, &fi, iw)
        }
        CertificateKind::FullSymmetric { order } => {
            if full_symmetric_preconditions(field, f).is_some() {
                return false;
            }
            let d = bp_deg_x(f) as u64;
            if *order != small_factorial(d) {
                return false;
            }
            if cert.witnesses.len() != (d - 1) as usize {
                return false;
            }
            let Some(recorded) = &cert.chain else {
                return false;
            };
            let w0 = &cert.witnesses[0];
            if w0.level != 0 || w0.quotient_degree != d || w0.shift != 0 || w0.norm_degree != d {
                return false;
            }
            let NormWitness::Irreducible(iw0) = &w0.witness else {
                return false;
            };
            if !verify_witness(field, f, iw0) {
                return false;
            }
            let mut idx = 1usize;
            let (state, failure) = {
                let idx = &mut idx;
                let mut replay = |level: u32, e: u64, m_int: &BiPoly, h: &[BiPoly]| -> Result<(u64, BiPoly), String> {
                    if *idx >= cert.witnesses.len() {
                        return Err(String::from("missing level witness"));
                    }
                    let w = &cert.witnesses[*idx];
                    *idx += 1;
                    if w.level != level || w.quotient_degree != e {
                        return Err(String::from("level witness mismatch"));
                    }
                    let raw = norm_shifted(field, m_int, h, w.shift);
                    if !biv_squarefree_x(field, &raw) {
                        return Err(String::from("recorded shift does not give a squarefree norm"));
                    }
                    let normalized = bp_normalize(field, &raw);
                    if bp_deg_x(&normalized) as u64 != w.norm_degree {
                        return Err(String::from("norm degree mismatch"));
                    }
                    if !verify_norm_witness(field, &normalized, e, &w.witness) {
                        return Err(String::from("norm witness fails"));
                    }
                    Ok((w.shift, raw))
                };
                run_chain(field, f, &mut replay)
            };
            failure.is_none() && idx == cert.witnesses.len() && state == *recorded
        }
    }
}
