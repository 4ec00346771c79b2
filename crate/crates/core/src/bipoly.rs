//! Bivariate polynomials `f(t, x)` over a finite field `F_q`, viewed as
//! polynomials in `x` whose coefficients live in `F_q[t]`.
//!
//! This module supplies the operations the hypothesis checks are built
//! from: composition and iteration in `x`, discriminants, specialization
//! `t -> c` into extension fields, content/primitive-part arithmetic and
//! gcds over `F_q(t)`, squarefree decomposition with respect to `x`
//! (correct in characteristic `p`), rational-root extraction, one-sided
//! irreducibility certificates (Eisenstein and specialization), and a
//! capped exhaustive factor search used to cross-validate those
//! certificates on desk-scale inputs.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::factor::{factor_poly, is_irreducible};
use crate::ff::{Fe, FieldSpec};
use crate::poly::{render_fe_poly, Poly, PolyRing, Ring};

/// `f(t, x)`: dense in `x`, each coefficient dense in `t`.
pub type BiPoly = Poly<Poly<Fe>>;

/// Build from ascending `x`-coefficients.
pub fn bp_from_coeffs(field: &FieldSpec, coeffs: Vec<Poly<Fe>>) -> BiPoly {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    xr.from_coeffs(coeffs)
}

/// Degree in `x` (0 for the zero polynomial).
pub fn bp_deg_x(f: &BiPoly) -> usize {
    f.deg0()
}

/// Largest `t`-degree over all coefficients (0 for the zero polynomial).
pub fn bp_deg_t(f: &BiPoly) -> usize {
    f.coeffs().iter().map(|c| c.deg0()).max().unwrap_or(0)
}

/// Is `f` monic as a polynomial in `x`?
pub fn bp_is_monic_x(field: &FieldSpec, f: &BiPoly) -> bool {
    match f.coeffs().last() {
        Some(lc) => lc.deg0() == 0 && !lc.is_zero_poly() && field.is_one(&lc.coeffs()[0]),
        None => false,
    }
}

/// Substitute `x := g(t, x)` into `f(t, x)`.
pub fn bp_compose(field: &FieldSpec, f: &BiPoly, g: &BiPoly) -> BiPoly {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let mut acc = xr.zero();
    for c in f.coeffs().iter().rev() {
        acc = xr.mul(&acc, g);
        acc = xr.add(&acc, &xr.constant(c.clone()));
    }
    acc
}

/// `n`-fold iterate in `x`: `f∘f∘...∘f`, with the 0-th iterate `x`.
pub fn bp_iterate(field: &FieldSpec, f: &BiPoly, n: u32) -> BiPoly {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    if n == 0 {
        return xr.var();
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = bp_compose(field, f, &acc);
    }
    acc
}

/// Partial derivative with respect to `x`.
pub fn bp_derivative_x(field: &FieldSpec, f: &BiPoly) -> BiPoly {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    xr.derivative(f)
}

/// Discriminant with respect to `x`:
/// `disc_x(f) = (-1)^{d(d-1)/2} res_x(f, df/dx)` with `d = deg_x f`.
pub fn bp_discriminant_x(field: &FieldSpec, f: &BiPoly) -> Poly<Fe> {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let fp = xr.derivative(f);
    let r = xr.resultant(f, &fp);
    let d = f.deg0();
    if (d * d.saturating_sub(1) / 2) % 2 == 1 {
        tr.neg(&r)
    } else {
        r
    }
}

/// Substitute a polynomial `x := r(t)`, collapsing to `F_q[t]`.
pub fn bp_eval_x(field: &FieldSpec, f: &BiPoly, r: &Poly<Fe>) -> Poly<Fe> {
    let tr = PolyRing::new(field);
    let mut acc = tr.zero();
    for c in f.coeffs().iter().rev() {
        acc = tr.add(&tr.mul(&acc, r), c);
    }
    acc
}

/// Evaluate at a point `(t0, x0)` of the base field.
pub fn bp_eval_point(field: &FieldSpec, f: &BiPoly, t0: &Fe, x0: &Fe) -> Fe {
    let tr = PolyRing::new(field);
    let mut acc = field.zero();
    for c in f.coeffs().iter().rev() {
        acc = field.add(&field.mul(&acc, x0), &tr.eval(c, t0));
    }
    acc
}

/// Canonical embedding of a base-field element into an extension, when one
/// is defined without choices: the identity (same field) or the scalar
/// embedding of a prime field. Returns `None` otherwise.
pub fn embed_scalar(base: &FieldSpec, ext: &FieldSpec, a: &Fe) -> Option<Fe> {
    if base.p() != ext.p() {
        return None;
    }
    if base.k() == ext.k() && base.modulus() == ext.modulus() {
        return Some(a.clone());
    }
    if base.k() == 1 {
        return Some(ext.scalar(a.coeffs()[0]));
    }
    None
}

/// Evaluate a `t`-polynomial with base-field coefficients at a point of an
/// extension field (`None` when no canonical embedding exists).
pub fn eval_tpoly(
    base: &FieldSpec,
    ext: &FieldSpec,
    p: &Poly<Fe>,
    c: &Fe,
) -> Option<Fe> {
    let mut acc = ext.zero();
    for a in p.coeffs().iter().rev() {
        let e = embed_scalar(base, ext, a)?;
        acc = ext.add(&ext.mul(&acc, c), &e);
    }
    Some(acc)
}

/// Specialize `t := c` with `c` in an extension field, producing a
/// univariate polynomial in `x` over that extension. `None` when no
/// canonical embedding of the coefficients exists.
pub fn bp_specialize(
    base: &FieldSpec,
    f: &BiPoly,
    ext: &FieldSpec,
    c: &Fe,
) -> Option<Poly<Fe>> {
    let er = PolyRing::new(ext);
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for a in f.coeffs() {
        coeffs.push(eval_tpoly(base, ext, a, c)?);
    }
    Some(er.from_coeffs(coeffs))
}

/// Content with respect to `x`: the monic gcd in `F_q[t]` of all
/// coefficients (zero for the zero polynomial).
pub fn bp_content_x(field: &FieldSpec, f: &BiPoly) -> Poly<Fe> {
    let tr = PolyRing::new(field);
    let mut g = tr.zero();
    for c in f.coeffs() {
        g = tr.gcd(&g, c);
    }
    g
}

/// Primitive part times normalization: divide out the content and scale so
/// that the leading `t`-coefficient of the leading `x`-coefficient is 1.
/// Zero maps to zero.
pub fn bp_normalize(field: &FieldSpec, f: &BiPoly) -> BiPoly {
    if f.is_zero_poly() {
        return f.clone();
    }
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let cont = bp_content_x(field, f);
    let pp = xr
        .exact_div_elem(f, &cont)
        .expect("content divides every coefficient");
    let lead = tr.lc(&xr.lc(&pp));
    let inv = field.inv(&lead).expect("nonzero leading scalar");
    xr.mul_elem(&pp, &tr.constant(inv))
}

/// Gcd in `F_q(t)[x]` via the primitive polynomial remainder sequence,
/// returned in normalized form (primitive, leading scalar 1). Content gcds
/// are not included: this is the gcd up to units of `F_q(t)`.
pub fn bp_gcd_x(field: &FieldSpec, f: &BiPoly, g: &BiPoly) -> BiPoly {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    if f.is_zero_poly() {
        return bp_normalize(field, g);
    }
    if g.is_zero_poly() {
        return bp_normalize(field, f);
    }
    let (mut a, mut b) = if f.deg0() >= g.deg0() {
        (bp_normalize(field, f), bp_normalize(field, g))
    } else {
        (bp_normalize(field, g), bp_normalize(field, f))
    };
    loop {
        if b.is_zero_poly() {
            return bp_normalize(field, &a);
        }
        if b.deg0() == 0 {
            return xr.one();
        }
        let r = xr.prem(&a, &b);
        a = b;
        b = if r.is_zero_poly() { r } else { bp_normalize(field, &r) };
    }
}

/// Squarefree decomposition with respect to `x` over `F_q(t)`:
/// `f = unit * content(t) * prod parts[i].0 ^ parts[i].1 * prod residues`.
/// Parts are normalized, squarefree, and pairwise coprime in `F_q(t)[x]`.
///
/// Since `F_q(t)` is not perfect, a component with vanishing
/// `x`-derivative need not be a `p`-th power; components whose `p`-th root
/// does not exist in `F_q[t][x]` are returned untouched in
/// `inseparable_residues` (their roots are purely inseparable over
/// `F_q(t)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivSqf {
    pub unit: Fe,
    pub content: Poly<Fe>,
    pub parts: Vec<(BiPoly, u64)>,
    pub inseparable_residues: Vec<(BiPoly, u64)>,
    /// True when some component had vanishing `x`-derivative.
    pub inseparable: bool,
}

/// Coefficient-wise `p`-th root in `F_q[t]`: exists iff every `t`-exponent
/// is divisible by `p` (the scalar roots always exist since `F_q` is
/// perfect).
fn tpoly_pth_root(field: &FieldSpec, a: &Poly<Fe>) -> Option<Poly<Fe>> {
    let tr = PolyRing::new(field);
    let p = field.p() as usize;
    let mut coeffs = Vec::with_capacity(a.coeffs().len() / p + 1);
    for (i, c) in a.coeffs().iter().enumerate() {
        if i % p == 0 {
            coeffs.push(field.pth_root(c));
        } else if !field.is_zero(c) {
            return None;
        }
    }
    Some(tr.from_coeffs(coeffs))
}

/// `p`-th root of a bivariate polynomial with vanishing `x`-derivative,
/// when it exists in `F_q[t][x]`.
fn bp_pth_root(field: &FieldSpec, f: &BiPoly) -> Option<BiPoly> {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let p = field.p() as usize;
    let mut coeffs = Vec::with_capacity(f.coeffs().len() / p + 1);
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            coeffs.push(tpoly_pth_root(field, c)?);
        } else if !c.is_zero_poly() {
            return None;
        }
    }
    Some(xr.from_coeffs(coeffs))
}

fn biv_sqf_inner(field: &FieldSpec, f: &BiPoly, scale: u64, out: &mut BivSqf) {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    if f.deg0() == 0 {
        return;
    }
    let fp = xr.derivative(f);
    if fp.is_zero_poly() {
        out.inseparable = true;
        match bp_pth_root(field, f) {
            Some(root) => {
                biv_sqf_inner(field, &bp_normalize(field, &root), scale * field.p(), out)
            }
            None => out.inseparable_residues.push((f.clone(), scale)),
        }
        return;
    }
    let mut c = bp_gcd_x(field, f, &fp);
    let mut w = bp_normalize(
        field,
        &xr.exact_div(f, &c).expect("gcd divides in F_q[t][x]"),
    );
    let mut i: u64 = 1;
    while w.deg0() > 0 {
        let y = bp_gcd_x(field, &w, &c);
        let fac = bp_normalize(
            field,
            &xr.exact_div(&w, &y).expect("gcd divides in F_q[t][x]"),
        );
        if fac.deg0() > 0 {
            out.parts.push((fac, i * scale));
        }
        c = bp_normalize(
            field,
            &xr.exact_div(&c, &y).expect("gcd divides in F_q[t][x]"),
        );
        w = y;
        i += 1;
    }
    if c.deg0() > 0 {
        out.inseparable = true;
        match bp_pth_root(field, &c) {
            Some(root) => {
                biv_sqf_inner(field, &bp_normalize(field, &root), scale * field.p(), out)
            }
            None => out.inseparable_residues.push((c, scale)),
        }
    }
}

/// Squarefree decomposition with respect to `x`; panics on zero input.
pub fn bp_squarefree_x(field: &FieldSpec, f: &BiPoly) -> BivSqf {
    assert!(!f.is_zero_poly(), "squarefree decomposition of zero");
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let content = bp_content_x(field, f);
    let unit = tr.lc(&xr.lc(f));
    let normalized = bp_normalize(field, f);
    let mut out = BivSqf {
        unit,
        content,
        parts: Vec::new(),
        inseparable_residues: Vec::new(),
        inseparable: false,
    };
    biv_sqf_inner(field, &normalized, 1, &mut out);
    out.parts.sort_by(|a, b| {
        a.0.deg0().cmp(&b.0.deg0()).then_with(|| xr.canonical_cmp(&a.0, &b.0))
    });
    out
}

/// All roots in `F_q[t]` of a bivariate polynomial whose leading
/// `x`-coefficient is a nonzero constant (so every rational root is
/// integral and divides the constant `x`-coefficient). Roots are returned
/// in canonical order, without multiplicity.
pub fn bp_rational_roots(field: &FieldSpec, g: &BiPoly) -> Vec<Poly<Fe>> {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    assert!(
        g.coeffs().last().map(|c| c.deg0() == 0).unwrap_or(false),
        "rational root search requires a constant leading x-coefficient"
    );
    let lead = g.coeffs().last().unwrap().coeffs()[0].clone();
    let inv = field.inv(&lead).expect("nonzero leading coefficient");
    let mut h = xr.mul_elem(g, &tr.constant(inv));
    let mut roots = Vec::new();
    // Root at 0: strip x factors.
    if h.coeffs().first().map(|c| c.is_zero_poly()).unwrap_or(false) {
        roots.push(tr.zero());
        let mut coeffs = h.coeffs().to_vec();
        while coeffs.first().map(|c| c.is_zero_poly()).unwrap_or(false) {
            coeffs.remove(0);
        }
        h = xr.from_coeffs(coeffs);
    }
    if h.deg0() == 0 {
        return roots;
    }
    let s0 = h.coeffs()[0].clone();
    // Monic divisors of s0, as exponent vectors over its prime factors.
    let fac = factor_poly(field, &s0, 0);
    let mut divisors = vec![tr.one()];
    for (pi, mult) in &fac.factors {
        let mut next = Vec::with_capacity(divisors.len() * (*mult as usize + 1));
        for d in &divisors {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*mult {
                acc = tr.mul(&acc, pi);
                next.push(acc.clone());
            }
        }
        divisors = next;
    }
    for d in &divisors {
        for c in 1..field.q() {
            let cand = tr.mul_elem(d, &field.decode(c));
            if bp_eval_x(field, &h, &cand).is_zero_poly() {
                roots.push(cand);
            }
        }
    }
    roots.sort_by(|a, b| tr.canonical_cmp(a, b));
    roots
}

/// Find an Eisenstein prime for `f` in `F_q[t]`: an irreducible `pi` not
/// dividing the leading `x`-coefficient, dividing every other coefficient,
/// with `pi^2` not dividing the constant coefficient.
pub fn bp_eisenstein_prime(field: &FieldSpec, f: &BiPoly) -> Option<Poly<Fe>> {
    let tr = PolyRing::new(field);
    let d = f.degree()?;
    if d < 1 {
        return None;
    }
    let a0 = f.coeffs()[0].clone();
    if a0.is_zero_poly() {
        return None;
    }
    let lead = f.coeffs().last().unwrap();
    let fac = factor_poly(field, &a0, 0);
    'prime: for (pi, mult) in &fac.factors {
        if *mult != 1 {
            continue;
        }
        if tr.rem(lead, pi).is_zero_poly() {
            continue;
        }
        for i in 1..d {
            if !tr.rem(&f.coeffs()[i], pi).is_zero_poly() {
                continue 'prime;
            }
        }
        return Some(pi.clone());
    }
    None
}

/// What a one-sided irreducibility check can certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityWitness {
    /// Degree 1 in `x` is irreducible over the field `F_q(t)`.
    LinearInX,
    /// Eisenstein criterion at an irreducible of `F_q[t]`.
    Eisenstein { prime: Poly<Fe> },
    /// A specialization `t := c` (with `c` in the degree-`m` extension,
    /// constructed with the recorded modulus) that is irreducible and
    /// degree-preserving.
    Specialization { m: u32, modulus: Vec<u64>, point: Vec<u64> },
}

/// Outcome of the one-sided test: a certificate of irreducibility over
/// `F_q(t)`, or an honest "could not certify" (which includes every
/// reducible input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OneSided {
    Irreducible(IrreducibilityWitness),
    Unknown,
}

/// One-sided irreducibility test over `F_q(t)`: tries Eisenstein first,
/// then degree-preserving specializations `t := c` over `F_{q^m}` for
/// `m = 1, ..., max_m`, scanning points in deterministic encode order
/// (at most `point_cap` per level). Proper extensions are only searched
/// when the base field is a prime field, where the coefficient embedding
/// is canonical.
pub fn bp_irreducible_oneside(
    field: &FieldSpec,
    f: &BiPoly,
    max_m: u32,
    point_cap: u64,
) -> OneSided {
    let d = match f.degree() {
        None | Some(0) => return OneSided::Unknown,
        Some(d) => d,
    };
    if d == 1 {
        return OneSided::Irreducible(IrreducibilityWitness::LinearInX);
    }
    if let Some(prime) = bp_eisenstein_prime(field, f) {
        return OneSided::Irreducible(IrreducibilityWitness::Eisenstein { prime });
    }
    let lead = f.coeffs().last().unwrap();
    for m in 1..=max_m {
        let ext = if m == 1 {
            field.clone()
        } else if field.k() == 1 {
            match FieldSpec::make_extension(field.p(), m as usize, 0) {
                Ok(e) => e,
                Err(_) => break,
            }
        } else {
            break;
        };
        let points = ext.q().min(point_cap);
        for idx in 0..points {
            let c = ext.decode(idx);
            let lead_at = match eval_tpoly(field, &ext, lead, &c) {
                Some(v) => v,
                None => break,
            };
            if ext.is_zero(&lead_at) {
                continue;
            }
            let sp = match bp_specialize(field, f, &ext, &c) {
                Some(s) => s,
                None => break,
            };
            if is_irreducible(&ext, &sp) {
                return OneSided::Irreducible(IrreducibilityWitness::Specialization {
                    m,
                    modulus: ext.modulus().to_vec(),
                    point: c.coeffs().to_vec(),
                });
            }
        }
    }
    OneSided::Unknown
}

/// Result of the capped exhaustive factor search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceResult {
    /// No monic factor of `x`-degree `1..=deg/2` exists: irreducible in
    /// `F_q(t)[x]` (for primitive monic input).
    Irreducible,
    /// A proper monic split `f = g * h`.
    Factored(BiPoly, BiPoly),
    /// Input exceeds the search caps (monic in `x`, `deg_x <= 4`,
    /// `deg_t <= 2`, `q <= 5`).
    OutOfRange,
}

/// Exhaustive factor search for small monic-in-`x` inputs. Any monic
/// factor of a monic polynomial has coefficient `t`-degrees bounded by
/// `deg_t(f)` (the Gauss valuation is additive), so the candidate space is
/// finite and small.
pub fn bp_factor_bruteforce(field: &FieldSpec, f: &BiPoly) -> BruteForceResult {
    let tr = PolyRing::new(field);
    let xr = PolyRing::new(&tr);
    let d = match f.degree() {
        None | Some(0) => return BruteForceResult::OutOfRange,
        Some(d) => d,
    };
    if !bp_is_monic_x(field, f) {
        return BruteForceResult::OutOfRange;
    }
    if d == 1 {
        return BruteForceResult::Irreducible;
    }
    let dt = bp_deg_t(f);
    let q = field.q();
    if d > 4 || dt > 2 || q > 5 {
        return BruteForceResult::OutOfRange;
    }
    let per_coeff = q.pow(dt as u32 + 1);
    for e in 1..=d / 2 {
        let total = per_coeff.pow(e as u32);
        for idx in 0..total {
            // Decode idx into e coefficients, each a t-polynomial of
            // degree <= dt, digits in base q via the field encoding.
            let mut rem_idx = idx;
            let mut coeffs = Vec::with_capacity(e + 1);
            for _ in 0..e {
                let ci = rem_idx % per_coeff;
                rem_idx /= per_coeff;
                let mut tcoeffs = Vec::with_capacity(dt + 1);
                let mut c = ci;
                for _ in 0..=dt {
                    tcoeffs.push(field.decode(c % q));
                    c /= q;
                }
                coeffs.push(tr.from_coeffs(tcoeffs));
            }
            coeffs.push(tr.one());
            let g = xr.from_coeffs(coeffs);
            if let Some((quot, rem)) = xr.divmod_monic(f, &g) {
                if rem.is_zero_poly() {
                    return BruteForceResult::Factored(g, quot);
                }
            }
        }
    }
    BruteForceResult::Irreducible
}

/// Render `f(t, x)` with descending `x`-powers: `x^3 + t*x^2 + t + 1`,
/// `2*t^2*x`, `(t + 1)*x^2`, with `0` for the zero polynomial.
pub fn bp_render(field: &FieldSpec, f: &BiPoly) -> String {
    use core::fmt::Write;
    let tr = PolyRing::new(field);
    if f.is_zero_poly() {
        return String::from("0");
    }
    let mut out = String::new();
    let mut first = true;
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero_poly() {
            continue;
        }
        if !first {
            out.push_str(" + ");
        }
        first = false;
        if i == 0 {
            out.push_str(&render_fe_poly(field, c, 't'));
            continue;
        }
        let nonzero_terms = c.coeffs().iter().filter(|a| !field.is_zero(a)).count();
        let is_one = c.deg0() == 0 && field.is_one(&c.coeffs()[0]);
        if is_one {
            // bare x power
        } else if nonzero_terms == 1 {
            out.push_str(&render_fe_poly(field, c, 't'));
            out.push('*');
        } else {
            out.push('(');
            out.push_str(&render_fe_poly(field, c, 't'));
            out.push_str(")*");
        }
        out.push('x');
        if i > 1 {
            let _ = write!(out, "^{i}");
        }
    }
    let _ = &tr;
    out
}
