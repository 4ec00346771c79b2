//! Dense univariate polynomials over pluggable coefficient rings.
//!
//! Arithmetic is mediated by ring contexts: [`Ring`] provides exact ring
//! operations (including exact division, needed by fraction-free
//! algorithms) and [`FieldRing`] adds inversion. [`FieldSpec`] implements
//! both, and [`PolyRing`] lifts any ring to its polynomial ring, so nested
//! coefficient domains like `F_q[t][s]` are just stacked `PolyRing`s.
//!
//! The resultant uses the fraction-free subresultant remainder sequence,
//! normalised so that it equals the Sylvester-matrix determinant exactly:
//! `res(f, g) = lc(f)^{deg g} * prod_{f(a)=0} g(a)`. The sign conventions
//! are pinned by tests against an independent Bareiss determinant oracle.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Debug;

use crate::ff::{Fe, FieldSpec};

/// A commutative ring with exact division, used as a coefficient domain.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Exact division: `Some(c)` with `c * b = a`, or `None` when `b` does
    /// not divide `a` (or `b = 0`).
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// A total order on elements used for deterministic canonical output.
    fn canonical_cmp(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    /// Multiply by a non-negative integer (default: double-and-add).
    fn mul_int(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let mut acc = self.zero();
        let mut base = a.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait FieldRing: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv_elem(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

impl Ring for FieldSpec {
    type Elem = Fe;

    fn zero(&self) -> Fe {
        FieldSpec::zero(self)
    }
    fn one(&self) -> Fe {
        FieldSpec::one(self)
    }
    fn is_zero(&self, a: &Fe) -> bool {
        FieldSpec::is_zero(self, a)
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        FieldSpec::add(self, a, b)
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        FieldSpec::sub(self, a, b)
    }
    fn neg(&self, a: &Fe) -> Fe {
        FieldSpec::neg(self, a)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        FieldSpec::mul(self, a, b)
    }
    fn exact_div(&self, a: &Fe, b: &Fe) -> Option<Fe> {
        let bi = FieldSpec::inv(self, b).ok()?;
        Some(FieldSpec::mul(self, a, &bi))
    }
    fn canonical_cmp(&self, a: &Fe, b: &Fe) -> Ordering {
        a.cmp(b)
    }
    fn mul_int(&self, a: &Fe, n: u64) -> Fe {
        self.mul_scalar(a, n)
    }
}

impl FieldRing for FieldSpec {
    fn inv_elem(&self, a: &Fe) -> Option<Fe> {
        FieldSpec::inv(self, a).ok()
    }
}

/// A dense univariate polynomial: ascending coefficients, no trailing
/// zeros (the zero polynomial has an empty vector). Instances are built and
/// manipulated through a [`PolyRing`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T> {
    /// Ascending coefficients; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree treating the zero polynomial as degree 0.
    pub fn deg0(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// The polynomial ring over a base ring. Stacking `PolyRing`s yields
/// nested coefficient domains (`F_q[t]`, `F_q[t][s]`, ...).
#[derive(Debug, Clone, Copy)]
pub struct PolyRing<'a, R: Ring> {
    base: &'a R,
}

impl<'a, R: Ring> PolyRing<'a, R> {
    pub fn new(base: &'a R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &'a R {
        self.base
    }

    /// Build a polynomial from ascending coefficients, trimming zeros.
    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while coeffs.last().map(|c| self.base.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    /// The monomial `c * X^k`.
    pub fn monomial(&self, c: R::Elem, k: usize) -> Poly<R::Elem> {
        if self.base.is_zero(&c) {
            return Poly { coeffs: Vec::new() };
        }
        let mut coeffs = vec![self.base.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The variable `X`.
    pub fn var(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn coeff(&self, a: &Poly<R::Elem>, i: usize) -> R::Elem {
        a.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self, a: &Poly<R::Elem>) -> R::Elem {
        a.coeffs.last().cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn is_monic(&self, a: &Poly<R::Elem>) -> bool {
        a.coeffs.last().map(|c| *c == self.base.one()).unwrap_or(false)
    }

    pub fn is_constant(&self, a: &Poly<R::Elem>) -> bool {
        a.coeffs.len() <= 1
    }

    /// Multiply every coefficient by a base-ring element.
    pub fn mul_elem(&self, a: &Poly<R::Elem>, s: &R::Elem) -> Poly<R::Elem> {
        if self.base.is_zero(s) {
            return Poly { coeffs: Vec::new() };
        }
        let coeffs = a.coeffs.iter().map(|c| self.base.mul(c, s)).collect();
        self.from_coeffs(coeffs)
    }

    /// Divide every coefficient exactly by a base-ring element.
    pub fn exact_div_elem(&self, a: &Poly<R::Elem>, s: &R::Elem) -> Option<Poly<R::Elem>> {
        let mut coeffs = Vec::with_capacity(a.coeffs.len());
        for c in &a.coeffs {
            coeffs.push(self.base.exact_div(c, s)?);
        }
        Some(Poly { coeffs })
    }

    /// Multiply by `X^k`.
    pub fn shift(&self, a: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
        if a.coeffs.is_empty() {
            return Poly { coeffs: Vec::new() };
        }
        let mut coeffs = vec![self.base.zero(); k];
        coeffs.extend(a.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Horner evaluation at a base-ring point.
    pub fn eval(&self, a: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for c in a.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, x), c);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        if a.coeffs.len() <= 1 {
            return Poly { coeffs: Vec::new() };
        }
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.base.mul_int(c, i as u64))
            .collect();
        self.from_coeffs(coeffs)
    }

    /// Plain power by repeated squaring.
    pub fn pow(&self, a: &Poly<R::Elem>, mut e: u64) -> Poly<R::Elem> {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Division with remainder by a monic divisor; works over any ring.
    /// Returns `None` when `b` is not monic.
    pub fn divmod_monic(
        &self,
        a: &Poly<R::Elem>,
        b: &Poly<R::Elem>,
    ) -> Option<(Poly<R::Elem>, Poly<R::Elem>)> {
        if !self.is_monic(b) {
            return None;
        }
        let db = b.deg0();
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Some((Poly { coeffs: Vec::new() }, a.clone()));
        }
        let mut q = vec![self.base.zero(); r.len() - db];
        while r.len() > db {
            let c = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            if !self.base.is_zero(&c) {
                q[shift] = c.clone();
                for (j, bc) in b.coeffs.iter().enumerate() {
                    let t = self.base.mul(&c, bc);
                    r[shift + j] = self.base.sub(&r[shift + j], &t);
                }
            } else {
                r.pop();
                continue;
            }
            r.pop();
            while r.last().map(|c| self.base.is_zero(c)).unwrap_or(false) {
                r.pop();
            }
        }
        Some((self.from_coeffs(q), self.from_coeffs(r)))
    }

    /// Pseudo-remainder: the unique `r` with
    /// `lc(b)^{deg a - deg b + 1} * a = q*b + r`, `deg r < deg b`.
    pub fn prem(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        let db = b.degree().expect("prem by zero polynomial");
        let da = match a.degree() {
            Some(d) if d >= db => d,
            _ => {
                // Degenerate: scale a by lc(b)^{delta+1} with delta < 0
                // never occurs in our call sites; return a scaled once for
                // definiteness.
                return a.clone();
            }
        };
        let delta = da - db;
        let d = self.lc(b);
        let mut r = a.clone();
        let mut scalings = 0usize;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let rl = self.lc(&r);
            let scaled = self.mul_elem(&r, &d);
            let sub = self.shift(&self.mul_elem(b, &rl), dr - db);
            r = self.sub(&scaled, &sub);
            scalings += 1;
        }
        // Normalize to exactly lc(b)^{delta+1} * a mod b.
        for _ in scalings..(delta + 1) {
            r = self.mul_elem(&r, &d);
        }
        r
    }

    /// Resultant via the fraction-free subresultant remainder sequence.
    ///
    /// Equals the Sylvester-matrix determinant:
    /// `res(f, g) = lc(f)^{deg g} * prod over roots a of f of g(a)`,
    /// with `res(f, g) = (-1)^{deg f * deg g} res(g, f)`. The resultant of
    /// two nonzero constants is 1; if either argument is zero the result
    /// is 0.
    pub fn resultant(&self, f: &Poly<R::Elem>, g: &Poly<R::Elem>) -> R::Elem {
        if f.is_zero_poly() || g.is_zero_poly() {
            return self.base.zero();
        }
        let (mut a, mut b, mut negate) = if f.deg0() < g.deg0() {
            (g.clone(), f.clone(), f.deg0() * g.deg0() % 2 == 1)
        } else {
            (f.clone(), g.clone(), false)
        };
        if a.deg0() == 0 {
            return self.base.one();
        }
        if b.deg0() == 0 {
            let v = ring_pow(self.base, &b.coeffs[0], a.deg0() as u64);
            return if negate { self.base.neg(&v) } else { v };
        }
        let mut g_val = self.base.one();
        let mut h_val = self.base.one();
        loop {
            let da = a.deg0();
            let db = b.deg0();
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                negate = !negate;
            }
            let r = self.prem(&a, &b);
            a = b;
            let divisor = self.base.mul(&g_val, &ring_pow(self.base, &h_val, delta as u64));
            b = self
                .exact_div_elem(&r, &divisor)
                .expect("subresultant PRS division is exact");
            g_val = self.lc(&a);
            h_val = if delta == 0 {
                h_val
            } else {
                let num = ring_pow(self.base, &g_val, delta as u64);
                let den = ring_pow(self.base, &h_val, (delta - 1) as u64);
                self.base
                    .exact_div(&num, &den)
                    .expect("subresultant PRS h-update is exact")
            };
            match b.degree() {
                None => return self.base.zero(),
                Some(0) => {
                    let da = a.deg0();
                    let num = ring_pow(self.base, &b.coeffs[0], da as u64);
                    let den = ring_pow(self.base, &h_val, (da - 1) as u64);
                    let v = self
                        .base
                        .exact_div(&num, &den)
                        .expect("subresultant PRS final division is exact");
                    return if negate { self.base.neg(&v) } else { v };
                }
                Some(_) => {}
            }
        }
    }
}

impl<'a, R: Ring> Ring for PolyRing<'a, R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Poly<R::Elem> {
        Poly { coeffs: Vec::new() }
    }

    fn one(&self) -> Poly<R::Elem> {
        Poly { coeffs: vec![self.base.one()] }
    }

    fn is_zero(&self, a: &Poly<R::Elem>) -> bool {
        a.coeffs.is_empty()
    }

    fn add(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i);
            let y = b.coeffs.get(i);
            coeffs.push(match (x, y) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        self.from_coeffs(coeffs)
    }

    fn sub(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i);
            let y = b.coeffs.get(i);
            coeffs.push(match (x, y) {
                (Some(x), Some(y)) => self.base.sub(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => self.base.neg(y),
                (None, None) => unreachable!(),
            });
        }
        self.from_coeffs(coeffs)
    }

    fn neg(&self, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        Poly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn mul(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Poly { coeffs: Vec::new() };
        }
        let mut coeffs = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = self.base.mul(x, y);
                coeffs[i + j] = self.base.add(&coeffs[i + j], &t);
            }
        }
        self.from_coeffs(coeffs)
    }

    /// Exact polynomial division; `None` if `b` does not divide `a`.
    fn exact_div(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Option<Poly<R::Elem>> {
        if b.coeffs.is_empty() {
            return None;
        }
        if a.coeffs.is_empty() {
            return Some(Poly { coeffs: Vec::new() });
        }
        let db = b.deg0();
        if a.deg0() < db {
            return None;
        }
        let mut r = a.clone();
        let mut q = vec![self.base.zero(); a.deg0() - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None; // nonzero remainder
            }
            let c = self.base.exact_div(&self.lc(&r), &self.lc(b))?;
            let shift = dr - db;
            q[shift] = c.clone();
            let sub = self.shift(&self.mul_elem(b, &c), shift);
            r = self.sub(&r, &sub);
        }
        Some(self.from_coeffs(q))
    }

    fn canonical_cmp(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Ordering {
        match a.coeffs.len().cmp(&b.coeffs.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            match self.base.canonical_cmp(x, y) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn mul_int(&self, a: &Poly<R::Elem>, n: u64) -> Poly<R::Elem> {
        let coeffs = a.coeffs.iter().map(|c| self.base.mul_int(c, n)).collect();
        self.from_coeffs(coeffs)
    }
}

impl<'a, F: FieldRing> PolyRing<'a, F> {
    /// Euclidean division over field coefficients.
    pub fn divmod(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let db = b.degree().expect("division by zero polynomial");
        let binv = self.base.inv_elem(&self.lc(b)).expect("nonzero leading coefficient");
        let mut r = a.clone();
        if a.deg0() < db || a.is_zero_poly() {
            return (Poly { coeffs: Vec::new() }, r);
        }
        let mut q = vec![self.base.zero(); a.deg0() - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = self.base.mul(&self.lc(&r), &binv);
            let shift = dr - db;
            q[shift] = c.clone();
            let sub = self.shift(&self.mul_elem(b, &c), shift);
            r = self.sub(&r, &sub);
        }
        (self.from_coeffs(q), r)
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.divmod(a, b).1
    }

    /// Scale to leading coefficient 1.
    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero_poly() {
            return a.clone();
        }
        let inv = self.base.inv_elem(&self.lc(a)).expect("nonzero leading coefficient");
        self.mul_elem(a, &inv)
    }

    /// Monic greatest common divisor (Euclid); `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero_poly() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g` and `g`
    /// the monic gcd (zero when both inputs are zero).
    pub fn egcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let (mut u0, mut u1) = (self.one(), self.zero());
        let (mut v0, mut v1) = (self.zero(), self.one());
        while !r1.is_zero_poly() {
            let (q, r) = self.divmod(&r0, &r1);
            r0 = r1;
            r1 = r;
            let nu = self.sub(&u0, &self.mul(&q, &u1));
            u0 = u1;
            u1 = nu;
            let nv = self.sub(&v0, &self.mul(&q, &v1));
            v0 = v1;
            v1 = nv;
        }
        if r0.is_zero_poly() {
            return (r0, u0, v0);
        }
        let scale = self.base.inv_elem(&self.lc(&r0)).expect("nonzero leading coefficient");
        (
            self.mul_elem(&r0, &scale),
            self.mul_elem(&u0, &scale),
            self.mul_elem(&v0, &scale),
        )
    }

    /// `a^e mod m` by square-and-multiply.
    pub fn pow_mod(
        &self,
        a: &Poly<F::Elem>,
        mut e: u64,
        m: &Poly<F::Elem>,
    ) -> Poly<F::Elem> {
        let mut acc = self.rem(&self.one(), m);
        let mut base = self.rem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
            base = self.rem(&self.mul(&base, &base), m);
            e >>= 1;
        }
        acc
    }
}

/// Small power of a ring element.
pub fn ring_pow<R: Ring>(ring: &R, a: &R::Elem, mut e: u64) -> R::Elem {
    let mut acc = ring.one();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = ring.mul(&acc, &base);
        }
        base = ring.mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Render a polynomial over `F_{p^k}` as text: terms in descending degree,
/// `*` for products and `^` for powers, coefficients as integers in
/// `[0, p)` (prime fields) or bracketed coefficient vectors (extensions).
/// The zero polynomial renders as `0`.
pub fn render_fe_poly(field: &FieldSpec, a: &Poly<Fe>, var: char) -> String {
    use core::fmt::Write;
    if a.is_zero_poly() {
        return String::from("0");
    }
    let mut out = String::new();
    let mut first = true;
    for (i, c) in a.coeffs().iter().enumerate().rev() {
        if field.is_zero(c) {
            continue;
        }
        if !first {
            out.push_str(" + ");
        }
        first = false;
        let coeff_txt = render_fe(field, c);
        let unit_coeff = field.is_one(c);
        if i == 0 {
            out.push_str(&coeff_txt);
        } else {
            if !unit_coeff {
                out.push_str(&coeff_txt);
                out.push('*');
            }
            out.push(var);
            if i > 1 {
                let _ = write!(out, "^{i}");
            }
        }
    }
    out
}

/// Render a single field element: an integer for prime fields, a
/// bracketed ascending coefficient list for proper extensions.
pub fn render_fe(field: &FieldSpec, c: &Fe) -> String {
    use core::fmt::Write;
    if field.k() == 1 {
        let mut s = String::new();
        let _ = write!(s, "{}", c.coeffs()[0]);
        s
    } else {
        let mut s = String::from("[");
        for (i, v) in c.coeffs().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v}");
        }
        s.push(']');
        s
    }
}
