//! Finite fields `F_{p^k}` of odd characteristic in polynomial basis.
//!
//! A field is described by a [`FieldSpec`]: a prime `p >= 3`, an extension
//! degree `k >= 1`, and a monic irreducible modulus of degree `k` over
//! `F_p`. Elements ([`Fe`]) are coefficient vectors of length `k` in the
//! basis `1, u, ..., u^{k-1}` where `u` is the image of the indeterminate.
//!
//! [`FieldSpec::make_extension`] searches for a modulus deterministically:
//! candidates are visited along a seeded affine walk over all monic
//! degree-`k` polynomials, so a fixed `(p, k, seed)` always yields the same
//! field. Seed 0 scans candidates in ascending order of their coefficient
//! encoding.
//!
//! Characteristic 2 is rejected everywhere; the engines built on top of
//! this module all require odd characteristic.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;

/// Errors arising from field construction or arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FfError {
    /// The characteristic is 2; only odd characteristic is supported.
    EvenCharacteristic,
    /// The given characteristic is not a prime number.
    NotPrime(u64),
    /// The characteristic does not fit the supported range `3 <= p < 2^31`.
    CharacteristicTooLarge(u64),
    /// The extension degree is zero or `p^k` overflows 64 bits.
    BadDegree { p: u64, k: usize },
    /// Attempt to invert the zero element.
    ZeroInverse,
    /// An element's coefficient vector does not match the field layout.
    BadElement(String),
}

impl fmt::Display for FfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FfError::EvenCharacteristic => {
                write!(f, "characteristic 2 is not supported (odd characteristic only)")
            }
            FfError::NotPrime(p) => write!(f, "{p} is not prime"),
            FfError::CharacteristicTooLarge(p) => {
                write!(f, "characteristic {p} out of supported range 3 <= p < 2^31")
            }
            FfError::BadDegree { p, k } => {
                write!(f, "extension degree {k} invalid for p = {p} (need k >= 1 and p^k < 2^64)")
            }
            FfError::ZeroInverse => write!(f, "inverse of zero requested"),
            FfError::BadElement(msg) => write!(f, "malformed field element: {msg}"),
        }
    }
}

impl core::error::Error for FfError {}

/// A field element: `k` coefficients in `[0, p)`, ascending basis powers.
///
/// Elements are plain data; all arithmetic goes through the owning
/// [`FieldSpec`]. The derived ordering (lexicographic on the coefficient
/// vector) is the canonical element order used for deterministic output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe {
    coeffs: Vec<u64>,
}

impl Fe {
    /// The raw coefficient vector, ascending powers of the generator.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// A concrete finite field `F_{p^k}` with its defining modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    k: usize,
    /// Monic modulus of degree `k`, ascending coefficients (length `k + 1`).
    modulus: Vec<u64>,
}

impl FieldSpec {
    /// Build the prime field `F_p`. The stored modulus is the degree-1
    /// placeholder `x`; it never participates in arithmetic.
    pub fn prime_field(p: u64) -> Result<FieldSpec, FfError> {
        check_char(p)?;
        Ok(FieldSpec { p, k: 1, modulus: vec![0, 1] })
    }

    /// Build `F_{p^k}` by searching for a monic irreducible modulus of
    /// degree `k` along a seeded affine walk over candidate encodings.
    ///
    /// Deterministic: a fixed `(p, k, seed)` always produces the same
    /// modulus. Seed 0 visits candidates in ascending encoding order, so
    /// e.g. `(3, 2, 0)` yields `x^2 + 1` and `(5, 2, 0)` yields `x^2 + 2`.
    pub fn make_extension(p: u64, k: usize, seed: u64) -> Result<FieldSpec, FfError> {
        check_char(p)?;
        if k == 0 || checked_pow(p, k).is_none() {
            return Err(FfError::BadDegree { p, k });
        }
        if k == 1 {
            return FieldSpec::prime_field(p);
        }
        let n = checked_pow(p, k).unwrap();
        let start = seed % n;
        let mut stride = 1 + seed % (n - 1);
        if stride % p == 0 {
            stride += 1;
        }
        let mut enc = start;
        for _ in 0..n {
            let mut modulus = decode_vec(enc, p, k);
            modulus.push(1);
            if is_irreducible_fp(&modulus, p) {
                return Ok(FieldSpec { p, k, modulus });
            }
            enc = (enc + stride) % n;
        }
        // Unreachable: monic irreducibles of every degree exist over F_p.
        Err(FfError::BadDegree { p, k })
    }

    /// Reconstruct a field from an explicit modulus (ascending, monic).
    /// The modulus is re-verified irreducible.
    pub fn from_modulus(p: u64, modulus: Vec<u64>) -> Result<FieldSpec, FfError> {
        check_char(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(FfError::BadElement(String::from("modulus must be monic of degree >= 1")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FfError::BadElement(String::from("modulus coefficients must lie in [0, p)")));
        }
        let k = modulus.len() - 1;
        if checked_pow(p, k).is_none() {
            return Err(FfError::BadDegree { p, k });
        }
        if k > 1 && !is_irreducible_fp(&modulus, p) {
            return Err(FfError::BadElement(String::from("modulus is reducible")));
        }
        Ok(FieldSpec { p, k, modulus })
    }

    /// The characteristic `p`.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The extension degree `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The field order `q = p^k`.
    pub fn q(&self) -> u64 {
        checked_pow(self.p, self.k).expect("order checked at construction")
    }

    /// The defining modulus, ascending coefficients (length `k + 1`).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The additive identity.
    pub fn zero(&self) -> Fe {
        Fe { coeffs: vec![0; self.k] }
    }

    /// The multiplicative identity.
    pub fn one(&self) -> Fe {
        self.scalar(1)
    }

    /// Embed an integer as a prime-subfield element (reduced mod `p`).
    pub fn scalar(&self, n: u64) -> Fe {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = n % self.p;
        Fe { coeffs }
    }

    /// The generator `u` (image of the indeterminate). For `k = 1` this is
    /// the scalar 0 image of `x`; callers wanting a multiplicative
    /// generator should not rely on this.
    pub fn gen_elem(&self) -> Fe {
        if self.k == 1 {
            return self.zero();
        }
        let mut coeffs = vec![0; self.k];
        coeffs[1] = 1;
        Fe { coeffs }
    }

    /// Validate an external coefficient vector as a field element.
    pub fn elem_from_coeffs(&self, coeffs: Vec<u64>) -> Result<Fe, FfError> {
        if coeffs.len() != self.k {
            return Err(FfError::BadElement(String::from("coefficient vector length != k")));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(FfError::BadElement(String::from("coefficient out of range [0, p)")));
        }
        Ok(Fe { coeffs })
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &Fe) -> bool {
        a.coeffs[0] == 1 && a.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.check_pair(a, b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            })
            .collect();
        Fe { coeffs }
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        self.check_pair(a, b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| if x >= y { x - y } else { x + self.p - y })
            .collect();
        Fe { coeffs }
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        let coeffs = a.coeffs.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect();
        Fe { coeffs }
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.check_pair(a, b);
        if self.k == 1 {
            return Fe { coeffs: vec![mulmod(a.coeffs[0], b.coeffs[0], self.p)] };
        }
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let cell = &mut prod[i + j];
                *cell = (*cell + mulmod(x, y, self.p)) % self.p;
            }
        }
        self.reduce(prod)
    }

    /// Multiply by an integer scalar.
    pub fn mul_scalar(&self, a: &Fe, n: u64) -> Fe {
        let n = n % self.p;
        let coeffs = a.coeffs.iter().map(|&x| mulmod(x, n, self.p)).collect();
        Fe { coeffs }
    }

    /// Multiplicative inverse. Inverting zero is a reported error.
    pub fn inv(&self, a: &Fe) -> Result<Fe, FfError> {
        if self.is_zero(a) {
            return Err(FfError::ZeroInverse);
        }
        if self.k == 1 {
            let v = powmod_u64(a.coeffs[0], self.p - 2, self.p);
            return Ok(Fe { coeffs: vec![v] });
        }
        // Extended Euclid in F_p[x]: u * a + v * modulus = g (constant).
        let (g, u) = xgcd_fp(&a.coeffs, &self.modulus, self.p);
        debug_assert_eq!(g.len(), 1, "gcd with irreducible modulus must be constant");
        let ginv = powmod_u64(g[0], self.p - 2, self.p);
        let mut coeffs: Vec<u64> = u.iter().map(|&c| mulmod(c, ginv, self.p)).collect();
        coeffs.resize(self.k, 0);
        Ok(Fe { coeffs })
    }

    /// Square-and-multiply exponentiation with a 64-bit exponent.
    pub fn pow(&self, a: &Fe, mut e: u64) -> Fe {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius endomorphism `a -> a^p`.
    pub fn frobenius(&self, a: &Fe) -> Fe {
        self.pow(a, self.p)
    }

    /// The unique `p`-th root (Frobenius is bijective): `a -> a^{p^{k-1}}`.
    pub fn pth_root(&self, a: &Fe) -> Fe {
        let mut r = a.clone();
        for _ in 0..self.k.saturating_sub(1) {
            r = self.frobenius(&r);
        }
        r
    }

    /// True iff the element lies in the prime subfield `F_p`.
    pub fn in_prime_subfield(&self, a: &Fe) -> bool {
        a.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Integer encoding `sum c_i p^i` in `[0, q)`; inverse of [`Self::decode`].
    pub fn encode(&self, a: &Fe) -> u64 {
        let mut e = 0u64;
        for &c in a.coeffs.iter().rev() {
            e = e * self.p + c;
        }
        e
    }

    /// Decode an integer in `[0, q)` to an element.
    pub fn decode(&self, e: u64) -> Fe {
        Fe { coeffs: decode_vec(e, self.p, self.k) }
    }

    /// A uniformly random element from the given RNG stream.
    pub fn random_elem(&self, rng: &mut dyn RngCore) -> Fe {
        let coeffs = (0..self.k).map(|_| uniform_u64(rng, self.p)).collect();
        Fe { coeffs }
    }

    fn reduce(&self, mut prod: Vec<u64>) -> Fe {
        // Reduce a raw product (degree <= 2k - 2) modulo the monic modulus.
        for i in (self.k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.k {
                let m = self.modulus[j];
                if m == 0 {
                    continue;
                }
                let idx = i - self.k + j;
                let sub = mulmod(c, m, self.p);
                prod[idx] = (prod[idx] + self.p - sub % self.p) % self.p;
            }
        }
        prod.truncate(self.k);
        Fe { coeffs: prod }
    }

    #[inline]
    fn check_pair(&self, a: &Fe, b: &Fe) {
        debug_assert_eq!(a.coeffs.len(), self.k, "element does not belong to this field");
        debug_assert_eq!(b.coeffs.len(), self.k, "element does not belong to this field");
    }
}

/// Draw a uniform integer in `[0, bound)` by rejection (no modulo bias).
pub(crate) fn uniform_u64(rng: &mut dyn RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

fn check_char(p: u64) -> Result<(), FfError> {
    if p == 2 {
        return Err(FfError::EvenCharacteristic);
    }
    if p >= 1 << 31 {
        return Err(FfError::CharacteristicTooLarge(p));
    }
    if !is_prime_u64(p) {
        return Err(FfError::NotPrime(p));
    }
    Ok(())
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn checked_pow(p: u64, k: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    // p < 2^31 so the product fits in u64.
    (a * b) % p
}

fn powmod_u64(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn decode_vec(mut e: u64, p: u64, k: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(k);
    for _ in 0..k {
        v.push(e % p);
        e /= p;
    }
    v
}

// --- minimal F_p[x] arithmetic for modulus search and inversion ---
//
// Self-contained so that field construction does not depend on the generic
// polynomial layer (which itself builds on fields). Polynomials are
// ascending coefficient vectors with no trailing zeros ("" = zero).

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = powmod_u64(m[dm], p - 2, p);
    while r.len() > dm {
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - dm;
        for (j, &mc) in m.iter().enumerate() {
            let idx = shift + j;
            let sub = mulmod(c, mc, p);
            r[idx] = (r[idx] + p - sub) % p;
        }
        fp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^{p^j} mod m` by iterated exponentiation by `p`.
fn fp_pow_frobenius(m: &[u64], p: u64, j: usize) -> Vec<u64> {
    let mut cur = fp_rem(&[0, 1], m, p); // x mod m
    for _ in 0..j {
        // cur <- cur^p mod m
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, m, p);
            }
            base = fp_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin irreducibility test for monic `m` of degree `k >= 1` over `F_p`:
/// `x^{p^k} == x (mod m)` and `gcd(x^{p^{k/l}} - x, m) = 1` for every prime
/// `l | k`.
fn is_irreducible_fp(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    let x = fp_rem(&[0, 1], m, p);
    let top = fp_pow_frobenius(m, p, k);
    if top != x {
        return false;
    }
    for l in prime_divisors(k) {
        let mut h = fp_pow_frobenius(m, p, k / l);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        fp_trim(&mut h);
        let g = fp_gcd(m, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Extended Euclid over `F_p[x]`: returns `(g, u)` with
/// `u * a == g (mod m)` and `g = gcd(a, m)` (not normalized monic).
fn xgcd_fp(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    let mut u0: Vec<u64> = Vec::new(); // coeff of a in r0 = m: 0
    let mut u1: Vec<u64> = vec![1]; // coeff of a in r1 = a: 1
    while !r1.is_empty() {
        let (q, r) = fp_divmod(&r0, &r1, p);
        let qu = fp_mul_plain(&q, &u1, p);
        let new_u = fp_sub(&u0, &qu, p);
        r0 = core::mem::replace(&mut r1, r);
        u0 = core::mem::replace(&mut u1, new_u);
    }
    (r0, u0)
}

fn fp_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    let lead_inv = powmod_u64(b[db], p - 2, p);
    while r.len() > db {
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - db;
        q[shift] = c;
        for (j, &bc) in b.iter().enumerate() {
            let sub = mulmod(c, bc, p);
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
        fp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    fp_trim(&mut q);
    (q, r)
}

fn fp_mul_plain(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_trim(&mut prod);
    prod
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    fp_trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modulus_search_is_deterministic_and_matches_known_values() {
        let f9 = FieldSpec::make_extension(3, 2, 0).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]); // x^2 + 1
        let f25 = FieldSpec::make_extension(5, 2, 0).unwrap();
        assert_eq!(f25.modulus(), &[2, 0, 1]); // x^2 + 2
        let f5 = FieldSpec::make_extension(5, 1, 12345).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]); // degree-1 placeholder

        // Same seed, same modulus; the result re-validates as irreducible.
        for seed in [0u64, 1, 7, 991] {
            let a = FieldSpec::make_extension(7, 3, seed).unwrap();
            let b = FieldSpec::make_extension(7, 3, seed).unwrap();
            assert_eq!(a, b);
            assert!(FieldSpec::from_modulus(7, a.modulus().to_vec()).is_ok());
        }
    }

    #[test]
    fn rejects_bad_characteristics() {
        assert_eq!(FieldSpec::prime_field(2), Err(FfError::EvenCharacteristic));
        assert_eq!(FieldSpec::make_extension(2, 3, 0), Err(FfError::EvenCharacteristic));
        assert_eq!(FieldSpec::prime_field(9), Err(FfError::NotPrime(9)));
        assert_eq!(FieldSpec::prime_field(1), Err(FfError::NotPrime(1)));
        assert!(matches!(FieldSpec::prime_field(1 << 31), Err(FfError::CharacteristicTooLarge(_))));
    }

    #[test]
    fn prime_field_inverse() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        let two = f5.scalar(2);
        assert_eq!(f5.inv(&two).unwrap(), f5.scalar(3));
        assert_eq!(f5.inv(&f5.zero()), Err(FfError::ZeroInverse));
    }

    #[test]
    fn f9_generator_arithmetic() {
        // F_9 = F_3[u]/(u^2 + 1): u * u = -1 = 2, frobenius(u) = u^3 = 2u.
        let f9 = FieldSpec::make_extension(3, 2, 0).unwrap();
        let u = f9.gen_elem();
        assert_eq!(f9.mul(&u, &u), f9.scalar(2));
        assert_eq!(f9.frobenius(&u), f9.mul_scalar(&u, 2));
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let fields = [
            FieldSpec::prime_field(3).unwrap(),
            FieldSpec::prime_field(5).unwrap(),
            FieldSpec::make_extension(3, 2, 0).unwrap(),
            FieldSpec::make_extension(5, 2, 0).unwrap(),
            FieldSpec::make_extension(7, 3, 1).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for f in &fields {
            for _ in 0..200 {
                let a = f.random_elem(&mut rng);
                let b = f.random_elem(&mut rng);
                let c = f.random_elem(&mut rng);
                // Commutativity, associativity, distributivity.
                assert_eq!(f.add(&a, &b), f.add(&b, &a));
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(
                    f.mul(&a, &f.add(&b, &c)),
                    f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                );
                // Identities and inverses.
                assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
                assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
                if !f.is_zero(&a) {
                    let ai = f.inv(&a).unwrap();
                    assert!(f.is_one(&f.mul(&a, &ai)));
                    // Lagrange: a^{q-1} = 1.
                    assert!(f.is_one(&f.pow(&a, f.q() - 1)));
                }
                // Frobenius has order dividing k and fixes F_p.
                let mut fr = a.clone();
                for _ in 0..f.k() {
                    fr = f.frobenius(&fr);
                }
                assert_eq!(fr, a);
                assert_eq!(f.pth_root(&f.frobenius(&a)), a);
            }
        }
    }

    #[test]
    fn encode_decode_roundtrip() {
        let f25 = FieldSpec::make_extension(5, 2, 0).unwrap();
        for e in 0..25 {
            assert_eq!(f25.encode(&f25.decode(e)), e);
        }
        let f = FieldSpec::prime_field(11).unwrap();
        for e in 0..11 {
            assert_eq!(f.encode(&f.decode(e)), e);
        }
    }

    #[test]
    fn scalar_embedding_and_subfield_test() {
        let f25 = FieldSpec::make_extension(5, 2, 0).unwrap();
        for n in 0..5 {
            let s = f25.scalar(n);
            assert!(f25.in_prime_subfield(&s));
            assert_eq!(f25.frobenius(&s), s);
        }
        assert!(!f25.in_prime_subfield(&f25.gen_elem()));
    }
}
