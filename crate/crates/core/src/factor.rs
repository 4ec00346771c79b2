//! Complete factorization of univariate polynomials over finite fields.
//!
//! Pipeline: squarefree decomposition (correct in characteristic `p`,
//! including inseparable inputs that are `p`-th powers), distinct-degree
//! splitting by Frobenius powers, and Cantor–Zassenhaus equal-degree
//! splitting for odd `q`. Randomized steps draw from an explicit seed, so
//! the same seed reproduces the same run everywhere; the factor list
//! itself is seed-independent because it is sorted canonically.

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ff::{Fe, FieldSpec};
use crate::poly::{render_fe, render_fe_poly, Poly, PolyRing, Ring};

/// Squarefree decomposition `f = unit * prod parts[i].0 ^ parts[i].1` with
/// the monic parts pairwise coprime and squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: Fe,
    pub parts: Vec<(Poly<Fe>, u64)>,
    /// True when some component was a `p`-th power (vanishing derivative),
    /// i.e. the input was inseparable at that stage.
    pub inseparable: bool,
}

/// Complete factorization `f = unit * prod factors[i].0 ^ factors[i].1`
/// into monic irreducibles, sorted by degree then coefficient order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    pub factors: Vec<(Poly<Fe>, u64)>,
}

/// Coefficient-wise `p`-th root of a polynomial with vanishing derivative:
/// `f(x) = g(x)^p` returns `g`. Panics if some exponent is not divisible
/// by `p` (impossible when `f' = 0`).
fn pth_root_poly(field: &FieldSpec, f: &Poly<Fe>) -> Poly<Fe> {
    let r = PolyRing::new(field);
    let p = field.p() as usize;
    let mut coeffs = Vec::with_capacity(f.coeffs().len() / p + 1);
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            coeffs.push(field.pth_root(c));
        } else {
            assert!(field.is_zero(c), "pth root of a separable polynomial");
        }
    }
    r.from_coeffs(coeffs)
}

fn sqf_monic(
    field: &FieldSpec,
    f: &Poly<Fe>,
    scale: u64,
    out: &mut Vec<(Poly<Fe>, u64)>,
    inseparable: &mut bool,
) {
    let r = PolyRing::new(field);
    if f.deg0() == 0 {
        return;
    }
    let fp = r.derivative(f);
    if fp.is_zero_poly() {
        *inseparable = true;
        let root = pth_root_poly(field, f);
        sqf_monic(field, &root, scale * field.p(), out, inseparable);
        return;
    }
    let mut c = r.gcd(f, &fp);
    let mut w = r.exact_div(f, &c).expect("gcd divides");
    let mut i: u64 = 1;
    while w.deg0() > 0 {
        let y = r.gcd(&w, &c);
        let fac = r.exact_div(&w, &y).expect("gcd divides");
        if fac.deg0() > 0 {
            out.push((fac, i * scale));
        }
        c = r.exact_div(&c, &y).expect("gcd divides");
        w = y;
        i += 1;
    }
    if c.deg0() > 0 {
        // Remaining factors have multiplicity divisible by p.
        *inseparable = true;
        let root = pth_root_poly(field, &c);
        sqf_monic(field, &root, scale * field.p(), out, inseparable);
    }
}

/// Squarefree decomposition over `F_q`, valid in characteristic `p`.
/// Panics on the zero polynomial.
pub fn squarefree_decomposition(field: &FieldSpec, f: &Poly<Fe>) -> SquarefreeDecomposition {
    assert!(!f.is_zero_poly(), "squarefree decomposition of zero");
    let r = PolyRing::new(field);
    let unit = r.lc(f);
    let monic = r.monic(f);
    let mut parts = Vec::new();
    let mut inseparable = false;
    sqf_monic(field, &monic, 1, &mut parts, &mut inseparable);
    sort_factors(field, &mut parts);
    SquarefreeDecomposition { unit, parts, inseparable }
}

/// Distinct-degree splitting of a monic squarefree polynomial: returns
/// `(product of irreducible factors of degree d, d)` pairs in increasing
/// degree order.
pub fn distinct_degree_split(field: &FieldSpec, f: &Poly<Fe>) -> Vec<(Poly<Fe>, usize)> {
    let r = PolyRing::new(field);
    let q = field.q();
    let x = r.var();
    let mut f = f.clone();
    let mut h = r.rem(&x, &f);
    let mut out = Vec::new();
    let mut d = 0usize;
    while f.deg0() >= 2 * (d + 1) {
        d += 1;
        h = r.pow_mod(&h, q, &f);
        let g = r.gcd(&r.sub(&h, &x), &f);
        if g.deg0() > 0 {
            out.push((g.clone(), d));
            f = r.exact_div(&f, &g).expect("gcd divides");
            h = r.rem(&h, &f);
        }
    }
    if f.deg0() > 0 {
        let deg = f.deg0();
        out.push((f, deg));
    }
    out
}

/// Degrees of the irreducible factors of a monic squarefree polynomial,
/// sorted in decreasing order. This is the Frobenius cycle type of the
/// corresponding separable algebra.
pub fn squarefree_factor_degrees(field: &FieldSpec, f: &Poly<Fe>) -> Vec<u64> {
    let mut degs = Vec::new();
    for (g, d) in distinct_degree_split(field, f) {
        let count = g.deg0() / d;
        for _ in 0..count {
            degs.push(d as u64);
        }
    }
    degs.sort_unstable_by(|a, b| b.cmp(a));
    degs
}

/// `a^{(q^d - 1)/2} mod g` using the Frobenius norm chain so the exponent
/// never leaves `u64`.
fn half_power(
    r: &PolyRing<'_, FieldSpec>,
    field: &FieldSpec,
    a: &Poly<Fe>,
    d: usize,
    g: &Poly<Fe>,
) -> Poly<Fe> {
    let q = field.q();
    let mut frob = a.clone();
    let mut acc = a.clone();
    for _ in 1..d {
        frob = r.pow_mod(&frob, q, g);
        acc = r.rem(&r.mul(&acc, &frob), g);
    }
    r.pow_mod(&acc, (q - 1) / 2, g)
}

/// Cantor–Zassenhaus equal-degree splitting: `g` monic squarefree, all
/// irreducible factors of degree `d`. Requires odd `q`.
fn equal_degree_split(
    field: &FieldSpec,
    g: &Poly<Fe>,
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly<Fe>>,
) {
    let r = PolyRing::new(field);
    if g.deg0() == d {
        out.push(r.monic(g));
        return;
    }
    loop {
        let deg = g.deg0();
        let coeffs: Vec<Fe> = (0..deg).map(|_| field.random_elem(rng)).collect();
        let a = r.from_coeffs(coeffs);
        if a.deg0() == 0 {
            continue;
        }
        let b = half_power(&r, field, &a, d, g);
        let h = r.gcd(&r.sub(&b, &r.one()), g);
        if h.deg0() > 0 && h.deg0() < deg {
            let rest = r.exact_div(g, &h).expect("gcd divides");
            equal_degree_split(field, &h, d, rng, out);
            equal_degree_split(field, &rest, d, rng, out);
            return;
        }
    }
}

fn sort_factors(field: &FieldSpec, factors: &mut [(Poly<Fe>, u64)]) {
    let r = PolyRing::new(field);
    factors.sort_by(|a, b| {
        a.0.deg0().cmp(&b.0.deg0()).then_with(|| r.canonical_cmp(&a.0, &b.0))
    });
}

/// Complete factorization over `F_q` into monic irreducibles. The output
/// is canonical (independent of the seed); the seed only steers the
/// internal equal-degree splitting. Panics on the zero polynomial.
pub fn factor_poly(field: &FieldSpec, f: &Poly<Fe>, seed: u64) -> Factorization {
    assert!(!f.is_zero_poly(), "factorization of zero");
    let r = PolyRing::new(field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sqf = squarefree_decomposition(field, f);
    let mut factors: Vec<(Poly<Fe>, u64)> = Vec::new();
    for (part, mult) in &sqf.parts {
        for (prod, d) in distinct_degree_split(field, part) {
            let mut irred = Vec::new();
            equal_degree_split(field, &prod, d, &mut rng, &mut irred);
            for g in irred {
                factors.push((g, *mult));
            }
        }
    }
    sort_factors(field, &mut factors);
    let result = Factorization { unit: sqf.unit, factors };
    debug_assert_eq!(recompose(field, &result), *f, "factor product mismatch");
    let _ = &r;
    result
}

/// Multiply a factorization back out (used for verification).
pub fn recompose(field: &FieldSpec, fac: &Factorization) -> Poly<Fe> {
    let r = PolyRing::new(field);
    let mut acc = r.constant(fac.unit.clone());
    for (g, m) in &fac.factors {
        acc = r.mul(&acc, &r.pow(g, *m));
    }
    acc
}

/// Rabin irreducibility test over `F_q`: `f` of degree `n >= 1` is
/// irreducible iff `x^{q^n} = x mod f` and `gcd(x^{q^{n/l}} - x, f) = 1`
/// for every prime `l | n`. Constants are not irreducible.
pub fn is_irreducible(field: &FieldSpec, f: &Poly<Fe>) -> bool {
    let r = PolyRing::new(field);
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let f = r.monic(f);
    let q = field.q();
    let x = r.rem(&r.var(), &f);
    // Frobenius powers x^{q^i} mod f for i = 0..n.
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(x.clone());
    for _ in 0..n {
        let prev = powers.last().unwrap();
        powers.push(r.pow_mod(prev, q, &f));
    }
    if powers[n] != x {
        return false;
    }
    for l in small_prime_divisors(n as u64) {
        let m = n / l as usize;
        let g = r.gcd(&r.sub(&powers[m], &x), &f);
        if g.deg0() > 0 {
            return false;
        }
    }
    true
}

/// All roots of `f` in `F_q`, in canonical element order.
pub fn roots_in_field(field: &FieldSpec, f: &Poly<Fe>) -> Vec<Fe> {
    assert!(!f.is_zero_poly(), "roots of the zero polynomial");
    let fac = factor_poly(field, f, 0);
    let mut roots = Vec::new();
    for (g, _) in &fac.factors {
        if g.deg0() == 1 {
            // g = x + c, root -c.
            roots.push(field.neg(&g.coeffs()[0]));
        }
    }
    roots.sort();
    roots
}

fn small_prime_divisors(mut n: u64) -> Vec<u64> {
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

/// Render a factored form like `2*(t + 1)*(t^2 + 4*t + 1)` or
/// `t^2*(t + 3)`: unit prefix when it is not 1, monomial factors bare,
/// other factors parenthesised, exponents with `^`.
pub fn render_factorization(field: &FieldSpec, fac: &Factorization, var: char) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let unit_is_one = field.is_one(&fac.unit);
    if !unit_is_one || fac.factors.is_empty() {
        out.push_str(&render_fe(field, &fac.unit));
    }
    for (g, m) in &fac.factors {
        if !out.is_empty() {
            out.push('*');
        }
        let body = render_fe_poly(field, g, var);
        let is_bare_var = g.deg0() == 1
            && field.is_zero(&g.coeffs()[0])
            && field.is_one(&g.coeffs()[1]);
        if is_bare_var {
            out.push(var);
        } else {
            out.push('(');
            out.push_str(&body);
            out.push(')');
        }
        if *m > 1 {
            let _ = write!(out, "^{m}");
        }
    }
    out
}

/// Render a squarefree decomposition with the same conventions.
pub fn render_squarefree(field: &FieldSpec, sqf: &SquarefreeDecomposition, var: char) -> String {
    let as_fac = Factorization { unit: sqf.unit.clone(), factors: sqf.parts.clone() };
    render_factorization(field, &as_fac, var)
}

/// Always-on recomposition check used by tests and by callers that need a
/// verified factorization.
pub fn verify_factorization(field: &FieldSpec, f: &Poly<Fe>, fac: &Factorization) -> bool {
    recompose(field, fac) == *f
        && fac.factors.iter().all(|(g, m)| {
            let r = PolyRing::new(field);
            *m >= 1 && r.is_monic(g) && is_irreducible(field, g)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fp_poly(field: &FieldSpec, coeffs: &[u64]) -> Poly<Fe> {
        let r = PolyRing::new(field);
        r.from_coeffs(coeffs.iter().map(|&c| field.scalar(c)).collect())
    }

    #[test]
    fn squarefree_decomposition_with_multiplicities() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        // t^3 + 3t^2 = t^2 * (t + 3).
        let f = fp_poly(&f5, &[0, 0, 3, 1]);
        let sqf = squarefree_decomposition(&f5, &f);
        assert!(!sqf.inseparable);
        assert!(f5.is_one(&sqf.unit));
        assert_eq!(
            sqf.parts,
            vec![(fp_poly(&f5, &[0, 1]), 2), (fp_poly(&f5, &[3, 1]), 1)]
        );
        assert_eq!(render_squarefree(&f5, &sqf, 't'), "t^2*(t + 3)");
    }

    #[test]
    fn inseparable_pth_power_is_detected() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        // x^5 = (x)^5 over F_5: derivative vanishes.
        let f = fp_poly(&f5, &[0, 0, 0, 0, 0, 1]);
        let sqf = squarefree_decomposition(&f5, &f);
        assert!(sqf.inseparable);
        assert_eq!(sqf.parts, vec![(fp_poly(&f5, &[0, 1]), 5)]);
        let fac = factor_poly(&f5, &f, 3);
        assert_eq!(fac.factors, vec![(fp_poly(&f5, &[0, 1]), 5)]);
    }

    #[test]
    fn factorization_matches_known_splittings() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        // 2t^2 + 1 = 2 * (t^2 + 3), and t^2 + 3 is irreducible over F_5.
        let f = fp_poly(&f5, &[1, 0, 2]);
        let fac = factor_poly(&f5, &f, 0);
        assert_eq!(fac.unit, f5.scalar(2));
        assert_eq!(fac.factors, vec![(fp_poly(&f5, &[3, 0, 1]), 1)]);
        assert_eq!(render_factorization(&f5, &fac, 't'), "2*(t^2 + 3)");

        // 2t^3 + 2 = 2 * (t + 1) * (t^2 + 4t + 1).
        let g = fp_poly(&f5, &[2, 0, 0, 2]);
        let gf = factor_poly(&f5, &g, 9);
        assert_eq!(gf.unit, f5.scalar(2));
        assert_eq!(
            gf.factors,
            vec![(fp_poly(&f5, &[1, 1]), 1), (fp_poly(&f5, &[1, 4, 1]), 1)]
        );
        assert_eq!(render_factorization(&f5, &gf, 't'), "2*(t + 1)*(t^2 + 4*t + 1)");

        // 2t^3 + t + 1 = 2 * (t^3 + 3t + 3), irreducible.
        let h = fp_poly(&f5, &[1, 1, 0, 2]);
        let hf = factor_poly(&f5, &h, 1);
        assert_eq!(hf.unit, f5.scalar(2));
        assert_eq!(hf.factors, vec![(fp_poly(&f5, &[3, 3, 0, 1]), 1)]);

        let f3 = FieldSpec::prime_field(3).unwrap();
        let fac3 = factor_poly(&f3, &fp_poly(&f3, &[2, 0, 1]), 0);
        assert_eq!(
            fac3.factors,
            vec![(fp_poly(&f3, &[1, 1]), 1), (fp_poly(&f3, &[2, 1]), 1)]
        );
    }

    #[test]
    fn irreducibility_oracles() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        assert!(is_irreducible(&f5, &fp_poly(&f5, &[3, 0, 1]))); // x^2 + 3
        assert!(is_irreducible(&f5, &fp_poly(&f5, &[1, 1, 0, 1]))); // x^3 + x + 1
        assert!(!is_irreducible(&f5, &fp_poly(&f5, &[1, 0, 1]))); // x^2 + 1 = (x+2)(x+3)
        assert!(!is_irreducible(&f5, &fp_poly(&f5, &[3]))); // constant
        assert!(is_irreducible(&f5, &fp_poly(&f5, &[4, 1]))); // linear
        let f3 = FieldSpec::prime_field(3).unwrap();
        assert!(is_irreducible(&f3, &fp_poly(&f3, &[1, 0, 1]))); // x^2 + 1 over F_3
    }

    #[test]
    fn roots_of_split_polynomials() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        // x^2 + 1 = (x + 2)(x + 3): roots 2 and 3 (i.e. -3 and -2).
        let roots = roots_in_field(&f5, &fp_poly(&f5, &[1, 0, 1]));
        assert_eq!(roots, vec![f5.scalar(2), f5.scalar(3)]);
        assert!(roots_in_field(&f5, &fp_poly(&f5, &[3, 0, 1])).is_empty());
    }

    #[test]
    fn random_roundtrip_and_seed_independence() {
        use rand::Rng;
        let f5 = FieldSpec::prime_field(5).unwrap();
        let f9 = FieldSpec::make_extension(3, 2, 0).unwrap();
        for field in [&f5, &f9] {
            let r = PolyRing::new(field);
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            for trial in 0..40u64 {
                let deg = rng.random_range(1..8usize);
                let mut coeffs: Vec<Fe> =
                    (0..deg).map(|_| field.random_elem(&mut rng)).collect();
                coeffs.push(field.random_elem(&mut rng));
                let f = r.from_coeffs(coeffs);
                if f.is_zero_poly() || f.deg0() == 0 {
                    continue;
                }
                let fac_a = factor_poly(field, &f, trial);
                let fac_b = factor_poly(field, &f, trial + 1000);
                // Canonical output: identical across seeds.
                assert_eq!(fac_a, fac_b);
                assert!(verify_factorization(field, &f, &fac_a));
            }
        }
    }

    #[test]
    fn distinct_degree_profile_of_squarefree_inputs() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        // (x + 1)(x^2 + 3) is squarefree with degrees [2, 1].
        let r = PolyRing::new(&f5);
        let f = r.mul(&fp_poly(&f5, &[1, 1]), &fp_poly(&f5, &[3, 0, 1]));
        assert_eq!(squarefree_factor_degrees(&f5, &f), vec![2, 1]);
        // x^3 + x + 1 irreducible: single 3-cycle.
        assert_eq!(
            squarefree_factor_degrees(&f5, &fp_poly(&f5, &[1, 1, 0, 1])),
            vec![3]
        );
    }
}
