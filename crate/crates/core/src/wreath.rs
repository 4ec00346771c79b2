//! Iterated wreath products `[S_d]^n` acting on the complete rooted
//! `d`-ary tree of height `n`.
//!
//! An element assigns a permutation of `S_d` to every internal node; it
//! acts on leaf addresses (height-`n` digit strings, most significant
//! digit at the root) by permuting the children at each node it passes
//! through. The module provides exact orders, uniform seeded sampling,
//! full enumeration for small trees, composition, leaf actions, and exact
//! or sampled cycle-type distributions on the `d^n` leaves — the
//! reference statistics the Chebotarev comparisons are measured against.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use rand::RngCore;

use crate::ff::{checked_pow, uniform_u64};

/// Elements with more leaves than this are never enumerated exhaustively.
pub const ENUMERATE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WreathError {
    /// The arity must be at least 2.
    BadDegree(usize),
    /// `d^n` does not fit the supported range.
    SizeOverflow { d: usize, n: usize },
    /// The group order exceeds the exhaustive-enumeration cap. The
    /// order itself is not carried: it can be astronomically large
    /// (`(d!)^node_count`), and materializing it is exactly what this
    /// error exists to avoid.
    TooLarge { d: usize, n: usize, cap: u64 },
}

impl fmt::Display for WreathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WreathError::BadDegree(d) => write!(f, "tree arity {d} is too small (need d >= 2)"),
            WreathError::SizeOverflow { d, n } => {
                write!(f, "{d}^{n} leaves exceed the supported range")
            }
            WreathError::TooLarge { d, n, cap } => {
                write!(
                    f,
                    "the group of the arity-{d} height-{n} tree exceeds the enumeration \
                     cap of {cap} elements"
                )
            }
        }
    }
}

impl core::error::Error for WreathError {}

/// The shape of the tree: arity `d >= 2` and height `n >= 0`, with
/// `d^n <= 2^32` so leaf indices stay comfortably inside `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSpec {
    d: usize,
    n: usize,
}

impl TreeSpec {
    pub fn new(d: usize, n: usize) -> Result<TreeSpec, WreathError> {
        if d < 2 {
            return Err(WreathError::BadDegree(d));
        }
        match checked_pow(d as u64, n) {
            Some(leaves) if leaves <= 1 << 32 => Ok(TreeSpec { d, n }),
            _ => Err(WreathError::SizeOverflow { d, n }),
        }
    }

    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn height(&self) -> usize {
        self.n
    }

    pub fn leaf_count(&self) -> u64 {
        checked_pow(self.d as u64, self.n).expect("checked at construction")
    }

    /// Number of internal nodes `(d^n - 1)/(d - 1)`.
    pub fn node_count(&self) -> u64 {
        (self.leaf_count() - 1) / (self.d as u64 - 1)
    }

    /// Exact group order `(d!)^{(d^n - 1)/(d - 1)}`.
    pub fn order(&self) -> BigUint {
        let fact = big_factorial(self.d as u64);
        let nodes = u32::try_from(self.node_count()).expect("node count fits u32");
        fact.pow(nodes)
    }
}

/// One group element: a permutation (as images of `0..d`) at every
/// internal node. `Leaf` marks height 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WreathElement {
    Leaf,
    Node { perm: Vec<usize>, children: Vec<WreathElement> },
}

/// The identity element of the given shape.
pub fn identity(spec: &TreeSpec) -> WreathElement {
    build_identity(spec.d, spec.n)
}

fn build_identity(d: usize, n: usize) -> WreathElement {
    if n == 0 {
        return WreathElement::Leaf;
    }
    WreathElement::Node {
        perm: (0..d).collect(),
        children: (0..d).map(|_| build_identity(d, n - 1)).collect(),
    }
}

/// Group composition: `compose(a, b)` acts as "apply `b`, then `a`". With
/// `a = (sigma; g)` and `b = (tau; h)` this is
/// `(sigma tau; (g_{tau(i)} h_i)_i)`.
pub fn compose(a: &WreathElement, b: &WreathElement) -> WreathElement {
    match (a, b) {
        (WreathElement::Leaf, WreathElement::Leaf) => WreathElement::Leaf,
        (
            WreathElement::Node { perm: pa, children: ca },
            WreathElement::Node { perm: pb, children: cb },
        ) => {
            assert_eq!(pa.len(), pb.len(), "mismatched arity");
            let perm = pb.iter().map(|&i| pa[i]).collect();
            let children = (0..pb.len()).map(|i| compose(&ca[pb[i]], &cb[i])).collect();
            WreathElement::Node { perm, children }
        }
        _ => panic!("mismatched heights"),
    }
}

/// Group inverse.
pub fn inverse(a: &WreathElement) -> WreathElement {
    match a {
        WreathElement::Leaf => WreathElement::Leaf,
        WreathElement::Node { perm, children } => {
            let d = perm.len();
            let mut inv_perm = vec![0usize; d];
            for (i, &img) in perm.iter().enumerate() {
                inv_perm[img] = i;
            }
            // (sigma; g)^{-1} = (sigma^{-1}; (g_{sigma^{-1}(i)}^{-1})_i).
            let children = (0..d).map(|i| inverse(&children[inv_perm[i]])).collect();
            WreathElement::Node { perm: inv_perm, children }
        }
    }
}

/// Number of leaves below this element.
pub fn leaf_count(a: &WreathElement) -> u64 {
    match a {
        WreathElement::Leaf => 1,
        WreathElement::Node { perm, children } => {
            perm.len() as u64 * leaf_count(&children[0])
        }
    }
}

/// Image of one leaf address under the action. Addresses are mixed-radix
/// with the root digit most significant: `idx = v * d^{n-1} + rest`, and
/// the element maps it to `perm[v] * d^{n-1} + children[v](rest)`.
pub fn leaf_action(a: &WreathElement, idx: u64) -> u64 {
    match a {
        WreathElement::Leaf => idx,
        WreathElement::Node { perm, children } => {
            let block = leaf_count(&children[0]);
            let v = (idx / block) as usize;
            let rest = idx % block;
            perm[v] as u64 * block + leaf_action(&children[v], rest)
        }
    }
}

/// The full permutation induced on the leaves.
pub fn leaf_permutation(a: &WreathElement) -> Vec<u64> {
    let total = leaf_count(a);
    (0..total).map(|i| leaf_action(a, i)).collect()
}

/// Cycle type on the leaves, sorted in decreasing order (a partition of
/// `d^n`). Computed recursively: each cycle `i_1 -> ... -> i_L` of the
/// root permutation contributes parts `L * c` for every part `c` of the
/// cycle type of the path product `g_{i_L} ... g_{i_2} g_{i_1}`.
pub fn cycle_type(a: &WreathElement) -> Vec<u64> {
    let mut parts = Vec::new();
    collect_cycle_type(a, &mut parts);
    parts.sort_unstable_by(|x, y| y.cmp(x));
    parts
}

fn collect_cycle_type(a: &WreathElement, out: &mut Vec<u64>) {
    match a {
        WreathElement::Leaf => out.push(1),
        WreathElement::Node { perm, children } => {
            let d = perm.len();
            let mut seen = vec![false; d];
            for start in 0..d {
                if seen[start] {
                    continue;
                }
                // Walk the cycle of the root permutation through `start`,
                // accumulating the product of child elements along it
                // (first visited applied first).
                let mut cycle_len = 0u64;
                let mut path = children[start].clone();
                seen[start] = true;
                cycle_len += 1;
                let mut pos = perm[start];
                while pos != start {
                    seen[pos] = true;
                    path = compose(&children[pos], &path);
                    pos = perm[pos];
                    cycle_len += 1;
                }
                let mut sub = Vec::new();
                collect_cycle_type(&path, &mut sub);
                for c in sub {
                    out.push(cycle_len * c);
                }
            }
        }
    }
}

/// Uniformly random element (every node permutation independent and
/// uniform via Fisher–Yates over the supplied generator).
pub fn sample(spec: &TreeSpec, rng: &mut dyn RngCore) -> WreathElement {
    build_random(spec.d, spec.n, rng)
}

fn build_random(d: usize, n: usize, rng: &mut dyn RngCore) -> WreathElement {
    if n == 0 {
        return WreathElement::Leaf;
    }
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = uniform_u64(rng, i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    WreathElement::Node {
        perm,
        children: (0..d).map(|_| build_random(d, n - 1, rng)).collect(),
    }
}

fn factorial_u64(d: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 2..=d {
        acc = acc.checked_mul(i)?;
    }
    Some(acc)
}

fn big_factorial(d: u64) -> BigUint {
    let mut acc = BigUint::from(1u64);
    for i in 2..=d {
        acc *= BigUint::from(i);
    }
    acc
}

/// Lexicographic permutation unranking via the factorial number system.
fn unrank_perm(d: usize, mut rank: u64) -> Vec<usize> {
    let mut avail: Vec<usize> = (0..d).collect();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let f = factorial_u64((d - 1 - i) as u64).expect("small factorial");
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(avail.remove(idx));
    }
    out
}

fn build_from_ranks(
    d: usize,
    n: usize,
    ranks: &[u64],
    cursor: &mut usize,
) -> WreathElement {
    if n == 0 {
        return WreathElement::Leaf;
    }
    let r = ranks[*cursor];
    *cursor += 1;
    let perm = unrank_perm(d, r);
    let children = (0..d).map(|_| build_from_ranks(d, n - 1, ranks, cursor)).collect();
    WreathElement::Node { perm, children }
}

/// All group elements, in the lexicographic order of their per-node
/// permutation ranks (root node most significant, subtrees in pre-order).
/// Fails when the order exceeds [`ENUMERATE_CAP`].
pub fn enumerate(spec: &TreeSpec) -> Result<Vec<WreathElement>, WreathError> {
    // Bound the order in plain u64 arithmetic; computing the exact
    // order of an over-cap group can be arbitrarily expensive.
    let too_large =
        || WreathError::TooLarge { d: spec.d, n: spec.n, cap: ENUMERATE_CAP };
    let fact = factorial_u64(spec.d as u64).ok_or_else(too_large)?;
    let mut total: u64 = 1;
    for _ in 0..spec.node_count() {
        total = match total.checked_mul(fact) {
            Some(t) if t <= ENUMERATE_CAP => t,
            _ => return Err(too_large()),
        };
    }
    let nodes = spec.node_count() as usize;
    let mut out = Vec::with_capacity(total as usize);
    for counter in 0..total {
        // Base-(d!) digits, most significant digit at node 0.
        let mut ranks = vec![0u64; nodes];
        let mut c = counter;
        for slot in (0..nodes).rev() {
            ranks[slot] = c % fact;
            c /= fact;
        }
        let mut cursor = 0;
        out.push(build_from_ranks(spec.d, spec.n, &ranks, &mut cursor));
    }
    Ok(out)
}

/// Exact cycle-type distribution as reduced fractions
/// `type -> (numerator, denominator)`, by full enumeration.
pub fn exact_cycle_type_distribution(
    spec: &TreeSpec,
) -> Result<BTreeMap<Vec<u64>, (u64, u64)>, WreathError> {
    let elements = enumerate(spec)?;
    let total = elements.len() as u64;
    let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for e in &elements {
        *counts.entry(cycle_type(e)).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(ty, c)| {
            let g = gcd_u64(c, total);
            (ty, (c / g, total / g))
        })
        .collect())
}

/// Sampled cycle-type counts from `samples` uniform elements drawn with
/// the given seed.
pub fn montecarlo_cycle_type_distribution(
    spec: &TreeSpec,
    samples: u64,
    seed: u64,
) -> BTreeMap<Vec<u64>, u64> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for _ in 0..samples {
        let e = sample(spec, &mut rng);
        *counts.entry(cycle_type(&e)).or_insert(0) += 1;
    }
    counts
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
