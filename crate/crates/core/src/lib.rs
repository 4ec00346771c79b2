//! Exact computational engines for verifying Odoni-type hypotheses for
//! iterated polynomials over rational function fields `F_q(t)` of odd
//! characteristic.
//!
//! The crate is organised bottom-up:
//!
//! * [`ff`] — finite fields `F_{p^k}` in polynomial basis, with seeded
//!   deterministic modulus search;
//! * [`poly`] — dense univariate polynomials over pluggable coefficient
//!   rings, gcd/division over fields, and fraction-free subresultant
//!   resultants over rings;
//! * [`factor`] — complete factorization over finite fields (squarefree
//!   decomposition, distinct-degree splitting, seeded equal-degree
//!   splitting) and irreducibility testing;
//! * [`bipoly`] — bivariate polynomials `f(t, x)`, iteration, discriminants,
//!   specialization, and one-sided irreducibility certificates;
//! * [`checks`] — the hypothesis battery for Odoni-type theorems: critical
//!   points, Morse conditions, orbit separation, primitive prime divisors;
//! * [`wreath`] — iterated wreath products acting on rooted `d`-ary trees:
//!   orders, sampling, enumeration, exact cycle-type distributions;
//! * [`chebotarev`] — Frobenius cycle-type statistics of specializations
//!   compared against exact wreath-product distributions;
//! * [`certify`] — exact Galois certification of the first tower level by
//!   successive root adjunction and norm-resultant irreducibility.
//!
//! Everything is deterministic: randomized algorithms take explicit seeds
//! and the same seed reproduces identical results on every platform.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature for embedded use.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bipoly;
pub mod certify;
pub mod chebotarev;
pub mod checks;
pub mod factor;
pub mod ff;
pub mod poly;
pub mod wreath;

pub use bipoly::BiPoly;
pub use ff::{Fe, FieldSpec};
pub use poly::Poly;
