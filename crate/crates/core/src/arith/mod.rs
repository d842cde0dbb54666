//! Exact arithmetic over `K = Q` with a p-adic valuation.
//!
//! The discrete valuation ring is `Z` localized at `p`, the uniformizer is `p`
//! itself and the residue field is `F_p`. Everything here is exact; there is no
//! floating point anywhere below the CLI's SVG renderer.

mod linalg;
mod smith;

pub use linalg::{nullspace, rank_of_vectors, FpMatrix, QMatrix};
pub(crate) use linalg::rank_of_vectors_mod_p;
pub use smith::smith_invariants;

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Elements of `K = Q`, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Values of `val: K -> Z ∪ {∞}`.
pub type ValInt = Extended<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("entry {index} is not integral after scaling")]
    NotIntegral { index: usize },
    #[error("{entries} entries but {exponents} scaling exponents")]
    LengthMismatch { entries: usize, exponents: usize },
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

/// A totally ordered value set extended by a top element.
///
/// `Finite(_) < Infinity`, `Infinity` absorbs addition and is neutral for `min`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended<T> {
    Finite(T),
    Infinity,
}

impl<T> Extended<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }
}

impl<T: Add<Output = T>> Add for Extended<T> {
    type Output = Extended<T>;

    fn add(self, rhs: Self) -> Self::Output {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinity,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => v.fmt(f),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

/// Choice of the prime `p` defining the valuation on `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ValuationConfig {
    p: u64,
}

impl Default for ValuationConfig {
    fn default() -> Self {
        ValuationConfig { p: 2 }
    }
}

impl ValuationConfig {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if is_prime(p) {
            Ok(ValuationConfig { p })
        } else {
            Err(ArithError::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `p^k` as a rational, for any integer `k`.
    pub fn power(&self, k: i64) -> Rational {
        let base = BigInt::from(self.p);
        let mag = num_traits::pow(base, k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(mag)
        } else {
            Rational::new(BigInt::one(), mag)
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exponent of `p` in `q`; infinite exactly for `q = 0`.
pub fn padic_val(q: &Rational, cfg: ValuationConfig) -> ValInt {
    if q.is_zero() {
        return Extended::Infinity;
    }
    Extended::Finite(int_valuation(q.numer(), cfg.p) - int_valuation(q.denom(), cfg.p))
}

/// Finite valuation of a nonzero rational. Panics on zero.
pub(crate) fn val_nonzero(q: &Rational, cfg: ValuationConfig) -> i64 {
    padic_val(q, cfg)
        .into_finite()
        .expect("valuation of zero requested")
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    mod_pow(a, p - 2, p)
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// Image in `F_p` of a rational with nonnegative valuation.
pub fn residue(q: &Rational, cfg: ValuationConfig) -> Option<u64> {
    if q.is_zero() {
        return Some(0);
    }
    if val_nonzero(q, cfg) < 0 {
        return None;
    }
    let num = bigint_mod(q.numer(), cfg.p);
    let den = bigint_mod(q.denom(), cfg.p);
    Some(((num as u128 * inv_mod(den, cfg.p) as u128) % cfg.p as u128) as u64)
}

/// An element of `F_p^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueVector {
    entries: Vec<u64>,
    p: u64,
}

impl ResidueVector {
    pub fn new(entries: Vec<u64>, p: u64) -> Self {
        let entries = entries.into_iter().map(|e| e % p).collect();
        ResidueVector { entries, p }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Add for &ResidueVector {
    type Output = ResidueVector;

    fn add(self, rhs: &ResidueVector) -> ResidueVector {
        assert_eq!(self.p, rhs.p, "residue vectors over different fields");
        assert_eq!(self.entries.len(), rhs.entries.len());
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        ResidueVector { entries, p: self.p }
    }
}

/// Divides entry `i` by `p^{scaling[i]}` and reduces the result modulo `p`.
pub fn reduce_vector(
    v: &[Rational],
    scaling: &[i64],
    cfg: ValuationConfig,
) -> Result<ResidueVector, ArithError> {
    if v.len() != scaling.len() {
        return Err(ArithError::LengthMismatch {
            entries: v.len(),
            exponents: scaling.len(),
        });
    }
    let entries = v
        .iter()
        .zip(scaling)
        .enumerate()
        .map(|(index, (x, &s))| {
            let scaled = x * cfg.power(-s);
            residue(&scaled, cfg).ok_or(ArithError::NotIntegral { index })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResidueVector { entries, p: cfg.p })
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let err = || ArithError::Parse(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"num/den"` rendering used in every serialized document.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Compact rendering for human-readable output (`3`, `-1/2`).
pub fn display_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn ceil_to_i64(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().expect("integer part fits in i64")
}

pub(crate) fn floor_to_i64(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().expect("integer part fits in i64")
}

pub(crate) fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Elementary symmetric polynomials `e_0..=e_len` evaluated on `values`.
pub fn elementary_symmetric(values: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); values.len() + 1];
    e[0] = Rational::one();
    for (k, v) in values.iter().enumerate() {
        for i in (1..=k + 1).rev() {
            let term = &e[i - 1] * v;
            e[i] += term;
        }
    }
    e
}
