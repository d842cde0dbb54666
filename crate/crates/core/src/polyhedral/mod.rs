//! Cones, fans in `N_R x R>=0`, the height-one complex and the constructions
//! relating them.

mod complex;
mod cone;
mod fan;

pub use complex::{
    cone_over, recession_fan, star_fan, Cell, FanOverDvr, PolyComplex, StarFan,
};
pub use cone::{Cone, Facet};
pub use fan::{build_fan, check_regular_complete, slice, Fan, RegularityReport, Slice};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::Rational;

/// Integer coordinates in `N` or `N x Z`; for fan generators the last entry is the height.
pub type LatticeVector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedralError {
    #[error("expected a vector of length {expected}, found length {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone {cone} has a generator of negative height")]
    NegativeHeight { cone: usize },
    #[error("cone {cone} is not strongly convex")]
    NotStronglyConvex { cone: usize },
    #[error("cones {first} and {second} do not meet in a common face")]
    NotAFan { first: usize, second: usize },
    #[error("vertex {ray:?} (height-scaled) is not a lattice point")]
    NonIntegralVertex { ray: Vec<i64> },
    #[error("the polyhedral complex is not complete")]
    NotComplete,
    #[error("the recession cones do not form a fan")]
    RecessionNotFan,
    #[error("{0:?} is not a vertex of the complex")]
    NotAVertex(Vec<i64>),
    #[error("a cell must have at least one vertex")]
    EmptyCell,
}

pub(crate) fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Primitive integer vector on the ray through a nonzero rational vector.
pub(crate) fn primitive_integer(v: &[Rational]) -> Vec<i64> {
    let l = v
        .iter()
        .fold(num_bigint::BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().expect("coordinate exceeds i64")
        })
        .collect()
}

pub(crate) fn dot_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn is_negative_height(v: &[i64]) -> bool {
    v.last().is_some_and(|h| h.is_negative())
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
