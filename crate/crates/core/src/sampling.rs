//! Seeded sample points inside rational cones.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{frac, rat, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonnegative integer combinations of `rays` with coefficients in `0..=4`,
/// deduplicated and in draw order.
pub fn lattice_points<R: Rng>(
    rays: &[Vec<i64>],
    ambient: usize,
    count: usize,
    rng: &mut R,
) -> Vec<Vec<Rational>> {
    draw(ambient, count, rng, |rng| {
        combine(rays, ambient, |_| rat(rng.gen_range(0..=4)))
    })
}

/// Points `(sum c_j rays_j) / d` with `c_j` in `0..=50` and `d` in `1..=7`,
/// deduplicated and in draw order.
pub fn rational_points<R: Rng>(
    rays: &[Vec<i64>],
    ambient: usize,
    count: usize,
    rng: &mut R,
) -> Vec<Vec<Rational>> {
    draw(ambient, count, rng, |rng| {
        let d = rng.gen_range(1..=7);
        combine(rays, ambient, |_| frac(rng.gen_range(0..=50), d))
    })
}

fn combine(
    rays: &[Vec<i64>],
    ambient: usize,
    mut coeff: impl FnMut(usize) -> Rational,
) -> Vec<Rational> {
    let mut x = vec![rat(0); ambient];
    for (j, r) in rays.iter().enumerate() {
        let c = coeff(j);
        for (xi, &ri) in x.iter_mut().zip(r) {
            *xi += &c * rat(ri);
        }
    }
    x
}

fn draw<R: Rng>(
    ambient: usize,
    count: usize,
    rng: &mut R,
    mut one: impl FnMut(&mut R) -> Vec<Rational>,
) -> Vec<Vec<Rational>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count.saturating_mul(10) {
        if out.len() == count {
            break;
        }
        let x = one(rng);
        debug_assert_eq!(x.len(), ambient);
        if seen.insert(x.clone()) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible_and_distinct() {
        let rays = vec![vec![1, 0], vec![1, 1]];
        let a = rational_points(&rays, 2, 100, &mut rng(7));
        let b = rational_points(&rays, 2, 100, &mut rng(7));
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), 100);
        for x in &a {
            assert!(x[1] >= rat(0) && x[0] >= x[1]);
        }
    }

    #[test]
    fn zero_cone_yields_origin() {
        let pts = lattice_points(&[], 3, 5, &mut rng(1));
        assert_eq!(pts, vec![vec![rat(0); 3]]);
    }
}
