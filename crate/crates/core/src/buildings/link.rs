use num_traits::{One, Signed, Zero};

use super::{AdaptedNorm, BuildingError, OLattice};
use crate::arith::{
    elementary_symmetric, floor_to_i64, rank_of_vectors_mod_p, Extended, FpMatrix, Rational,
};

/// A level-0 norm on `F_p^r` (trivial valuation on the field), adapted to a
/// basis given as matrix columns.
#[derive(Debug, Clone)]
pub struct ResidueValuation {
    basis: FpMatrix,
    values: Vec<Rational>,
}

impl ResidueValuation {
    pub fn new(basis: FpMatrix, values: Vec<Rational>) -> Result<ResidueValuation, BuildingError> {
        if basis.ncols() != values.len() || basis.nrows() != values.len() {
            return Err(BuildingError::ShapeMismatch {
                expected: values.len(),
                found: basis.ncols(),
            });
        }
        if !basis.is_invertible() {
            return Err(BuildingError::SingularBasis);
        }
        Ok(ResidueValuation { basis, values })
    }

    /// All values zero.
    pub fn trivial(r: usize, p: u64) -> ResidueValuation {
        Self::new(FpMatrix::identity(r, p), vec![Rational::zero(); r]).expect("identity basis")
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn p(&self) -> u64 {
        self.basis.p()
    }

    pub fn eval(&self, e: &[u64]) -> Extended<Rational> {
        let coords = self.basis.solve(e).expect("basis is invertible");
        coords
            .iter()
            .zip(&self.values)
            .filter(|(c, _)| **c != 0)
            .map(|(_, v)| v.clone())
            .min()
            .map_or(Extended::Infinity, Extended::Finite)
    }

    fn step(&self, a: &Rational) -> Vec<Vec<u64>> {
        (0..self.values.len())
            .filter(|&i| &self.values[i] >= a)
            .map(|i| self.basis.column(i))
            .collect()
    }
}

impl PartialEq for ResidueValuation {
    fn eq(&self, other: &Self) -> bool {
        if self.p() != other.p() || self.values.len() != other.values.len() {
            return false;
        }
        let p = self.p();
        self.values.iter().chain(&other.values).all(|a| {
            let s = self.step(a);
            let t = other.step(a);
            let joint: Vec<Vec<u64>> = s.iter().chain(&t).cloned().collect();
            let d = rank_of_vectors_mod_p(&joint, p);
            rank_of_vectors_mod_p(&s, p) == d && rank_of_vectors_mod_p(&t, p) == d
        })
    }
}

impl Eq for ResidueValuation {}

/// Level-zero norms whose filtration dimensions can be measured.
pub trait LevelZeroNorm {
    fn rank(&self) -> usize;
    fn values(&self) -> &[Rational];
    /// `dim E_{omega >= a}`.
    fn filtration_dim(&self, a: &Rational) -> usize;
    fn check_level_zero(&self) -> Result<(), BuildingError> {
        Ok(())
    }
}

impl LevelZeroNorm for ResidueValuation {
    fn rank(&self) -> usize {
        self.values.len()
    }

    fn values(&self) -> &[Rational] {
        &self.values
    }

    fn filtration_dim(&self, a: &Rational) -> usize {
        rank_of_vectors_mod_p(&self.step(a), self.p())
    }
}

impl LevelZeroNorm for AdaptedNorm {
    fn rank(&self) -> usize {
        self.values.len()
    }

    fn values(&self) -> &[Rational] {
        &self.values
    }

    fn filtration_dim(&self, a: &Rational) -> usize {
        match super::filtration_step(self, a) {
            super::FiltrationStep::Subspace(s) => s.dim(),
            super::FiltrationStep::Lattice(_) => unreachable!("level-zero norm"),
        }
    }

    fn check_level_zero(&self) -> Result<(), BuildingError> {
        if self.level.is_zero() {
            Ok(())
        } else {
            Err(BuildingError::LevelMismatch {
                left: self.level.to_string(),
                right: "0".to_string(),
            })
        }
    }
}

/// `e_i` of the values counted with their dimension jumps. The result is
/// cross-checked against `e_i` of the adapted values.
pub fn epsilon<N: LevelZeroNorm>(norm: &N, i: usize) -> Result<Rational, BuildingError> {
    norm.check_level_zero()?;
    let r = norm.rank();
    if i == 0 || i > r {
        return Err(BuildingError::IndexOutOfRange { index: i, rank: r });
    }
    let mut distinct = norm.values().to_vec();
    distinct.sort();
    distinct.dedup();
    let mut multiset = Vec::with_capacity(r);
    for (j, a) in distinct.iter().enumerate() {
        let above = distinct
            .get(j + 1)
            .map_or(0, |next| norm.filtration_dim(next));
        let jump = norm.filtration_dim(a) - above;
        multiset.extend(std::iter::repeat_n(a.clone(), jump));
    }
    let via_jumps = elementary_symmetric(&multiset)[i].clone();
    let direct = elementary_symmetric(norm.values())[i].clone();
    if via_jumps != direct {
        return Err(BuildingError::InternalError(format!(
            "epsilon mismatch: {via_jumps} from jumps, {direct} from values"
        )));
    }
    Ok(via_jumps)
}

/// The point of the link of `Lambda` corresponding to a level-1 norm near
/// `omega_Lambda`. Basis columns are first rescaled by powers of `p` so that
/// the values land in `[0,1)`.
pub fn link_norm(
    lattice: &OLattice,
    norm: &AdaptedNorm,
) -> Result<ResidueValuation, BuildingError> {
    if !norm.level.is_one() {
        return Err(BuildingError::LevelMismatch {
            left: norm.level.to_string(),
            right: "1".to_string(),
        });
    }
    if norm.rank() != lattice.rank() {
        return Err(BuildingError::ShapeMismatch {
            expected: lattice.rank(),
            found: norm.rank(),
        });
    }
    if norm.cfg != lattice.cfg {
        return Err(BuildingError::PrimeMismatch);
    }
    let mut rescaled = norm.basis.clone();
    let mut values = Vec::with_capacity(norm.rank());
    for (j, v) in norm.values.iter().enumerate() {
        let f = floor_to_i64(v);
        rescaled.scale_column(j, &norm.cfg.power(-f));
        values.push(v - Rational::from_integer(f.into()));
    }
    let coords = lattice
        .o_basis()
        .inverse()
        .expect("lattice basis is invertible")
        .mul(&rescaled);
    let reduced = FpMatrix::reduce(&coords, norm.cfg).ok_or(BuildingError::NotInLink)?;
    if !reduced.is_invertible() {
        return Err(BuildingError::NotInLink);
    }
    ResidueValuation::new(reduced, values)
}

/// Inverse of [`link_norm`]: lifts the residue basis into `Lambda` and keeps the values.
pub fn unlink_norm(
    lattice: &OLattice,
    residue: &ResidueValuation,
) -> Result<AdaptedNorm, BuildingError> {
    if residue
        .values
        .iter()
        .any(|v| v.is_negative() || v >= &Rational::one())
    {
        return Err(BuildingError::ValuesOutOfRange);
    }
    if residue.p() != lattice.cfg.p() {
        return Err(BuildingError::PrimeMismatch);
    }
    if residue.values.len() != lattice.rank() {
        return Err(BuildingError::ShapeMismatch {
            expected: lattice.rank(),
            found: residue.values.len(),
        });
    }
    let basis = lattice.o_basis().mul(&residue.basis.lift());
    AdaptedNorm::new(Rational::one(), basis, residue.values.clone(), lattice.cfg)
}
