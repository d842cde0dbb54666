//! Additive norms on `E = Q^r`, `O`-lattices and their filtrations, and the
//! residue-field norms describing the link of a lattice.

mod link;

pub use link::{epsilon, link_norm, unlink_norm, LevelZeroNorm, ResidueValuation};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{
    ceil_to_i64, floor_to_i64, is_integer, padic_val, rank_of_vectors, val_nonzero, Extended,
    QMatrix, Rational, ValuationConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error("level must be nonnegative, got {0}")]
    NegativeLevel(String),
    #[error("expected size {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("norm values are not all integers")]
    NonIntegerValues,
    #[error("norms have different levels ({left} and {right})")]
    LevelMismatch { left: String, right: String },
    #[error("residue characteristics differ")]
    PrimeMismatch,
    #[error("norm is not in the link of the lattice")]
    NotInLink,
    #[error("residue norm values must lie in [0,1)")]
    ValuesOutOfRange,
    #[error("index {index} outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("internal inconsistency: {0}")]
    InternalError(String),
}

/// The level-`m` norm `sum l_i b_i |-> min(m val(l_i) + values[i])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedNorm {
    level: Rational,
    basis: QMatrix,
    inverse: QMatrix,
    values: Vec<Rational>,
    cfg: ValuationConfig,
}

impl AdaptedNorm {
    /// `basis` holds the adapted basis as columns.
    pub fn new(
        level: Rational,
        basis: QMatrix,
        values: Vec<Rational>,
        cfg: ValuationConfig,
    ) -> Result<AdaptedNorm, BuildingError> {
        if level.is_negative() {
            return Err(BuildingError::NegativeLevel(level.to_string()));
        }
        if !basis.is_square() {
            return Err(BuildingError::ShapeMismatch {
                expected: basis.nrows(),
                found: basis.ncols(),
            });
        }
        if values.len() != basis.ncols() {
            return Err(BuildingError::ShapeMismatch {
                expected: basis.ncols(),
                found: values.len(),
            });
        }
        let inverse = basis.inverse().ok_or(BuildingError::SingularBasis)?;
        Ok(AdaptedNorm {
            level,
            basis,
            inverse,
            values,
            cfg,
        })
    }

    pub fn standard(level: Rational, values: Vec<Rational>, cfg: ValuationConfig) -> AdaptedNorm {
        let r = values.len();
        Self::new(level, QMatrix::identity(r), values, cfg).expect("identity basis")
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn cfg(&self) -> ValuationConfig {
        self.cfg
    }

    /// Coordinates of `e` in the adapted basis.
    pub fn coordinates(&self, e: &[Rational]) -> Vec<Rational> {
        self.inverse.mul_vec(e)
    }

    pub fn norm_eval(&self, e: &[Rational]) -> Extended<Rational> {
        self.coordinates(e)
            .iter()
            .zip(&self.values)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| &self.level * Rational::from_integer(val_nonzero(c, self.cfg).into()) + v)
            .min()
            .map_or(Extended::Infinity, Extended::Finite)
    }

    /// `c * omega`, a norm of level `c * m`.
    pub fn scale(&self, c: &Rational) -> AdaptedNorm {
        assert!(!c.is_negative(), "scaling factor must be nonnegative");
        AdaptedNorm {
            level: &self.level * c,
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// `omega + c`.
    pub fn shift(&self, c: &Rational) -> AdaptedNorm {
        AdaptedNorm {
            values: self.values.iter().map(|v| v + c).collect(),
            ..self.clone()
        }
    }
}

/// The lattice `sum O p^{a_i} b_i`.
#[derive(Debug, Clone)]
pub struct OLattice {
    basis: QMatrix,
    exponents: Vec<i64>,
    cfg: ValuationConfig,
}

impl OLattice {
    pub fn new(
        basis: QMatrix,
        exponents: Vec<i64>,
        cfg: ValuationConfig,
    ) -> Result<OLattice, BuildingError> {
        if !basis.is_square() || exponents.len() != basis.ncols() {
            return Err(BuildingError::ShapeMismatch {
                expected: basis.ncols(),
                found: exponents.len(),
            });
        }
        if !basis.is_invertible() {
            return Err(BuildingError::SingularBasis);
        }
        Ok(OLattice {
            basis,
            exponents,
            cfg,
        })
    }

    /// `O^r`.
    pub fn standard(r: usize, cfg: ValuationConfig) -> OLattice {
        Self::new(QMatrix::identity(r), vec![0; r], cfg).expect("identity basis")
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn cfg(&self) -> ValuationConfig {
        self.cfg
    }

    /// An `O`-basis: the columns `p^{a_i} b_i`.
    pub fn o_basis(&self) -> QMatrix {
        let mut m = self.basis.clone();
        for (j, &a) in self.exponents.iter().enumerate() {
            m.scale_column(j, &self.cfg.power(a));
        }
        m
    }

    /// The same lattice with its canonical `O`-basis: lower triangular, diagonal
    /// entries powers of `p`, and each entry below the diagonal a representative
    /// `m / p^s` with `0 <= m < p^s` modulo the diagonal entry of its row.
    pub fn canonical(&self) -> OLattice {
        let r = self.rank();
        let cfg = self.cfg;
        let mut a = self.o_basis();
        let sub_col = |a: &mut QMatrix, j: usize, i: usize, q: &Rational| {
            for row in 0..r {
                let v = a.get(row, j) - q * a.get(row, i);
                a.set(row, j, v);
            }
        };
        for i in 0..r {
            let j = (i..r)
                .filter(|&j| !a.get(i, j).is_zero())
                .min_by_key(|&j| val_nonzero(a.get(i, j), cfg))
                .expect("lattice basis is invertible");
            if j != i {
                for row in 0..r {
                    let t = a.get(row, i).clone();
                    a.set(row, i, a.get(row, j).clone());
                    a.set(row, j, t);
                }
            }
            let piv = a.get(i, i).clone();
            let unit = &piv / cfg.power(val_nonzero(&piv, cfg));
            a.scale_column(i, &unit.recip());
            for j in i + 1..r {
                if !a.get(i, j).is_zero() {
                    let q = a.get(i, j) / a.get(i, i);
                    sub_col(&mut a, j, i, &q);
                }
            }
        }
        for j in 0..r {
            for i in j + 1..r {
                let t = a.get(i, j) / a.get(i, i);
                let q = t.clone() - fractional_part(&t, cfg);
                if !q.is_zero() {
                    sub_col(&mut a, j, i, &q);
                }
            }
        }
        OLattice {
            basis: a,
            exponents: vec![0; r],
            cfg,
        }
    }

    pub fn contains(&self, e: &[Rational]) -> bool {
        let inv = self.o_basis().inverse().expect("lattice basis is invertible");
        inv.mul_vec(e)
            .iter()
            .all(|c| padic_val(c, self.cfg) >= Extended::Finite(0))
    }

    pub fn contains_lattice(&self, other: &OLattice) -> bool {
        other.o_basis().columns().iter().all(|c| self.contains(c))
    }
}

/// The representative `m / p^s` (`0 <= m < p^s`) of `t` modulo `Z_(p)`.
fn fractional_part(t: &Rational, cfg: ValuationConfig) -> Rational {
    if t.is_zero() || val_nonzero(t, cfg) >= 0 {
        return Rational::zero();
    }
    let s = -val_nonzero(t, cfg);
    let ps = cfg.power(s).to_integer();
    let d_prime = t.denom() / &ps;
    let inv = d_prime.extended_gcd(&ps).x.mod_floor(&ps);
    let m = (t.numer() * inv).mod_floor(&ps);
    Rational::new(m, ps)
}

impl PartialEq for OLattice {
    fn eq(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }
}

impl Eq for OLattice {}

/// `omega_Lambda`, adapted to the basis of the lattice with values `-a_i`.
pub fn lattice_to_norm(lattice: &OLattice) -> AdaptedNorm {
    AdaptedNorm::new(
        Rational::from_integer(1.into()),
        lattice.basis.clone(),
        lattice.exponents.iter().map(|&a| Rational::from_integer((-a).into())).collect(),
        lattice.cfg,
    )
    .expect("lattice basis is invertible")
}

/// `Lambda_omega = E_{omega >= 0}` for an integer-valued norm of level 1.
pub fn norm_to_lattice(norm: &AdaptedNorm) -> Result<OLattice, BuildingError> {
    let one = Rational::from_integer(1.into());
    if norm.level != one {
        return Err(BuildingError::LevelMismatch {
            left: norm.level.to_string(),
            right: one.to_string(),
        });
    }
    if !norm.values.iter().all(is_integer) {
        return Err(BuildingError::NonIntegerValues);
    }
    Ok(OLattice {
        basis: norm.basis.clone(),
        exponents: norm.values.iter().map(|v| -floor_to_i64(v)).collect(),
        cfg: norm.cfg,
    })
}

/// A `K`-subspace of `K^r` given by spanning vectors.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    spanning: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        rank_of_vectors(&self.spanning)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn spanning(&self) -> &[Vec<Rational>] {
        &self.spanning
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        let joint: Vec<Vec<Rational>> = self
            .spanning
            .iter()
            .chain(&other.spanning)
            .cloned()
            .collect();
        let d = rank_of_vectors(&joint);
        self.ambient == other.ambient && self.dim() == d && other.dim() == d
    }
}

impl Eq for Subspace {}

/// `E_{omega >= a}`: a lattice for positive level, a subspace for level 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationStep {
    Lattice(OLattice),
    Subspace(Subspace),
}

pub fn filtration_step(norm: &AdaptedNorm, a: &Rational) -> FiltrationStep {
    if norm.level.is_zero() {
        FiltrationStep::Subspace(Subspace {
            ambient: norm.rank(),
            spanning: norm
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| *v >= a)
                .map(|(i, _)| norm.basis.column(i))
                .collect(),
        })
    } else {
        let exponents = norm
            .values
            .iter()
            .map(|v| ceil_to_i64(&((a - v) / &norm.level)))
            .collect();
        FiltrationStep::Lattice(OLattice {
            basis: norm.basis.clone(),
            exponents,
            cfg: norm.cfg,
        })
    }
}

/// Thresholds at which the filtrations of both norms must be compared.
fn thresholds(level: &Rational, values: impl Iterator<Item = Rational>) -> Vec<Rational> {
    let mut ts: Vec<Rational> = values
        .map(|v| {
            if level.is_zero() {
                v
            } else {
                let q = (&v / level).floor();
                v - q * level
            }
        })
        .collect();
    ts.sort();
    ts.dedup();
    ts
}

/// Whether two norms of the same level agree on all of `E`.
pub fn norms_equal(a: &AdaptedNorm, b: &AdaptedNorm) -> Result<bool, BuildingError> {
    if a.level != b.level {
        return Err(BuildingError::LevelMismatch {
            left: a.level.to_string(),
            right: b.level.to_string(),
        });
    }
    if a.rank() != b.rank() {
        return Err(BuildingError::ShapeMismatch {
            expected: a.rank(),
            found: b.rank(),
        });
    }
    if a.cfg != b.cfg {
        return Err(BuildingError::PrimeMismatch);
    }
    let ts = thresholds(&a.level, a.values.iter().chain(&b.values).cloned());
    Ok(ts
        .iter()
        .all(|t| filtration_step(a, t) == filtration_step(b, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat};

    fn cfg() -> ValuationConfig {
        ValuationConfig::new(2).unwrap()
    }

    fn std_norm(level: i64, values: &[Rational]) -> AdaptedNorm {
        AdaptedNorm::standard(rat(level), values.to_vec(), cfg())
    }

    #[test]
    fn eval_examples() {
        let w = std_norm(1, &[rat(0), rat(0)]);
        assert_eq!(w.norm_eval(&[rat(4), rat(6)]), Extended::Finite(rat(1)));
        assert_eq!(w.norm_eval(&[rat(0), rat(0)]), Extended::Infinity);
        let w0 = std_norm(0, &[rat(0), rat(0)]);
        assert_eq!(w0.norm_eval(&[rat(4), rat(6)]), Extended::Finite(rat(0)));
    }

    #[test]
    fn singular_basis_rejected() {
        let b = QMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(
            AdaptedNorm::new(rat(1), b, vec![rat(0), rat(0)], cfg()),
            Err(BuildingError::SingularBasis)
        );
    }

    #[test]
    fn lattice_norm_round_trip() {
        let l = OLattice::standard(2, cfg());
        let w = lattice_to_norm(&l);
        assert_eq!(w.values(), &[rat(0), rat(0)]);
        assert_eq!(norm_to_lattice(&w).unwrap(), l);

        let w = std_norm(1, &[rat(2), rat(-1)]);
        let l = norm_to_lattice(&w).unwrap();
        assert_eq!(l.exponents(), &[-2, 1]);
        assert!(l.contains(&[frac(1, 4), rat(2)]));
        assert!(!l.contains(&[frac(1, 8), rat(2)]));
        assert!(!l.contains(&[rat(0), rat(1)]));
        assert!(norms_equal(&lattice_to_norm(&l), &w).unwrap());

        assert_eq!(
            norm_to_lattice(&std_norm(1, &[frac(1, 2), rat(0)])),
            Err(BuildingError::NonIntegerValues)
        );
    }

    #[test]
    fn filtration_examples() {
        let w = std_norm(1, &[rat(0), rat(0)]);
        assert_eq!(
            filtration_step(&w, &rat(0)),
            FiltrationStep::Lattice(OLattice::standard(2, cfg()))
        );
        let FiltrationStep::Lattice(l) = filtration_step(&w, &frac(1, 2)) else {
            panic!()
        };
        assert_eq!(l.exponents(), &[1, 1]);
        // brute force: p^j e_i lies in E_{>=1/2} exactly when j >= 1
        for j in -2..3 {
            for i in 0..2 {
                let mut e = vec![rat(0), rat(0)];
                e[i] = cfg().power(j);
                let inside = w.norm_eval(&e) >= Extended::Finite(frac(1, 2));
                assert_eq!(l.contains(&e), inside);
            }
        }
        let w0 = std_norm(0, &[rat(1), rat(0)]);
        let FiltrationStep::Subspace(s) = filtration_step(&w0, &frac(1, 2)) else {
            panic!()
        };
        assert_eq!(s.dim(), 1);
        assert_eq!(s.spanning(), &[vec![rat(1), rat(0)]]);
    }

    #[test]
    fn norms_equal_examples() {
        let a = std_norm(1, &[rat(0), rat(0)]);
        let b = AdaptedNorm::new(
            rat(1),
            QMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]),
            vec![rat(0), rat(0)],
            cfg(),
        )
        .unwrap();
        assert!(norms_equal(&a, &b).unwrap());
        for x in -2..=2 {
            for y in -2..=2 {
                for j in -1..=1 {
                    let e = [rat(x) * cfg().power(j), rat(y) * cfg().power(j)];
                    assert_eq!(a.norm_eval(&e), b.norm_eval(&e));
                }
            }
        }
        assert!(!norms_equal(&std_norm(1, &[rat(0), rat(1)]), &std_norm(1, &[rat(1), rat(0)])).unwrap());
        assert!(matches!(
            norms_equal(&std_norm(0, &[rat(0)]), &std_norm(1, &[rat(0)])),
            Err(BuildingError::LevelMismatch { .. })
        ));
    }

    #[test]
    fn scaling_and_shifting() {
        let w = std_norm(1, &[frac(1, 2), rat(0)]);
        let e = [rat(2), rat(3)];
        let s = w.scale(&rat(3));
        assert_eq!(s.level(), &rat(3));
        let Extended::Finite(v) = w.norm_eval(&e) else { panic!() };
        assert_eq!(s.norm_eval(&e), Extended::Finite(v.clone() * rat(3)));
        assert_eq!(w.shift(&rat(1)).norm_eval(&e), Extended::Finite(v + rat(1)));
    }

    #[test]
    fn canonical_lattice_basis() {
        let b = QMatrix::from_int_rows(&[vec![2, 1], vec![0, 1]]);
        let l = OLattice::new(b, vec![-1, 0], cfg()).unwrap();
        let c = l.canonical();
        assert_eq!(c, l);
        assert_eq!(c.basis(), &QMatrix::identity(2));

        let b = QMatrix::from_rows(vec![vec![rat(6), rat(0)], vec![frac(7, 4), rat(4)]]);
        let l = OLattice::new(b, vec![0, 0], cfg()).unwrap();
        let c = l.canonical();
        assert_eq!(c, l);
        assert_eq!(c.basis().get(0, 1), &rat(0));
        assert_eq!(c.basis().get(0, 0), &rat(2));
        assert_eq!(c.basis().get(1, 1), &rat(4));
        // 7/4 / 2 ... reduced modulo 4 O
        let below = c.basis().get(1, 0).clone();
        assert!(below >= rat(0) && below < rat(4));
        assert_eq!(c.canonical().basis(), c.basis());
    }
}
