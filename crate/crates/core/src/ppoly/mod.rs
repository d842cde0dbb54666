//! Polynomials, piecewise polynomials on fans and the ring of compatible
//! vertex-indexed tuples on the height-one complex.

mod poly;

pub use poly::Poly;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{rank_of_vectors, rat, Rational};
use crate::polyhedral::{star_fan, Fan, PolyComplex, PolyhedralError, StarFan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PPError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Polyhedral(#[from] PolyhedralError),
    #[error("no piece for maximal cone {0:?}")]
    MissingPiece(Vec<Vec<i64>>),
    #[error("cone index {0} is not a maximal cone")]
    NotMaximal(usize),
    #[error("piece on cone {cone:?} is not homogeneous of degree {degree}")]
    NotHomogeneous { cone: Vec<Vec<i64>>, degree: u32 },
    #[error("no piecewise polynomial for vertex {0:?}")]
    MissingVertex(Vec<i64>),
    #[error("{0:?} is not a vertex of the complex")]
    UnknownVertex(Vec<i64>),
    #[error("piecewise polynomial at {0:?} is not defined on the star fan")]
    FanMismatch(Vec<i64>),
    #[error("condition (i) fails at vertex {vertex:?} on face {face:?}")]
    ConditionIFailed {
        vertex: Vec<i64>,
        face: Vec<Vec<i64>>,
    },
    #[error("condition (ii) fails on cell {cell:?} between vertices {nu:?} and {nu_prime:?}")]
    ConditionIIFailed {
        cell: Vec<Vec<i64>>,
        nu: Vec<i64>,
        nu_prime: Vec<i64>,
    },
    #[error("classes live on different complexes")]
    ComplexMismatch,
}

/// One polynomial per maximal cone of a fan, in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    fan: Fan,
    degree: Option<u32>,
    pieces: BTreeMap<usize, Poly>,
}

impl PiecewisePoly {
    /// `pieces` is keyed by cone index in `fan`. With `degree = Some(p)` every
    /// piece must be homogeneous of degree `p`.
    pub fn new(
        fan: Fan,
        pieces: BTreeMap<usize, Poly>,
        degree: Option<u32>,
    ) -> Result<PiecewisePoly, PPError> {
        let n = fan.ambient_dim();
        for (&c, p) in &pieces {
            if !fan.is_maximal(c) {
                return Err(PPError::NotMaximal(c));
            }
            if p.nvars() != n {
                return Err(PolyError::ArityMismatch {
                    expected: n,
                    found: p.nvars(),
                }
                .into());
            }
            if let Some(d) = degree {
                if !p.is_homogeneous_of(d) {
                    return Err(PPError::NotHomogeneous {
                        cone: fan.cone(c).rays().to_vec(),
                        degree: d,
                    });
                }
            }
        }
        if let Some(&m) = fan.maximal_indices().iter().find(|m| !pieces.contains_key(m)) {
            return Err(PPError::MissingPiece(fan.cone(m).rays().to_vec()));
        }
        Ok(PiecewisePoly {
            fan,
            degree,
            pieces,
        })
    }

    pub fn constant(fan: Fan, c: Rational) -> PiecewisePoly {
        let n = fan.ambient_dim();
        let pieces = fan
            .maximal_indices()
            .iter()
            .map(|&m| (m, Poly::constant(n, c.clone())))
            .collect();
        PiecewisePoly {
            fan,
            degree: Some(0),
            pieces,
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn pieces(&self) -> &BTreeMap<usize, Poly> {
        &self.pieces
    }

    pub fn piece(&self, cone: usize) -> Option<&Poly> {
        self.pieces.get(&cone)
    }

    /// The value at `y`, computed with the first maximal cone containing it.
    pub fn eval(&self, y: &[Rational]) -> Option<Rational> {
        let c = self.fan.maximal_cone_containing(y)?;
        self.pieces[&c].eval(y).ok()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.values().all(Poly::is_zero)
    }

    fn combine(
        &self,
        other: &PiecewisePoly,
        degree: Option<u32>,
        op: impl Fn(&Poly, &Poly) -> Poly,
    ) -> Result<PiecewisePoly, PPError> {
        if self.fan != other.fan {
            return Err(PPError::ComplexMismatch);
        }
        let pieces = self
            .pieces
            .iter()
            .map(|(c, p)| (*c, op(p, &other.pieces[c])))
            .collect();
        PiecewisePoly::new(self.fan.clone(), pieces, degree)
    }

    pub fn add(&self, other: &PiecewisePoly) -> Result<PiecewisePoly, PPError> {
        let degree = sum_degree(self.degree, self.is_zero(), other.degree, other.is_zero());
        self.combine(other, degree, |a, b| a + b)
    }

    pub fn mul(&self, other: &PiecewisePoly) -> Result<PiecewisePoly, PPError> {
        let degree = self.degree.zip(other.degree).map(|(a, b)| a + b);
        self.combine(other, degree, |a, b| a * b)
    }
}

/// Degree of a sum; a zero summand takes on the degree of the other one.
fn sum_degree(a: Option<u32>, a_zero: bool, b: Option<u32>, b_zero: bool) -> Option<u32> {
    match () {
        _ if a == b => a,
        _ if a_zero => b,
        _ if b_zero => a,
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityFailure {
    pub face: Vec<Vec<i64>>,
    pub cones: (Vec<Vec<i64>>, Vec<Vec<i64>>),
    /// Difference of the two pieces restricted to the face, in coordinates
    /// `t_k` with respect to independent face rays.
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub passed: bool,
    pub failures: Vec<ContinuityFailure>,
}

/// Independent rays spanning the same space as `rays`.
fn spanning_rays(rays: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for r in rays {
        let v: Vec<Rational> = r.iter().map(|&a| rat(a)).collect();
        basis.push(v);
        if rank_of_vectors(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

/// Exact check that adjacent pieces agree on every common face.
pub fn continuity_check(f: &PiecewisePoly) -> ContinuityReport {
    let fan = &f.fan;
    let maximal = fan.maximal_indices();
    let mut failures = Vec::new();
    for (a, &i) in maximal.iter().enumerate() {
        for &j in &maximal[a + 1..] {
            let face = fan.common_face(i, j);
            let span = spanning_rays(fan.cone(face).rays());
            let diff = (&f.pieces[&i] - &f.pieces[&j]).restrict_to_span(&span);
            if !diff.is_zero() {
                failures.push(ContinuityFailure {
                    face: fan.cone(face).rays().to_vec(),
                    cones: (fan.cone(i).rays().to_vec(), fan.cone(j).rays().to_vec()),
                    difference: diff.to_string().replace('x', "t"),
                });
            }
        }
    }
    ContinuityReport {
        passed: failures.is_empty(),
        failures,
    }
}

/// A certified element of the ring of piecewise polynomials on the
/// height-one complex: one piecewise polynomial on each star fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPClass {
    complex: PolyComplex,
    degree: Option<u32>,
    stars: BTreeMap<Vec<i64>, StarFan>,
    parts: BTreeMap<Vec<i64>, PiecewisePoly>,
}

impl PPClass {
    pub fn complex(&self) -> &PolyComplex {
        &self.complex
    }

    /// `None` for a class mixing several degrees.
    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.parts.keys()
    }

    pub fn part(&self, vertex: &[i64]) -> Option<&PiecewisePoly> {
        self.parts.get(vertex)
    }

    pub fn star(&self, vertex: &[i64]) -> Option<&StarFan> {
        self.stars.get(vertex)
    }

    /// The piece of `f_vertex` on the star cone coming from a maximal cell.
    pub fn piece_on_cell(&self, vertex: &[i64], cell: usize) -> Option<&Poly> {
        let cone = self.stars.get(vertex)?.cone_of_cell(cell)?;
        self.parts.get(vertex)?.piece(cone)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(PiecewisePoly::is_zero)
    }

    /// The constant class `c`.
    pub fn constant(complex: &PolyComplex, c: Rational) -> Result<PPClass, PPError> {
        let mut parts = BTreeMap::new();
        for v in complex.vertices() {
            let star = star_fan(complex, &v)?;
            parts.insert(v, PiecewisePoly::constant(star.fan().clone(), c.clone()));
        }
        pp_membership(complex, parts, Some(0))
    }

    pub fn unit(complex: &PolyComplex) -> Result<PPClass, PPError> {
        Self::constant(complex, rat(1))
    }

    /// Builds a candidate from pieces keyed by vertex and by maximal cell index,
    /// then certifies it.
    pub fn from_cell_pieces(
        complex: &PolyComplex,
        pieces: &BTreeMap<Vec<i64>, BTreeMap<usize, Poly>>,
        degree: Option<u32>,
    ) -> Result<PPClass, PPError> {
        let mut parts = BTreeMap::new();
        for (v, by_cell) in pieces {
            let star = star_fan(complex, v)?;
            let mut by_cone = BTreeMap::new();
            for (&cell, p) in by_cell {
                let cone = star
                    .cone_of_cell(cell)
                    .ok_or_else(|| PPError::FanMismatch(v.clone()))?;
                by_cone.insert(cone, p.clone());
            }
            parts.insert(v.clone(), PiecewisePoly::new(star.fan().clone(), by_cone, degree)?);
        }
        pp_membership(complex, parts, degree)
    }
}

/// Certifies a vertex-indexed tuple: each part is continuous on its star fan
/// and homogeneous of the given degree, and the pieces attached to a cell by
/// any two of its vertices agree on the cell's direction space.
pub fn pp_membership(
    complex: &PolyComplex,
    parts: BTreeMap<Vec<i64>, PiecewisePoly>,
    degree: Option<u32>,
) -> Result<PPClass, PPError> {
    let vertices = complex.vertices();
    if let Some(v) = parts.keys().find(|v| !vertices.contains(v)) {
        return Err(PPError::UnknownVertex(v.clone()));
    }
    let mut stars = BTreeMap::new();
    for v in &vertices {
        let f = parts.get(v).ok_or_else(|| PPError::MissingVertex(v.clone()))?;
        let star = star_fan(complex, v)?;
        if f.fan() != star.fan() {
            return Err(PPError::FanMismatch(v.clone()));
        }
        if let Some(d) = degree {
            for (&c, p) in f.pieces() {
                if !p.is_homogeneous_of(d) {
                    return Err(PPError::ConditionIFailed {
                        vertex: v.clone(),
                        face: star.fan().cone(c).rays().to_vec(),
                    });
                }
            }
        }
        if let Some(bad) = continuity_check(f).failures.into_iter().next() {
            return Err(PPError::ConditionIFailed {
                vertex: v.clone(),
                face: bad.face,
            });
        }
        stars.insert(v.clone(), star);
    }

    for (idx, cell) in complex.cells().iter().enumerate() {
        if cell.vertices().len() < 2 {
            continue;
        }
        let span: Vec<Vec<Rational>> = {
            let dirs = cell.direction_vectors();
            spanning_rays(&dirs)
        };
        let restricted = |v: &Vec<i64>| -> Poly {
            let star = &stars[v];
            let cone = star.cone_of_cell(idx).expect("cell contains the vertex");
            let m = star.fan().maximal_cones_over(cone)[0];
            parts[v].pieces()[&m].restrict_to_span(&span)
        };
        let vs = cell.vertices();
        let first = restricted(&vs[0]);
        for other in &vs[1..] {
            if restricted(other) != first {
                let mut cell_desc = cell.vertices().to_vec();
                cell_desc.extend(cell.rays().iter().cloned());
                return Err(PPError::ConditionIIFailed {
                    cell: cell_desc,
                    nu: vs[0].clone(),
                    nu_prime: other.clone(),
                });
            }
        }
    }
    Ok(PPClass {
        complex: complex.clone(),
        degree,
        stars,
        parts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
}

/// Vertexwise and conewise sum or product, re-certified.
pub fn pp_ring(a: &PPClass, b: &PPClass, op: RingOp) -> Result<PPClass, PPError> {
    if a.complex != b.complex {
        return Err(PPError::ComplexMismatch);
    }
    let degree = match op {
        RingOp::Add => sum_degree(a.degree, a.is_zero(), b.degree, b.is_zero()),
        RingOp::Mul => a.degree.zip(b.degree).map(|(x, y)| x + y),
    };
    let mut parts = BTreeMap::new();
    for (v, f) in &a.parts {
        let g = &b.parts[v];
        let h = match op {
            RingOp::Add => f.add(g)?,
            RingOp::Mul => f.mul(g)?,
        };
        parts.insert(v.clone(), h);
    }
    pp_membership(&a.complex, parts, degree)
}
