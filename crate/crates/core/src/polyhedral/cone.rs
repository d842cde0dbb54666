use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use num_traits::{Signed, Zero};

use super::{combinations, dot_int, primitive, primitive_integer, PolyhedralError};
use crate::arith::{nullspace, rat, Rational};

/// A facet of a cone: inward normal and the indices of the rays it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub rays: Vec<usize>,
}

/// A strongly convex rational polyhedral cone, stored by its primitive extreme
/// rays together with an exact face description.
///
/// Two cones compare equal when they have the same ambient dimension and the
/// same extreme rays.
#[derive(Debug, Clone)]
pub struct Cone {
    ambient: usize,
    rays: Vec<Vec<i64>>,
    dim: usize,
    equations: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    faces: Vec<Vec<usize>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.rays.hash(state);
    }
}

impl Cone {
    /// Cone generated by `generators` in `Q^ambient`. Redundant generators are
    /// dropped; the zero vector is ignored.
    pub fn new(ambient: usize, generators: &[Vec<i64>]) -> Result<Cone, PolyhedralError> {
        for g in generators {
            if g.len() != ambient {
                return Err(PolyhedralError::DimensionMismatch {
                    expected: ambient,
                    found: g.len(),
                });
            }
        }
        let gens: BTreeSet<Vec<i64>> = generators
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .map(|g| primitive(g))
            .collect();
        let gens: Vec<Vec<i64>> = gens.into_iter().collect();
        let cone = Self::from_primitive(ambient, gens)?;
        // keep only extreme rays
        let extreme: Vec<Vec<i64>> = cone
            .faces
            .iter()
            .filter(|f| f.len() == 1)
            .map(|f| cone.rays[f[0]].clone())
            .collect();
        if extreme.len() == cone.rays.len() {
            Ok(cone)
        } else {
            let mut extreme = extreme;
            extreme.sort();
            Self::from_primitive(ambient, extreme)
        }
    }

    pub fn zero(ambient: usize) -> Cone {
        Self::from_primitive(ambient, Vec::new()).expect("zero cone is strongly convex")
    }

    fn from_primitive(ambient: usize, rays: Vec<Vec<i64>>) -> Result<Cone, PolyhedralError> {
        let rows: Vec<Vec<Rational>> = rays
            .iter()
            .map(|g| g.iter().map(|&x| rat(x)).collect())
            .collect();
        let equations: Vec<Vec<i64>> = nullspace(&rows, ambient)
            .iter()
            .map(|v| primitive_integer(v))
            .collect();
        let dim = ambient - equations.len();

        let mut facets: Vec<Facet> = Vec::new();
        if dim > 0 {
            let eq_rows: Vec<Vec<Rational>> = equations
                .iter()
                .map(|e| e.iter().map(|&x| rat(x)).collect())
                .collect();
            for subset in combinations(rays.len(), dim - 1) {
                let mut m = eq_rows.clone();
                m.extend(subset.iter().map(|&i| rows[i].clone()));
                let ns = nullspace(&m, ambient);
                if ns.len() != 1 {
                    continue;
                }
                let mut normal = primitive_integer(&ns[0]);
                let dots: Vec<i64> = rays.iter().map(|g| dot_int(&normal, g)).collect();
                if dots.iter().all(|&d| d <= 0) {
                    normal.iter_mut().for_each(|x| *x = -*x);
                } else if !dots.iter().all(|&d| d >= 0) {
                    continue;
                }
                let on: Vec<usize> = (0..rays.len())
                    .filter(|&i| dot_int(&normal, &rays[i]) == 0)
                    .collect();
                if !facets.iter().any(|f| f.rays == on) {
                    facets.push(Facet { normal, rays: on });
                }
            }
        }

        // every face is an intersection of facets; the cone itself is the empty intersection
        let all: Vec<usize> = (0..rays.len()).collect();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        faces.insert(all);
        let mut frontier: Vec<Vec<usize>> = facets.iter().map(|f| f.rays.clone()).collect();
        while let Some(face) = frontier.pop() {
            if !faces.insert(face.clone()) {
                continue;
            }
            for f in &facets {
                let meet: Vec<usize> = face.iter().copied().filter(|i| f.rays.contains(i)).collect();
                if !faces.contains(&meet) {
                    frontier.push(meet);
                }
            }
        }

        let pointed = dim == 0
            || (!facets.is_empty()
                && facets
                    .iter()
                    .fold(None::<Vec<usize>>, |acc, f| {
                        Some(match acc {
                            None => f.rays.clone(),
                            Some(a) => a.into_iter().filter(|i| f.rays.contains(i)).collect(),
                        })
                    })
                    .is_some_and(|m| m.is_empty()));
        if !pointed {
            return Err(PolyhedralError::NotStronglyConvex { cone: 0 });
        }

        let mut faces: Vec<Vec<usize>> = faces.into_iter().collect();
        faces.sort_by_key(|f| f.len());
        Ok(Cone {
            ambient,
            rays,
            dim,
            equations,
            facets,
            faces,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive extreme rays in lexicographic order.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Integer basis of the orthogonal complement of the linear span.
    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    /// Every face (the cone itself and `{0}` included) as a ray list.
    pub fn faces(&self) -> Vec<Vec<Vec<i64>>> {
        self.faces
            .iter()
            .map(|f| f.iter().map(|&i| self.rays[i].clone()).collect())
            .collect()
    }

    /// Codimension-one faces as ray lists.
    pub fn facet_rays(&self) -> Vec<Vec<Vec<i64>>> {
        self.facets
            .iter()
            .map(|f| f.rays.iter().map(|&i| self.rays[i].clone()).collect())
            .collect()
    }

    pub fn has_face(&self, rays: &[Vec<i64>]) -> bool {
        let Some(idx) = rays
            .iter()
            .map(|r| self.rays.iter().position(|s| s == r))
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        let mut idx = idx;
        idx.sort_unstable();
        self.faces.contains(&idx)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.ambient, "point dimension mismatch");
        self.equations.iter().all(|e| dot_rat(e, x).is_zero())
            && self.facets.iter().all(|f| !dot_rat(&f.normal, x).is_negative())
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| dot_int(e, x) == 0)
            && self.facets.iter().all(|f| dot_int(&f.normal, x) >= 0)
    }

    pub fn relative_interior_contains(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|e| dot_rat(e, x).is_zero())
            && self.facets.iter().all(|f| dot_rat(&f.normal, x).is_positive())
    }

    /// Exact intersection with another cone in the same space.
    pub fn intersection(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient, other.ambient);
        let to_rat = |v: &Vec<i64>| v.iter().map(|&x| rat(x)).collect::<Vec<Rational>>();
        let eq: Vec<Vec<Rational>> = self
            .equations
            .iter()
            .chain(&other.equations)
            .map(to_rat)
            .collect();
        let ineq: Vec<Vec<i64>> = self
            .facets
            .iter()
            .chain(&other.facets)
            .map(|f| f.normal.clone())
            .collect();
        let k = nullspace(&eq, self.ambient).len();
        if k == 0 {
            return Cone::zero(self.ambient);
        }
        let mut candidates = Vec::new();
        for subset in combinations(ineq.len(), k - 1) {
            let mut m = eq.clone();
            m.extend(subset.iter().map(|&i| to_rat(&ineq[i])));
            let ns = nullspace(&m, self.ambient);
            if ns.len() != 1 {
                continue;
            }
            let w = primitive_integer(&ns[0]);
            for s in [w.clone(), w.iter().map(|x| -x).collect()] {
                if ineq.iter().all(|n| dot_int(n, &s) >= 0)
                    && self.contains_int(&s)
                    && other.contains_int(&s)
                {
                    candidates.push(s);
                }
            }
        }
        Cone::new(self.ambient, &candidates).expect("intersection of pointed cones is pointed")
    }
}

fn dot_rat(a: &[i64], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .fold(Rational::zero(), |acc, (&ai, xi)| acc + rat(ai) * xi)
}
