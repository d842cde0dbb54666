use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::Serialize;

use super::complex::PolyComplex;
use super::{is_negative_height, Cone, PolyhedralError};
use crate::arith::{rat, smith_invariants, Rational};

/// A rational polyhedral fan: every face of every cone is stored, sorted by
/// dimension and then by ray list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    ambient: usize,
    cones: Vec<Cone>,
    maximal: Vec<usize>,
}

impl Fan {
    /// Fan generated by the given cones (and all their faces). No sign
    /// condition is imposed on coordinates; see [`build_fan`] for fans over a DVR.
    pub fn new(ambient: usize, generators: &[Vec<Vec<i64>>]) -> Result<Fan, PolyhedralError> {
        let mut built = Vec::with_capacity(generators.len());
        for (i, gens) in generators.iter().enumerate() {
            let cone = Cone::new(ambient, gens).map_err(|e| match e {
                PolyhedralError::NotStronglyConvex { .. } => {
                    PolyhedralError::NotStronglyConvex { cone: i }
                }
                other => other,
            })?;
            built.push(cone);
        }
        for i in 0..built.len() {
            for j in i + 1..built.len() {
                let meet = built[i].intersection(&built[j]);
                if !built[i].has_face(meet.rays()) || !built[j].has_face(meet.rays()) {
                    return Err(PolyhedralError::NotAFan {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self::from_cones(ambient, &built))
    }

    fn from_cones(ambient: usize, built: &[Cone]) -> Fan {
        let mut all: BTreeMap<Vec<Vec<i64>>, Cone> = BTreeMap::new();
        let mut proper: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        for cone in built {
            for face in cone.faces() {
                if face.len() < cone.rays().len() {
                    proper.insert(face.clone());
                }
                if !all.contains_key(&face) {
                    let c = if face.len() == cone.rays().len() {
                        cone.clone()
                    } else {
                        Cone::new(ambient, &face).expect("faces of pointed cones are pointed")
                    };
                    all.insert(face, c);
                }
            }
        }
        let mut cones: Vec<Cone> = all.into_values().collect();
        cones.sort_by(|a, b| (a.dim(), a.rays()).cmp(&(b.dim(), b.rays())));
        let maximal = (0..cones.len())
            .filter(|&i| !proper.contains(cones[i].rays()))
            .collect();
        Fan {
            ambient,
            cones,
            maximal,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Largest cone dimension, or `None` for the empty fan.
    pub fn dim(&self) -> Option<usize> {
        self.cones.iter().map(Cone::dim).max()
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn maximal_indices(&self) -> &[usize] {
        &self.maximal
    }

    pub fn maximal_cones(&self) -> impl Iterator<Item = &Cone> {
        self.maximal.iter().map(|&i| &self.cones[i])
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.maximal.contains(&i)
    }

    /// Primitive generators of the one-dimensional cones.
    pub fn rays(&self) -> Vec<Vec<i64>> {
        self.cones
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| c.rays()[0].clone())
            .collect()
    }

    pub fn index_of(&self, rays: &[Vec<i64>]) -> Option<usize> {
        let mut key = rays.to_vec();
        key.sort();
        self.cones.iter().position(|c| c.rays() == key.as_slice())
    }

    /// The common face of two stored cones.
    pub fn common_face(&self, i: usize, j: usize) -> usize {
        let rays: Vec<Vec<i64>> = self.cones[i]
            .rays()
            .iter()
            .filter(|r| self.cones[j].rays().contains(r))
            .cloned()
            .collect();
        self.index_of(&rays).expect("fan is closed under intersection")
    }

    /// First maximal cone containing `x`.
    pub fn maximal_cone_containing(&self, x: &[Rational]) -> Option<usize> {
        self.maximal
            .iter()
            .copied()
            .find(|&i| self.cones[i].contains(x))
    }

    /// The unique cone whose relative interior contains `x`.
    pub fn carrier(&self, x: &[Rational]) -> Option<usize> {
        self.cones
            .iter()
            .position(|c| c.relative_interior_contains(x))
    }

    /// Maximal cones having the `i`-th cone as a face.
    pub fn maximal_cones_over(&self, i: usize) -> Vec<usize> {
        let face = self.cones[i].rays();
        self.maximal
            .iter()
            .copied()
            .filter(|&m| self.cones[m].has_face(face))
            .collect()
    }

    /// Subfan of cones contained in the hyperplane `last coordinate = 0`,
    /// re-expressed in the first `ambient - 1` coordinates.
    pub fn height_zero_subfan(&self) -> Fan {
        let gens: Vec<Vec<Vec<i64>>> = self
            .cones
            .iter()
            .filter(|c| c.rays().iter().all(|r| r.last() == Some(&0)))
            .map(|c| {
                c.rays()
                    .iter()
                    .map(|r| r[..r.len() - 1].to_vec())
                    .collect()
            })
            .collect();
        Fan::new(self.ambient - 1, &gens).expect("a subfan of a fan is a fan")
    }

    /// Completeness failures of the fan as a fan in all of `Q^ambient`.
    pub fn completeness_failures(&self) -> Vec<String> {
        self.completeness_failures_impl(false)
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_failures().is_empty()
    }

    fn completeness_failures_impl(&self, half_space: bool) -> Vec<String> {
        let d = self.ambient;
        let mut failures = Vec::new();
        if self.cones.is_empty() {
            failures.push("fan has no cones".to_string());
            return failures;
        }
        for c in self.maximal_cones() {
            if c.dim() != d {
                failures.push(format!(
                    "maximal cone {:?} has dimension {} < {}",
                    c.rays(),
                    c.dim(),
                    d
                ));
            }
        }
        if !failures.is_empty() {
            return failures;
        }
        let mut shared: BTreeMap<Vec<Vec<i64>>, usize> = BTreeMap::new();
        for c in self.maximal_cones() {
            for f in c.facet_rays() {
                *shared.entry(f).or_default() += 1;
            }
        }
        for (facet, count) in &shared {
            let boundary = half_space && facet.iter().all(|r| r.last() == Some(&0));
            let expected = if boundary { 1 } else { 2 };
            if *count != expected {
                failures.push(format!(
                    "facet {:?} lies in {} maximal cones, expected {}",
                    facet, count, expected
                ));
            }
        }
        // support sanity check on a box of lattice points
        let mut point = vec![-2i64; d];
        if half_space {
            point[d - 1] = 0;
        }
        loop {
            let x: Vec<Rational> = point.iter().map(|&v| rat(v)).collect();
            if self.maximal_cone_containing(&x).is_none() {
                failures.push(format!("point {:?} is not covered", point));
                break;
            }
            let mut k = 0;
            loop {
                if k == d {
                    return failures;
                }
                if point[k] < 2 {
                    point[k] += 1;
                    break;
                }
                point[k] = if half_space && k == d - 1 { 0 } else { -2 };
                k += 1;
            }
        }
        failures
    }

    fn regularity_failures(&self) -> Vec<String> {
        let mut failures = Vec::new();
        for c in &self.cones {
            if c.rays().is_empty() {
                continue;
            }
            if c.rays().len() > self.ambient {
                failures.push(format!("cone {:?} is not simplicial", c.rays()));
                continue;
            }
            let inv = smith_invariants(c.rays());
            if !inv.iter().all(|x| x.is_one()) {
                let shown: Vec<String> = inv.iter().map(|x| x.to_string()).collect();
                failures.push(format!(
                    "cone {:?} has Smith invariants ({})",
                    c.rays(),
                    shown.join(",")
                ));
            }
        }
        failures
    }
}

/// Fan in `N_R x R>=0` from generator lists; every generator must have
/// nonnegative last coordinate.
pub fn build_fan(ambient: usize, cones: &[Vec<Vec<i64>>]) -> Result<Fan, PolyhedralError> {
    for (i, gens) in cones.iter().enumerate() {
        if gens.iter().any(|g| is_negative_height(g)) {
            return Err(PolyhedralError::NegativeHeight { cone: i });
        }
    }
    Fan::new(ambient, cones)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slice {
    Complex(PolyComplex),
    Fan(Fan),
}

/// Intersection of a fan over a DVR with height 1 (a complex) or height 0 (a fan).
pub fn slice(fan: &Fan, level: u8) -> Result<Slice, PolyhedralError> {
    match level {
        0 => Ok(Slice::Fan(fan.height_zero_subfan())),
        1 => PolyComplex::from_height_one(fan).map(Slice::Complex),
        _ => panic!("slice level must be 0 or 1"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub complete: bool,
    pub regular: bool,
    pub failures: Vec<String>,
}

/// Completeness in the half-space `height >= 0` and unimodularity of every cone.
pub fn check_regular_complete(fan: &Fan) -> RegularityReport {
    let complete = fan.completeness_failures_impl(true);
    let regular = fan.regularity_failures();
    RegularityReport {
        complete: complete.is_empty(),
        regular: regular.is_empty(),
        failures: complete.into_iter().chain(regular).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1_fan() -> Fan {
        build_fan(
            2,
            &[
                vec![vec![0, 1]],
                vec![vec![0, 1], vec![1, 0]],
                vec![vec![0, 1], vec![-1, 0]],
                vec![vec![1, 0]],
                vec![vec![-1, 0]],
                vec![],
            ],
        )
        .unwrap()
    }

    #[test]
    fn p1_over_dvr_is_a_fan() {
        let f = p1_fan();
        assert_eq!(f.cones().len(), 6);
        assert_eq!(f.maximal_indices().len(), 2);
        assert_eq!(f.rays(), vec![vec![-1, 0], vec![0, 1], vec![1, 0]]);
        let r = check_regular_complete(&f);
        assert!(r.complete && r.regular, "{:?}", r.failures);
    }

    #[test]
    fn line_is_rejected() {
        assert_eq!(
            build_fan(2, &[vec![vec![1, 0], vec![-1, 0]]]),
            Err(PolyhedralError::NotStronglyConvex { cone: 0 })
        );
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        assert_eq!(
            build_fan(2, &[vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![0, 1]]]),
            Err(PolyhedralError::NotAFan {
                first: 0,
                second: 1
            })
        );
    }

    #[test]
    fn negative_height_is_rejected() {
        assert_eq!(
            build_fan(2, &[vec![vec![1, -1]]]),
            Err(PolyhedralError::NegativeHeight { cone: 0 })
        );
    }

    #[test]
    fn non_unimodular_cone_is_not_regular() {
        let f = Fan::new(2, &[vec![vec![1, 1], vec![1, -1]]]).unwrap();
        let r = check_regular_complete(&f);
        assert!(!r.regular);
        assert!(r.failures.iter().any(|s| s.contains("(1,2)")));
        let g = build_fan(2, &[vec![vec![1, 1], vec![-1, 1]]]).unwrap();
        assert!(!check_regular_complete(&g).regular);
    }

    #[test]
    fn quadrant_pieces_are_incomplete() {
        let f = build_fan(2, &[vec![], vec![vec![1, 0]], vec![vec![0, 1]]]).unwrap();
        let r = check_regular_complete(&f);
        assert!(!r.complete);
        assert!(r.regular);
    }

    #[test]
    fn height_zero_slice_is_p1() {
        let Slice::Fan(s0) = slice(&p1_fan(), 0).unwrap() else {
            panic!("expected a fan");
        };
        assert_eq!(s0, Fan::new(1, &[vec![vec![1]], vec![vec![-1]]]).unwrap());
        assert!(s0.is_complete());
        assert_eq!(s0.cones().len(), 3);
    }

    #[test]
    fn carrier_and_common_face() {
        let f = p1_fan();
        let origin_ray = f.index_of(&[vec![0, 1]]).unwrap();
        assert_eq!(f.carrier(&[rat(0), rat(3)]), Some(origin_ray));
        let m = f.maximal_indices();
        assert_eq!(f.common_face(m[0], m[1]), origin_ray);
        assert_eq!(f.maximal_cones_over(origin_ray).len(), 2);
    }
}
