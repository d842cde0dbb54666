//! Equivariant Chern classes of toric bundles as piecewise polynomials.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{rat, Rational};
use crate::buildings::{epsilon, BuildingError};
use crate::bundle::{BundleError, ToricBundleData};
use crate::polyhedral::{star_fan, PolyhedralError};
use crate::ppoly::{
    continuity_check, pp_membership, ContinuityFailure, PPClass, PPError, PiecewisePoly, Poly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Polyhedral(#[from] PolyhedralError),
    #[error(transparent)]
    Membership(#[from] PPError),
    #[error("index {index} outside 0..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("generic Chern polynomial is discontinuous on {} faces", .0.len())]
    GenericDiscontinuous(Vec<ContinuityFailure>),
    #[error("internal inconsistency: {0}")]
    InternalError(String),
}

/// All Chern classes `c_0, ..., c_r` together with their generic-fiber versions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernResult {
    pub classes: Vec<PPClass>,
    pub generic: Vec<PiecewisePoly>,
}

fn check_index(e: &ToricBundleData, i: usize) -> Result<(), ChernError> {
    if i > e.rank() {
        Err(ChernError::IndexOutOfRange {
            index: i,
            rank: e.rank(),
        })
    } else {
        Ok(())
    }
}

/// Per vertex and maximal star cone, `e_0 .. e_r` of the chart's linear forms.
fn symmetric_pieces(
    e: &ToricBundleData,
) -> Result<BTreeMap<Vec<i64>, (crate::polyhedral::StarFan, BTreeMap<usize, Vec<Poly>>)>, ChernError>
{
    let n = e.fan().n();
    let sigma1 = e.fan().sigma1();
    let mut out = BTreeMap::new();
    for v in sigma1.vertices() {
        let star = star_fan(sigma1, &v)?;
        let mut pieces = BTreeMap::new();
        for &c in star.fan().maximal_indices() {
            let cone = e.fan().cone_of_cell(star.cell_of_cone(c));
            let chart = e.chart_for_cone(cone).ok_or_else(|| {
                ChernError::InternalError(format!("no chart on the cone over the cell of {c}"))
            })?;
            let forms: Vec<Poly> = chart
                .characters
                .iter()
                .map(|ch| Poly::linear_form_int(&ch.u))
                .collect();
            pieces.insert(c, Poly::elementary_symmetric(n, &forms));
        }
        out.insert(v, (star, pieces));
    }
    Ok(out)
}

/// `c_i^T`: on the star cone of a cell, `e_i(<u_1,y>, ..., <u_r,y>)` for the
/// cell's chart characters. The tuple is certified before it is returned.
pub fn chern_class(e: &ToricBundleData, i: usize) -> Result<PPClass, ChernError> {
    check_index(e, i)?;
    let mut parts = BTreeMap::new();
    for (v, (star, pieces)) in symmetric_pieces(e)? {
        let by_cone = pieces.into_iter().map(|(c, es)| (c, es[i].clone())).collect();
        parts.insert(v, PiecewisePoly::new(star.fan().clone(), by_cone, Some(i as u32))?);
    }
    Ok(pp_membership(e.fan().sigma1(), parts, Some(i as u32))?)
}

/// `sum_i c_i^T`, a class of mixed degree.
pub fn chern_total(e: &ToricBundleData) -> Result<PPClass, ChernError> {
    let n = e.fan().n();
    let mut parts = BTreeMap::new();
    for (v, (star, pieces)) in symmetric_pieces(e)? {
        let by_cone = pieces
            .into_iter()
            .map(|(c, es)| (c, es.iter().fold(Poly::zero(n), |acc, p| &acc + p)))
            .collect();
        parts.insert(v, PiecewisePoly::new(star.fan().clone(), by_cone, None)?);
    }
    Ok(pp_membership(e.fan().sigma1(), parts, None)?)
}

/// The `i`-th Chern polynomial of the generic fiber on the height-zero fan.
pub fn chern_generic(e: &ToricBundleData, i: usize) -> Result<PiecewisePoly, ChernError> {
    check_index(e, i)?;
    let g = e.restrict_to_generic()?;
    let n = e.fan().n();
    let pieces = g
        .charts
        .iter()
        .map(|c| {
            let forms: Vec<Poly> = c.u.iter().map(|u| Poly::linear_form_int(u)).collect();
            (c.cone, Poly::elementary_symmetric(n, &forms).swap_remove(i))
        })
        .collect();
    let f = PiecewisePoly::new(g.fan.clone(), pieces, Some(i as u32))?;
    let report = continuity_check(&f);
    if !report.passed {
        return Err(ChernError::GenericDiscontinuous(report.failures));
    }
    Ok(f)
}

/// `epsilon_i(Phi_nu(y))` computed from the residue norm of the vertex
/// restriction by counting filtration jumps.
pub fn epsilon_oracle(
    e: &ToricBundleData,
    vertex: &[i64],
    i: usize,
    y: &[Rational],
) -> Result<Rational, ChernError> {
    let restriction = e.restrict_to_vertex(vertex)?;
    let phi = restriction.phi(y)?;
    if i == 0 {
        return Ok(rat(1));
    }
    Ok(epsilon(&phi, i)?)
}

pub fn chern_all(e: &ToricBundleData) -> Result<ChernResult, ChernError> {
    let classes = (0..=e.rank())
        .map(|i| chern_class(e, i))
        .collect::<Result<Vec<_>, _>>()?;
    let generic = (0..=e.rank())
        .map(|i| chern_generic(e, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChernResult { classes, generic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::tests::p1_bundle;

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    fn piece(c: &PPClass, v: &[i64], ray: i64) -> Poly {
        let star = c.star(v).unwrap();
        let cone = star.fan().index_of(&[vec![ray]]).unwrap();
        c.part(v).unwrap().piece(cone).unwrap().clone()
    }

    #[test]
    fn rank_one_first_class() {
        let e = p1_bundle(&[(1, 0)], &[(0, 0)]);
        let c1 = chern_class(&e, 1).unwrap();
        assert_eq!(piece(&c1, &[0], 1), x());
        assert_eq!(piece(&c1, &[0], -1), Poly::zero(1));
        assert_eq!(epsilon_oracle(&e, &[0], 1, &[rat(3)]).unwrap(), rat(3));

        let g = chern_generic(&e, 1).unwrap();
        let plus = g.fan().index_of(&[vec![1]]).unwrap();
        let minus = g.fan().index_of(&[vec![-1]]).unwrap();
        assert_eq!(g.piece(plus), Some(&x()));
        assert_eq!(g.piece(minus), Some(&Poly::zero(1)));
    }

    #[test]
    fn split_rank_two() {
        let e = p1_bundle(&[(1, 0), (-1, 0)], &[(1, 0), (-1, 0)]);
        assert!(chern_class(&e, 1).unwrap().is_zero());
        let c2 = chern_class(&e, 2).unwrap();
        assert_eq!(piece(&c2, &[0], 1), -&x().pow(2));
        assert_eq!(piece(&c2, &[0], -1), -&x().pow(2));
        assert_eq!(epsilon_oracle(&e, &[0], 2, &[rat(1)]).unwrap(), rat(-1));
        assert_eq!(epsilon_oracle(&e, &[0], 1, &[rat(0)]).unwrap(), rat(0));
        assert_eq!(
            chern_class(&e, 3),
            Err(ChernError::IndexOutOfRange { index: 3, rank: 2 })
        );
    }

    #[test]
    fn zeroth_class_is_unit() {
        let e = p1_bundle(&[(1, 0), (-1, 0)], &[(1, 0), (-1, 0)]);
        let c0 = chern_class(&e, 0).unwrap();
        assert_eq!(c0, PPClass::unit(e.fan().sigma1()).unwrap());
    }

    #[test]
    fn trivial_bundle_has_zero_generic_classes() {
        let e = p1_bundle(&[(0, 0), (0, 0)], &[(0, 0), (0, 0)]);
        for i in 1..=2 {
            assert!(chern_generic(&e, i).unwrap().is_zero());
        }
    }

    #[test]
    fn total_class_sums_degrees() {
        let e = p1_bundle(&[(1, 0), (2, 0)], &[(0, 0), (-1, 0)]);
        let total = chern_total(&e).unwrap();
        assert_eq!(total.degree(), None);
        let expected = &(&Poly::one(1) + &x()) * &(&Poly::one(1) + &x().scale(&rat(2)));
        assert_eq!(piece(&total, &[0], 1), expected);
        let all = chern_all(&e).unwrap();
        assert_eq!(all.classes.len(), 3);
        assert_eq!(all.generic.len(), 3);
    }

    #[test]
    fn oracle_rejects_bad_points() {
        let e = p1_bundle(&[(1, 0)], &[(0, 0)]);
        assert!(matches!(
            epsilon_oracle(&e, &[0], 1, &[rat(1), rat(1)]),
            Err(ChernError::Bundle(BundleError::ShapeMismatch(_)))
        ));
        assert!(matches!(
            epsilon_oracle(&e, &[5], 1, &[rat(1)]),
            Err(ChernError::Bundle(BundleError::NotAVertex(_)))
        ));
    }
}
