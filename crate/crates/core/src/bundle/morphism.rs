use num_traits::Zero;
use serde::Serialize;

use super::{BundleError, ToricBundleData};
use crate::arith::{format_rational, rat, val_nonzero, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismFailure {
    pub cone: Vec<Vec<i64>>,
    /// Index of the source basis vector `b_i`.
    pub basis_index: usize,
    /// Ray generator where `Phi'(F b_i)` drops below `Phi(b_i)`.
    pub ray: Vec<i64>,
    /// `Phi'(F b_i) - Phi(b_i)` along the offending branch at the ray.
    pub deficit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub holds: bool,
    pub failures: Vec<MorphismFailure>,
}

/// Whether `F` (an `r' x r` matrix) satisfies `Phi(x)(e) <= Phi'(x)(F e)` for
/// all `x` and `e`.
///
/// On a maximal cone with charts `(B, alpha)` and `(B', alpha')`, write
/// `F b_i = sum c_j b'_j`. Then `Phi'(x)(F b_i) = min_j (m val(c_j) + alpha'_j(x))`
/// is a minimum of linear forms, so comparing each branch with `alpha_i` on the
/// ray generators of the cone is exact. Checking basis vectors suffices by the
/// ultrametric inequality.
pub fn check_morphism(
    source: &ToricBundleData,
    target: &ToricBundleData,
    f: &QMatrix,
) -> Result<MorphismReport, BundleError> {
    if source.fan() != target.fan() {
        return Err(BundleError::ShapeMismatch(
            "bundles live on different fans".to_string(),
        ));
    }
    if f.nrows() != target.rank() || f.ncols() != source.rank() {
        return Err(BundleError::ShapeMismatch(format!(
            "matrix is {}x{}, expected {}x{}",
            f.nrows(),
            f.ncols(),
            target.rank(),
            source.rank()
        )));
    }
    let fan = source.fan().fan();
    let cfg = source.cfg();
    let mut failures = Vec::new();
    for chart in source.charts() {
        let other = target.chart_for_cone(chart.cone).expect("same fan, same maximal cones");
        let to_target = other.basis.inverse().expect("chart basis is invertible");
        let image = to_target.mul(&f.mul(&chart.basis));
        let rays = fan.cone(chart.cone).rays();
        for (i, alpha) in chart.characters.iter().enumerate() {
            for ray in rays {
                let x: Vec<Rational> = ray.iter().map(|&a| rat(a)).collect();
                let height = x.last().expect("height").clone();
                let lhs = alpha.eval(&x);
                for (j, beta) in other.characters.iter().enumerate() {
                    let c = image.get(j, i);
                    if c.is_zero() {
                        continue;
                    }
                    let branch = rat(val_nonzero(c, cfg)) * &height + beta.eval(&x);
                    if branch < lhs {
                        failures.push(MorphismFailure {
                            cone: rays.to_vec(),
                            basis_index: i,
                            ray: ray.clone(),
                            deficit: format_rational(&(branch - &lhs)),
                        });
                    }
                }
            }
        }
    }
    Ok(MorphismReport {
        holds: failures.is_empty(),
        failures,
    })
}
