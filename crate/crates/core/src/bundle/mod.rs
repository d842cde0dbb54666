//! Toric vector bundles given by one Klyachko chart per maximal cone.

mod morphism;
mod restrict;

pub use morphism::{check_morphism, MorphismFailure, MorphismReport};
pub use restrict::{GenericChart, GenericRestriction, ResidueChart, VertexRestriction};

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{format_rational, rat, QMatrix, Rational, ValuationConfig};
use crate::buildings::{norms_equal, AdaptedNorm, BuildingError};
use crate::polyhedral::{FanOverDvr, PolyhedralError};
use crate::sampling;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error(transparent)]
    Polyhedral(#[from] PolyhedralError),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error("no chart for maximal cone {0:?}")]
    MissingChart(Vec<Vec<i64>>),
    #[error("two charts for cone {0:?}")]
    DuplicateChart(Vec<Vec<i64>>),
    #[error("cone {0:?} is not a maximal cone of the fan")]
    NotMaximal(Vec<Vec<i64>>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("chart basis for cone {0:?} is singular")]
    SingularBasis(Vec<Vec<i64>>),
    #[error("point {0:?} lies outside the support of the fan")]
    OutsideSupport(Vec<String>),
    #[error("{0:?} is not a vertex of the height-one complex")]
    NotAVertex(Vec<i64>),
    #[error("point {0:?} lies outside the star fan")]
    OutsideStar(Vec<String>),
    #[error("no maximal cone covers the height-zero cone {0:?}")]
    NoCoveringCone(Vec<Vec<i64>>),
    #[error("internal inconsistency: {0}")]
    InternalError(String),
}

/// `(u, k)` in `M x Z`; at `(xi, m)` it takes the value `<u, xi> + k m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub u: Vec<i64>,
    pub k: i64,
}

impl Character {
    pub fn new(u: Vec<i64>, k: i64) -> Character {
        Character { u, k }
    }

    /// Value at a point of `N_R x R>=0` (last coordinate is the height).
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let (xi, m) = x.split_at(self.u.len());
        self.pair(xi) + rat(self.k) * &m[0]
    }

    /// `<u, y>` for `y` in `N_R`.
    pub fn pair(&self, y: &[Rational]) -> Rational {
        self.u
            .iter()
            .zip(y)
            .fold(rat(0), |acc, (&a, b)| acc + rat(a) * b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleChart {
    /// Index of the maximal cone in the fan's cone list.
    pub cone: usize,
    /// Adapted basis as columns.
    pub basis: QMatrix,
    pub characters: Vec<Character>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricBundleData {
    fan: FanOverDvr,
    rank: usize,
    charts: Vec<BundleChart>,
    cfg: ValuationConfig,
}

impl ToricBundleData {
    /// Checks shapes and that every maximal cone carries exactly one chart.
    /// Charts are stored in the order of the fan's maximal cones.
    pub fn new(
        fan: FanOverDvr,
        rank: usize,
        charts: Vec<BundleChart>,
        cfg: ValuationConfig,
    ) -> Result<ToricBundleData, BundleError> {
        let n = fan.n();
        let rays_of = |i: usize| fan.fan().cone(i).rays().to_vec();
        let mut ordered: Vec<Option<BundleChart>> = vec![None; fan.fan().maximal_indices().len()];
        for chart in charts {
            if chart.cone >= fan.fan().cones().len() {
                return Err(BundleError::ShapeMismatch(format!(
                    "cone index {} out of range",
                    chart.cone
                )));
            }
            let Some(slot) = fan
                .fan()
                .maximal_indices()
                .iter()
                .position(|&m| m == chart.cone)
            else {
                return Err(BundleError::NotMaximal(rays_of(chart.cone)));
            };
            if chart.basis.nrows() != rank || chart.basis.ncols() != rank {
                return Err(BundleError::ShapeMismatch(format!(
                    "basis of cone {:?} is {}x{}, expected {rank}x{rank}",
                    rays_of(chart.cone),
                    chart.basis.nrows(),
                    chart.basis.ncols()
                )));
            }
            if chart.characters.len() != rank || chart.characters.iter().any(|c| c.u.len() != n) {
                return Err(BundleError::ShapeMismatch(format!(
                    "cone {:?} needs {rank} characters in M x Z with n = {n}",
                    rays_of(chart.cone)
                )));
            }
            if !chart.basis.is_invertible() {
                return Err(BundleError::SingularBasis(rays_of(chart.cone)));
            }
            if ordered[slot].is_some() {
                return Err(BundleError::DuplicateChart(rays_of(chart.cone)));
            }
            ordered[slot] = Some(chart);
        }
        let charts = ordered
            .into_iter()
            .zip(fan.fan().maximal_indices())
            .map(|(c, &m)| c.ok_or_else(|| BundleError::MissingChart(rays_of(m))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ToricBundleData {
            fan,
            rank,
            charts,
            cfg,
        })
    }

    pub fn fan(&self) -> &FanOverDvr {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cfg(&self) -> ValuationConfig {
        self.cfg
    }

    pub fn charts(&self) -> &[BundleChart] {
        &self.charts
    }

    /// Chart attached to the maximal cone with the given fan index.
    pub fn chart_for_cone(&self, cone: usize) -> Option<&BundleChart> {
        self.charts.iter().find(|c| c.cone == cone)
    }

    /// The norm given by one chart at `x`, regardless of whether `x` lies in its cone.
    pub fn eval_in_chart(&self, chart: &BundleChart, x: &[Rational]) -> AdaptedNorm {
        let m = x.last().expect("point has a height").clone();
        let values = chart.characters.iter().map(|c| c.eval(x)).collect();
        AdaptedNorm::new(m, chart.basis.clone(), values, self.cfg).expect("chart basis is invertible")
    }

    /// `Phi(x)` for `x` in `N_R x R>=0`.
    pub fn eval_phi(&self, x: &[Rational]) -> Result<AdaptedNorm, BundleError> {
        if x.len() != self.fan.n() + 1 {
            return Err(BundleError::ShapeMismatch(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.fan.n() + 1
            )));
        }
        let outside = || BundleError::OutsideSupport(x.iter().map(format_rational).collect());
        if x[x.len() - 1].is_negative() {
            return Err(outside());
        }
        let cone = self.fan.fan().maximal_cone_containing(x).ok_or_else(outside)?;
        let chart = self.chart_for_cone(cone).expect("every maximal cone has a chart");
        Ok(self.eval_in_chart(chart, x))
    }

    /// Sampled check that charts of adjacent maximal cones define the same norm
    /// on their common face.
    pub fn validate(&self, seed: u64, sample_density: usize) -> ValidationReport {
        let fan = self.fan.fan();
        let d = fan.ambient_dim();
        let mut rng = sampling::rng(seed);
        let mut failures = Vec::new();
        let mut checked = 0;
        let maximal = fan.maximal_indices();
        for (a, &sa) in maximal.iter().enumerate() {
            for &sb in &maximal[a + 1..] {
                let face = fan.common_face(sa, sb);
                let rays = fan.cone(face).rays();
                let ca = self.chart_for_cone(sa).expect("chart");
                let cb = self.chart_for_cone(sb).expect("chart");
                for x in face_test_points(rays, d, sample_density, &mut rng) {
                    checked += 1;
                    let na = self.eval_in_chart(ca, &x);
                    let nb = self.eval_in_chart(cb, &x);
                    if !norms_equal(&na, &nb).unwrap_or(false) {
                        failures.push(GluingFailure {
                            face: rays.to_vec(),
                            cones: (fan.cone(sa).rays().to_vec(), fan.cone(sb).rays().to_vec()),
                            point: x.iter().map(format_rational).collect(),
                            values: (
                                na.values().iter().map(format_rational).collect(),
                                nb.values().iter().map(format_rational).collect(),
                            ),
                        });
                    }
                }
            }
        }
        ValidationReport {
            passed: failures.is_empty(),
            seed,
            sample_density,
            points_checked: checked,
            failures,
        }
    }
}

/// Vertices, vertex-plus-ray points, the barycenter of a bounded slice,
/// height-zero rays and a seeded lattice sample of a face.
fn face_test_points<R: rand::Rng>(
    rays: &[Vec<i64>],
    d: usize,
    density: usize,
    rng: &mut R,
) -> Vec<Vec<Rational>> {
    let to_q = |v: &[i64]| v.iter().map(|&a| rat(a)).collect::<Vec<Rational>>();
    let vertices: Vec<&Vec<i64>> = rays.iter().filter(|r| r[d - 1] == 1).collect();
    let mut pts: Vec<Vec<Rational>> = Vec::new();
    for v in &vertices {
        pts.push(to_q(v));
        for r in rays.iter().filter(|r| r != v) {
            for k in 1..=2 {
                pts.push(v.iter().zip(r).map(|(a, b)| rat(a + k * b)).collect());
            }
        }
    }
    if !vertices.is_empty() && rays.iter().all(|r| r[d - 1] == 1) {
        let k = rat(vertices.len() as i64);
        pts.push(
            (0..d)
                .map(|i| rat(vertices.iter().map(|v| v[i]).sum()) / &k)
                .collect(),
        );
    }
    pts.extend(rays.iter().filter(|r| r[d - 1] == 0).map(|r| to_q(r)));
    pts.extend(sampling::lattice_points(rays, d, density, rng));
    pts
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingFailure {
    pub face: Vec<Vec<i64>>,
    pub cones: (Vec<Vec<i64>>, Vec<Vec<i64>>),
    pub point: Vec<String>,
    pub values: (Vec<String>, Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub seed: u64,
    pub sample_density: usize,
    pub points_checked: usize,
    pub failures: Vec<GluingFailure>,
}
