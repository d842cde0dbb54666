use super::{BundleError, Character, ToricBundleData};
use crate::arith::{format_rational, rat, FpMatrix, QMatrix, Rational, ValuationConfig};
use crate::buildings::{AdaptedNorm, OLattice, ResidueValuation};
use crate::polyhedral::{star_fan, Fan, StarFan};

/// Chart of `Phi_nu` on one maximal cone of the star fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueChart {
    /// Index of the cell in the height-one complex.
    pub cell: usize,
    /// Index of `cone(cell - nu)` in the star fan.
    pub star_cone: usize,
    /// Reduced basis of `Lambda / p Lambda`, in coordinates of the lattice's `O`-basis.
    pub basis: FpMatrix,
    pub u: Vec<Vec<i64>>,
}

/// The restriction of a bundle to the special-fiber component of a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRestriction {
    pub vertex: Vec<i64>,
    pub lattice: OLattice,
    pub star: StarFan,
    pub charts: Vec<ResidueChart>,
}

impl VertexRestriction {
    pub fn chart_for_star_cone(&self, cone: usize) -> Option<&ResidueChart> {
        self.charts.iter().find(|c| c.star_cone == cone)
    }

    /// `Phi_nu(y)` as a norm on `Lambda / p Lambda`.
    pub fn phi(&self, y: &[Rational]) -> Result<ResidueValuation, BundleError> {
        if y.len() != self.vertex.len() {
            return Err(BundleError::ShapeMismatch(format!(
                "point has {} coordinates, expected {}",
                y.len(),
                self.vertex.len()
            )));
        }
        let cone = self
            .star
            .fan()
            .maximal_cone_containing(y)
            .ok_or_else(|| BundleError::OutsideStar(y.iter().map(format_rational).collect()))?;
        let chart = self.chart_for_star_cone(cone).expect("chart for every maximal star cone");
        let values = chart
            .u
            .iter()
            .map(|u| Character::new(u.clone(), 0).pair(y))
            .collect();
        Ok(ResidueValuation::new(chart.basis.clone(), values)?)
    }
}

/// Chart of `Phi_0` on a maximal cone of the height-zero fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericChart {
    /// Index of the cone in the height-zero fan.
    pub cone: usize,
    /// Index of the maximal cone of the full fan whose chart was used.
    pub source_cone: usize,
    pub basis: QMatrix,
    pub u: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericRestriction {
    pub fan: Fan,
    pub charts: Vec<GenericChart>,
    pub cfg: ValuationConfig,
}

impl GenericRestriction {
    pub fn chart_for_cone(&self, cone: usize) -> Option<&GenericChart> {
        self.charts.iter().find(|c| c.cone == cone)
    }

    /// `Phi_0(x)`, a valuation on `K^r`.
    pub fn phi0(&self, x: &[Rational]) -> Result<AdaptedNorm, BundleError> {
        let cone = self
            .fan
            .maximal_cone_containing(x)
            .ok_or_else(|| BundleError::OutsideSupport(x.iter().map(format_rational).collect()))?;
        let chart = self.chart_for_cone(cone).expect("chart for every maximal cone");
        let values = chart
            .u
            .iter()
            .map(|u| Character::new(u.clone(), 0).pair(x))
            .collect();
        Ok(AdaptedNorm::new(rat(0), chart.basis.clone(), values, self.cfg)?)
    }
}

impl ToricBundleData {
    pub fn restrict_to_vertex(&self, vertex: &[i64]) -> Result<VertexRestriction, BundleError> {
        let sigma1 = self.fan().sigma1();
        if vertex.len() != sigma1.n() || !sigma1.is_vertex(vertex) {
            return Err(BundleError::NotAVertex(vertex.to_vec()));
        }
        let x: Vec<Rational> = vertex.iter().map(|&a| rat(a)).chain([rat(1)]).collect();
        let integer_values = |chars: &[Character]| -> Vec<i64> {
            // integral characters at an integral vertex give integers
            chars
                .iter()
                .map(|c| c.u.iter().zip(vertex).map(|(a, b)| a * b).sum::<i64>() + c.k)
                .collect()
        };

        let first = self.fan().maximal_cones_at_vertex(vertex)[0];
        let base = self.chart_for_cone(first).expect("chart");
        let lattice = OLattice::new(
            base.basis.clone(),
            integer_values(&base.characters).iter().map(|w| -w).collect(),
            self.cfg(),
        )?
        .canonical();
        debug_assert!(self.eval_in_chart(base, &x).values().len() == self.rank());

        let star = star_fan(sigma1, vertex)?;
        let to_lattice = lattice.o_basis().inverse().expect("lattice basis is invertible");
        let mut charts = Vec::new();
        for &star_cone in star.fan().maximal_indices() {
            let cell = star.cell_of_cone(star_cone);
            let cone = self.fan().cone_of_cell(cell);
            let chart = self.chart_for_cone(cone).ok_or_else(|| {
                BundleError::InternalError(format!("cell {cell} has no maximal-cone chart"))
            })?;
            let mut rescaled = chart.basis.clone();
            for (j, w) in integer_values(&chart.characters).into_iter().enumerate() {
                rescaled.scale_column(j, &self.cfg().power(-w));
            }
            let basis = FpMatrix::reduce(&to_lattice.mul(&rescaled), self.cfg())
                .filter(FpMatrix::is_invertible)
                .ok_or_else(|| {
                    BundleError::InternalError(format!(
                        "rescaled basis of cell {cell} is not an O-basis of the vertex lattice"
                    ))
                })?;
            charts.push(ResidueChart {
                cell,
                star_cone,
                basis,
                u: chart.characters.iter().map(|c| c.u.clone()).collect(),
            });
        }
        Ok(VertexRestriction {
            vertex: vertex.to_vec(),
            lattice,
            star,
            charts,
        })
    }

    pub fn restrict_to_generic(&self) -> Result<GenericRestriction, BundleError> {
        let fan = self.fan().fan();
        let sigma0 = self.fan().sigma0().clone();
        let mut charts = Vec::new();
        for &c0 in sigma0.maximal_indices() {
            let lifted: Vec<Vec<Rational>> = sigma0
                .cone(c0)
                .rays()
                .iter()
                .map(|r| r.iter().map(|&a| rat(a)).chain([rat(0)]).collect())
                .collect();
            let source = fan
                .maximal_indices()
                .iter()
                .copied()
                .find(|&m| lifted.iter().all(|x| fan.cone(m).contains(x)))
                .ok_or_else(|| BundleError::NoCoveringCone(sigma0.cone(c0).rays().to_vec()))?;
            let chart = self.chart_for_cone(source).expect("chart");
            charts.push(GenericChart {
                cone: c0,
                source_cone: source,
                basis: chart.basis.clone(),
                u: chart.characters.iter().map(|c| c.u.clone()).collect(),
            });
        }
        Ok(GenericRestriction {
            fan: sigma0,
            charts,
            cfg: self.cfg(),
        })
    }
}
