use std::collections::BTreeSet;

use num_traits::Zero;

use super::fan::check_regular_complete;
use super::{Cone, Fan, PolyhedralError};
use crate::arith::{rank_of_vectors, rat, Rational};

/// A polyhedron in `N_R x {1}`, given by its integral vertices and the
/// primitive generators of its recession cone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    vertices: Vec<Vec<i64>>,
    rays: Vec<Vec<i64>>,
}

impl Cell {
    fn new(mut vertices: Vec<Vec<i64>>, mut rays: Vec<Vec<i64>>) -> Cell {
        vertices.sort();
        vertices.dedup();
        rays.sort();
        rays.dedup();
        Cell { vertices, rays }
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Vectors spanning the direction space of the affine hull.
    pub fn direction_vectors(&self) -> Vec<Vec<i64>> {
        let v0 = &self.vertices[0];
        self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .chain(self.rays.iter().cloned())
            .collect()
    }

    pub fn dim(&self) -> usize {
        let dirs: Vec<Vec<Rational>> = self
            .direction_vectors()
            .iter()
            .map(|v| v.iter().map(|&x| rat(x)).collect())
            .collect();
        rank_of_vectors(&dirs)
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn has_vertex(&self, v: &[i64]) -> bool {
        self.vertices.iter().any(|w| w == v)
    }

    /// Generators `(v,1)` and `(r,0)` of the cone over the cell.
    pub fn cone_generators(&self) -> Vec<Vec<i64>> {
        self.vertices
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(1);
                w
            })
            .chain(self.rays.iter().map(|r| {
                let mut w = r.clone();
                w.push(0);
                w
            }))
            .collect()
    }

    /// Generators of `cone(cell - v)` in `N_R`.
    pub fn tangent_generators(&self, v: &[i64]) -> Vec<Vec<i64>> {
        self.vertices
            .iter()
            .filter(|w| w.as_slice() != v)
            .map(|w| w.iter().zip(v).map(|(a, b)| a - b).collect())
            .chain(self.rays.iter().cloned())
            .collect()
    }

    /// A point of the relative interior: the vertex average plus the ray sum.
    pub fn interior_point(&self) -> Vec<Rational> {
        let n = self.ambient_dim();
        let k = rat(self.vertices.len() as i64);
        (0..n)
            .map(|i| {
                let s: i64 = self.vertices.iter().map(|v| v[i]).sum();
                rat(s) / &k + rat(self.rays.iter().map(|r| r[i]).sum())
            })
            .collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let cone = Cone::new(self.ambient_dim() + 1, &self.cone_generators())
            .expect("cone over a cell is pointed");
        let mut y = x.to_vec();
        y.push(rat(1));
        cone.contains(&y)
    }

    /// Whether `self` is a face of `other`.
    pub fn is_face_of(&self, other: &Cell) -> bool {
        self.vertices.iter().all(|v| other.vertices.contains(v))
            && self.rays.iter().all(|r| other.rays.contains(r))
    }
}

/// The height-one slice of a fan over a DVR, with every face stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyComplex {
    n: usize,
    cells: Vec<Cell>,
}

impl PolyComplex {
    /// Complex generated by cells `(vertices, rays)` in `N_R` of dimension `n`.
    pub fn new(
        n: usize,
        cells: &[(Vec<Vec<i64>>, Vec<Vec<i64>>)],
    ) -> Result<PolyComplex, PolyhedralError> {
        let mut gens = Vec::with_capacity(cells.len());
        for (vertices, rays) in cells {
            if vertices.is_empty() {
                return Err(PolyhedralError::EmptyCell);
            }
            for v in vertices.iter().chain(rays) {
                if v.len() != n {
                    return Err(PolyhedralError::DimensionMismatch {
                        expected: n,
                        found: v.len(),
                    });
                }
            }
            gens.push(Cell::new(vertices.clone(), rays.clone()).cone_generators());
        }
        let fan = Fan::new(n + 1, &gens)?;
        Self::from_height_one(&fan)
    }

    pub(crate) fn from_height_one(fan: &Fan) -> Result<PolyComplex, PolyhedralError> {
        let n = fan.ambient_dim() - 1;
        let mut cells = BTreeSet::new();
        for cone in fan.cones() {
            let mut vertices = Vec::new();
            let mut rays = Vec::new();
            for r in cone.rays() {
                match r[n] {
                    0 => rays.push(r[..n].to_vec()),
                    1 => vertices.push(r[..n].to_vec()),
                    _ => return Err(PolyhedralError::NonIntegralVertex { ray: r.clone() }),
                }
            }
            if !vertices.is_empty() {
                cells.insert(Cell::new(vertices, rays));
            }
        }
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort_by_cached_key(|c| (c.dim(), c.clone()));
        Ok(PolyComplex { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        self.cells.iter().position(|c| c == cell)
    }

    pub fn find_cell(&self, vertices: &[Vec<i64>], rays: &[Vec<i64>]) -> Option<usize> {
        self.index_of(&Cell::new(vertices.to_vec(), rays.to_vec()))
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut vs: Vec<Vec<i64>> = self
            .cells
            .iter()
            .filter(|c| c.vertices.len() == 1 && c.rays.is_empty())
            .map(|c| c.vertices[0].clone())
            .collect();
        vs.sort();
        vs
    }

    pub fn is_vertex(&self, v: &[i64]) -> bool {
        self.cells
            .iter()
            .any(|c| c.rays.is_empty() && c.vertices.len() == 1 && c.vertices[0] == v)
    }

    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| {
                !self
                    .cells
                    .iter()
                    .enumerate()
                    .any(|(j, c)| j != i && self.cells[i].is_face_of(c))
            })
            .collect()
    }

    pub fn cells_containing_vertex(&self, v: &[i64]) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].has_vertex(v))
            .collect()
    }

    /// First maximal cell containing `x`.
    pub fn maximal_cell_containing(&self, x: &[Rational]) -> Option<usize> {
        self.maximal_cells()
            .into_iter()
            .find(|&i| self.cells[i].contains(x))
    }

    pub fn is_complete(&self) -> bool {
        cone_over(self).is_ok()
    }
}

/// `c(Sigma_1)`: the cones over cells together with the recession cones at height 0.
pub fn cone_over(sigma1: &PolyComplex) -> Result<Fan, PolyhedralError> {
    let gens: Vec<Vec<Vec<i64>>> = sigma1.cells.iter().map(Cell::cone_generators).collect();
    let fan = Fan::new(sigma1.n + 1, &gens)?;
    if check_regular_complete(&fan).complete {
        Ok(fan)
    } else {
        Err(PolyhedralError::NotComplete)
    }
}

/// The fan of recession cones of the cells.
pub fn recession_fan(sigma1: &PolyComplex) -> Result<Fan, PolyhedralError> {
    let mut gens: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    gens.extend(sigma1.cells.iter().map(|c| c.rays.clone()));
    Fan::new(sigma1.n, &gens).map_err(|e| match e {
        PolyhedralError::NotAFan { .. } => PolyhedralError::RecessionNotFan,
        other => other,
    })
}

/// The star of a complex at a vertex, remembering which cell produced each cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarFan {
    vertex: Vec<i64>,
    fan: Fan,
    cell_of_cone: Vec<usize>,
}

impl StarFan {
    pub fn vertex(&self) -> &[i64] {
        &self.vertex
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Index (in the complex) of the cell whose tangent cone is the `i`-th cone.
    pub fn cell_of_cone(&self, i: usize) -> usize {
        self.cell_of_cone[i]
    }

    pub fn cone_of_cell(&self, cell: usize) -> Option<usize> {
        self.cell_of_cone.iter().position(|&c| c == cell)
    }
}

pub fn star_fan(sigma1: &PolyComplex, vertex: &[i64]) -> Result<StarFan, PolyhedralError> {
    if !sigma1.is_vertex(vertex) {
        return Err(PolyhedralError::NotAVertex(vertex.to_vec()));
    }
    let cells = sigma1.cells_containing_vertex(vertex);
    let gens: Vec<Vec<Vec<i64>>> = cells
        .iter()
        .map(|&i| sigma1.cells[i].tangent_generators(vertex))
        .collect();
    let fan = Fan::new(sigma1.n, &gens)?;
    let mut cell_of_cone = vec![usize::MAX; fan.cones().len()];
    for (&cell, g) in cells.iter().zip(&gens) {
        let cone = Cone::new(sigma1.n, g)?;
        let idx = fan.index_of(cone.rays()).expect("tangent cone is stored");
        cell_of_cone[idx] = cell;
    }
    debug_assert!(cell_of_cone.iter().all(|&c| c != usize::MAX));
    Ok(StarFan {
        vertex: vertex.to_vec(),
        fan,
        cell_of_cone,
    })
}

/// A fan over a DVR with its height-one complex and height-zero fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanOverDvr {
    fan: Fan,
    sigma1: PolyComplex,
    sigma0: Fan,
    cone_of_cell: Vec<usize>,
}

impl FanOverDvr {
    pub fn new(fan: Fan) -> Result<FanOverDvr, PolyhedralError> {
        let sigma1 = PolyComplex::from_height_one(&fan)?;
        let sigma0 = fan.height_zero_subfan();
        let cone_of_cell = sigma1
            .cells
            .iter()
            .map(|c| {
                fan.index_of(&c.cone_generators())
                    .expect("cell comes from a stored cone")
            })
            .collect();
        Ok(FanOverDvr {
            fan,
            sigma1,
            sigma0,
            cone_of_cell,
        })
    }

    pub fn from_complex(sigma1: &PolyComplex) -> Result<FanOverDvr, PolyhedralError> {
        Self::new(cone_over(sigma1)?)
    }

    /// Rank `n` of `N`.
    pub fn n(&self) -> usize {
        self.sigma1.n
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn sigma1(&self) -> &PolyComplex {
        &self.sigma1
    }

    pub fn sigma0(&self) -> &Fan {
        &self.sigma0
    }

    /// Index in [`Self::fan`] of the cone over the given cell.
    pub fn cone_of_cell(&self, cell: usize) -> usize {
        self.cone_of_cell[cell]
    }

    pub fn cell_of_cone(&self, cone: usize) -> Option<usize> {
        self.cone_of_cell.iter().position(|&c| c == cone)
    }

    /// Lift of a point of `N_R` to height `m`.
    pub fn lift(x: &[Rational], m: &Rational) -> Vec<Rational> {
        let mut y = x.to_vec();
        y.push(m.clone());
        y
    }

    /// Maximal cones having `(v,1)` in them, in fan order.
    pub fn maximal_cones_at_vertex(&self, v: &[i64]) -> Vec<usize> {
        let x: Vec<Rational> = v.iter().map(|&a| rat(a)).chain([rat(1)]).collect();
        self.fan
            .maximal_indices()
            .iter()
            .copied()
            .filter(|&i| self.fan.cone(i).contains(&x))
            .collect()
    }

    pub fn height(x: &[Rational]) -> &Rational {
        x.last().expect("nonempty point")
    }

    pub fn is_at_height_zero(x: &[Rational]) -> bool {
        Self::height(x).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::{build_fan, slice, Slice};

    fn p1_complex() -> PolyComplex {
        PolyComplex::new(1, &[(vec![vec![0]], vec![vec![1]]), (vec![vec![0]], vec![vec![-1]])])
            .unwrap()
    }

    fn two_vertex() -> PolyComplex {
        PolyComplex::new(
            1,
            &[
                (vec![vec![0]], vec![vec![-1]]),
                (vec![vec![0], vec![1]], vec![]),
                (vec![vec![1]], vec![vec![1]]),
            ],
        )
        .unwrap()
    }

    fn p1_line() -> Fan {
        Fan::new(1, &[vec![vec![1]], vec![vec![-1]]]).unwrap()
    }

    #[test]
    fn height_one_slice_of_p1() {
        let fan = build_fan(
            2,
            &[vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![-1, 0]]],
        )
        .unwrap();
        let Slice::Complex(s1) = slice(&fan, 1).unwrap() else {
            panic!("expected a complex");
        };
        assert_eq!(s1, p1_complex());
        assert_eq!(s1.vertices(), vec![vec![0]]);
        assert_eq!(s1.cells().len(), 3);
        assert_eq!(s1.maximal_cells().len(), 2);
    }

    #[test]
    fn half_integral_vertex_is_rejected() {
        let fan = build_fan(2, &[vec![vec![1, 2]]]).unwrap();
        assert!(matches!(
            slice(&fan, 1),
            Err(PolyhedralError::NonIntegralVertex { .. })
        ));
    }

    #[test]
    fn coning_single_vertex_gives_p1_fan() {
        let fan = cone_over(&p1_complex()).unwrap();
        let expected = build_fan(
            2,
            &[vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![-1, 0]]],
        )
        .unwrap();
        assert_eq!(fan, expected);
    }

    #[test]
    fn coning_two_vertex_complex() {
        let fan = cone_over(&two_vertex()).unwrap();
        let maximal: Vec<Vec<Vec<i64>>> =
            fan.maximal_cones().map(|c| c.rays().to_vec()).collect();
        assert_eq!(
            maximal,
            vec![
                vec![vec![-1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![1, 1]],
                vec![vec![1, 0], vec![1, 1]],
            ]
        );
        assert!(check_regular_complete(&fan).regular);
    }

    #[test]
    fn lonely_vertex_is_incomplete() {
        let c = PolyComplex::new(1, &[(vec![vec![0]], vec![])]).unwrap();
        assert_eq!(cone_over(&c), Err(PolyhedralError::NotComplete));
    }

    #[test]
    fn recession_fans() {
        assert_eq!(recession_fan(&p1_complex()).unwrap(), p1_line());
        assert_eq!(recession_fan(&two_vertex()).unwrap(), p1_line());
        let half = PolyComplex::new(1, &[(vec![vec![0]], vec![vec![1]])]).unwrap();
        assert_eq!(
            recession_fan(&half).unwrap(),
            Fan::new(1, &[vec![vec![1]]]).unwrap()
        );
    }

    #[test]
    fn star_fans() {
        let s = star_fan(&p1_complex(), &[0]).unwrap();
        assert_eq!(s.fan(), &p1_line());
        assert!(s.fan().is_complete());

        let c = two_vertex();
        let s = star_fan(&c, &[0]).unwrap();
        assert_eq!(s.fan(), &p1_line());
        let plus = s.fan().index_of(&[vec![1]]).unwrap();
        let segment = c.find_cell(&[vec![0], vec![1]], &[]).unwrap();
        assert_eq!(s.cell_of_cone(plus), segment);
        assert_eq!(s.cone_of_cell(segment), Some(plus));

        assert_eq!(
            star_fan(&c, &[2]),
            Err(PolyhedralError::NotAVertex(vec![2]))
        );
    }

    #[test]
    fn round_trip_through_cone_over() {
        for c in [p1_complex(), two_vertex()] {
            let fan = cone_over(&c).unwrap();
            let Slice::Complex(back) = slice(&fan, 1).unwrap() else {
                panic!()
            };
            assert_eq!(back, c);
            let Slice::Fan(s0) = slice(&fan, 0).unwrap() else {
                panic!()
            };
            assert_eq!(s0, recession_fan(&c).unwrap());
        }
    }

    #[test]
    fn fan_over_dvr_bookkeeping() {
        let d = FanOverDvr::from_complex(&two_vertex()).unwrap();
        assert_eq!(d.n(), 1);
        for i in 0..d.sigma1().cells().len() {
            assert_eq!(d.cell_of_cone(d.cone_of_cell(i)), Some(i));
        }
        assert_eq!(d.maximal_cones_at_vertex(&[1]).len(), 2);
        assert!(d.sigma1().cell(0).interior_point().len() == 1);
    }

    #[test]
    fn p2_star_fan_is_complete() {
        let c = PolyComplex::new(
            2,
            &[
                (vec![vec![0, 0]], vec![vec![1, 0], vec![0, 1]]),
                (vec![vec![0, 0]], vec![vec![0, 1], vec![-1, -1]]),
                (vec![vec![0, 0]], vec![vec![-1, -1], vec![1, 0]]),
            ],
        )
        .unwrap();
        let fan = cone_over(&c).unwrap();
        let r = check_regular_complete(&fan);
        assert!(r.complete && r.regular, "{:?}", r.failures);
        assert!(star_fan(&c, &[0, 0]).unwrap().fan().is_complete());
    }
}
