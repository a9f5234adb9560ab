//! n×n grid dissections and square-tiling dissections.
//!
//! Lattice points are images of points of the unit pre-image square under
//! [`NormalizedModel::image`]; each lattice point is computed once, so adjacent
//! cells share bit-identical corners.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    distance_to_line, incircle_with_tol, pitot_defect, ConvexQuad, Incircle, Point2, DEFAULT_TOL,
};
use crate::inverse::{normalize_with_tol, NormalizedModel};

/// `(n+1)²` lattice points, row-major: row `j` holds points `(k, j)`,
/// `k = 0..=n`. Point `(0,0)` is `A'`, `(n,0)` is `B'`, `(n,n)` is `C'`.
#[derive(Clone, Debug)]
pub struct GridDissection {
    pub n: usize,
    pub vertices: Vec<Point2>,
    pub source: NormalizedModel,
}

impl GridDissection {
    #[inline]
    pub fn point(&self, k: usize, j: usize) -> Point2 {
        self.vertices[j * (self.n + 1) + k]
    }

    /// Corners of cell `(k, j)` in counterclockwise order, starting at the
    /// corner nearest `A'`.
    pub fn cell_points(&self, k: usize, j: usize) -> [Point2; 4] {
        [
            self.point(k, j),
            self.point(k + 1, j),
            self.point(k + 1, j + 1),
            self.point(k, j + 1),
        ]
    }

    /// All cells, row-major.
    pub fn cells(&self) -> Vec<[Point2; 4]> {
        let n = self.n;
        (0..n)
            .flat_map(|j| (0..n).map(move |k| (k, j)))
            .map(|(k, j)| self.cell_points(k, j))
            .collect()
    }

    pub fn cell(&self, k: usize, j: usize) -> Result<ConvexQuad> {
        ConvexQuad::new(self.cell_points(k, j))
    }

    pub fn validate(&self, tol_rel: f64) -> CellReport {
        validate(&self.cells(), tol_rel)
    }
}

pub fn dissect(q: &ConvexQuad, n: usize) -> Result<GridDissection> {
    dissect_with_tol(q, n, DEFAULT_TOL)
}

pub fn dissect_with_tol(q: &ConvexQuad, n: usize, tol_rel: f64) -> Result<GridDissection> {
    let model = normalize_with_tol(q, tol_rel)?;
    dissect_model(&model, n)
}

pub fn dissect_model(model: &NormalizedModel, n: usize) -> Result<GridDissection> {
    if n == 0 {
        return Err(Error::InvalidParams("grid size must be at least 1".into()));
    }
    let steps: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for &t in &steps {
        for &s in &steps {
            vertices.push(model.image(s, t)?);
        }
    }
    Ok(GridDissection {
        n,
        vertices,
        source: *model,
    })
}

/// Axis-aligned squares `(x0, y0, side)` tiling the unit square.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareTiling {
    pub squares: Vec<[f64; 3]>,
}

const TILING_EPS: f64 = 1e-12;

impl SquareTiling {
    pub fn new(squares: Vec<[f64; 3]>) -> Result<Self> {
        let t = SquareTiling { squares };
        t.check()?;
        Ok(t)
    }

    pub fn uniform(n: usize) -> Self {
        let s = 1.0 / n as f64;
        let squares = (0..n)
            .flat_map(|j| (0..n).map(move |k| [k as f64 * s, j as f64 * s, s]))
            .collect();
        SquareTiling { squares }
    }

    pub fn check(&self) -> Result<()> {
        if self.squares.is_empty() {
            return Err(Error::InvalidTiling("no squares".into()));
        }
        let mut area = 0.0;
        for (i, &[x, y, s]) in self.squares.iter().enumerate() {
            if !(s > 0.0) || !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidTiling(format!("square {i} is degenerate")));
            }
            if x < -TILING_EPS
                || y < -TILING_EPS
                || x + s > 1.0 + TILING_EPS
                || y + s > 1.0 + TILING_EPS
            {
                return Err(Error::InvalidTiling(format!(
                    "square {i} leaves the unit square"
                )));
            }
            area += s * s;
        }
        if (area - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidTiling(format!(
                "areas sum to {area}, expected 1"
            )));
        }
        for i in 0..self.squares.len() {
            for j in (i + 1)..self.squares.len() {
                let [xa, ya, sa] = self.squares[i];
                let [xb, yb, sb] = self.squares[j];
                let w = (xa + sa).min(xb + sb) - xa.max(xb);
                let h = (ya + sa).min(yb + sb) - ya.max(yb);
                if w > TILING_EPS && h > TILING_EPS {
                    return Err(Error::InvalidTiling(format!("squares {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }

    fn corners(sq: [f64; 3]) -> [(f64, f64); 4] {
        let [x, y, s] = sq;
        [(x, y), (x + s, y), (x + s, y + s), (x, y + s)]
    }
}

/// One cell per tiling square, each with its incircle.
pub fn dissect_square_tiling(
    q: &ConvexQuad,
    tiling: &SquareTiling,
) -> Result<Vec<(ConvexQuad, Incircle)>> {
    tiling.check()?;
    let model = normalize_with_tol(q, DEFAULT_TOL)?;
    tiling_cells(&model, tiling)?
        .into_iter()
        .map(|pts| {
            let cell = ConvexQuad::new(pts)?;
            let c = incircle_with_tol(&cell, 1e-8)?;
            Ok((cell, c))
        })
        .collect()
}

/// Raw cell corners for each tiling square.
pub fn tiling_cells(model: &NormalizedModel, tiling: &SquareTiling) -> Result<Vec<[Point2; 4]>> {
    tiling
        .squares
        .iter()
        .map(|&sq| {
            let c = SquareTiling::corners(sq);
            Ok([
                model.image(c[0].0, c[0].1)?,
                model.image(c[1].0, c[1].1)?,
                model.image(c[2].0, c[2].1)?,
                model.image(c[3].0, c[3].1)?,
            ])
        })
        .collect()
}

/// Largest distance, relative to the quadrilateral's diameter, of an image
/// T-junction from the image line of the edge it sits on.
pub fn t_junction_residual(model: &NormalizedModel, tiling: &SquareTiling) -> Result<f64> {
    let diam = model.labeled.diameter();
    let mut worst: f64 = 0.0;
    for (i, &sq) in tiling.squares.iter().enumerate() {
        for &(px, py) in &SquareTiling::corners(sq) {
            for (j, &other) in tiling.squares.iter().enumerate() {
                if i == j {
                    continue;
                }
                let oc = SquareTiling::corners(other);
                for e in 0..4 {
                    let (a, b) = (oc[e], oc[(e + 1) % 4]);
                    if !strictly_inside_edge((px, py), a, b) {
                        continue;
                    }
                    let p = model.image(px, py)?;
                    let ia = model.image(a.0, a.1)?;
                    let ib = model.image(b.0, b.1)?;
                    worst = worst.max(distance_to_line(p, ia, ib) / diam);
                }
            }
        }
    }
    Ok(worst)
}

fn strictly_inside_edge(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    let horizontal = (a.1 - b.1).abs() < TILING_EPS;
    if horizontal {
        (p.1 - a.1).abs() < TILING_EPS
            && p.0 > a.0.min(b.0) + TILING_EPS
            && p.0 < a.0.max(b.0) - TILING_EPS
    } else {
        (p.0 - a.0).abs() < TILING_EPS
            && p.1 > a.1.min(b.1) + TILING_EPS
            && p.1 < a.1.max(b.1) - TILING_EPS
    }
}

/// Per-cell tangency check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellReport {
    /// `|pitot defect| / perimeter` per cell.
    pub defects: Vec<f64>,
    /// `None` for cells that fail the check.
    pub incircles: Vec<Option<Incircle>>,
    pub max_defect: f64,
    pub tol: f64,
    /// Indices of cells that are non-convex or exceed `tol`.
    pub failing: Vec<usize>,
}

impl CellReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Never fails; bad cells are listed in the report.
pub fn validate(cells: &[[Point2; 4]], tol_rel: f64) -> CellReport {
    let mut defects = Vec::with_capacity(cells.len());
    let mut incircles = Vec::with_capacity(cells.len());
    let mut failing = Vec::new();
    let mut max_defect: f64 = 0.0;
    for (i, pts) in cells.iter().enumerate() {
        match ConvexQuad::new(*pts) {
            Ok(cell) => {
                let d = pitot_defect(&cell).abs() / cell.perimeter();
                let c = incircle_with_tol(&cell, tol_rel).ok();
                if d > tol_rel || c.is_none() {
                    failing.push(i);
                }
                max_defect = max_defect.max(d);
                defects.push(d);
                incircles.push(c);
            }
            Err(_) => {
                failing.push(i);
                max_defect = f64::INFINITY;
                defects.push(f64::INFINITY);
                incircles.push(None);
            }
        }
    }
    CellReport {
        defects,
        incircles,
        max_defect,
        tol: tol_rel,
        failing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{incircle, is_tangential, signed_area};
    use crate::transforms::{canonical_quad, CanonicalParams, GeneralParams};

    fn general(x: f64, y: f64, l: f64) -> ConvexQuad {
        canonical_quad(&CanonicalParams::General(
            GeneralParams::new(x, y, l).unwrap(),
        ))
        .unwrap()
    }

    fn unit_square() -> ConvexQuad {
        ConvexQuad::from_coords([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    fn f3() -> ConvexQuad {
        let l = 1.0 + std::f64::consts::SQRT_2;
        ConvexQuad::from_coords([[1.0, 0.0], [l, 0.0], [l, l], [1.0, 1.0]]).unwrap()
    }

    #[test]
    fn identity_dissection() {
        let q = general(2.0, 2.0, 2.0);
        let d = dissect(&q, 1).unwrap();
        assert_eq!(d.vertices.len(), 4);
        let cell = d.cell(0, 0).unwrap();
        for i in 0..4 {
            assert!(cell.vertex(i).dist(q.vertex(i)) < 1e-14);
        }
    }

    #[test]
    fn f2_two_by_two_radii() {
        let d = dissect(&general(2.0, 2.0, 4.0), 2).unwrap();
        let r = |k, j| incircle(&d.cell(k, j).unwrap()).unwrap().radius;
        assert!((r(0, 0) - 1.0 / 7.0).abs() < 1e-12);
        assert!((r(1, 0) - 4.0 / 45.0).abs() < 1e-12);
        assert!((r(0, 1) - 4.0 / 45.0).abs() < 1e-12);
        assert!((r(1, 1) - 2.0 / 31.0).abs() < 1e-12);
    }

    #[test]
    fn square_into_nine_squares() {
        let d = dissect(&unit_square(), 3).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let c = d.cell(k, j).unwrap();
                for s in c.side_lengths() {
                    assert!((s - 1.0 / 3.0).abs() < 1e-15);
                }
                assert!((signed_area(&c) - 1.0 / 9.0).abs() < 1e-15);
            }
        }
        let rep = dissect(&unit_square(), 5).unwrap().validate(1e-9);
        assert!(rep.passed());
        assert!(rep.max_defect < 1e-15);
    }

    #[test]
    fn validate_dissections() {
        let rep = dissect(&general(2.0, 2.0, 2.0), 3).unwrap().validate(1e-9);
        assert!(rep.passed());
        assert!(rep.max_defect <= 1e-10);
        assert_eq!(rep.defects.len(), 9);

        let mut d = dissect(&general(2.0, 2.0, 2.0), 3).unwrap();
        let idx = (d.n + 1) + 1;
        d.vertices[idx] = d.vertices[idx] + Point2::new(1e-3, 0.0);
        let rep = d.validate(1e-9);
        assert!(!rep.passed());
        assert!(!rep.failing.is_empty());
    }

    #[test]
    fn corners_match_input() {
        for q in [general(1.3, 2.2, 3.1), f3()] {
            let d = dissect(&q, 4).unwrap();
            let n = d.n;
            let diam = q.diameter();
            let m = &d.source;
            let corners = [d.point(0, 0), d.point(n, 0), d.point(n, n), d.point(0, n)];
            for (i, c) in corners.iter().enumerate() {
                assert!(c.dist(q.vertex(m.input_index(i))) <= 1e-8 * diam);
            }
        }
    }

    #[test]
    fn nesting() {
        let q = general(1.4, 1.9, 5.0);
        let coarse = dissect(&q, 3).unwrap();
        let fine = dissect(&q, 6).unwrap();
        let diam = q.diameter();
        for j in 0..=3 {
            for k in 0..=3 {
                assert!(coarse.point(k, j).dist(fine.point(2 * k, 2 * j)) <= 1e-12 * diam);
            }
        }
    }

    #[test]
    fn tilings() {
        assert!(SquareTiling::new(vec![[0.0, 0.0, 1.0]]).is_ok());
        assert!(matches!(
            SquareTiling::new(vec![[0.0, 0.0, 0.5], [0.5, 0.5, 0.5]]),
            Err(Error::InvalidTiling(_))
        ));
        assert!(matches!(
            SquareTiling::new(vec![[0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]),
            Err(Error::InvalidTiling(_))
        ));
        let overlapping = vec![
            [0.0, 0.0, 0.5],
            [0.25, 0.25, 0.5],
            [0.5, 0.0, 0.5],
            [0.0, 0.5, 0.5],
        ];
        assert!(SquareTiling::new(overlapping).is_err());
    }

    #[test]
    fn trivial_and_uniform_tilings() {
        let q = general(2.0, 2.0, 2.0);
        let one =
            dissect_square_tiling(&q, &SquareTiling::new(vec![[0.0, 0.0, 1.0]]).unwrap()).unwrap();
        assert_eq!(one.len(), 1);
        for i in 0..4 {
            assert!(one[0].0.vertex(i).dist(q.vertex(i)) < 1e-14);
        }

        let cells = dissect_square_tiling(&q, &SquareTiling::uniform(2)).unwrap();
        let d = dissect(&q, 2).unwrap();
        for (c, grid) in cells.iter().zip(d.cells()) {
            for i in 0..4 {
                assert!(c.0.vertex(i).dist(grid[i]) <= 1e-12);
            }
        }
    }

    #[test]
    fn six_square_tiling() {
        let t = 1.0 / 3.0;
        let tiling = SquareTiling::new(vec![
            [0.0, t, 2.0 * t],
            [2.0 * t, 0.0, t],
            [2.0 * t, t, t],
            [2.0 * t, 2.0 * t, t],
            [0.0, 0.0, t],
            [t, 0.0, t],
        ])
        .unwrap();
        let q = general(2.0, 2.0, 2.0);
        let cells = dissect_square_tiling(&q, &tiling).unwrap();
        assert_eq!(cells.len(), 6);
        for (c, _) in &cells {
            assert!(is_tangential(c, 1e-9));
        }
        let model = crate::inverse::normalize(&q).unwrap();
        let r = t_junction_residual(&model, &tiling).unwrap();
        assert!(r <= 1e-9, "{r}");
    }

    #[test]
    fn zero_grid_is_rejected() {
        assert!(dissect(&unit_square(), 0).is_err());
    }
}
