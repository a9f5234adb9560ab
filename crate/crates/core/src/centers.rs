//! Incenter, diagonal point and 2×2 center; the reciprocal-inradii identity,
//! the triangle relation around the diagonal point, and the triple grid.
//!
//! Residuals are distances normalized by the quadrilateral's diameter so that
//! every check is similarity invariant.

use serde::Serialize;

use crate::dissection::{dissect_model, GridDissection};
use crate::error::{Error, Result};
use crate::geometry::{
    distance_to_line, incircle, incircle_with_tol, line_intersection, triangle_inradius,
    ConvexQuad, Point2, QuadClass,
};
use crate::inverse::{normalize, NormalizedModel};
use crate::transforms::{abscissa_oracle, CanonicalParams};

/// Intersection of the diagonals `A'C'` and `B'D'`.
pub fn diagonal_point(q: &ConvexQuad) -> Result<Point2> {
    line_intersection(q.vertex(0), q.vertex(2), q.vertex(1), q.vertex(3))
}

/// The interior vertex of the 2×2 dissection.
pub fn two_by_two_center(q: &ConvexQuad) -> Result<Point2> {
    normalize(q)?.image(0.5, 0.5)
}

/// Distance of the odd point out from the line through the farthest pair,
/// over `scale`. Zero when all three coincide.
pub fn collinearity_residual(pts: [Point2; 3], scale: f64) -> f64 {
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let (i, j, k) = pairs
        .into_iter()
        .max_by(|a, b| pts[a.0].dist(pts[a.1]).total_cmp(&pts[b.0].dist(pts[b.1])))
        .expect("three pairs");
    if pts[i].dist(pts[j]) <= 1e-15 * scale {
        return 0.0;
    }
    distance_to_line(pts[k], pts[i], pts[j]) / scale
}

/// Spread of the projections of `pts` onto the unit direction `dir`, over
/// `scale`. Zero iff the points lie on one line perpendicular to `dir`.
fn projection_spread(pts: &[Point2], dir: Point2, scale: f64) -> f64 {
    let dir = dir.normalized();
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let t = p.dot(dir);
            (lo.min(t), hi.max(t))
        });
    (hi - lo) / scale
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CentersReport {
    pub incenter: Point2,
    pub diagonal_point: Point2,
    pub grid_center: Point2,
    pub collinearity_residual: f64,
    /// General: spread along `OP`. Trapezoid: spread along the parallel
    /// sides. Rhombus: all three centers coincide, spread over both axes.
    pub perpendicularity_residual: f64,
    /// Canonical-frame abscissae of the three centers (general case).
    pub canonical_abscissae: Option<[f64; 3]>,
    pub expected_abscissa: Option<f64>,
}

pub fn centers_report(q: &ConvexQuad) -> Result<CentersReport> {
    let model = normalize(q)?;
    centers_report_model(&model)
}

pub fn centers_report_model(model: &NormalizedModel) -> Result<CentersReport> {
    let q = &model.labeled;
    let diam = q.diameter();
    let i = incircle(q)?.center;
    let s = diagonal_point(q)?;
    let w = model.image(0.5, 0.5)?;
    let pts = [i, s, w];
    let collinearity_residual = collinearity_residual(pts, diam);
    let (perpendicularity_residual, canonical_abscissae, expected_abscissa) = match model.kind {
        QuadClass::General => {
            let inv = model.placement.inverse();
            let canon = pts.map(|p| inv.apply(p).u);
            let expected = match model.params {
                Some(CanonicalParams::General(p)) => Some(abscissa_oracle(&p)),
                _ => None,
            };
            // OP in the input frame is the image of the canonical u-axis.
            let op = model.placement.linear;
            (projection_spread(&pts, op, diam), Some(canon), expected)
        }
        QuadClass::Trapezoid(_) => {
            let along = q.vertex(0) - q.vertex(3);
            (projection_spread(&pts, along, diam), None, None)
        }
        QuadClass::Rhombus => {
            let a = projection_spread(&pts, Point2::new(1.0, 0.0), diam);
            let b = projection_spread(&pts, Point2::new(0.0, 1.0), diam);
            (a.max(b), None, None)
        }
    };
    Ok(CentersReport {
        incenter: i,
        diagonal_point: s,
        grid_center: w,
        collinearity_residual,
        perpendicularity_residual,
        canonical_abscissae,
        expected_abscissa,
    })
}

/// Inradii of the 2×2 cells, keyed by the outer vertex each cell contains.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiiQuartet {
    pub r_a: f64,
    pub r_b: f64,
    pub r_c: f64,
    pub r_d: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReciprocalCheck {
    pub radii: RadiiQuartet,
    /// `|(1/r_A + 1/r_C) − (1/r_B + 1/r_D)|`.
    pub defect: f64,
    /// `defect · min r`.
    pub normalized_defect: f64,
    /// Same sums with adjacent cells paired: `|(1/r_A + 1/r_B) − (1/r_C + 1/r_D)|`.
    pub adjacent_defect: f64,
}

pub fn reciprocal_check(q: &ConvexQuad) -> Result<ReciprocalCheck> {
    let model = normalize(q)?;
    reciprocal_check_model(&model)
}

pub fn reciprocal_check_model(model: &NormalizedModel) -> Result<ReciprocalCheck> {
    let d = dissect_model(model, 2)?;
    let r = |k, j| -> Result<f64> { Ok(incircle_with_tol(&d.cell(k, j)?, 1e-8)?.radius) };
    let radii = RadiiQuartet {
        r_a: r(0, 0)?,
        r_b: r(1, 0)?,
        r_c: r(1, 1)?,
        r_d: r(0, 1)?,
    };
    let inv = [radii.r_a, radii.r_b, radii.r_c, radii.r_d].map(|x| 1.0 / x);
    let defect = ((inv[0] + inv[2]) - (inv[1] + inv[3])).abs();
    let adjacent_defect = ((inv[0] + inv[1]) - (inv[2] + inv[3])).abs();
    let r_min = radii.r_a.min(radii.r_b).min(radii.r_c).min(radii.r_d);
    Ok(ReciprocalCheck {
        radii,
        defect,
        normalized_defect: defect * r_min,
        adjacent_defect,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WuCheck {
    /// Inradii of `A'SB'`, `B'SC'`, `C'SD'`, `D'SA'`.
    pub radii: [f64; 4],
    /// `|1/r(A'SB') + 1/r(C'SD') − 1/r(B'SC') − 1/r(D'SA')|`.
    pub defect: f64,
    /// `defect · min r`.
    pub normalized_defect: f64,
}

/// Triangle relation around the diagonal point. Holds exactly when the
/// quadrilateral is tangential, so it is defined for any convex input.
pub fn wu_check(q: &ConvexQuad) -> Result<WuCheck> {
    let s = diagonal_point(q)?;
    let mut radii = [0.0; 4];
    for (i, r) in radii.iter_mut().enumerate() {
        *r = triangle_inradius(q.vertex(i), s, q.vertex(i + 1))?;
    }
    let defect = ((1.0 / radii[0] + 1.0 / radii[2]) - (1.0 / radii[1] + 1.0 / radii[3])).abs();
    let r_min = radii.iter().copied().fold(f64::INFINITY, f64::min);
    if !r_min.is_finite() {
        return Err(Error::DegenerateTriangle);
    }
    Ok(WuCheck {
        radii,
        defect,
        normalized_defect: defect * r_min,
    })
}

/// Worst row/column collinearity residual of each per-cell point family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TripleGridReport {
    pub incenters: f64,
    pub diagonal_points: f64,
    pub grid_centers: f64,
}

impl TripleGridReport {
    pub fn max(&self) -> f64 {
        self.incenters
            .max(self.diagonal_points)
            .max(self.grid_centers)
    }
}

/// Per-cell incenters, diagonal points and 2×2 centers, row-major.
pub struct CellCenters {
    pub incenters: Vec<Point2>,
    pub diagonal_points: Vec<Point2>,
    pub grid_centers: Vec<Point2>,
}

pub fn cell_centers(d: &GridDissection) -> Result<CellCenters> {
    let n = d.n;
    let mut out = CellCenters {
        incenters: Vec::with_capacity(n * n),
        diagonal_points: Vec::with_capacity(n * n),
        grid_centers: Vec::with_capacity(n * n),
    };
    let nf = n as f64;
    for j in 0..n {
        for k in 0..n {
            let cell = d.cell(k, j)?;
            out.incenters.push(incircle_with_tol(&cell, 1e-8)?.center);
            out.diagonal_points.push(diagonal_point(&cell)?);
            out.grid_centers.push(
                d.source
                    .image((k as f64 + 0.5) / nf, (j as f64 + 0.5) / nf)?,
            );
        }
    }
    Ok(out)
}

/// Max distance of a row/column's points from the line through its two
/// end points, over `scale`.
fn family_residual(pts: &[Point2], n: usize, scale: f64) -> f64 {
    let line_residual = |line: Vec<Point2>| -> f64 {
        let (a, b) = (line[0], line[line.len() - 1]);
        if a.dist(b) <= 1e-15 * scale {
            return 0.0;
        }
        line.iter()
            .map(|p| distance_to_line(*p, a, b) / scale)
            .fold(0.0, f64::max)
    };
    let mut worst: f64 = 0.0;
    for j in 0..n {
        worst = worst.max(line_residual((0..n).map(|k| pts[j * n + k]).collect()));
    }
    for k in 0..n {
        worst = worst.max(line_residual((0..n).map(|j| pts[j * n + k]).collect()));
    }
    worst
}

pub fn triple_grid_report(d: &GridDissection) -> Result<TripleGridReport> {
    let c = cell_centers(d)?;
    let scale = d.source.labeled.diameter();
    Ok(TripleGridReport {
        incenters: family_residual(&c.incenters, d.n, scale),
        diagonal_points: family_residual(&c.diagonal_points, d.n, scale),
        grid_centers: family_residual(&c.grid_centers, d.n, scale),
    })
}
