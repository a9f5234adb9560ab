//! Planar primitives for convex quadrilaterals.
//!
//! Conventions
//! - Vertices are stored in the order they were given. Operations that need a
//!   positively oriented quadrilateral call [`ConvexQuad::to_ccw`] first.
//! - Side `i` joins vertex `i` to vertex `i + 1 (mod 4)`.
//! - Tolerances are relative: Pitot defects are compared against the perimeter,
//!   parallelism against the sine of the angle between side directions.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for tangency and parallelism checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Sine threshold below which consecutive edges count as collinear.
const CONVEXITY_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub u: f64,
    pub v: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { u: 0.0, v: 0.0 };

    #[inline]
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.u * o.u + self.v * o.v
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.u * o.v - self.v * o.u
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.u.hypot(self.v)
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.v, self.u)
    }

    pub fn normalized(self) -> Point2 {
        self * (1.0 / self.norm())
    }

    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.u + o.u, self.v + o.v)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.u - o.u, self.v - o.v)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.u * s, self.v * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.u, -self.v)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Point2::new(a[0], a[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.u, p.v]
    }
}

/// A strictly convex quadrilateral with vertices in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvexQuad {
    vertices: [Point2; 4],
}

impl ConvexQuad {
    pub fn new(vertices: [Point2; 4]) -> Result<Self> {
        for (i, p) in vertices.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonConvex(format!("vertex {i} is not finite")));
            }
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if vertices[i] == vertices[j] {
                    return Err(Error::NonConvex(format!("vertices {i} and {j} coincide")));
                }
            }
        }
        let mut sign = 0.0;
        for i in 0..4 {
            let e0 = vertices[(i + 1) % 4] - vertices[i];
            let e1 = vertices[(i + 2) % 4] - vertices[(i + 1) % 4];
            let s = e0.cross(e1) / (e0.norm() * e1.norm());
            if s.abs() <= CONVEXITY_EPS {
                return Err(Error::NonConvex(format!(
                    "edges meeting at vertex {} are collinear",
                    (i + 1) % 4
                )));
            }
            if sign == 0.0 {
                sign = s.signum();
            } else if s.signum() != sign {
                return Err(Error::NonConvex(format!(
                    "turn at vertex {} has the wrong sign",
                    (i + 1) % 4
                )));
            }
        }
        // Four same-sign turns can still wind twice around a star shape.
        let turning: f64 = (0..4)
            .map(|i| {
                let e0 = vertices[(i + 1) % 4] - vertices[i];
                let e1 = vertices[(i + 2) % 4] - vertices[(i + 1) % 4];
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if (turning.abs() - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::NonConvex("boundary is self-intersecting".into()));
        }
        Ok(Self { vertices })
    }

    pub fn from_coords(coords: [[f64; 2]; 4]) -> Result<Self> {
        Self::new(coords.map(Point2::from))
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2; 4] {
        &self.vertices
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % 4]
    }

    pub fn side_lengths(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.vertex(i).dist(self.vertex(i + 1)))
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths().iter().sum()
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                d = d.max(self.vertices[i].dist(self.vertices[j]));
            }
        }
        d
    }

    pub fn is_ccw(&self) -> bool {
        signed_area(self) > 0.0
    }

    /// Counterclockwise copy plus whether the vertex order was reversed.
    ///
    /// Reversal keeps vertex 0 in place: `[v0, v3, v2, v1]`.
    pub fn to_ccw(&self) -> (ConvexQuad, bool) {
        if self.is_ccw() {
            (*self, false)
        } else {
            let [a, b, c, d] = self.vertices;
            (
                ConvexQuad {
                    vertices: [a, d, c, b],
                },
                true,
            )
        }
    }

    /// Cyclic relabeling: vertex `i` of the result is vertex `i + offset` of `self`.
    pub fn shifted(&self, offset: usize) -> ConvexQuad {
        ConvexQuad {
            vertices: std::array::from_fn(|i| self.vertex(i + offset)),
        }
    }

    pub fn mapped(&self, s: &Similarity) -> ConvexQuad {
        // Orientation-preserving similarities keep strict convexity.
        ConvexQuad {
            vertices: self.vertices.map(|p| s.apply(p)),
        }
    }
}

/// Which pair of opposite sides is parallel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParallelPair {
    /// Sides 0 and 2 (AB and CD).
    AbCd,
    /// Sides 1 and 3 (BC and DA).
    BcDa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadClass {
    General,
    Trapezoid(ParallelPair),
    Rhombus,
}

/// Tangents of the four interior half-angles, indexed like the vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfAngleTangents(pub [f64; 4]);

impl HalfAngleTangents {
    /// Relative residual of `Σt = Σ t_i t_j t_k`, which holds because the
    /// interior angles add up to a full turn.
    pub fn identity_residual(&self) -> f64 {
        let [t1, t2, t3, t4] = self.0;
        let lhs = t1 + t2 + t3 + t4;
        let rhs = t1 * t2 * t3 + t1 * t2 * t4 + t1 * t3 * t4 + t2 * t3 * t4;
        (lhs - rhs).abs() / lhs.max(rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Incircle {
    pub center: Point2,
    pub radius: f64,
}

/// Orientation-preserving similarity `z ↦ a·z + b` on the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    /// Rotation-scale factor `a` as (re, im).
    pub linear: Point2,
    pub translation: Point2,
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        linear: Point2::new(1.0, 0.0),
        translation: Point2::ORIGIN,
    };

    pub fn from_scale_rotation(scale: f64, angle: f64, translation: Point2) -> Self {
        Self {
            linear: Point2::new(scale * angle.cos(), scale * angle.sin()),
            translation,
        }
    }

    pub fn scale(&self) -> f64 {
        self.linear.norm()
    }

    pub fn rotation(&self) -> f64 {
        self.linear.v.atan2(self.linear.u)
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        complex_mul(self.linear, p) + self.translation
    }

    pub fn inverse(&self) -> Similarity {
        let inv = complex_inv(self.linear);
        Similarity {
            linear: inv,
            translation: -complex_mul(inv, self.translation),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        Similarity {
            linear: complex_mul(self.linear, other.linear),
            translation: self.apply(other.translation),
        }
    }
}

fn complex_mul(a: Point2, b: Point2) -> Point2 {
    Point2::new(a.u * b.u - a.v * b.v, a.u * b.v + a.v * b.u)
}

fn complex_inv(a: Point2) -> Point2 {
    let n2 = a.dot(a);
    Point2::new(a.u / n2, -a.v / n2)
}

fn complex_div(a: Point2, b: Point2) -> Point2 {
    let n2 = b.dot(b);
    Point2::new((a.u * b.u + a.v * b.v) / n2, (a.v * b.u - a.u * b.v) / n2)
}

/// Shoelace area; positive iff counterclockwise.
pub fn signed_area(q: &ConvexQuad) -> f64 {
    let s: f64 = (0..4).map(|i| q.vertex(i).cross(q.vertex(i + 1))).sum();
    0.5 * s
}

/// `(|s0| + |s2|) - (|s1| + |s3|)`.
pub fn pitot_defect(q: &ConvexQuad) -> f64 {
    let s = q.side_lengths();
    (s[0] + s[2]) - (s[1] + s[3])
}

/// Pitot defect divided by the perimeter.
pub fn relative_pitot_defect(q: &ConvexQuad) -> f64 {
    pitot_defect(q).abs() / q.perimeter()
}

pub fn is_tangential(q: &ConvexQuad, tol_rel: f64) -> bool {
    relative_pitot_defect(q) <= tol_rel
}

fn sin_between(a: Point2, b: Point2) -> f64 {
    (a.cross(b) / (a.norm() * b.norm())).abs()
}

/// Whether sides `i` and `i + 2` are parallel within `tol_parallel` (sine).
pub fn sides_parallel(q: &ConvexQuad, i: usize, tol_parallel: f64) -> bool {
    let a = q.vertex(i + 1) - q.vertex(i);
    let b = q.vertex(i + 3) - q.vertex(i + 2);
    sin_between(a, b) <= tol_parallel
}

pub fn classify(q: &ConvexQuad, tol_parallel: f64) -> QuadClass {
    match (
        sides_parallel(q, 0, tol_parallel),
        sides_parallel(q, 1, tol_parallel),
    ) {
        (true, true) => QuadClass::Rhombus,
        (true, false) => QuadClass::Trapezoid(ParallelPair::AbCd),
        (false, true) => QuadClass::Trapezoid(ParallelPair::BcDa),
        (false, false) => QuadClass::General,
    }
}

/// Tangent of half the interior angle at vertex `i`.
///
/// With `c = |a × b|`, `d = a · b` and `n = |a||b|`, `tan(θ/2) = c / (n + d)
/// = (n − d) / c`; the branch is picked so the sum never cancels.
pub fn half_angle_tangent(q: &ConvexQuad, i: usize) -> Result<f64> {
    let p = q.vertex(i);
    let a = q.vertex(i + 3) - p;
    let b = q.vertex(i + 1) - p;
    let n = a.norm() * b.norm();
    let c = a.cross(b).abs();
    let d = a.dot(b);
    if c <= CONVEXITY_EPS * n {
        return Err(Error::DegenerateVertex(i % 4));
    }
    Ok(if d >= 0.0 { c / (n + d) } else { (n - d) / c })
}

pub fn half_angle_tangents(q: &ConvexQuad) -> Result<HalfAngleTangents> {
    Ok(HalfAngleTangents([
        half_angle_tangent(q, 0)?,
        half_angle_tangent(q, 1)?,
        half_angle_tangent(q, 2)?,
        half_angle_tangent(q, 3)?,
    ]))
}

/// Distance from `p` to the infinite line through `a` and `b`.
pub fn distance_to_line(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    (d.cross(p - a)).abs() / d.norm()
}

/// Inscribed circle from the bisectors at vertices 0 and 1, validated
/// against all four side lines.
pub fn incircle(q: &ConvexQuad) -> Result<Incircle> {
    incircle_with_tol(q, DEFAULT_TOL)
}

pub fn incircle_with_tol(q: &ConvexQuad, tol_rel: f64) -> Result<Incircle> {
    let rel = relative_pitot_defect(q);
    if rel > tol_rel {
        return Err(Error::NotTangential(rel));
    }
    let bisector = |i: usize| {
        let p = q.vertex(i);
        let a = (q.vertex(i + 3) - p).normalized();
        let b = (q.vertex(i + 1) - p).normalized();
        (p, p + (a + b))
    };
    let (p0, d0) = bisector(0);
    let (p1, d1) = bisector(1);
    let center = line_intersection_tol(p0, d0, p1, d1, 0.0)?;
    let radius = distance_to_line(center, q.vertex(0), q.vertex(1));
    let perimeter = q.perimeter();
    for i in 1..4 {
        let d = distance_to_line(center, q.vertex(i), q.vertex(i + 1));
        let dev = (d - radius).abs() / perimeter;
        if dev > tol_rel {
            return Err(Error::NotTangential(rel.max(dev)));
        }
    }
    Ok(Incircle { center, radius })
}

/// Largest relative deviation of the side-line distances from the radius.
pub fn incircle_equidistance_residual(q: &ConvexQuad, c: &Incircle) -> f64 {
    (0..4)
        .map(|i| (distance_to_line(c.center, q.vertex(i), q.vertex(i + 1)) - c.radius).abs())
        .fold(0.0, f64::max)
        / c.radius
}

/// Area over semiperimeter.
pub fn triangle_inradius(a: Point2, b: Point2, c: Point2) -> Result<f64> {
    let area = 0.5 * (b - a).cross(c - a).abs();
    let s = 0.5 * (a.dist(b) + b.dist(c) + c.dist(a));
    if !(area > 1e-14 * s * s) {
        return Err(Error::DegenerateTriangle);
    }
    Ok(area / s)
}

/// Intersection of the infinite lines `p1p2` and `p3p4`.
pub fn line_intersection(p1: Point2, p2: Point2, p3: Point2, p4: Point2) -> Result<Point2> {
    line_intersection_tol(p1, p2, p3, p4, DEFAULT_TOL)
}

pub fn line_intersection_tol(
    p1: Point2,
    p2: Point2,
    p3: Point2,
    p4: Point2,
    tol_parallel: f64,
) -> Result<Point2> {
    let d1 = p2 - p1;
    let d2 = p4 - p3;
    let denom = d1.cross(d2);
    if denom == 0.0 || denom.abs() <= tol_parallel * d1.norm() * d2.norm() {
        return Err(Error::ParallelLines);
    }
    let t = (p3 - p1).cross(d2) / denom;
    Ok(p1 + d1 * t)
}

/// The orientation-preserving similarity sending `src1 → dst1`, `src2 → dst2`.
pub fn similarity_from_pairs(
    src1: Point2,
    src2: Point2,
    dst1: Point2,
    dst2: Point2,
) -> Result<Similarity> {
    let ds = src2 - src1;
    let dd = dst2 - dst1;
    if ds.norm() == 0.0 || dd.norm() == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let linear = complex_div(dd, ds);
    let translation = dst1 - complex_mul(linear, src1);
    Ok(Similarity {
        linear,
        translation,
    })
}

pub fn apply_similarity(s: &Similarity, p: Point2) -> Point2 {
    s.apply(p)
}
