//! The two square-to-tangential maps in multiplicative coordinates.
//!
//! A pre-image point `(x, y)` of the additive plane is carried as
//! `(a^x, a^y)` for some base `a > 1`; the base never appears explicitly. An
//! axes-parallel square with lower-left corner `(x, y)` and side `l` becomes
//! the corner `(X, Y)` and the side ratio `L`, and refinement uses fractional
//! powers `L^{k/n}`.
//!
//! - The general map sends horizontal lines to lines through `O = (0, 0)` and
//!   vertical lines to lines through `P = (1, 0)`. It is singular on `XY = 1`;
//!   only the `XY > 1` branch is used.
//! - The trapezoid map sends vertical lines to vertical lines and horizontal
//!   lines to lines through the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexQuad, Point2};

/// Guard radius around the singular locus `PQ = 1` of the general map.
pub const SINGULAR_EPS: f64 = 1e-14;

/// A point in multiplicative coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MulPoint {
    pub x: f64,
    pub y: f64,
}

impl MulPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Pre-image square `(X, Y)`–`(XL, YL)` for the general map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralParams {
    pub base_x: f64,
    pub base_y: f64,
    pub ratio: f64,
}

impl GeneralParams {
    pub fn new(base_x: f64, base_y: f64, ratio: f64) -> Result<Self> {
        if !(base_x > 0.0 && base_y > 0.0) {
            return Err(Error::InvalidParams(format!(
                "corner must be positive, got ({base_x}, {base_y})"
            )));
        }
        if !(base_x * base_y > 1.0) {
            return Err(Error::InvalidParams(format!(
                "corner product must exceed 1, got {}",
                base_x * base_y
            )));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "side ratio must exceed 1, got {ratio}"
            )));
        }
        Ok(Self {
            base_x,
            base_y,
            ratio,
        })
    }
}

/// Pre-image square for the trapezoid map. No `XY > 1` constraint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidParams {
    pub base_x: f64,
    pub base_y: f64,
    pub ratio: f64,
}

impl TrapezoidParams {
    pub fn new(base_x: f64, base_y: f64, ratio: f64) -> Result<Self> {
        if !(base_x > 0.0 && base_y > 0.0 && base_x.is_finite() && base_y.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "corner must be positive, got ({base_x}, {base_y})"
            )));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "side ratio must exceed 1, got {ratio}"
            )));
        }
        Ok(Self {
            base_x,
            base_y,
            ratio,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapKind {
    General,
    Trapezoid,
}

/// Parameters of either construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CanonicalParams {
    General(GeneralParams),
    Trapezoid(TrapezoidParams),
}

impl CanonicalParams {
    pub fn kind(&self) -> MapKind {
        match self {
            CanonicalParams::General(_) => MapKind::General,
            CanonicalParams::Trapezoid(_) => MapKind::Trapezoid,
        }
    }

    /// `(X, Y, L)`.
    pub fn triple(&self) -> (f64, f64, f64) {
        match *self {
            CanonicalParams::General(p) => (p.base_x, p.base_y, p.ratio),
            CanonicalParams::Trapezoid(p) => (p.base_x, p.base_y, p.ratio),
        }
    }

    pub fn map(&self, m: MulPoint) -> Result<Point2> {
        match self {
            CanonicalParams::General(_) => general_map(m),
            CanonicalParams::Trapezoid(_) => Ok(trapezoid_map(m)),
        }
    }

    /// Image of the point with unit-square coordinates `(s, t)`, i.e. of the
    /// multiplicative point `(X·L^s, Y·L^t)`.
    pub fn image(&self, s: f64, t: f64) -> Result<Point2> {
        let (x, y, l) = self.triple();
        let ln_l = l.ln();
        self.map(MulPoint::new(x * (s * ln_l).exp(), y * (t * ln_l).exp()))
    }

    /// Parameters of the sub-square `[s, s + side] × [t, t + side]`.
    pub fn sub_square(&self, s: f64, t: f64, side: f64) -> CanonicalParams {
        let (x, y, l) = self.triple();
        let ln_l = l.ln();
        let bx = x * (s * ln_l).exp();
        let by = y * (t * ln_l).exp();
        let r = (side * ln_l).exp();
        match self {
            CanonicalParams::General(_) => CanonicalParams::General(GeneralParams {
                base_x: bx,
                base_y: by,
                ratio: r,
            }),
            CanonicalParams::Trapezoid(_) => CanonicalParams::Trapezoid(TrapezoidParams {
                base_x: bx,
                base_y: by,
                ratio: r,
            }),
        }
    }
}

/// `u = P(Q²−1)/((P+Q)(PQ−1))`, `v = 2PQ/((P+Q)(PQ−1))`.
///
/// Defined off the locus `PQ = 1`; the construction only uses `PQ > 1`.
pub fn general_map(m: MulPoint) -> Result<Point2> {
    let MulPoint { x: p, y: q } = m;
    let pq = p * q;
    let gap = pq - 1.0;
    if gap.abs() < SINGULAR_EPS {
        return Err(Error::SingularLocus(gap.abs()));
    }
    let denom = (p + q) * gap;
    Ok(Point2::new(
        p * (q - 1.0) * (q + 1.0) / denom,
        2.0 * pq / denom,
    ))
}

/// `u = P`, `v = P(Q − 1/Q)/2`.
pub fn trapezoid_map(m: MulPoint) -> Point2 {
    let MulPoint { x: p, y: q } = m;
    Point2::new(p, 0.5 * p * (q - 1.0 / q))
}

/// Image of the square with corners `(X,Y), (XL,Y), (XL,YL), (X,YL)`,
/// labeled `A', B', C', D'`.
pub fn canonical_quad(p: &CanonicalParams) -> Result<ConvexQuad> {
    let (x, y, l) = p.triple();
    let corners = [
        MulPoint::new(x, y),
        MulPoint::new(x * l, y),
        MulPoint::new(x * l, y * l),
        MulPoint::new(x, y * l),
    ];
    let mut v = [Point2::ORIGIN; 4];
    for (slot, m) in v.iter_mut().zip(corners) {
        *slot = p.map(m)?;
    }
    ConvexQuad::new(v)
}

/// Closed-form side lengths `A'B', B'C', C'D', D'A'`.
pub fn side_length_oracle(p: &CanonicalParams) -> [f64; 4] {
    let (x, y, l) = p.triple();
    match p {
        CanonicalParams::General(_) => {
            let k = x * y * (l - 1.0);
            let xy = x * y;
            [
                k * (y * y + 1.0) * (x * x * l + 1.0)
                    / ((x + y) * (xy - 1.0) * (x * l + y) * (xy * l - 1.0)),
                k * (y * y * l + 1.0) * (x * x * l * l + 1.0)
                    / ((x + y) * (x * l + y) * (xy * l - 1.0) * (xy * l * l - 1.0)),
                k * (y * y * l * l + 1.0) * (x * x * l + 1.0)
                    / ((x + y) * (x + y * l) * (xy * l - 1.0) * (xy * l * l - 1.0)),
                k * (1.0 + x * x) * (y * y * l + 1.0)
                    / ((x + y) * (xy - 1.0) * (x + y * l) * (xy * l - 1.0)),
            ]
        }
        CanonicalParams::Trapezoid(_) => {
            let k = x * (l - 1.0) / (2.0 * y);
            [
                k * (1.0 + y * y),
                k * (1.0 + y * y * l),
                k * (1.0 + y * y * l * l) / l,
                k * (1.0 + y * y * l) / l,
            ]
        }
    }
}

/// Inradius of the canonical general quadrilateral: `XY(L−1)/((X+Y)(XYL−1))`.
pub fn inradius_oracle(p: &GeneralParams) -> f64 {
    let (x, y, l) = (p.base_x, p.base_y, p.ratio);
    x * y * (l - 1.0) / ((x + y) * (x * y * l - 1.0))
}

/// Common abscissa of the incenter, diagonal point and 2×2 center in the
/// canonical frame: `X(LY²−1)/((X+Y)(XYL−1))`. This is the abscissa of the
/// image of `(X√L, Y√L)`.
pub fn abscissa_oracle(p: &GeneralParams) -> f64 {
    let (x, y, l) = (p.base_x, p.base_y, p.ratio);
    x * (l * y * y - 1.0) / ((x + y) * (x * y * l - 1.0))
}

/// Central-difference residual of `f_x² + g_x² = f_y² + g_y²` at `m`.
///
/// Derivatives are taken in the additive coordinates `(ln P, ln Q)` with
/// step `h`, and the residual is normalized by the sum of all four squares.
pub fn local_condition_residual(kind: MapKind, m: MulPoint, h: f64) -> Result<f64> {
    if !(m.x > 0.0 && m.y > 0.0 && h > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need positive point and step, got ({}, {}), h = {h}",
            m.x, m.y
        )));
    }
    let (x, y) = (m.x.ln(), m.y.ln());
    if kind == MapKind::General && (x + y).abs() < 10.0 * h {
        return Err(Error::SingularLocus((m.x * m.y - 1.0).abs()));
    }
    let eval = |dx: f64, dy: f64| -> Result<Point2> {
        let mp = MulPoint::new((x + dx).exp(), (y + dy).exp());
        match kind {
            MapKind::General => general_map(mp),
            MapKind::Trapezoid => Ok(trapezoid_map(mp)),
        }
    };
    let dx = (eval(h, 0.0)? - eval(-h, 0.0)?) * (0.5 / h);
    let dy = (eval(0.0, h)? - eval(0.0, -h)?) * (0.5 / h);
    let sx = dx.dot(dx);
    let sy = dy.dot(dy);
    Ok((sx - sy).abs() / (sx + sy))
}
