//! From a tangential quadrilateral back to canonical parameters.
//!
//! The general path reads the half-angle tangents `t1..t4` at `A'..D'`, picks
//! the cyclic labeling for which `1 − t1t2`, `1 − t1t4` and
//! `t1t2 + t1t4 + t2t4 − 1` are all positive, and takes the larger roots of
//! `X² − aX − 1`, `Y² − bY − 1` and `L² − cL + 1`. Trapezoids are rotated so
//! the parallel sides are vertical and solved from the two leg slopes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    classify, half_angle_tangents, line_intersection, relative_pitot_defect, similarity_from_pairs,
    ConvexQuad, HalfAngleTangents, ParallelPair, Point2, QuadClass, Similarity, DEFAULT_TOL,
};
use crate::transforms::{canonical_quad, CanonicalParams, GeneralParams, TrapezoidParams};

/// Intermediate quantities of the general solve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverDiagnostics {
    pub a_coef: f64,
    pub b_coef: f64,
    pub c_coef: f64,
    /// `a² + 4`, `b² + 4`, `c² − 4`.
    pub discriminants: [f64; 3],
    /// `1 − t1t2`, `1 − t1t4`, `t1t2 + t1t4 + t2t4 − 1`.
    pub margins: [f64; 3],
}

impl SolverDiagnostics {
    pub fn feasibility(&self) -> [bool; 3] {
        self.margins.map(|m| m > 0.0)
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// The three feasibility margins for tangents labeled `A', B', C', D'`.
pub fn feasibility_margins(t: &HalfAngleTangents) -> [f64; 3] {
    let [t1, t2, _, t4] = t.0;
    [
        1.0 - t1 * t2,
        1.0 - t1 * t4,
        t1 * t2 + t1 * t4 + t2 * t4 - 1.0,
    ]
}

/// `t3` from the other three tangents via the full-turn identity.
pub fn t3_from_identity(t1: f64, t2: f64, t4: f64) -> Result<f64> {
    let den = t1 * t2 + t1 * t4 + t2 * t4 - 1.0;
    if !(den > 0.0) {
        return Err(Error::InfeasibleAngles);
    }
    Ok((t1 + t2 + t4 - t1 * t2 * t4) / den)
}

/// Larger root of `z² − kz − 1`, without cancellation for negative `k`.
fn larger_root_neg_product(k: f64) -> f64 {
    let r = k.hypot(2.0);
    if k >= 0.0 {
        0.5 * (k + r)
    } else {
        2.0 / (r - k)
    }
}

/// Half-angle tangents of the canonical general quadrilateral.
pub fn tangents_from_params(p: &GeneralParams) -> HalfAngleTangents {
    let (x, y, l) = (p.base_x, p.base_y, p.ratio);
    let xy = x * y;
    HalfAngleTangents([
        (xy - 1.0) / (x + y),
        (x * l + y) / (xy * l - 1.0),
        (xy * l * l - 1.0) / (l * (x + y)),
        (x + y * l) / (xy * l - 1.0),
    ])
}

pub fn solve_general(t: &HalfAngleTangents) -> Result<(GeneralParams, SolverDiagnostics)> {
    let [t1, t2, _, t4] = t.0;
    let margins = feasibility_margins(t);
    if margins.iter().any(|m| !(*m > 0.0)) {
        return Err(Error::InfeasibleAngles);
    }
    let [m12, m14, m3] = margins;
    let shared = 2.0 * t1 - t1 * t1 * (t2 + t4);
    let a = (shared + t2 - t4) / m12;
    let b = (shared - t2 + t4) / m14;
    let s = 2.0 - t1 * t2 - t1 * t4;
    let d = t2 - t4;
    // c − 2 in closed form, so L stays accurate as c approaches 2.
    let c_minus_2 = (s * s + d * d) / m3;
    let c = 2.0 + c_minus_2;

    let x = larger_root_neg_product(a);
    let y = larger_root_neg_product(b);
    let l = 0.5 * (c + (c_minus_2 * (c + 2.0)).sqrt());

    let diag = SolverDiagnostics {
        a_coef: a,
        b_coef: b,
        c_coef: c,
        discriminants: [a * a + 4.0, b * b + 4.0, c_minus_2 * (c + 2.0)],
        margins,
    };
    if !(x * y > 1.0 && l > 1.0 && l.is_finite()) {
        return Err(Error::InfeasibleAngles);
    }
    Ok((
        GeneralParams {
            base_x: x,
            base_y: y,
            ratio: l,
        },
        diag,
    ))
}

/// `s + √(1 + s²) = exp(asinh s)`.
fn slope_lift(s: f64) -> f64 {
    s.asinh().exp()
}

/// Trapezoid parameters with `X = 1` from the leg slopes `m < p` in the frame
/// where the parallel sides are vertical.
pub fn solve_trapezoid(m: f64, p: f64) -> Result<TrapezoidParams> {
    if !(p > m) {
        return Err(Error::SlopeOrder { m, p });
    }
    let y = slope_lift(m);
    let l = (p.asinh() - m.asinh()).exp();
    TrapezoidParams::new(1.0, y, l)
}

/// Everything tying an input quadrilateral to its canonical form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedModel {
    pub kind: QuadClass,
    pub params: Option<CanonicalParams>,
    /// Input listed clockwise; reversed as `[v0, v3, v2, v1]` before relabeling.
    pub reversed: bool,
    /// Canonical vertex `i` is counterclockwise vertex `i + relabel_offset`.
    pub relabel_offset: usize,
    /// Canonical frame to input frame.
    pub placement: Similarity,
    /// Image of `O = (0, 0)`; absent for rhombi.
    pub anchor_o: Option<Point2>,
    /// Image of `P = (1, 0)`; general case only.
    pub anchor_p: Option<Point2>,
    /// Input vertices in canonical label order `A', B', C', D'`.
    pub labeled: ConvexQuad,
    pub diagnostics: Option<SolverDiagnostics>,
}

impl NormalizedModel {
    /// Index into the caller's vertex array of canonical vertex `i`.
    pub fn input_index(&self, i: usize) -> usize {
        let ccw = (i + self.relabel_offset) % 4;
        if self.reversed {
            (4 - ccw) % 4
        } else {
            ccw
        }
    }

    /// Image of the point `(s, t)` of the unit pre-image square; the corners
    /// `(0,0), (1,0), (1,1), (0,1)` land on `A', B', C', D'`.
    pub fn image(&self, s: f64, t: f64) -> Result<Point2> {
        match &self.params {
            Some(p) => Ok(self.placement.apply(p.image(s, t)?)),
            None => {
                let a = self.labeled.vertex(0);
                let b = self.labeled.vertex(1);
                let d = self.labeled.vertex(3);
                Ok(a + (b - a) * s + (d - a) * t)
            }
        }
    }

    /// Largest distance between the placed canonical vertices and the input
    /// vertices, relative to the input diameter.
    pub fn reconstruction_error(&self) -> Result<f64> {
        let d = self.labeled.diameter();
        let placed = match &self.params {
            Some(p) => canonical_quad(p)?.mapped(&self.placement),
            None => return Ok(0.0),
        };
        Ok((0..4)
            .map(|i| placed.vertex(i).dist(self.labeled.vertex(i)) / d)
            .fold(0.0, f64::max))
    }
}

pub fn normalize(q: &ConvexQuad) -> Result<NormalizedModel> {
    normalize_with_tol(q, DEFAULT_TOL)
}

pub fn normalize_with_tol(q: &ConvexQuad, tol_rel: f64) -> Result<NormalizedModel> {
    let rel = relative_pitot_defect(q);
    if rel > tol_rel {
        return Err(Error::NotTangential(rel));
    }
    let (ccw, reversed) = q.to_ccw();
    match classify(&ccw, tol_rel) {
        QuadClass::Rhombus => Ok(NormalizedModel {
            kind: QuadClass::Rhombus,
            params: None,
            reversed,
            relabel_offset: 0,
            placement: Similarity::IDENTITY,
            anchor_o: None,
            anchor_p: None,
            labeled: ccw,
            diagnostics: None,
        }),
        QuadClass::Trapezoid(pair) => normalize_trapezoid(&ccw, reversed, pair),
        QuadClass::General => normalize_general(&ccw, reversed),
    }
}

fn normalize_general(ccw: &ConvexQuad, reversed: bool) -> Result<NormalizedModel> {
    let mut best: Option<(usize, f64)> = None;
    for offset in 0..4 {
        let t = half_angle_tangents(&ccw.shifted(offset))?;
        let margin = feasibility_margins(&t)
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if margin > 0.0 && best.is_none_or(|(_, m)| margin > m) {
            best = Some((offset, margin));
        }
    }
    let (offset, _) = best.ok_or(Error::NoFeasibleLabeling)?;
    let labeled = ccw.shifted(offset);
    let t = half_angle_tangents(&labeled)?;
    let (params, diag) = solve_general(&t)?;
    let canon = canonical_quad(&CanonicalParams::General(params))?;
    // The diagonal vertex pair is well separated even when O or P recede
    // towards infinity.
    let placement = similarity_from_pairs(
        canon.vertex(0),
        canon.vertex(2),
        labeled.vertex(0),
        labeled.vertex(2),
    )?;
    let v = |i| labeled.vertex(i);
    let anchor_o = line_intersection(v(0), v(1), v(2), v(3)).ok();
    let anchor_p = line_intersection(v(1), v(2), v(3), v(0)).ok();
    Ok(NormalizedModel {
        kind: QuadClass::General,
        params: Some(CanonicalParams::General(params)),
        reversed,
        relabel_offset: offset,
        placement,
        anchor_o,
        anchor_p,
        labeled,
        diagnostics: Some(diag),
    })
}

fn normalize_trapezoid(
    ccw: &ConvexQuad,
    reversed: bool,
    pair: ParallelPair,
) -> Result<NormalizedModel> {
    // Parallel pair must become {B'C', D'A'} with D'A' the shorter side.
    let candidates = match pair {
        ParallelPair::AbCd => [1, 3],
        ParallelPair::BcDa => [0, 2],
    };
    let offset = candidates
        .into_iter()
        .min_by(|&a, &b| {
            let la = ccw.shifted(a).side_lengths();
            let lb = ccw.shifted(b).side_lengths();
            (la[3] - la[1]).total_cmp(&(lb[3] - lb[1]))
        })
        .expect("two candidates");
    let labeled = ccw.shifted(offset);
    let (a, b, c, d) = (
        labeled.vertex(0),
        labeled.vertex(1),
        labeled.vertex(2),
        labeled.vertex(3),
    );
    // Frame: D'A' points along −v, so +u = quarter turn of A' − D'.
    let e_v = (d - a).normalized();
    let e_u = -e_v.perp();
    let slope = |from: Point2, to: Point2| {
        let w = to - from;
        w.dot(e_v) / w.dot(e_u)
    };
    let m = slope(a, b);
    let p = slope(d, c);
    let params = solve_trapezoid(m, p)?;
    let canon = canonical_quad(&CanonicalParams::Trapezoid(params))?;
    let placement = similarity_from_pairs(canon.vertex(0), canon.vertex(2), a, c)?;
    Ok(NormalizedModel {
        kind: QuadClass::Trapezoid(ParallelPair::BcDa),
        params: Some(CanonicalParams::Trapezoid(params)),
        reversed,
        relabel_offset: offset,
        placement,
        anchor_o: Some(placement.apply(Point2::ORIGIN)),
        anchor_p: None,
        labeled,
        diagnostics: None,
    })
}
