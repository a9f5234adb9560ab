//! Seeded corpus of tangential quadrilaterals.
//!
//! Each quadrilateral is circumscribed about the unit circle: four tangent
//! points at angles `θ0 < θ1 < θ2 < θ3`, vertices at the intersections of
//! consecutive tangent lines `u cos θ + v sin θ = 1`. Every gap between
//! consecutive angles (including the wrap-around) lies in
//! `(min_gap, π − min_gap)`.
//!
//! The generator is xoshiro256++ seeded through SplitMix64 (Blackman and
//! Vigna's published constants, as implemented by `rand_xoshiro`), so a seed
//! names the same corpus on every platform.

use std::f64::consts::{PI, TAU};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::geometry::{ConvexQuad, Point2};

pub const DEFAULT_MIN_GAP: f64 = 0.15;

/// Deterministic uniform source.
pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn seed(seed: u64) -> Self {
        Rng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

/// Vertices of the quadrilateral circumscribed about the unit circle with
/// tangent points at the given (increasing) angles.
pub fn quad_from_tangent_angles(angles: &[f64; 4]) -> Result<ConvexQuad> {
    let vertices: [Point2; 4] = std::array::from_fn(|i| {
        let a = angles[i];
        let b = if i == 3 {
            angles[0] + TAU
        } else {
            angles[i + 1]
        };
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        Point2::new(mid.cos(), mid.sin()) * (1.0 / half.cos())
    });
    ConvexQuad::new(vertices)
}

/// Four tangent angles with all gaps in `(min_gap, π − min_gap)`.
pub fn sample_tangent_angles(rng: &mut Rng, min_gap: f64) -> [f64; 4] {
    let slack = TAU - 4.0 * min_gap;
    loop {
        // Uniform point on the simplex from the spacings of three sorted uniforms.
        let mut cuts = [rng.uniform(), rng.uniform(), rng.uniform()];
        cuts.sort_by(f64::total_cmp);
        let weights = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], 1.0 - cuts[2]];
        let gaps = weights.map(|w| min_gap + slack * w);
        if gaps.iter().any(|&g| !(g > min_gap && g < PI - min_gap)) {
            continue;
        }
        let start = rng.range(0.0, TAU);
        let mut angles = [start; 4];
        for i in 1..4 {
            angles[i] = angles[i - 1] + gaps[i - 1];
        }
        return angles;
    }
}

pub fn random_tangential(seed: u64, count: usize, min_gap: f64) -> Result<Vec<ConvexQuad>> {
    if !(min_gap > 0.0 && min_gap < PI / 2.0) || 4.0 * min_gap >= TAU {
        return Err(Error::GapInfeasible(min_gap));
    }
    let mut rng = Rng::seed(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let angles = sample_tangent_angles(&mut rng, min_gap);
        // Strict convexity can fail only at the numerical edge; resample.
        if let Ok(q) = quad_from_tangent_angles(&angles) {
            out.push(q);
        }
    }
    Ok(out)
}

/// Convex quadrilateral inscribed in a jittered circle; tangential only by
/// accident. Used to mix non-tangential inputs into test corpora.
pub fn random_convex(rng: &mut Rng) -> ConvexQuad {
    loop {
        let angles = sample_tangent_angles(rng, 0.3);
        let v: [Point2; 4] = std::array::from_fn(|i| {
            let r = rng.range(0.6, 1.4);
            Point2::new(angles[i].cos(), angles[i].sin()) * r
        });
        if let Ok(q) = ConvexQuad::new(v) {
            return q;
        }
    }
}
