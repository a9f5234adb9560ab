//! Class-preserving grid dissections of tangential quadrilaterals.
//!
//! Any tangential quadrilateral is the image of an axes-parallel square under
//! one of two explicit maps that send every smaller axes-parallel square to a
//! tangential quadrilateral. Pulling the input back to that square, cutting
//! the square into an `n × n` checkerboard (or any squared tiling) and pushing
//! the pieces forward gives a dissection whose cells are all tangential.
//!
//! - [`geometry`]: quadrilaterals, Pitot test, half-angle tangents, incircles,
//!   similarities.
//! - [`transforms`]: the general and trapezoid maps with their closed forms.
//! - [`inverse`]: from a quadrilateral to map parameters and placement.
//! - [`dissection`]: grid and tiling dissections, per-cell validation.
//! - [`centers`]: incenter / diagonal point / 2×2 center line, inradius
//!   identities, triple grid.
//! - [`random`], [`io`], [`svg`], [`cli`]: corpus generation, file formats,
//!   figures and the `tangrid` command.

pub mod centers;
pub mod cli;
pub mod dissection;
pub mod error;
pub mod geometry;
pub mod inverse;
pub mod io;
pub mod random;
pub mod svg;
pub mod transforms;

pub use error::{Error, Result};
pub use geometry::{ConvexQuad, Incircle, Point2, QuadClass, Similarity, DEFAULT_TOL};
pub use inverse::{normalize, NormalizedModel};
pub use transforms::{CanonicalParams, GeneralParams, MulPoint, TrapezoidParams};
