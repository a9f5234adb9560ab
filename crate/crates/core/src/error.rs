use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadrilateral is not strictly convex: {0}")]
    NonConvex(String),
    #[error("degenerate vertex {0}: adjacent edges are collinear")]
    DegenerateVertex(usize),
    #[error("quadrilateral is not tangential (relative Pitot defect {0:.3e})")]
    NotTangential(f64),
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("lines are parallel")]
    ParallelLines,
    #[error("coincident points")]
    CoincidentPoints,
    #[error("point lies on the singular locus of the general map (|PQ - 1| = {0:.3e})")]
    SingularLocus(f64),
    #[error("half-angle tangents violate the feasibility conditions")]
    InfeasibleAngles,
    #[error("leg slopes out of order: need p > m (m = {m}, p = {p})")]
    SlopeOrder { m: f64, p: f64 },
    #[error("no cyclic relabeling satisfies the feasibility conditions")]
    NoFeasibleLabeling,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
    #[error("minimum gap {0} is infeasible for four tangent points")]
    GapInfeasible(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
