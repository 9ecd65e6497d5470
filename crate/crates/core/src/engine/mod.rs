//! Boundary structure of intersections of strictly convex bodies.

mod bounds;
mod gaps;
mod pairwise;
mod scene;
mod structure;
pub mod witness;

use thiserror::Error;

pub use bounds::{verify_bounds, BoundReport, Regime};
pub use gaps::{
    check_gap_lemmas, check_gap_lemmas_on, find_singleton_edge_family, gap_family,
    singleton_by_gap_descent, GapLemma, GapRec, LemmaReport, LemmaViolation,
};
pub use pairwise::{
    exterior_gauss_extent, pairwise_boundary_points, Crossing, PairResult, PairTable,
};
pub use scene::{SceneError, SceneSpec};
pub use structure::{
    check_proper, compute_structure, CPolygonStruct, EdgeRec, ProperReport, StructureDiagnostics,
    VertexKind, VertexRec,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("two boundaries cross {count} times")]
    MoreThanTwo { count: usize },
    #[error("scene is not proper: {0:?}")]
    NotProper(ProperReport),
    #[error("body {0} is not strictly convex")]
    NotStrictlyConvex(usize),
    #[error("numerical model violated: {0}")]
    ModelViolation(String),
    #[error("no body contributes exactly one edge")]
    NoSingletonFamily,
}
