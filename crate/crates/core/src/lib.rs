//! Intersections of homothets of strictly convex planar domains.
//!
//! A *C-polygon* is a proper intersection `H = ∩ (x_i + λ_i C)` of `n ≥ 2`
//! homothets of a convex domain `C`; when every `λ_i = 1` it is translative.
//! This crate builds those intersections, enumerates their singular boundary
//! points (vertices) and edge/gap structure, and checks the vertex counts
//! against the bounds `n ≤ |Vert| ≤ n + m` (translates) and
//! `n ≤ |Vert| ≤ 2(n - 1) + m` (homothets), where `m` is the number of
//! singular points of `C`.
//!
//! Everything is generic over the [`Scalar`] type; the `*64` aliases at the
//! crate root are the `f64` instantiations used by the command line tools.

pub mod constructions;
pub mod domains;
pub mod engine;
pub mod geom;
pub mod oracle;
pub mod roots;
mod scalar;

pub use domains::{
    make_ball_polygon, make_disk, make_ellipse, make_rounded_polygon, make_superellipse, place,
    Circle, ConvexDomain, Domain, DomainError, HomothetSpec, PlacedBody, SingularFeature,
};
pub use engine::{
    check_gap_lemmas, check_proper, compute_structure, exterior_gauss_extent,
    find_singleton_edge_family, gap_family, pairwise_boundary_points, singleton_by_gap_descent,
    verify_bounds, BoundReport, CPolygonStruct, EdgeRec, EngineError, GapRec, LemmaReport,
    PairResult, ProperReport, Regime, SceneError, SceneSpec, VertexKind, VertexRec,
};
pub use geom::{antipode, GeomError, NormalAngle, NormalArc, Point2, Tolerances};
pub use oracle::{
    detect_singular, detect_singular_with, oracle_report, oracle_vertex_count, trace_boundary,
    OracleConfig, OracleError, OracleReport, TracedBoundary,
};
pub use scalar::Scalar;

pub type Point64 = Point2<f64>;
pub type NormalAngle64 = NormalAngle<f64>;
pub type NormalArc64 = NormalArc<f64>;
pub type Tolerances64 = Tolerances<f64>;
pub type Domain64 = Domain<f64>;
pub type Body64 = PlacedBody<f64>;
pub type Scene64 = SceneSpec<f64>;
pub type Structure64 = CPolygonStruct<f64>;

pub type Point32 = Point2<f32>;
pub type Domain32 = Domain<f32>;
pub type Scene32 = SceneSpec<f32>;
pub type Structure32 = CPolygonStruct<f32>;
