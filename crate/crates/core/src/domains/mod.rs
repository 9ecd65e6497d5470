//! Convex domains seen through their support function and inverse Gauss map.
//!
//! A domain is addressed by outward normal angle: `boundary_at_normal(θ)` is
//! the boundary point whose supporting line has outward normal `u(θ)`. On a
//! singular boundary point this map is constant over the point's normal arc.
//! Homothets `x + λC` share normal coordinates with `C`, which is what lets
//! the engine reason about every body of a scene on one circle.

use std::sync::Arc;

use thiserror::Error;

use crate::geom::{NormalAngle, NormalArc, Point2, Tolerances};
use crate::roots::bisect;
use crate::Scalar;

mod ball_polygon;
mod ellipse;
mod rounded_polygon;
mod superellipse;

pub use ball_polygon::{BallPolygon, Circle};
pub use ellipse::Ellipse;
pub use rounded_polygon::RoundedPolygon;
pub use superellipse::Superellipse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("improper disk intersection: {0}")]
    ImproperIntersection(String),
    #[error("degenerate disk configuration: {0}")]
    Degenerate(String),
}

/// A singular boundary point and the arc of outward normals it carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularFeature<S> {
    pub point: Point2<S>,
    pub normal_arc: NormalArc<S>,
}

/// Uniform interface over planar convex bodies.
pub trait ConvexDomain<S: Scalar> {
    /// Inverse Gauss map.
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S>;

    /// Support function `h(θ) = max ⟨q, u(θ)⟩`.
    fn support(&self, theta: NormalAngle<S>) -> S {
        self.boundary_at_normal(theta).dot(theta.unit())
    }

    fn singular_features(&self) -> Vec<SingularFeature<S>>;

    fn interior_point(&self) -> Point2<S>;

    /// Negative strictly inside, zero on the boundary, positive outside. The
    /// magnitude is a length comparable to the distance to the boundary.
    fn signed_membership(&self, q: Point2<S>) -> S {
        radial_membership_via_gauss(self, q)
    }

    fn is_strictly_convex(&self) -> bool;

    fn is_smooth(&self) -> bool {
        self.singular_features().is_empty()
    }

    /// Axis-aligned bounding box `(min, max)` from the support function.
    fn bounding_box(&self) -> (Point2<S>, Point2<S>) {
        let h = |a: f64| self.support(NormalAngle::new(S::lit(a)));
        let pi = std::f64::consts::PI;
        (
            Point2::new(-h(pi), -h(1.5 * pi)),
            Point2::new(h(0.0), h(0.5 * pi)),
        )
    }
}

/// Radial membership computed from the inverse Gauss map alone:
/// `|q - c| - r(dir(q - c))` with `c` the interior point and `r` the radial
/// function, obtained by bisecting for the normal whose boundary point lies
/// in the direction of `q`.
pub fn radial_membership_via_gauss<S: Scalar, D: ConvexDomain<S> + ?Sized>(
    d: &D,
    q: Point2<S>,
) -> S {
    let c = d.interior_point();
    let v = q - c;
    let rho = v.norm();
    let dir = if rho > S::zero() {
        v / rho
    } else {
        Point2::new(S::one(), S::zero())
    };
    let phi = dir.angle();
    let half_pi = S::FRAC_PI_2();
    // For a body star-shaped around c, the normal at the boundary point in
    // direction φ lies within (φ - π/2, φ + π/2) and the polar angle of
    // γ(θ) - c increases monotonically across that window.
    let g = |t: S| {
        let p = d.boundary_at_normal(NormalAngle::new(t)) - c;
        let mut diff = p.angle() - phi;
        let pi = S::PI();
        while diff > pi {
            diff = diff - S::two_pi();
        }
        while diff <= -pi {
            diff = diff + S::two_pi();
        }
        diff
    };
    let tol = S::lit(S::REFINE_TOL) * S::lit(1e-2);
    let theta = NormalAngle::new(bisect(g, phi - half_pi, phi + half_pi, tol));
    let u = theta.unit();
    // Intersect the ray with the supporting line at θ: exact on flat faces
    // and singular points as well as smooth ones.
    let r = (d.support(theta) - c.dot(u)) / dir.dot(u);
    rho - r
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Disk;

impl<S: Scalar> ConvexDomain<S> for Disk {
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S> {
        theta.unit()
    }
    fn support(&self, _theta: NormalAngle<S>) -> S {
        S::one()
    }
    fn singular_features(&self) -> Vec<SingularFeature<S>> {
        Vec::new()
    }
    fn interior_point(&self) -> Point2<S> {
        Point2::origin()
    }
    fn signed_membership(&self, q: Point2<S>) -> S {
        q.norm() - S::one()
    }
    fn is_strictly_convex(&self) -> bool {
        true
    }
    fn is_smooth(&self) -> bool {
        true
    }
}

/// The built-in domain kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain<S> {
    Disk(Disk),
    Ellipse(Ellipse<S>),
    Superellipse(Superellipse<S>),
    BallPolygon(BallPolygon<S>),
    RoundedPolygon(RoundedPolygon<S>),
}

macro_rules! dispatch {
    ($self:expr, $d:ident => $e:expr) => {
        match $self {
            Domain::Disk($d) => $e,
            Domain::Ellipse($d) => $e,
            Domain::Superellipse($d) => $e,
            Domain::BallPolygon($d) => $e,
            Domain::RoundedPolygon($d) => $e,
        }
    };
}

impl<S: Scalar> ConvexDomain<S> for Domain<S> {
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S> {
        dispatch!(self, d => d.boundary_at_normal(theta))
    }
    fn support(&self, theta: NormalAngle<S>) -> S {
        dispatch!(self, d => d.support(theta))
    }
    fn singular_features(&self) -> Vec<SingularFeature<S>> {
        dispatch!(self, d => d.singular_features())
    }
    fn interior_point(&self) -> Point2<S> {
        dispatch!(self, d => d.interior_point())
    }
    fn signed_membership(&self, q: Point2<S>) -> S {
        dispatch!(self, d => d.signed_membership(q))
    }
    fn is_strictly_convex(&self) -> bool {
        dispatch!(self, d => ConvexDomain::<S>::is_strictly_convex(d))
    }
    fn is_smooth(&self) -> bool {
        dispatch!(self, d => ConvexDomain::<S>::is_smooth(d))
    }
}

impl<S: Scalar> Domain<S> {
    pub fn kind(&self) -> &'static str {
        match self {
            Domain::Disk(_) => "disk",
            Domain::Ellipse(_) => "ellipse",
            Domain::Superellipse(_) => "superellipse",
            Domain::BallPolygon(_) => "ball_polygon",
            Domain::RoundedPolygon(_) => "rounded_polygon",
        }
    }

    /// Number of singular boundary points.
    pub fn singular_count(&self) -> usize {
        match self {
            Domain::BallPolygon(b) => b.features().len(),
            _ => 0,
        }
    }

    /// Maximum width over a sampled set of directions.
    pub fn diameter(&self) -> S {
        (0..256)
            .map(|k| {
                let t = NormalAngle::new(S::PI() * S::lit(k as f64 / 256.0));
                self.support(t) + self.support(t.antipode())
            })
            .fold(S::zero(), S::max)
    }
}

pub fn make_disk<S: Scalar>() -> Domain<S> {
    Domain::Disk(Disk)
}

pub fn make_ellipse<S: Scalar>(a: S, b: S, rotation: S) -> Result<Domain<S>, DomainError> {
    Ellipse::new(a, b, rotation).map(Domain::Ellipse)
}

pub fn make_superellipse<S: Scalar>(p: S, a: S, b: S) -> Result<Domain<S>, DomainError> {
    Superellipse::new(p, a, b).map(Domain::Superellipse)
}

pub fn make_ball_polygon<S: Scalar>(disks: &[Circle<S>]) -> Result<Domain<S>, DomainError> {
    BallPolygon::new(disks, &Tolerances::default()).map(Domain::BallPolygon)
}

pub fn make_rounded_polygon<S: Scalar>(
    n: usize,
    apothem: S,
    corner_radius: S,
) -> Result<Domain<S>, DomainError> {
    RoundedPolygon::new(n, apothem, corner_radius).map(Domain::RoundedPolygon)
}

/// Placement `x + λC` of a domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomothetSpec<S> {
    pub center: Point2<S>,
    pub scale: S,
}

impl<S: Scalar> HomothetSpec<S> {
    pub fn new(center: Point2<S>, scale: S) -> Result<Self, DomainError> {
        if !center.is_finite() {
            return Err(DomainError::InvalidParameter(
                "non-finite homothet center".into(),
            ));
        }
        if !(scale.is_finite() && scale > S::zero()) {
            return Err(DomainError::InvalidParameter(format!(
                "homothet scale must be positive, got {scale}"
            )));
        }
        Ok(HomothetSpec { center, scale })
    }

    pub fn identity() -> Self {
        HomothetSpec {
            center: Point2::origin(),
            scale: S::one(),
        }
    }

    pub fn translate(center: Point2<S>) -> Self {
        HomothetSpec {
            center,
            scale: S::one(),
        }
    }

    #[inline]
    pub fn apply(&self, p: Point2<S>) -> Point2<S> {
        self.center + p * self.scale
    }

    #[inline]
    pub fn invert(&self, q: Point2<S>) -> Point2<S> {
        (q - self.center) / self.scale
    }
}

/// A domain placed in the plane as one generating body of a scene.
#[derive(Debug, Clone)]
pub struct PlacedBody<S> {
    pub domain: Arc<Domain<S>>,
    pub placement: HomothetSpec<S>,
}

pub fn place<S: Scalar>(domain: Arc<Domain<S>>, spec: HomothetSpec<S>) -> PlacedBody<S> {
    PlacedBody {
        domain,
        placement: spec,
    }
}

impl<S: Scalar> PlacedBody<S> {
    pub fn new(domain: Arc<Domain<S>>, placement: HomothetSpec<S>) -> Self {
        PlacedBody { domain, placement }
    }

    pub fn scale(&self) -> S {
        self.placement.scale
    }
}

impl<S: Scalar> ConvexDomain<S> for PlacedBody<S> {
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S> {
        self.placement.apply(self.domain.boundary_at_normal(theta))
    }
    fn support(&self, theta: NormalAngle<S>) -> S {
        self.placement.scale * self.domain.support(theta) + self.placement.center.dot(theta.unit())
    }
    fn singular_features(&self) -> Vec<SingularFeature<S>> {
        self.domain
            .singular_features()
            .into_iter()
            .map(|f| SingularFeature {
                point: self.placement.apply(f.point),
                normal_arc: f.normal_arc,
            })
            .collect()
    }
    fn interior_point(&self) -> Point2<S> {
        self.placement.apply(self.domain.interior_point())
    }
    fn signed_membership(&self, q: Point2<S>) -> S {
        self.placement.scale * self.domain.signed_membership(self.placement.invert(q))
    }
    fn is_strictly_convex(&self) -> bool {
        self.domain.is_strictly_convex()
    }
    fn is_smooth(&self) -> bool {
        self.domain.is_smooth()
    }
}

#[cfg(test)]
mod tests;
