//! Planar primitives: points, outward-normal angles and arcs of normals.
//!
//! Every boundary feature in this crate is described in normal-angle
//! coordinates: a boundary point is addressed by the direction of an outward
//! normal of one of its supporting lines. Angles are canonicalized into
//! `[0, 2π)` once, in [`NormalAngle::new`], and all arc arithmetic works on
//! that representative.

use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("arc extent must lie in (0, 2π], got {0}")]
    BadExtent(f64),
    #[error("invalid tolerances: {0}")]
    BadTolerances(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    #[inline]
    pub const fn new(x: S, y: S) -> Self {
        Point2 { x, y }
    }

    /// Checked constructor rejecting NaN and infinities.
    pub fn finite(x: S, y: S) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Point2 { x, y })
        } else {
            Err(GeomError::NonFinite("point"))
        }
    }

    #[inline]
    pub fn origin() -> Self {
        Point2::new(S::zero(), S::zero())
    }

    /// Unit vector `(cos θ, sin θ)`.
    #[inline]
    pub fn polar(theta: S) -> Self {
        Point2::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> S {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive when `o` is
    /// counterclockwise from `self`.
    #[inline]
    pub fn cross(self, o: Self) -> S {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> S {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> S {
        (self - o).norm()
    }

    /// Polar angle in `(-π, π]`.
    #[inline]
    pub fn angle(self) -> S {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn midpoint(self, o: Self) -> Self {
        (self + o) * S::lit(0.5)
    }

    /// Counterclockwise rotation by `a` radians.
    pub fn rotate(self, a: S) -> Self {
        let (s, c) = a.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn cast<T: Scalar>(self) -> Point2<T> {
        Point2::new(T::lit(self.x.as_f64()), T::lit(self.y.as_f64()))
    }
}

impl<S: Scalar> Add for Point2<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl<S: Scalar> Sub for Point2<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl<S: Scalar> Neg for Point2<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Point2::new(-self.x, -self.y)
    }
}

impl<S: Scalar> Mul<S> for Point2<S> {
    type Output = Self;
    #[inline]
    fn mul(self, k: S) -> Self {
        Point2::new(self.x * k, self.y * k)
    }
}

impl<S: Scalar> Div<S> for Point2<S> {
    type Output = Self;
    #[inline]
    fn div(self, k: S) -> Self {
        Point2::new(self.x / k, self.y / k)
    }
}

/// Direction of an outward unit normal, stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct NormalAngle<S>(S);

impl<S: Scalar> NormalAngle<S> {
    pub fn new(theta: S) -> Self {
        NormalAngle(canonical(theta))
    }

    pub fn try_new(theta: S) -> Result<Self, GeomError> {
        if theta.is_finite() {
            Ok(Self::new(theta))
        } else {
            Err(GeomError::NonFinite("normal angle"))
        }
    }

    #[inline]
    pub fn value(self) -> S {
        self.0
    }

    #[inline]
    pub fn unit(self) -> Point2<S> {
        Point2::polar(self.0)
    }

    /// Normal direction of the vector `v` (which need not be unit).
    pub fn of_vector(v: Point2<S>) -> Self {
        Self::new(v.angle())
    }

    pub fn antipode(self) -> Self {
        Self::new(self.0 + S::PI())
    }

    pub fn offset(self, delta: S) -> Self {
        Self::new(self.0 + delta)
    }

    /// Counterclockwise sweep from `from` to `self`, in `[0, 2π)`.
    pub fn ccw_from(self, from: Self) -> S {
        canonical(self.0 - from.0)
    }

    /// Shortest angular distance, in `[0, π]`.
    pub fn distance(self, o: Self) -> S {
        let d = self.ccw_from(o);
        d.min(S::two_pi() - d)
    }
}

/// `θ + π` in canonical form.
pub fn antipode<S: Scalar>(theta: NormalAngle<S>) -> NormalAngle<S> {
    theta.antipode()
}

fn canonical<S: Scalar>(theta: S) -> S {
    let tau = S::two_pi();
    let mut t = theta % tau;
    if t < S::zero() {
        t = t + tau;
    }
    if t >= tau {
        t = S::zero();
    }
    t
}

/// A closed counterclockwise arc of normal directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalArc<S> {
    /// The whole unit circle (Gauss image of a smooth closed boundary).
    Full,
    Sweep {
        start: NormalAngle<S>,
        extent: S,
    },
}

impl<S: Scalar> NormalArc<S> {
    pub fn new(start: NormalAngle<S>, extent: S) -> Result<Self, GeomError> {
        if !extent.is_finite() {
            return Err(GeomError::NonFinite("arc extent"));
        }
        if extent <= S::zero() || extent > S::two_pi() {
            return Err(GeomError::BadExtent(extent.as_f64()));
        }
        Ok(NormalArc::Sweep { start, extent })
    }

    /// Arc swept counterclockwise from `from` to `to`; `None` when they coincide.
    pub fn between(from: NormalAngle<S>, to: NormalAngle<S>) -> Option<Self> {
        let extent = to.ccw_from(from);
        if extent > S::zero() {
            Some(NormalArc::Sweep {
                start: from,
                extent,
            })
        } else {
            None
        }
    }

    pub fn extent(&self) -> S {
        match *self {
            NormalArc::Full => S::two_pi(),
            NormalArc::Sweep { extent, .. } => extent,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, NormalArc::Full)
    }

    /// Start of the sweep; `0` for the full circle.
    pub fn start(&self) -> NormalAngle<S> {
        match *self {
            NormalArc::Full => NormalAngle::new(S::zero()),
            NormalArc::Sweep { start, .. } => start,
        }
    }

    pub fn end(&self) -> NormalAngle<S> {
        self.start().offset(self.extent())
    }

    pub fn midpoint(&self) -> NormalAngle<S> {
        self.at(S::lit(0.5))
    }

    /// Point at fraction `t ∈ [0, 1]` of the sweep.
    pub fn at(&self, t: S) -> NormalAngle<S> {
        self.start().offset(self.extent() * t)
    }

    /// Closed membership test.
    pub fn contains(&self, theta: NormalAngle<S>) -> bool {
        match *self {
            NormalArc::Full => true,
            NormalArc::Sweep { start, extent } => theta.ccw_from(start) <= extent,
        }
    }

    /// Membership in the arc shrunk by `margin` at both ends (or grown, for
    /// negative `margin`).
    pub fn contains_with_margin(&self, theta: NormalAngle<S>, margin: S) -> bool {
        match *self {
            NormalArc::Full => true,
            NormalArc::Sweep { start, extent } => {
                let d = theta.ccw_from(start);
                if margin >= S::zero() {
                    d >= margin && d <= extent - margin
                } else {
                    let g = -margin;
                    d <= extent + g || d >= S::two_pi() - g
                }
            }
        }
    }

    /// True when `other` lies inside the open interior of `self`.
    pub fn contains_arc_strictly(&self, other: &NormalArc<S>) -> bool {
        match (*self, *other) {
            (NormalArc::Full, _) => true,
            (_, NormalArc::Full) => false,
            (
                NormalArc::Sweep { start, extent },
                NormalArc::Sweep {
                    start: os,
                    extent: oe,
                },
            ) => {
                let d = os.ccw_from(start);
                d > S::zero() && d + oe < extent
            }
        }
    }

    /// Complementary arc; `None` when nothing of positive extent remains.
    pub fn complement(&self) -> Option<NormalArc<S>> {
        match *self {
            NormalArc::Full => None,
            NormalArc::Sweep { start, extent } => {
                let rest = S::two_pi() - extent;
                if rest > S::zero() {
                    Some(NormalArc::Sweep {
                        start: start.offset(extent),
                        extent: rest,
                    })
                } else {
                    None
                }
            }
        }
    }

    /// Set intersection of two arcs: zero, one or two maximal pieces of
    /// positive extent, ordered by start angle relative to `self`.
    pub fn intersect(&self, other: &NormalArc<S>) -> Vec<NormalArc<S>> {
        let tau = S::two_pi();
        let (a_start, a_ext) = match *self {
            NormalArc::Full => return vec![*other],
            NormalArc::Sweep { extent, .. } if extent >= tau => return vec![*other],
            NormalArc::Sweep { start, extent } => (start, extent),
        };
        let (b_start, b_ext) = match *other {
            NormalArc::Full => return vec![*self],
            NormalArc::Sweep { extent, .. } if extent >= tau => return vec![*self],
            NormalArc::Sweep { start, extent } => (start, extent),
        };
        // Work in self's frame: self is [0, a_ext], other is [b0, b0 + b_ext]
        // and its copy shifted by -2π.
        let b0 = b_start.ccw_from(a_start);
        let mut out = Vec::with_capacity(2);
        for shift in [b0 - tau, b0] {
            let lo = shift.max(S::zero());
            let hi = (shift + b_ext).min(a_ext);
            if hi > lo {
                out.push(NormalArc::Sweep {
                    start: a_start.offset(lo),
                    extent: hi - lo,
                });
            }
        }
        out
    }

    pub fn cast<T: Scalar>(&self) -> NormalArc<T> {
        match *self {
            NormalArc::Full => NormalArc::Full,
            NormalArc::Sweep { start, extent } => NormalArc::Sweep {
                start: NormalAngle::new(T::lit(start.value().as_f64())),
                extent: T::lit(extent.as_f64()),
            },
        }
    }
}

/// Numerical tolerances carried by every scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<S> {
    /// Point coincidence and membership slack.
    pub eps_geom: S,
    /// Arcs of at most this extent are treated as single points.
    pub eps_angle: S,
    /// Bisection termination width.
    pub refine_tol: S,
    /// Grid size for sign-change scans over a boundary.
    pub scan_samples: usize,
}

impl<S: Scalar> Default for Tolerances<S> {
    fn default() -> Self {
        Tolerances {
            eps_geom: S::lit(S::EPS_GEOM),
            eps_angle: S::lit(S::EPS_ANGLE),
            refine_tol: S::lit(S::REFINE_TOL),
            scan_samples: 4096,
        }
    }
}

impl<S: Scalar> Tolerances<S> {
    pub fn validate(&self) -> Result<(), GeomError> {
        let bad = |m: &str| Err(GeomError::BadTolerances(m.to_string()));
        if !(self.eps_geom > S::zero() && self.eps_angle > S::zero() && self.refine_tol > S::zero())
        {
            return bad("all tolerances must be strictly positive");
        }
        if !(self.refine_tol < self.eps_geom && self.eps_geom < S::one()) {
            return bad("need refine_tol < eps_geom < 1");
        }
        if self.scan_samples < 64 {
            return bad("scan_samples must be at least 64");
        }
        Ok(())
    }
}
