use crate::domains::{ConvexDomain, DomainError, SingularFeature};
use crate::geom::{NormalAngle, Point2};
use crate::Scalar;

/// Regular polygon with rounded corners: the Minkowski sum of a regular
/// `n`-gon of apothem `apothem - corner_radius` and a disk of radius
/// `corner_radius`. Face normals sit at `2πk/n`, so the outer faces keep
/// apothem `apothem`.
///
/// Smooth but not strictly convex (the faces are flat).
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedPolygon<S> {
    pub n: usize,
    pub apothem: S,
    pub corner_radius: S,
    inner: Vec<Point2<S>>,
    normals: Vec<Point2<S>>,
}

impl<S: Scalar> RoundedPolygon<S> {
    pub fn new(n: usize, apothem: S, corner_radius: S) -> Result<Self, DomainError> {
        if n < 3 {
            return Err(DomainError::InvalidParameter(format!(
                "rounded polygon needs n >= 3, got {n}"
            )));
        }
        if !(apothem.is_finite() && apothem > S::zero()) {
            return Err(DomainError::InvalidParameter(format!(
                "apothem must be positive, got {apothem}"
            )));
        }
        if !(corner_radius.is_finite() && corner_radius > S::zero()) {
            return Err(DomainError::InvalidParameter(format!(
                "corner radius must be positive, got {corner_radius}"
            )));
        }
        // Flat faces have length 2(apothem - r)tan(π/n); they vanish at r = apothem.
        if corner_radius >= apothem {
            return Err(DomainError::InvalidParameter(format!(
                "corner radius {corner_radius} leaves no flat faces (must be < apothem {apothem})"
            )));
        }
        let nn = S::lit(n as f64);
        let step = S::two_pi() / nn;
        let inner_apothem = apothem - corner_radius;
        let circum = inner_apothem / (S::PI() / nn).cos();
        let inner = (0..n)
            .map(|k| Point2::polar(step * (S::lit(k as f64) + S::lit(0.5))) * circum)
            .collect();
        let normals = (0..n)
            .map(|k| Point2::polar(step * S::lit(k as f64)))
            .collect();
        Ok(RoundedPolygon {
            n,
            apothem,
            corner_radius,
            inner,
            normals,
        })
    }

    /// Vertices of the inner (unrounded) polygon, counterclockwise; vertex `k`
    /// sits between face normals `2πk/n` and `2π(k+1)/n`.
    pub fn inner_vertices(&self) -> &[Point2<S>] {
        &self.inner
    }

    /// Corner `k` of the sharp polygon with the same faces.
    pub fn apex(&self, k: usize) -> Point2<S> {
        let nn = S::lit(self.n as f64);
        let step = S::two_pi() / nn;
        Point2::polar(step * (S::lit(k as f64) + S::lit(0.5)))
            * (self.apothem / (S::PI() / nn).cos())
    }

    /// Endpoints of flat face `k` (normal `2πk/n`), counterclockwise.
    pub fn face(&self, k: usize) -> (Point2<S>, Point2<S>) {
        let r = self.corner_radius;
        let n = self.normals[k % self.n];
        let prev = self.inner[(k + self.n - 1) % self.n];
        let next = self.inner[k % self.n];
        (prev + n * r, next + n * r)
    }

    fn inner_signed_distance(&self, q: Point2<S>) -> S {
        let inner_apothem = self.apothem - self.corner_radius;
        let depth = self
            .normals
            .iter()
            .map(|n| q.dot(*n) - inner_apothem)
            .fold(S::neg_infinity(), S::max);
        if depth <= S::zero() {
            return depth;
        }
        (0..self.n)
            .map(|k| segment_distance(q, self.inner[k], self.inner[(k + 1) % self.n]))
            .fold(S::infinity(), S::min)
    }
}

fn segment_distance<S: Scalar>(q: Point2<S>, a: Point2<S>, b: Point2<S>) -> S {
    let ab = b - a;
    let t = ((q - a).dot(ab) / ab.dot(ab)).max(S::zero()).min(S::one());
    q.dist(a + ab * t)
}

impl<S: Scalar> ConvexDomain<S> for RoundedPolygon<S> {
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S> {
        let nn = S::lit(self.n as f64);
        let step = S::two_pi() / nn;
        let f = theta.value() / step;
        let nearest = f.round();
        if (f - nearest).abs() < S::lit(1e-12) {
            // On a face normal the support set is a segment; report its midpoint.
            return theta.unit() * self.apothem;
        }
        let k = f.floor().to_usize().unwrap_or(0) % self.n;
        self.inner[k] + theta.unit() * self.corner_radius
    }

    fn support(&self, theta: NormalAngle<S>) -> S {
        let u = theta.unit();
        self.inner
            .iter()
            .map(|v| v.dot(u))
            .fold(S::neg_infinity(), S::max)
            + self.corner_radius
    }

    fn singular_features(&self) -> Vec<SingularFeature<S>> {
        Vec::new()
    }

    fn interior_point(&self) -> Point2<S> {
        Point2::origin()
    }

    fn signed_membership(&self, q: Point2<S>) -> S {
        self.inner_signed_distance(q) - self.corner_radius
    }

    fn is_strictly_convex(&self) -> bool {
        false
    }

    fn is_smooth(&self) -> bool {
        true
    }
}
