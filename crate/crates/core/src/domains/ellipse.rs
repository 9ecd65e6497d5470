use crate::domains::{ConvexDomain, DomainError, SingularFeature};
use crate::geom::{NormalAngle, Point2};
use crate::Scalar;

/// Ellipse with semi-axes `a` (local x) and `b` (local y), rotated
/// counterclockwise by `rotation` about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse<S> {
    pub a: S,
    pub b: S,
    pub rotation: S,
}

impl<S: Scalar> Ellipse<S> {
    pub fn new(a: S, b: S, rotation: S) -> Result<Self, DomainError> {
        if !(a.is_finite() && b.is_finite() && a > S::zero() && b > S::zero()) {
            return Err(DomainError::InvalidParameter(format!(
                "ellipse axes must be positive, got a={a}, b={b}"
            )));
        }
        if !rotation.is_finite() {
            return Err(DomainError::InvalidParameter(
                "non-finite ellipse rotation".into(),
            ));
        }
        Ok(Ellipse { a, b, rotation })
    }
}

impl<S: Scalar> ConvexDomain<S> for Ellipse<S> {
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S> {
        let n = theta.unit().rotate(-self.rotation);
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let h = (a2 * n.x * n.x + b2 * n.y * n.y).sqrt();
        Point2::new(a2 * n.x / h, b2 * n.y / h).rotate(self.rotation)
    }

    fn support(&self, theta: NormalAngle<S>) -> S {
        let n = theta.unit().rotate(-self.rotation);
        (self.a * self.a * n.x * n.x + self.b * self.b * n.y * n.y).sqrt()
    }

    fn singular_features(&self) -> Vec<SingularFeature<S>> {
        Vec::new()
    }

    fn interior_point(&self) -> Point2<S> {
        Point2::origin()
    }

    fn signed_membership(&self, q: Point2<S>) -> S {
        let l = q.rotate(-self.rotation);
        let rho = l.norm();
        if rho == S::zero() {
            return -self.a.min(self.b);
        }
        let k = (l.x / self.a).hypot(l.y / self.b);
        rho - rho / k
    }

    fn is_strictly_convex(&self) -> bool {
        true
    }

    fn is_smooth(&self) -> bool {
        true
    }
}
