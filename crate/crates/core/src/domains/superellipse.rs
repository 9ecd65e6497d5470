use crate::domains::{ConvexDomain, DomainError, SingularFeature};
use crate::geom::{NormalAngle, Point2};
use crate::Scalar;

/// Lamé curve `|x/a|^p + |y/b|^p ≤ 1` with `p > 1`.
///
/// The inverse Gauss map uses Hölder duality: with `q = p/(p-1)` and
/// `w = (a·nx, b·ny)`, the support is `‖w‖_q` and the maximizer has
/// coordinates `a·sgn(wx)|wx|^(q-1) / ‖w‖_q^(q-1)` (likewise for y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superellipse<S> {
    pub p: S,
    pub a: S,
    pub b: S,
}

impl<S: Scalar> Superellipse<S> {
    pub fn new(p: S, a: S, b: S) -> Result<Self, DomainError> {
        if !(p.is_finite() && p > S::one()) {
            return Err(DomainError::InvalidParameter(format!(
                "superellipse exponent must exceed 1, got {p}"
            )));
        }
        if !(a.is_finite() && b.is_finite() && a > S::zero() && b > S::zero()) {
            return Err(DomainError::InvalidParameter(format!(
                "superellipse axes must be positive, got a={a}, b={b}"
            )));
        }
        Ok(Superellipse { p, a, b })
    }

    fn dual_exponent(&self) -> S {
        self.p / (self.p - S::one())
    }
}

impl<S: Scalar> ConvexDomain<S> for Superellipse<S> {
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S> {
        let n = theta.unit();
        let q = self.dual_exponent();
        let (wx, wy) = (self.a * n.x, self.b * n.y);
        let h = (wx.abs().powf(q) + wy.abs().powf(q)).powf(q.recip());
        let k = q - S::one();
        let coord = |w: S, axis: S| {
            let r = (w.abs() / h).powf(k);
            axis * r.copysign(w)
        };
        Point2::new(coord(wx, self.a), coord(wy, self.b))
    }

    fn support(&self, theta: NormalAngle<S>) -> S {
        let n = theta.unit();
        let q = self.dual_exponent();
        ((self.a * n.x).abs().powf(q) + (self.b * n.y).abs().powf(q)).powf(q.recip())
    }

    fn singular_features(&self) -> Vec<SingularFeature<S>> {
        Vec::new()
    }

    fn interior_point(&self) -> Point2<S> {
        Point2::origin()
    }

    fn signed_membership(&self, q: Point2<S>) -> S {
        let rho = q.norm();
        if rho == S::zero() {
            return -self.a.min(self.b);
        }
        let k = ((q.x / self.a).abs().powf(self.p) + (q.y / self.b).abs().powf(self.p))
            .powf(self.p.recip());
        rho - rho / k
    }

    fn is_strictly_convex(&self) -> bool {
        true
    }

    fn is_smooth(&self) -> bool {
        true
    }
}
