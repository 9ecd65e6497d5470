use crate::domains::{ConvexDomain, DomainError, SingularFeature};
use crate::geom::{NormalAngle, NormalArc, Point2, Tolerances};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle<S> {
    pub center: Point2<S>,
    pub radius: S,
}

impl<S: Scalar> Circle<S> {
    pub fn new(center: Point2<S>, radius: S) -> Self {
        Circle { center, radius }
    }
}

/// Boundary arc of a ball polygon: the part of circle `disk` whose outward
/// normals form `arc`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallArc<S> {
    pub disk: usize,
    pub arc: NormalArc<S>,
}

/// Intersection of finitely many disks.
///
/// The boundary is a cyclic sequence of circular arcs; every junction between
/// two arcs is a singular point whose normal arc spans the gap between the
/// adjacent arcs' normals. Everything is computed in closed form from the
/// circle pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPolygon<S> {
    disks: Vec<Circle<S>>,
    arcs: Vec<BallArc<S>>,
    features: Vec<SingularFeature<S>>,
    interior: Point2<S>,
}

impl<S: Scalar> BallPolygon<S> {
    pub fn new(disks: &[Circle<S>], tol: &Tolerances<S>) -> Result<Self, DomainError> {
        if disks.len() < 2 {
            return Err(DomainError::InvalidParameter(format!(
                "ball polygon needs at least 2 disks, got {}",
                disks.len()
            )));
        }
        for c in disks {
            if !(c.center.is_finite() && c.radius.is_finite() && c.radius > S::zero()) {
                return Err(DomainError::InvalidParameter(format!("bad disk {c:?}")));
            }
        }
        let eps = tol.eps_geom;
        for (i, ci) in disks.iter().enumerate() {
            for (j, cj) in disks.iter().enumerate().skip(i + 1) {
                let d = ci.center.dist(cj.center);
                let (ri, rj) = (ci.radius, cj.radius);
                if d < eps && (ri - rj).abs() < eps {
                    return Err(DomainError::ImproperIntersection(format!(
                        "disks {i} and {j} coincide"
                    )));
                }
                if (d - (ri + rj)).abs() < eps || (d - (ri - rj).abs()).abs() < eps {
                    return Err(DomainError::Degenerate(format!(
                        "circles {i} and {j} are tangent"
                    )));
                }
                if d > ri + rj {
                    return Err(DomainError::ImproperIntersection(format!(
                        "disks {i} and {j} are disjoint"
                    )));
                }
            }
        }

        let mut arcs = Vec::new();
        for (k, ck) in disks.iter().enumerate() {
            let mut pieces = vec![NormalArc::Full];
            for (j, cj) in disks.iter().enumerate() {
                if j == k {
                    continue;
                }
                let v = cj.center - ck.center;
                let d = v.norm();
                if d + ck.radius < cj.radius {
                    continue; // circle k lies inside disk j
                }
                if d + cj.radius < ck.radius {
                    pieces.clear(); // disk j inside disk k: circle k is outside
                    break;
                }
                let cos_half = (ck.radius * ck.radius + d * d - cj.radius * cj.radius)
                    / (S::lit(2.0) * ck.radius * d);
                let half = cos_half.max(-S::one()).min(S::one()).acos();
                let inside = NormalArc::new(NormalAngle::new(v.angle() - half), S::lit(2.0) * half)
                    .map_err(|e| DomainError::Degenerate(e.to_string()))?;
                pieces = pieces.iter().flat_map(|p| p.intersect(&inside)).collect();
                if pieces.is_empty() {
                    break;
                }
            }
            let kept: Vec<_> = pieces
                .into_iter()
                .filter(|p| p.extent() > tol.eps_angle)
                .collect();
            if kept.is_empty() {
                return Err(DomainError::ImproperIntersection(format!(
                    "disk {k} is redundant"
                )));
            }
            arcs.extend(kept.into_iter().map(|arc| BallArc { disk: k, arc }));
        }
        arcs.sort_by(|a, b| {
            a.arc
                .start()
                .value()
                .partial_cmp(&b.arc.start().value())
                .unwrap()
        });

        let point_on = |a: &BallArc<S>, t: NormalAngle<S>| {
            let c = &disks[a.disk];
            c.center + t.unit() * c.radius
        };
        let mut features = Vec::with_capacity(arcs.len());
        for i in 0..arcs.len() {
            let cur = &arcs[i];
            let next = &arcs[(i + 1) % arcs.len()];
            let gap = NormalArc::between(cur.arc.end(), next.arc.start())
                .filter(|g| g.extent() > tol.eps_angle && g.extent() < S::two_pi() - tol.eps_angle)
                .ok_or_else(|| {
                    DomainError::Degenerate(format!("junction after arc {i} has no normal gap"))
                })?;
            let p = point_on(cur, cur.arc.end());
            let q = point_on(next, next.arc.start());
            if p.dist(q) > eps.sqrt() {
                return Err(DomainError::Degenerate(format!(
                    "arcs {i} and {} do not meet",
                    i + 1
                )));
            }
            features.push(SingularFeature {
                point: p.midpoint(q),
                normal_arc: gap,
            });
        }

        let mut sum = Point2::origin();
        for a in &arcs {
            sum = sum + point_on(a, a.arc.midpoint());
        }
        for f in &features {
            sum = sum + f.point;
        }
        let interior = sum / S::lit((arcs.len() + features.len()) as f64);

        Ok(BallPolygon {
            disks: disks.to_vec(),
            arcs,
            features,
            interior,
        })
    }

    pub fn disks(&self) -> &[Circle<S>] {
        &self.disks
    }

    /// Boundary arcs ordered by normal angle.
    pub fn arcs(&self) -> &[BallArc<S>] {
        &self.arcs
    }

    pub fn features(&self) -> &[SingularFeature<S>] {
        &self.features
    }
}

impl<S: Scalar> ConvexDomain<S> for BallPolygon<S> {
    fn boundary_at_normal(&self, theta: NormalAngle<S>) -> Point2<S> {
        for a in &self.arcs {
            if a.arc.contains(theta) {
                let c = &self.disks[a.disk];
                return c.center + theta.unit() * c.radius;
            }
        }
        self.features
            .iter()
            .find(|f| f.normal_arc.contains(theta))
            .map(|f| f.point)
            // Rounding can leave θ a hair outside every arc; take the closest feature.
            .unwrap_or_else(|| {
                self.features
                    .iter()
                    .min_by(|f, g| {
                        let df = f.normal_arc.midpoint().distance(theta);
                        let dg = g.normal_arc.midpoint().distance(theta);
                        df.partial_cmp(&dg).unwrap()
                    })
                    .map(|f| f.point)
                    .unwrap_or(self.interior)
            })
    }

    fn support(&self, theta: NormalAngle<S>) -> S {
        let u = theta.unit();
        let arc_best = self
            .arcs
            .iter()
            .filter(|a| a.arc.contains(theta))
            .map(|a| {
                let c = &self.disks[a.disk];
                c.center.dot(u) + c.radius
            })
            .next();
        arc_best.unwrap_or_else(|| {
            self.features
                .iter()
                .map(|f| f.point.dot(u))
                .fold(S::neg_infinity(), S::max)
        })
    }

    fn singular_features(&self) -> Vec<SingularFeature<S>> {
        self.features.clone()
    }

    fn interior_point(&self) -> Point2<S> {
        self.interior
    }

    fn signed_membership(&self, q: Point2<S>) -> S {
        let c = self.interior;
        let v = q - c;
        let rho = v.norm();
        let dir = if rho > S::zero() {
            v / rho
        } else {
            Point2::new(S::one(), S::zero())
        };
        let exit = self
            .disks
            .iter()
            .map(|d| {
                let w = c - d.center;
                let b = w.dot(dir);
                let disc = b * b - (w.dot(w) - d.radius * d.radius);
                -b + disc.max(S::zero()).sqrt()
            })
            .fold(S::infinity(), S::min);
        rho - exit
    }

    fn is_strictly_convex(&self) -> bool {
        true
    }

    fn is_smooth(&self) -> bool {
        self.features.is_empty()
    }
}
