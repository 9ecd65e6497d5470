//! Interior witnesses for an intersection of bodies, using membership
//! queries only.

use crate::domains::{ConvexDomain, PlacedBody};
use crate::geom::Point2;
use crate::Scalar;

/// `max_i membership_i(q)` over the active bodies; negative exactly on the
/// interior of the intersection.
pub fn depth<S: Scalar>(bodies: &[PlacedBody<S>], active: &[usize], q: Point2<S>) -> S {
    active
        .iter()
        .map(|&i| bodies[i].signed_membership(q))
        .fold(S::neg_infinity(), S::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness<S> {
    pub point: Point2<S>,
    pub depth: S,
}

/// Axis-aligned box shared by all active bodies, if any.
pub fn common_box<S: Scalar>(
    bodies: &[PlacedBody<S>],
    active: &[usize],
) -> Option<(Point2<S>, Point2<S>)> {
    let mut lo = Point2::new(S::neg_infinity(), S::neg_infinity());
    let mut hi = Point2::new(S::infinity(), S::infinity());
    for &i in active {
        let (a, b) = bodies[i].bounding_box();
        lo = Point2::new(lo.x.max(a.x), lo.y.max(a.y));
        hi = Point2::new(hi.x.min(b.x), hi.y.min(b.y));
    }
    (lo.x < hi.x && lo.y < hi.y).then_some((lo, hi))
}

fn compass<S: Scalar>(
    bodies: &[PlacedBody<S>],
    active: &[usize],
    start: Point2<S>,
    step: S,
    tol: S,
) -> Witness<S> {
    let dirs: Vec<Point2<S>> = (0..8)
        .map(|k| Point2::polar(S::FRAC_PI_4() * S::lit(k as f64)))
        .collect();
    let mut p = start;
    let mut d = depth(bodies, active, p);
    let mut h = step;
    let mut iters = 0;
    while h > tol && iters < 2000 {
        iters += 1;
        let best = dirs
            .iter()
            .map(|&u| {
                let q = p + u * h;
                (q, depth(bodies, active, q))
            })
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        match best {
            Some((q, dq)) if dq < d => {
                p = q;
                d = dq;
            }
            _ => h = h * S::lit(0.5),
        }
    }
    Witness { point: p, depth: d }
}

/// Searches for the deepest interior point of the intersection of the active
/// bodies. Starts from every body's interior point, their pairwise midpoints,
/// their centroid and the `extra` candidates, polishes the best few by
/// compass search and, failing that, scans a 64×64 grid of the common
/// bounding box. Returns the deepest point found even when it is not inside.
pub fn find_witness<S: Scalar>(
    bodies: &[PlacedBody<S>],
    active: &[usize],
    extra: &[Point2<S>],
    eps: S,
) -> Option<Witness<S>> {
    let (lo, hi) = common_box(bodies, active)?;
    let mut cands: Vec<Point2<S>> = extra.to_vec();
    let centers: Vec<_> = active.iter().map(|&i| bodies[i].interior_point()).collect();
    let mut sum = Point2::origin();
    for (k, &c) in centers.iter().enumerate() {
        sum = sum + c;
        cands.push(c);
        for &d in &centers[k + 1..] {
            cands.push(c.midpoint(d));
        }
    }
    cands.push(sum / S::lit(centers.len().max(1) as f64));
    cands.push(lo.midpoint(hi));

    let mut scored: Vec<Witness<S>> = cands
        .into_iter()
        .map(|p| Witness {
            point: p,
            depth: depth(bodies, active, p),
        })
        .collect();
    scored.sort_by(|a, b| a.depth.partial_cmp(&b.depth).unwrap());
    let step = (hi - lo).norm() * S::lit(0.25);
    let mut best = scored[0];
    for w in scored.iter().take(3) {
        let r = compass(bodies, active, w.point, step, eps);
        if r.depth < best.depth {
            best = r;
        }
    }
    if best.depth < -eps {
        return Some(best);
    }

    let g = 64;
    for a in 0..g {
        for b in 0..g {
            let p = Point2::new(
                lo.x + (hi.x - lo.x) * S::lit((a as f64 + 0.5) / g as f64),
                lo.y + (hi.y - lo.y) * S::lit((b as f64 + 0.5) / g as f64),
            );
            let d = depth(bodies, active, p);
            if d < best.depth {
                best = Witness { point: p, depth: d };
            }
        }
    }
    if best.depth < -eps {
        best = compass(bodies, active, best.point, step / S::lit(g as f64), eps);
    }
    Some(best)
}
