//! Boundary crossings of two strictly convex bodies.
//!
//! `f(θ) = membership_b(γ_a(θ))` is scanned on a uniform grid of normal
//! angles; sign changes are refined by bisection. Local extrema of `f` that
//! come close to zero without a sign change are refined by golden-section
//! search, which either uncovers a pair of crossings the grid stepped over or
//! flags a tangency.

use crate::domains::{ConvexDomain, PlacedBody};
use crate::engine::EngineError;
use crate::geom::{NormalAngle, NormalArc, Point2, Tolerances};
use crate::roots::{bisect, golden_min};
use crate::Scalar;

/// A point of `bd(a) ∩ bd(b)` with its normal parameter on each boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing<S> {
    pub point: Point2<S>,
    pub theta_a: NormalAngle<S>,
    pub theta_b: NormalAngle<S>,
}

impl<S: Scalar> Crossing<S> {
    fn swapped(self) -> Self {
        Crossing {
            point: self.point,
            theta_a: self.theta_b,
            theta_b: self.theta_a,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairResult<S> {
    Disjoint,
    /// One body lies inside the other; `a_inside_b` tells which.
    NestedOrContained {
        a_inside_b: bool,
    },
    Two([Crossing<S>; 2]),
}

impl<S: Scalar> PairResult<S> {
    pub fn crossings(&self) -> Option<&[Crossing<S>; 2]> {
        match self {
            PairResult::Two(c) => Some(c),
            _ => None,
        }
    }

    fn swapped(&self) -> Self {
        match self {
            PairResult::Disjoint => PairResult::Disjoint,
            PairResult::NestedOrContained { a_inside_b } => PairResult::NestedOrContained {
                a_inside_b: !a_inside_b,
            },
            PairResult::Two([p, q]) => PairResult::Two([p.swapped(), q.swapped()]),
        }
    }
}

struct Scan<S> {
    roots: Vec<S>,
    /// Sign of `f` when there are no roots (`true`: outside `b` everywhere).
    outside: bool,
}

/// Normal parameters on `bd(a)` where `bd(a)` crosses `bd(b)`.
fn crossings_on<S: Scalar>(
    a: &PlacedBody<S>,
    b: &PlacedBody<S>,
    tol: &Tolerances<S>,
) -> Result<Scan<S>, EngineError> {
    let n = tol.scan_samples;
    let step = S::two_pi() / S::lit(n as f64);
    let f = |t: S| b.signed_membership(a.boundary_at_normal(NormalAngle::new(t)));
    let ts: Vec<S> = (0..n).map(|k| step * S::lit(k as f64)).collect();
    let fs: Vec<S> = ts.iter().map(|&t| f(t)).collect();
    let at = |k: usize| -> (S, S) {
        // angle may run past 2π for the wraparound interval
        let q = k / n;
        (ts[k % n] + S::two_pi() * S::lit(q as f64), fs[k % n])
    };

    let mut roots = Vec::new();
    let mut near_change = vec![false; n];
    for k in 0..n {
        let (t0, f0) = at(k);
        let (t1, f1) = at(k + 1);
        if (f0 < S::zero()) != (f1 < S::zero()) {
            roots.push(bisect(f, t0, t1, tol.refine_tol));
            near_change[k] = true;
            near_change[(k + 1) % n] = true;
        }
    }

    for k in 0..n {
        let prev = fs[(k + n - 1) % n];
        let next = fs[(k + 1) % n];
        let cur = fs[k];
        if near_change[k] || near_change[(k + n - 1) % n] || near_change[(k + 1) % n] {
            continue;
        }
        let is_min = cur < prev && cur <= next && cur >= S::zero();
        let is_max = cur > prev && cur >= next && cur < S::zero();
        if !(is_min || is_max) {
            continue;
        }
        let sign = if is_min { S::one() } else { -S::one() };
        let lo = at(k + n - 1).0 - S::two_pi();
        let hi = at(k + 1).0;
        let (t_ext, v) = golden_min(|t| sign * f(t), lo, hi, tol.refine_tol);
        let v = sign * v;
        if (v < S::zero()) != (cur < S::zero()) {
            roots.push(bisect(f, lo, t_ext, tol.refine_tol));
            roots.push(bisect(f, t_ext, hi, tol.refine_tol));
        } else if v.abs() < tol.eps_geom {
            return Err(EngineError::Degenerate(format!(
                "boundaries touch tangentially near normal angle {}",
                NormalAngle::new(t_ext).value()
            )));
        }
    }

    let mut roots: Vec<S> = roots
        .into_iter()
        .map(|t| NormalAngle::new(t).value())
        .collect();
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(Scan {
        roots,
        outside: fs[0] >= S::zero(),
    })
}

/// `bd(a) ∩ bd(b)` for two strictly convex bodies.
pub fn pairwise_boundary_points<S: Scalar>(
    a: &PlacedBody<S>,
    b: &PlacedBody<S>,
    tol: &Tolerances<S>,
) -> Result<PairResult<S>, EngineError> {
    let on_a = crossings_on(a, b, tol)?;
    match on_a.roots.len() {
        0 => {
            if !on_a.outside {
                return Ok(PairResult::NestedOrContained { a_inside_b: true });
            }
            if a.signed_membership(b.interior_point()) < S::zero() {
                Ok(PairResult::NestedOrContained { a_inside_b: false })
            } else {
                Ok(PairResult::Disjoint)
            }
        }
        2 => {
            let on_b = crossings_on(b, a, tol)?;
            if on_b.roots.len() != 2 {
                return Err(count_error(on_b.roots.len()));
            }
            let pa: Vec<_> = on_a
                .roots
                .iter()
                .map(|&t| a.boundary_at_normal(NormalAngle::new(t)))
                .collect();
            let pb: Vec<_> = on_b
                .roots
                .iter()
                .map(|&t| b.boundary_at_normal(NormalAngle::new(t)))
                .collect();
            let straight = pa[0].dist(pb[0]) + pa[1].dist(pb[1]);
            let crossed = pa[0].dist(pb[1]) + pa[1].dist(pb[0]);
            let order = if straight <= crossed { [0, 1] } else { [1, 0] };
            let slack = tol.eps_geom.sqrt();
            let mut out = [Crossing {
                point: Point2::origin(),
                theta_a: NormalAngle::new(S::zero()),
                theta_b: NormalAngle::new(S::zero()),
            }; 2];
            for i in 0..2 {
                let j = order[i];
                if pa[i].dist(pb[j]) > slack {
                    return Err(EngineError::ModelViolation(format!(
                        "crossing located inconsistently from the two boundaries ({:?} vs {:?})",
                        pa[i], pb[j]
                    )));
                }
                out[i] = Crossing {
                    point: pa[i].midpoint(pb[j]),
                    theta_a: NormalAngle::new(on_a.roots[i]),
                    theta_b: NormalAngle::new(on_b.roots[j]),
                };
            }
            if out[0].point.dist(out[1].point) < tol.eps_geom {
                return Err(EngineError::Degenerate("the two crossings coincide".into()));
            }
            Ok(PairResult::Two(out))
        }
        k => Err(count_error(k)),
    }
}

fn count_error(k: usize) -> EngineError {
    if k > 2 {
        EngineError::MoreThanTwo { count: k }
    } else {
        EngineError::Degenerate(format!("{k} boundary crossings"))
    }
}

/// Total normal-angle extent of `{θ : γ_a(θ) lies outside b}`.
pub fn exterior_gauss_extent<S: Scalar>(
    a: &PlacedBody<S>,
    b: &PlacedBody<S>,
    tol: &Tolerances<S>,
) -> Result<S, EngineError> {
    match pairwise_boundary_points(a, b, tol)? {
        PairResult::Disjoint => Ok(S::two_pi()),
        PairResult::NestedOrContained { a_inside_b } => {
            Ok(if a_inside_b { S::zero() } else { S::two_pi() })
        }
        PairResult::Two([p, q]) => {
            let arc = NormalArc::between(p.theta_a, q.theta_a)
                .ok_or_else(|| EngineError::Degenerate("crossings share a normal".into()))?;
            let mid = a.boundary_at_normal(arc.midpoint());
            if b.signed_membership(mid) > S::zero() {
                Ok(arc.extent())
            } else {
                Ok(S::two_pi() - arc.extent())
            }
        }
    }
}

/// Pairwise results for every pair of bodies of a scene, computed once.
#[derive(Debug, Clone)]
pub struct PairTable<S> {
    n: usize,
    upper: Vec<PairResult<S>>,
}

impl<S: Scalar> PairTable<S> {
    pub fn compute(bodies: &[PlacedBody<S>], tol: &Tolerances<S>) -> Result<Self, EngineError> {
        let n = bodies.len();
        let mut upper = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(pairwise_boundary_points(&bodies[i], &bodies[j], tol)?);
            }
        }
        Ok(PairTable { n, upper })
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Result oriented so that `a` is body `i`.
    pub fn get(&self, i: usize, j: usize) -> PairResult<S> {
        if i < j {
            self.upper[self.index(i, j)].clone()
        } else {
            self.upper[self.index(j, i)].swapped()
        }
    }

    /// Normal parameters on body `i` of its two crossings with body `j`.
    pub fn params_on(&self, i: usize, j: usize) -> Option<[NormalAngle<S>; 2]> {
        match self.get(i, j) {
            PairResult::Two([p, q]) => Some([p.theta_a, q.theta_a]),
            _ => None,
        }
    }
}
