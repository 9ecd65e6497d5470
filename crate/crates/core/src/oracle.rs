//! Membership-only boundary tracer and corner detector.
//!
//! The boundary of the intersection is sampled by shooting rays from an
//! interior anchor and bisecting on the largest membership value along each
//! ray. Corners show up as turning concentrated between two neighbouring
//! samples: the angle between the secant arriving at sample `k` and the
//! secant leaving sample `k + 1`. Candidates are re-traced with finer and
//! finer ray spacing around the suspicious interval. At a corner the turning
//! stays put; along a smooth arc it shrinks with the spacing.
//!
//! Nothing here looks at boundary parametrizations or singular features of
//! the bodies, so it can check the engine and also handles bodies the engine
//! refuses (flat sides).

use thiserror::Error;

use crate::engine::witness::{common_box, depth, find_witness};
use crate::engine::SceneSpec;
use crate::geom::Point2;
use crate::roots::bisect;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no interior point found")]
    NoInterior,
    #[error("bad oracle configuration: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Ray directions of the coarse trace.
    pub samples: usize,
    /// Minimum turning (radians) for a corner.
    pub tau: f64,
    /// Refinement rounds a candidate must survive.
    pub levels: usize,
    /// Secant length in samples.
    pub window: usize,
    /// Turning must keep at least this fraction from one round to the next.
    pub persistence: f64,
    /// Corners closer than this are merged.
    pub dedup_radius: f64,
    /// Ray spacing (radians) at which corner positions are read off.
    pub polish_spacing: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            samples: 8192,
            tau: 0.02,
            levels: 3,
            window: 4,
            persistence: 0.6,
            dedup_radius: 1e-5,
            polish_spacing: 1e-8,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: &str| Err(OracleError::BadConfig(m.to_string()));
        if self.samples < 256 {
            return bad("samples must be at least 256");
        }
        if !(self.tau > 0.0 && self.tau < std::f64::consts::PI) {
            return bad("tau must lie in (0, π)");
        }
        if self.levels == 0 {
            return bad("levels must be at least 1");
        }
        if self.window == 0 || 4 * self.window + 4 > self.samples {
            return bad("window out of range");
        }
        if !(self.persistence > 0.0 && self.persistence <= 1.0) {
            return bad("persistence must lie in (0, 1]");
        }
        if !(self.dedup_radius >= 0.0 && self.polish_spacing > 0.0) {
            return bad("dedup_radius and polish_spacing must be positive");
        }
        Ok(())
    }
}

/// Ray-traced boundary of a scene's intersection.
#[derive(Debug, Clone)]
pub struct TracedBoundary<'a, S> {
    scene: &'a SceneSpec<S>,
    active: Vec<usize>,
    reach: S,
    pub anchor: Point2<S>,
    /// Boundary points, counterclockwise, one per direction.
    pub samples: Vec<Point2<S>>,
    pub directions: Vec<S>,
}

impl<'a, S: Scalar> TracedBoundary<'a, S> {
    /// Boundary point in direction `phi` from the anchor.
    pub fn shoot(&self, phi: S) -> Point2<S> {
        let u = Point2::polar(phi);
        let bodies = self.scene.bodies();
        let t = bisect(
            |t| depth(bodies, &self.active, self.anchor + u * t),
            S::zero(),
            self.reach,
            self.scene.tolerances().refine_tol,
        );
        self.anchor + u * t
    }

    /// Largest |max membership| over the samples.
    pub fn residual(&self) -> S {
        let bodies = self.scene.bodies();
        self.samples
            .iter()
            .map(|&q| depth(bodies, &self.active, q).abs())
            .fold(S::zero(), S::max)
    }

    /// Smallest cross product of consecutive polyline edges (negative values
    /// mean a reflex turn).
    pub fn convexity_defect(&self) -> S {
        let n = self.samples.len();
        (0..n)
            .map(|k| {
                let a = self.samples[(k + 1) % n] - self.samples[k];
                let b = self.samples[(k + 2) % n] - self.samples[(k + 1) % n];
                a.cross(b)
            })
            .fold(S::infinity(), S::min)
    }
}

/// Traces the boundary of the intersection of all bodies of `scene` with
/// `samples` equally spaced rays.
pub fn trace_boundary<S: Scalar>(
    scene: &SceneSpec<S>,
    samples: usize,
) -> Result<TracedBoundary<'_, S>, OracleError> {
    if samples < 4 {
        return Err(OracleError::BadConfig("at least 4 samples".into()));
    }
    let bodies = scene.bodies();
    let active: Vec<usize> = (0..scene.n()).collect();
    let eps = scene.tolerances().eps_geom;
    let w = find_witness(bodies, &active, &[], eps).ok_or(OracleError::NoInterior)?;
    if w.depth >= -eps {
        return Err(OracleError::NoInterior);
    }
    let (lo, hi) = common_box(bodies, &active).ok_or(OracleError::NoInterior)?;
    let reach = (hi - lo).norm() * S::lit(2.0) + (w.point - lo).norm();
    let mut tb = TracedBoundary {
        scene,
        active,
        reach,
        anchor: w.point,
        samples: Vec::new(),
        directions: Vec::new(),
    };
    let step = S::two_pi() / S::lit(samples as f64);
    tb.directions = (0..samples).map(|k| step * S::lit(k as f64)).collect();
    tb.samples = tb.directions.iter().map(|&phi| tb.shoot(phi)).collect();
    Ok(tb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport<S> {
    /// Corner positions with their estimated exterior angles.
    pub singular_points: Vec<(Point2<S>, S)>,
    pub count: usize,
}

fn turning<S: Scalar>(a: Point2<S>, b: Point2<S>) -> S {
    a.cross(b).atan2(a.dot(b))
}

/// Intersection of the lines through `p0, p1` and `q0, q1`.
fn meet<S: Scalar>(p0: Point2<S>, p1: Point2<S>, q0: Point2<S>, q1: Point2<S>) -> Point2<S> {
    let d = p1 - p0;
    let e = q1 - q0;
    let den = d.cross(e);
    if den.abs() <= S::epsilon() * d.norm() * e.norm() {
        return p1.midpoint(q0);
    }
    p0 + d * ((q0 - p0).cross(e) / den)
}

/// Baseline ray spacing is the coarse spacing over this.
const BASELINE_DIVISOR: usize = 16;
/// Extra refinement rounds granted to a candidate whose turning dropped.
const SPARE_ROUNDS: usize = 3;
/// Most refinement branches followed from one coarse candidate.
const MAX_BRANCHES: usize = 8;

#[derive(Clone, Copy)]
struct Zoom<S> {
    turn: S,
    center: S,
    corner: Point2<S>,
}

/// Re-traces rays with spacing `h` centred on `center` and returns the local
/// maxima of turning among the intervals within `reach` of the centre, in
/// angular order. Intervals further out only serve as secant ends, so a
/// neighbouring corner cannot capture the search.
fn zoom<S: Scalar>(
    tb: &TracedBoundary<'_, S>,
    center: S,
    h: S,
    w: usize,
    reach: usize,
) -> Vec<Zoom<S>> {
    let m = 2 * (reach + w + 1);
    let half = S::lit((m as f64 - 1.0) / 2.0);
    let phis: Vec<S> = (0..m)
        .map(|i| center + (S::lit(i as f64) - half) * h)
        .collect();
    let q: Vec<Point2<S>> = phis.iter().map(|&p| tb.shoot(p)).collect();
    let mid = m / 2 - 1;
    let (lo, hi) = (mid - reach, mid + reach);
    let t: Vec<S> = (lo..=hi)
        .map(|i| turning(q[i] - q[i - w], q[i + 1 + w] - q[i + 1]))
        .collect();
    (lo..=hi)
        .filter(|&i| {
            let j = i - lo;
            (j == 0 || t[j] >= t[j - 1]) && (j + 1 == t.len() || t[j] > t[j + 1])
        })
        .map(|i| Zoom {
            turn: t[i - lo],
            center: phis[i] + h * S::lit(0.5),
            corner: meet(q[i - w], q[i], q[i + 1], q[i + 1 + w]),
        })
        .collect()
}

/// One refinement branch.
struct Branch<S> {
    at: Zoom<S>,
    h: S,
    streak: usize,
    confirmed: bool,
    rounds: usize,
}

/// Corners of a traced boundary under the given configuration.
pub fn detect_singular_with<S: Scalar>(
    tb: &TracedBoundary<'_, S>,
    cfg: &OracleConfig,
) -> OracleReport<S> {
    let n = tb.samples.len();
    let w = cfg.window.min(n / 4).max(1);
    let tau = S::lit(cfg.tau);
    let persistence = S::lit(cfg.persistence);
    let floor = S::lit(cfg.polish_spacing);
    let p = &tb.samples;
    let turns: Vec<S> = (0..n)
        .map(|k| {
            turning(
                p[k] - p[(k + n - w) % n],
                p[(k + 1 + w) % n] - p[(k + 1) % n],
            )
        })
        .collect();
    let h0 = S::two_pi() / S::lit(n as f64);

    let mut found: Vec<(Point2<S>, S)> = Vec::new();
    for (k, &turn) in turns.iter().enumerate() {
        if turn <= tau {
            continue;
        }
        // Baseline at a sixteenth of the coarse spacing, searched over the
        // coarse interval and half its neighbours. Neighbouring corners can
        // add up in the coarse turning, so the persistence test starts here.
        // Only peaks whose corner estimate lies in (or just beside) this
        // coarse interval are followed; other intervals report their own
        // corners and duplicates are merged below.
        let own = tb.directions[k] + h0 * S::lit(0.5);
        let h = h0 / S::lit(BASELINE_DIVISOR as f64);
        let mut live: Vec<Branch<S>> = zoom(tb, own, h, w, BASELINE_DIVISOR * 3 / 4)
            .into_iter()
            .filter(|z| {
                let dir = (z.corner - tb.anchor).angle() - own;
                let off = dir - S::two_pi() * (dir / S::two_pi()).round();
                z.turn > tau && off.abs() <= h0 * S::lit(0.75)
            })
            .take(MAX_BRANCHES)
            .map(|at| Branch {
                at,
                h,
                streak: 0,
                confirmed: false,
                rounds: 0,
            })
            .collect();
        let mut branches = live.len();
        while let Some(b) = live.pop() {
            if b.confirmed && b.h < floor {
                found.push((b.at.corner, b.at.turn));
                continue;
            }
            let h = b.h * S::lit(0.25);
            let mut first = true;
            // A peak sits within `w + 1` of the previous spacing from each
            // corner it blends, which is `4(w + 1)` intervals after quartering.
            for z in zoom(tb, b.at.center, h, w, 4 * (w + 1)) {
                if z.turn <= tau {
                    continue;
                }
                if !first {
                    if branches == MAX_BRANCHES {
                        continue;
                    }
                    branches += 1;
                }
                first = false;
                let streak = if z.turn >= persistence * b.at.turn {
                    b.streak + 1
                } else {
                    0
                };
                let confirmed = b.confirmed || streak >= cfg.levels;
                let rounds = b.rounds + 1;
                if !confirmed && rounds >= cfg.levels + SPARE_ROUNDS {
                    continue;
                }
                if rounds > 64 {
                    found.push((z.corner, z.turn));
                    continue;
                }
                live.push(Branch {
                    at: z,
                    h,
                    streak,
                    confirmed,
                    rounds,
                });
            }
        }
    }

    let radius = S::lit(cfg.dedup_radius);
    let mut merged: Vec<(Point2<S>, S)> = Vec::with_capacity(found.len());
    for (pt, ang) in found {
        match merged.iter_mut().find(|(q, _)| q.dist(pt) <= radius) {
            Some(entry) => {
                if ang > entry.1 {
                    *entry = (pt, ang);
                }
            }
            None => merged.push((pt, ang)),
        }
    }
    let count = merged.len();
    OracleReport {
        singular_points: merged,
        count,
    }
}

/// Corners of a traced boundary with turning above `tau` that survive
/// `levels` refinement rounds.
pub fn detect_singular<S: Scalar>(
    tb: &TracedBoundary<'_, S>,
    tau: f64,
    levels: usize,
) -> OracleReport<S> {
    detect_singular_with(
        tb,
        &OracleConfig {
            tau,
            levels,
            ..OracleConfig::default()
        },
    )
}

/// Traces and analyzes a scene with the given configuration.
pub fn oracle_report<S: Scalar>(
    scene: &SceneSpec<S>,
    cfg: &OracleConfig,
) -> Result<OracleReport<S>, OracleError> {
    cfg.validate()?;
    let tb = trace_boundary(scene, cfg.samples)?;
    Ok(detect_singular_with(&tb, cfg))
}

/// Number of corners found with the default configuration.
pub fn oracle_vertex_count<S: Scalar>(scene: &SceneSpec<S>) -> Result<usize, OracleError> {
    Ok(oracle_report(scene, &OracleConfig::default())?.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{make_disk, make_ellipse, HomothetSpec};
    use crate::geom::Tolerances;

    fn disks(spec: &[(f64, f64, f64)]) -> SceneSpec<f64> {
        let pl: Vec<_> = spec
            .iter()
            .map(|&(x, y, s)| HomothetSpec::new(Point2::new(x, y), s).unwrap())
            .collect();
        SceneSpec::homothetic(make_disk(), &pl, Tolerances::default()).unwrap()
    }

    fn reuleaux() -> SceneSpec<f64> {
        disks(&[
            (0.0, 0.0, 1.0),
            (1.0, 0.0, 1.0),
            (0.5, 3f64.sqrt() / 2.0, 1.0),
        ])
    }

    #[test]
    fn single_disk_trace() {
        // Two coincident unit disks stand in for a single one.
        let s = disks(&[(0.0, 0.0, 1.0), (0.0, 0.0, 1.0)]);
        let tb = trace_boundary(&s, 4).unwrap();
        let a = tb.anchor;
        assert!(a.norm() < 1e-6);
        for (k, (x, y)) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
            .into_iter()
            .enumerate()
        {
            // anchor offset moves the hit point off the axis only to second order
            assert!((tb.samples[k].x - x).abs() < 1e-6 && (tb.samples[k].y - y).abs() < 1e-6);
        }
    }

    #[test]
    fn lens_trace_lies_on_the_circles() {
        let s = disks(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]);
        let tb = trace_boundary(&s, 2048).unwrap();
        for q in &tb.samples {
            let d = (q.norm() - 1.0)
                .abs()
                .min(((*q - Point2::new(1.0, 0.0)).norm() - 1.0).abs());
            assert!(d < 1e-9);
        }
        assert!(tb.convexity_defect() > -1e-9);
        assert_eq!(oracle_vertex_count(&s).unwrap(), 2);
    }

    #[test]
    fn reuleaux_corners() {
        let s = reuleaux();
        let tb = trace_boundary(&s, 8192).unwrap();
        let centers = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        ];
        let worst = tb
            .samples
            .iter()
            .map(|q| {
                centers
                    .iter()
                    .map(|c| (q.dist(*c) - 1.0).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-9);
        let r = detect_singular(&tb, 0.02, 3);
        assert_eq!(r.count, 3);
        for c in centers {
            assert!(r.singular_points.iter().any(
                |(p, ang)| p.dist(c) < 1e-6 && (ang - std::f64::consts::PI / 3.0).abs() < 1e-3
            ));
        }
    }

    #[test]
    fn smooth_bodies_have_no_corners() {
        let e = make_ellipse(3.0, 0.4, 0.3).unwrap();
        let s = SceneSpec::homothetic(
            e,
            &[HomothetSpec::identity(), HomothetSpec::identity()],
            Tolerances::default(),
        )
        .unwrap();
        assert_eq!(oracle_vertex_count(&s).unwrap(), 0);
    }

    #[test]
    fn disjoint_scene_has_no_interior() {
        let s = disks(&[(0.0, 0.0, 1.0), (3.0, 0.0, 1.0)]);
        assert_eq!(
            trace_boundary(&s, 1024).unwrap_err(),
            OracleError::NoInterior
        );
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        assert!(OracleConfig {
            samples: 100,
            ..OracleConfig::default()
        }
        .validate()
        .is_err());
        assert!(OracleConfig {
            tau: 0.0,
            ..OracleConfig::default()
        }
        .validate()
        .is_err());
        assert!(OracleConfig {
            levels: 0,
            ..OracleConfig::default()
        }
        .validate()
        .is_err());
    }
}
