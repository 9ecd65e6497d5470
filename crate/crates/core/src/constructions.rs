//! Scenes that attain or probe the vertex-count bounds.
//!
//! * [`build_sharp_upper`]: a domain plus `n - 1` expanded copies, each
//!   shaving a small cap off the domain inside one smooth boundary arc, for
//!   `2(n - 1) + m` vertices.
//! * [`build_three_circle_domain`]: a ball triangle whose smooth normal arcs
//!   are no wider than its corner normal arcs, so every two-body scene over it
//!   inherits a corner.
//! * [`build_zero_vertex`]: rounded polygons whose intersection has no
//!   corner at all (outside the strictly convex setting).

use std::sync::Arc;

use thiserror::Error;

use crate::domains::{
    make_ball_polygon, make_rounded_polygon, Circle, ConvexDomain, Domain, DomainError,
    HomothetSpec, PlacedBody,
};
use crate::engine::{compute_structure, SceneError, SceneSpec};
use crate::geom::{NormalAngle, NormalArc, Point2, Tolerances};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("invalid construction parameter: {0}")]
    InvalidParameter(String),
    #[error("smooth arcs ({sigma}) wider than corner arcs ({nu})")]
    AntipodalConditionFailed { sigma: f64, nu: f64 },
    #[error("tangential placement failed: {0}")]
    SmoothingFailed(String),
    #[error("no proper placement reached the target count: {0}")]
    NotProper(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionParams<S> {
    /// Expansion factor of the copies in [`build_sharp_upper`]. Larger values
    /// give wider vertex angles for the same cap size.
    pub mu: S,
    /// Initial inward shift in [`build_sharp_upper`]; `None` means 5% of the
    /// domain's diameter.
    pub delta: Option<S>,
    /// How many times the shift may be halved before giving up.
    pub max_halvings: usize,
    /// Disk radius of [`build_three_circle_domain`] (triangle side 1).
    pub side: S,
    /// Corner radius of the rounded polygons in [`build_zero_vertex`].
    pub corner_radius: S,
    /// Offset of the second rounded square for `n = 2`.
    pub offset: Point2<S>,
    /// Scale of the enlarged rounded polygons for `n ≥ 3`.
    pub enlarge: S,
}

impl<S: Scalar> Default for ConstructionParams<S> {
    fn default() -> Self {
        ConstructionParams {
            mu: S::lit(4.0),
            delta: None,
            max_halvings: 40,
            side: S::lit(0.8),
            corner_radius: S::lit(0.2),
            offset: Point2::new(S::lit(0.3), S::zero()),
            enlarge: S::lit(1.5),
        }
    }
}

/// Normal arcs of the smooth boundary pieces of `d`, widest first.
fn smooth_arcs<S: Scalar>(d: &Domain<S>) -> Vec<NormalArc<S>> {
    let mut feats = d.singular_features();
    if feats.is_empty() {
        return vec![NormalArc::Full];
    }
    feats.sort_by(|a, b| {
        a.normal_arc
            .start()
            .value()
            .partial_cmp(&b.normal_arc.start().value())
            .unwrap()
    });
    let k = feats.len();
    let mut arcs: Vec<NormalArc<S>> = (0..k)
        .filter_map(|i| {
            NormalArc::between(
                feats[i].normal_arc.end(),
                feats[(i + 1) % k].normal_arc.start(),
            )
        })
        .collect();
    arcs.sort_by(|a, b| b.extent().partial_cmp(&a.extent()).unwrap());
    arcs
}

/// Normal angles at which the `n - 1` copies touch the domain.
fn touch_angles<S: Scalar>(arc: &NormalArc<S>, n: usize) -> Vec<NormalAngle<S>> {
    match arc {
        NormalArc::Full => (0..n - 1)
            .map(|i| NormalAngle::new(S::two_pi() * S::lit(i as f64 / (n - 1) as f64)))
            .collect(),
        _ => (0..n - 1)
            .map(|i| arc.at(S::lit((i + 1) as f64 / n as f64)))
            .collect(),
    }
}

fn sharp_upper_scene<S: Scalar>(
    domain: &Arc<Domain<S>>,
    angles: &[NormalAngle<S>],
    mu: S,
    delta: S,
) -> Result<SceneSpec<S>, ConstructionError> {
    let mut placements = vec![HomothetSpec::identity()];
    for &t in angles {
        let g = domain.boundary_at_normal(t);
        let center = g * (S::one() - mu) - t.unit() * delta;
        placements.push(HomothetSpec::new(center, mu)?);
    }
    Ok(SceneSpec::homothetic(
        domain.clone(),
        &placements,
        Tolerances::default(),
    )?)
}

/// The domain itself plus `n - 1` copies scaled by `mu` about boundary points
/// inside its widest smooth arc and pushed inward by `delta`. The shift is
/// halved until the engine reports a proper scene with exactly
/// `2(n - 1) + m` vertices.
// negated comparisons also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn build_sharp_upper<S: Scalar>(
    domain: impl Into<Arc<Domain<S>>>,
    n: usize,
    params: &ConstructionParams<S>,
) -> Result<SceneSpec<S>, ConstructionError> {
    let domain = domain.into();
    if n < 2 {
        return Err(ConstructionError::InvalidParameter(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if !(params.mu > S::one()) {
        return Err(ConstructionError::InvalidParameter(format!(
            "mu must exceed 1, got {}",
            params.mu
        )));
    }
    if !domain.is_strictly_convex() {
        return Err(ConstructionError::InvalidParameter(
            "domain must be strictly convex".into(),
        ));
    }
    let arc = smooth_arcs(&domain)[0];
    let angles = touch_angles(&arc, n);
    let target = 2 * (n - 1) + domain.singular_count();
    let mut delta = params.delta.unwrap_or(domain.diameter() * S::lit(0.05));
    if !(delta > S::zero()) {
        return Err(ConstructionError::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let mut last = String::new();
    for _ in 0..=params.max_halvings {
        let scene = sharp_upper_scene(&domain, &angles, params.mu, delta)?;
        match compute_structure(&scene) {
            Ok(s) if s.total() == target => return Ok(scene),
            Ok(s) => last = format!("delta {delta}: {} vertices", s.total()),
            Err(e) => last = format!("delta {delta}: {e}"),
        }
        delta = delta * S::lit(0.5);
    }
    Err(ConstructionError::NotProper(last))
}

/// Closed-form normal extents `(σ, ν)` of the smooth arcs and corners of the
/// intersection of three disks of radius `s` centred on a unit equilateral
/// triangle.
pub fn three_circle_extents<S: Scalar>(s: S) -> (S, S) {
    let third = S::two_pi() / S::lit(3.0);
    let sigma = S::lit(2.0) * (S::one() / (S::lit(2.0) * s)).acos() - S::PI() / S::lit(3.0);
    (sigma, third - sigma)
}

/// Intersection of three disks of radius `s` centred on the corners of an
/// equilateral triangle of side 1 (centred at the origin). Fails when the
/// smooth arcs are wider than the corners' normal arcs.
pub fn build_three_circle_domain<S: Scalar>(s: S) -> Result<Domain<S>, ConstructionError> {
    let circum = S::one() / S::lit(3.0).sqrt();
    if !(s.is_finite() && s > circum) {
        return Err(ConstructionError::InvalidParameter(format!(
            "radius {s} too small: the disks must share the triangle's centre"
        )));
    }
    let disks: Vec<Circle<S>> = (0..3)
        .map(|k| {
            let a = S::FRAC_PI_2() + S::two_pi() * S::lit(k as f64 / 3.0);
            Circle::new(Point2::polar(a) * circum, s)
        })
        .collect();
    let d = make_ball_polygon(&disks)?;
    let sigma = smooth_arcs(&d)
        .iter()
        .map(|a| a.extent())
        .fold(S::zero(), S::max);
    let nu = d
        .singular_features()
        .iter()
        .map(|f| f.normal_arc.extent())
        .fold(S::infinity(), S::min);
    if sigma > nu + Tolerances::<S>::default().eps_angle {
        return Err(ConstructionError::AntipodalConditionFailed {
            sigma: sigma.as_f64(),
            nu: nu.as_f64(),
        });
    }
    Ok(d)
}

/// Rounded polygons whose intersection has no corner.
///
/// `n = 2`: two translates of a rounded square. `n ≥ 3`: a rounded regular
/// `n`-gon together with `n - 1` copies enlarged about the apexes of its first
/// `n - 1` corners, so each copy shares the two faces at that corner and
/// replaces it with a wider rounding.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn build_zero_vertex<S: Scalar>(
    n: usize,
    params: &ConstructionParams<S>,
) -> Result<SceneSpec<S>, ConstructionError> {
    let r = params.corner_radius;
    if n < 2 {
        return Err(ConstructionError::InvalidParameter(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if n == 2 {
        let sq = make_rounded_polygon(4, S::one(), r)?;
        return Ok(SceneSpec::homothetic(
            sq,
            &[
                HomothetSpec::identity(),
                HomothetSpec::translate(params.offset),
            ],
            Tolerances::default(),
        )?);
    }
    let lambda = params.enlarge;
    if !(lambda > S::one()) {
        return Err(ConstructionError::InvalidParameter(format!(
            "enlarge must exceed 1, got {lambda}"
        )));
    }
    let domain = Arc::new(make_rounded_polygon(n, S::one(), r)?);
    let rp = match domain.as_ref() {
        Domain::RoundedPolygon(rp) => rp.clone(),
        _ => unreachable!(),
    };
    let tol = Tolerances::<S>::default();
    let step = S::two_pi() / S::lit(n as f64);
    let apothem = rp.apothem;
    let mut placements = vec![HomothetSpec::identity()];
    for k in 0..n - 1 {
        let (ta, tb) = (step * S::lit(k as f64), step * S::lit((k + 1) as f64));
        let (ua, ub) = (Point2::polar(ta), Point2::polar(tb));
        // <x, u_a> = <x, u_b> = (1 - λ) A keeps both faces' support lines.
        let rhs = (S::one() - lambda) * apothem;
        let det = ua.cross(ub);
        let x = Point2::new(
            (rhs * ub.y - ua.y * rhs) / det,
            (ua.x * rhs - rhs * ub.x) / det,
        );
        let spec = HomothetSpec::new(x, lambda)?;
        let body = PlacedBody::new(domain.clone(), spec);

        for (u, t) in [(ua, ta), (ub, tb)] {
            let res = (body.support(NormalAngle::new(t)) - apothem).abs();
            if res >= tol.eps_geom {
                return Err(ConstructionError::SmoothingFailed(format!(
                    "corner {k}: support residual {res}"
                )));
            }
            let face = if t == ta { rp.face(k) } else { rp.face(k + 1) };
            let dir = Point2::new(-u.y, u.x);
            let (c0, c1) = (face.0.dot(dir), face.1.dot(dir));
            let (h0, h1) = (spec.apply(face.0).dot(dir), spec.apply(face.1).dot(dir));
            let overlap = c1.min(h1) - c0.max(h0);
            if overlap <= tol.eps_geom {
                return Err(ConstructionError::SmoothingFailed(format!(
                    "corner {k}: faces do not overlap"
                )));
            }
        }
        // Away from corner k the copy must contain the domain's boundary.
        for i in 0..720 {
            let t = NormalAngle::new(S::two_pi() * S::lit(i as f64 / 720.0));
            let d = t.ccw_from(NormalAngle::new(ta));
            if d > S::zero() && d < step {
                continue;
            }
            let m = body.signed_membership(domain.boundary_at_normal(t));
            if m > tol.eps_geom {
                return Err(ConstructionError::SmoothingFailed(format!(
                    "corner {k}: copy misses the domain ({m})"
                )));
            }
        }
        placements.push(spec);
    }
    Ok(SceneSpec::homothetic(domain, &placements, tol)?)
}

/// Two rounded squares offset diagonally: flat faces cross at right angles,
/// so this scene has corners.
pub fn zero_vertex_control<S: Scalar>(
    params: &ConstructionParams<S>,
) -> Result<SceneSpec<S>, ConstructionError> {
    let d = S::lit(0.3);
    build_zero_vertex(
        2,
        &ConstructionParams {
            offset: Point2::new(d, d),
            ..*params
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{make_disk, make_ellipse};
    use crate::engine::{compute_structure, verify_bounds};
    use crate::oracle::oracle_vertex_count;
    use std::f64::consts::PI;

    fn p() -> ConstructionParams<f64> {
        ConstructionParams::default()
    }

    #[test]
    fn sharp_upper_disk() {
        let s = build_sharp_upper(make_disk(), 3, &p()).unwrap();
        let st = compute_structure(&s).unwrap();
        assert_eq!(st.total(), 4);
        let b = verify_bounds(&st);
        assert!(b.holds && b.total == b.upper);
    }

    #[test]
    fn sharp_upper_reuleaux() {
        let d = build_three_circle_domain(1.0).unwrap();
        let s = build_sharp_upper(d, 2, &p()).unwrap();
        let st = compute_structure(&s).unwrap();
        assert_eq!((st.total(), st.inherited_count()), (5, 3));
    }

    #[test]
    fn sharp_upper_ellipse_pair() {
        let s = build_sharp_upper(make_ellipse(1.5, 1.0, 0.2).unwrap(), 2, &p()).unwrap();
        assert_eq!(compute_structure(&s).unwrap().total(), 2);
    }

    #[test]
    fn sharp_upper_rejects_bad_input() {
        assert!(build_sharp_upper(make_disk::<f64>(), 1, &p()).is_err());
        let bad = ConstructionParams { mu: 0.9, ..p() };
        assert!(build_sharp_upper(make_disk::<f64>(), 3, &bad).is_err());
    }

    #[test]
    fn three_circle_extents_match_the_ball_polygon() {
        let (s1, n1) = three_circle_extents(1.0f64);
        assert!((s1 - PI / 3.0).abs() < 1e-12 && (n1 - PI / 3.0).abs() < 1e-12);
        let (s8, n8) = three_circle_extents(0.8f64);
        assert!(s8 < PI / 3.0 && PI / 3.0 < n8);
        for s in [0.6, 0.7, 0.8, 0.9, 1.0] {
            let d = build_three_circle_domain::<f64>(s).unwrap();
            let (sig, nu) = three_circle_extents(s);
            assert_eq!(d.singular_count(), 3);
            for a in smooth_arcs(&d) {
                assert!((a.extent() - sig).abs() < 1e-9);
            }
            for f in d.singular_features() {
                assert!((f.normal_arc.extent() - nu).abs() < 1e-9);
            }
        }
        assert!(matches!(
            build_three_circle_domain(1.1f64),
            Err(ConstructionError::AntipodalConditionFailed { .. })
        ));
        assert!(build_three_circle_domain(0.5f64).is_err());
    }

    #[test]
    fn three_circle_smooth_arcs_face_corners() {
        // each smooth arc's antipodal arc sits inside a corner's normal arc
        let d = build_three_circle_domain(0.8f64).unwrap();
        let feats = d.singular_features();
        for a in smooth_arcs(&d) {
            let opp = NormalArc::Sweep {
                start: a.start().antipode(),
                extent: a.extent(),
            };
            assert!(feats
                .iter()
                .any(|f| f.normal_arc.contains_arc_strictly(&opp)));
        }
    }

    #[test]
    fn zero_vertex_scenes_have_no_corners() {
        for n in [2, 3] {
            let s = build_zero_vertex(n, &p()).unwrap();
            assert_eq!(s.n(), n);
            assert_eq!(oracle_vertex_count(&s).unwrap(), 0, "n = {n}");
        }
        let c = zero_vertex_control(&p()).unwrap();
        assert_eq!(oracle_vertex_count(&c).unwrap(), 2);
    }
}
