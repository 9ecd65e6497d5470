//! Gaps: the parts of a body's boundary between two consecutive edges of
//! that body, together with the chord joining the edge endpoints.

use crate::domains::{ConvexDomain, PlacedBody};
use crate::engine::structure::CPolygonStruct;
use crate::engine::EngineError;
use crate::geom::{NormalArc, Point2};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRec<S> {
    pub owner: usize,
    /// Normals of the boundary arc of the owner outside the intersection.
    pub open_arc: NormalArc<S>,
    /// From the end of the edge before the gap to the start of the edge after.
    pub chord: (Point2<S>, Point2<S>),
    /// Edge indices bounding the gap (before, after).
    pub edges: (usize, usize),
}

impl<S: Scalar> GapRec<S> {
    /// Closed region between the chord and the owner's boundary arc.
    pub fn contains(&self, owner: &PlacedBody<S>, q: Point2<S>, eps: S) -> bool {
        let (p0, p1) = self.chord;
        owner.signed_membership(q) <= eps
            && (p1 - p0).cross(q - p0) <= eps * (S::one() + (p1 - p0).norm())
    }
}

/// Gaps of body `j`, in counterclockwise order.
pub fn gap_family<S: Scalar>(s: &CPolygonStruct<S>, j: usize) -> Vec<GapRec<S>> {
    let fam = &s.edge_families[j];
    let k = fam.len();
    let mut out = Vec::with_capacity(k);
    for a in 0..k {
        let e0 = &s.edges[fam[a]];
        let e1 = &s.edges[fam[(a + 1) % k]];
        if let Some(open_arc) = NormalArc::between(e0.normal_arc.end(), e1.normal_arc.start()) {
            out.push(GapRec {
                owner: j,
                open_arc,
                chord: (
                    s.vertices[e0.endpoints.1].point,
                    s.vertices[e1.endpoints.0].point,
                ),
                edges: (fam[a], fam[(a + 1) % k]),
            });
        }
    }
    out
}

pub(crate) fn gap_families<S: Scalar>(s: &CPolygonStruct<S>) -> Vec<Vec<GapRec<S>>> {
    (0..s.scene.n()).map(|j| gap_family(s, j)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapLemma {
    /// Every edge of another body lies in a single gap.
    EdgeInOneGap,
    /// Both crossings of two boundaries lie in one closed gap.
    CrossingsInOneGap,
    /// All edges of one body lie in the same gap of another.
    FamilyInOneGap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaViolation<S> {
    pub lemma: GapLemma,
    /// Gap owner first, then the other body.
    pub bodies: (usize, usize),
    pub points: Vec<Point2<S>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LemmaReport<S> {
    pub violations: Vec<LemmaViolation<S>>,
    /// Number of (gap owner, other body) combinations examined.
    pub checked: usize,
}

impl<S> LemmaReport<S> {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

const EDGE_SAMPLES: usize = 16;

fn edge_samples<S: Scalar>(s: &CPolygonStruct<S>, e: usize) -> Vec<Point2<S>> {
    let edge = &s.edges[e];
    let body = &s.scene.bodies()[edge.owner];
    (0..EDGE_SAMPLES)
        .map(|k| {
            body.boundary_at_normal(
                edge.normal_arc
                    .at(S::lit((k + 1) as f64 / (EDGE_SAMPLES + 1) as f64)),
            )
        })
        .collect()
}

/// Index of the single gap of `gaps` containing every point, if any.
fn common_gap<S: Scalar>(
    gaps: &[GapRec<S>],
    owner: &PlacedBody<S>,
    pts: &[Point2<S>],
    eps: S,
) -> Option<usize> {
    let hits: Vec<usize> = (0..gaps.len())
        .filter(|&g| pts.iter().all(|&p| gaps[g].contains(owner, p, eps)))
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

/// Checks the gap lemmas of the structure against its own gap families.
pub fn check_gap_lemmas<S: Scalar>(s: &CPolygonStruct<S>) -> LemmaReport<S> {
    check_gap_lemmas_on(s, &s.gap_families)
}

/// Checks the gap lemmas against the given gap families (which may differ
/// from the structure's own, e.g. to exercise the checker).
pub fn check_gap_lemmas_on<S: Scalar>(
    s: &CPolygonStruct<S>,
    families: &[Vec<GapRec<S>>],
) -> LemmaReport<S> {
    let tol = s.scene.tolerances();
    let eps = tol.eps_geom.sqrt();
    let bodies = s.scene.bodies();
    let n = s.scene.n();
    let mut report = LemmaReport {
        violations: Vec::new(),
        checked: 0,
    };
    for j in 0..n {
        let gaps = &families[j];
        for i in (0..n).filter(|&i| i != j) {
            report.checked += 1;
            let mut family_gap = None;
            let mut family_split = false;
            for &e in &s.edge_families[i] {
                let pts = edge_samples(s, e);
                match common_gap(gaps, &bodies[j], &pts, eps) {
                    None => report.violations.push(LemmaViolation {
                        lemma: GapLemma::EdgeInOneGap,
                        bodies: (j, i),
                        points: pts,
                    }),
                    Some(g) => match family_gap {
                        None => family_gap = Some(g),
                        Some(h) if h != g => family_split = true,
                        _ => {}
                    },
                }
            }
            if family_split {
                report.violations.push(LemmaViolation {
                    lemma: GapLemma::FamilyInOneGap,
                    bodies: (j, i),
                    points: Vec::new(),
                });
            }
            if let Some(params) = s.pairs().params_on(j, i) {
                let ok = gaps.iter().any(|g| {
                    params
                        .iter()
                        .all(|&t| g.open_arc.contains_with_margin(t, -tol.eps_angle))
                });
                if !ok {
                    report.violations.push(LemmaViolation {
                        lemma: GapLemma::CrossingsInOneGap,
                        bodies: (j, i),
                        points: params
                            .iter()
                            .map(|&t| bodies[j].boundary_at_normal(t))
                            .collect(),
                    });
                }
            }
        }
    }
    report
}

/// First body contributing exactly one edge.
pub fn find_singleton_edge_family<S: Scalar>(s: &CPolygonStruct<S>) -> Result<usize, EngineError> {
    s.edge_families
        .iter()
        .position(|f| f.len() == 1)
        .ok_or(EngineError::NoSingletonFamily)
}

/// Finds a body with a single edge by descending into nested gaps: between
/// two consecutive edges of a body lies a run of edges of other bodies, and
/// any body with an edge in that run has all its edges there.
pub fn singleton_by_gap_descent<S: Scalar>(s: &CPolygonStruct<S>) -> Result<usize, EngineError> {
    let ne = s.edges.len();
    let mut run: Vec<usize> = (0..ne).collect();
    loop {
        let first = *run.first().ok_or(EngineError::NoSingletonFamily)?;
        let k = s.edges[first].owner;
        let fam = &s.edge_families[k];
        if fam.len() == 1 {
            return Ok(k);
        }
        if !fam.iter().all(|e| run.contains(e)) {
            return Err(EngineError::ModelViolation(format!(
                "edges of body {k} are not confined to one gap"
            )));
        }
        let pos: Vec<usize> = run
            .iter()
            .enumerate()
            .filter(|(_, &e)| s.edges[e].owner == k)
            .map(|(p, _)| p)
            .collect();
        let inner: Vec<usize> = run[pos[0] + 1..pos[1]].to_vec();
        if inner.is_empty() {
            return Err(EngineError::ModelViolation(format!(
                "consecutive edges on body {k}"
            )));
        }
        run = inner;
    }
}
