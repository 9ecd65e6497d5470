use crate::domains::ConvexDomain;
use crate::engine::gaps::{gap_families, GapRec};
use crate::engine::pairwise::{PairResult, PairTable};
use crate::engine::scene::SceneSpec;
use crate::engine::witness::{find_witness, Witness};
use crate::engine::EngineError;
use crate::geom::{NormalAngle, NormalArc, Point2};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProperReport {
    Proper,
    EmptyInterior,
    /// The body contributes no edge to the boundary.
    NotReduced(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    /// Crossing of the boundaries of bodies `i` and `j`.
    Pairwise { i: usize, j: usize },
    /// Singular point `feature` of body `owner` lying inside one of its edges.
    Inherited { owner: usize, feature: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexRec<S> {
    pub point: Point2<S>,
    pub kind: VertexKind,
    /// Normal cone of the intersection at the vertex.
    pub normal_arc: NormalArc<S>,
}

/// A maximal boundary arc of the intersection lying on one body. Inherited
/// vertices of that body may sit inside it; `endpoints` are the pairwise
/// vertices where it starts and ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRec<S> {
    pub owner: usize,
    pub normal_arc: NormalArc<S>,
    pub endpoints: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StructureDiagnostics {
    /// Inside arcs no wider than `eps_angle` that were dropped.
    pub singleton_arcs: usize,
}

/// Boundary structure of a proper intersection.
#[derive(Debug, Clone)]
pub struct CPolygonStruct<S> {
    pub scene: SceneSpec<S>,
    /// Vertices in counterclockwise order, starting with the smallest normal.
    pub vertices: Vec<VertexRec<S>>,
    /// Edges in counterclockwise order.
    pub edges: Vec<EdgeRec<S>>,
    /// Per body, indices into `edges` in counterclockwise order.
    pub edge_families: Vec<Vec<usize>>,
    pub gap_families: Vec<Vec<GapRec<S>>>,
    /// Always true: improper scenes are rejected before a structure exists.
    pub proper: bool,
    pub witness: Witness<S>,
    pub diagnostics: StructureDiagnostics,
    pairs: PairTable<S>,
}

pub(crate) struct Analysis<S> {
    pub report: ProperReport,
    /// Edge arcs per active body (same order as `active`).
    pub arcs: Vec<Vec<NormalArc<S>>>,
    pub singleton_arcs: usize,
    pub witness: Option<Witness<S>>,
}

fn require_strictly_convex<S: Scalar>(scene: &SceneSpec<S>) -> Result<(), EngineError> {
    match scene.bodies().iter().position(|b| !b.is_strictly_convex()) {
        Some(i) => Err(EngineError::NotStrictlyConvex(i)),
        None => Ok(()),
    }
}

/// Properness and edge arcs of the intersection of the `active` bodies.
pub(crate) fn analyze<S: Scalar>(
    scene: &SceneSpec<S>,
    table: &PairTable<S>,
    active: &[usize],
) -> Result<Analysis<S>, EngineError> {
    let tol = scene.tolerances();
    let bodies = scene.bodies();
    let empty = |witness| Analysis {
        report: ProperReport::EmptyInterior,
        arcs: Vec::new(),
        singleton_arcs: 0,
        witness,
    };

    let mut extra = Vec::new();
    for (a, &i) in active.iter().enumerate() {
        for &j in &active[a + 1..] {
            match table.get(i, j) {
                PairResult::Disjoint => return Ok(empty(None)),
                PairResult::Two([p, q]) => extra.push(p.point.midpoint(q.point)),
                PairResult::NestedOrContained { .. } => {}
            }
        }
    }
    let witness = find_witness(bodies, active, &extra, tol.eps_geom);
    match witness {
        Some(w) if w.depth < -tol.eps_geom => {}
        _ => return Ok(empty(witness)),
    }

    let mut arcs = Vec::with_capacity(active.len());
    let mut singleton_arcs = 0;
    for &j in active {
        let body = &bodies[j];
        let others = || active.iter().copied().filter(move |&i| i != j);
        let outside_others = |t: NormalAngle<S>| {
            let p = body.boundary_at_normal(t);
            others()
                .map(|i| bodies[i].signed_membership(p))
                .fold(S::neg_infinity(), S::max)
        };
        let mut cuts: Vec<S> = others()
            .filter_map(|i| table.params_on(j, i))
            .flatten()
            .map(|t| t.value())
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();

        if cuts.is_empty() {
            let m = outside_others(NormalAngle::new(S::zero()));
            arcs.push(if m < S::zero() {
                vec![NormalArc::Full]
            } else {
                Vec::new()
            });
            continue;
        }

        // Pieces between consecutive cuts, each flagged inside/outside.
        let k = cuts.len();
        let mut pieces: Vec<(NormalArc<S>, bool)> = Vec::with_capacity(k);
        for c in 0..k {
            let from = NormalAngle::new(cuts[c]);
            let to = NormalAngle::new(cuts[(c + 1) % k]);
            let arc = if k == 1 {
                NormalArc::Full
            } else {
                match NormalArc::between(from, to) {
                    Some(a) => a,
                    None => continue,
                }
            };
            let m = outside_others(arc.midpoint());
            if arc.extent() > tol.eps_angle && m.abs() < tol.eps_geom {
                return Err(EngineError::Degenerate(format!(
                    "boundary of body {j} runs along another boundary near normal {}",
                    arc.midpoint().value()
                )));
            }
            pieces.push((arc, m < S::zero()));
        }

        // Merge cyclic runs of inside pieces.
        let mut out = Vec::new();
        if pieces.iter().all(|p| p.1) {
            out.push(NormalArc::Full);
        } else {
            let first_out = pieces.iter().position(|p| !p.1).unwrap();
            let np = pieces.len();
            let mut run: Option<(NormalAngle<S>, S)> = None;
            for s in 1..=np {
                let (arc, inside) = pieces[(first_out + s) % np];
                if inside {
                    run = Some(match run {
                        None => (arc.start(), arc.extent()),
                        Some((st, ext)) => (st, ext + arc.extent()),
                    });
                } else if let Some((st, ext)) = run.take() {
                    if ext > tol.eps_angle {
                        out.push(NormalArc::Sweep {
                            start: st,
                            extent: ext,
                        });
                    } else {
                        singleton_arcs += 1;
                    }
                }
            }
        }
        arcs.push(out);
    }

    let report = match active.iter().zip(&arcs).find(|(_, a)| a.is_empty()) {
        Some((&j, _)) => ProperReport::NotReduced(j),
        None => ProperReport::Proper,
    };
    Ok(Analysis {
        report,
        arcs,
        singleton_arcs,
        witness,
    })
}

/// Decides whether the scene's intersection has nonempty interior and every
/// body contributes to its boundary.
pub fn check_proper<S: Scalar>(scene: &SceneSpec<S>) -> Result<ProperReport, EngineError> {
    require_strictly_convex(scene)?;
    let table = PairTable::compute(scene.bodies(), scene.tolerances())?;
    let all: Vec<usize> = (0..scene.n()).collect();
    Ok(analyze(scene, &table, &all)?.report)
}

/// Vertices, edges and gaps of a proper intersection.
pub fn compute_structure<S: Scalar>(
    scene: &SceneSpec<S>,
) -> Result<CPolygonStruct<S>, EngineError> {
    require_strictly_convex(scene)?;
    let tol = *scene.tolerances();
    let bodies = scene.bodies();
    let n = scene.n();
    let table = PairTable::compute(bodies, &tol)?;
    let all: Vec<usize> = (0..n).collect();
    let an = analyze(scene, &table, &all)?;
    if an.report != ProperReport::Proper {
        return Err(EngineError::NotProper(an.report));
    }
    let witness = an.witness.expect("proper scenes have a witness");

    let mut raw: Vec<(usize, NormalArc<S>)> = an
        .arcs
        .iter()
        .enumerate()
        .flat_map(|(j, a)| a.iter().map(move |&arc| (j, arc)))
        .collect();
    if raw.iter().any(|(_, a)| a.is_full()) {
        return Err(EngineError::ModelViolation(
            "a proper intersection of several bodies has a full edge".into(),
        ));
    }
    raw.sort_by(|a, b| {
        a.1.start()
            .value()
            .partial_cmp(&b.1.start().value())
            .unwrap()
    });
    let ne = raw.len();

    let slack = tol.eps_geom.sqrt() * (S::one() + witness.point.norm());
    let mut vertices: Vec<VertexRec<S>> = Vec::new();
    let mut after_edge = Vec::with_capacity(ne);
    for k in 0..ne {
        let (owner, arc) = raw[k];
        let mut inherited: Vec<(S, VertexRec<S>)> = bodies[owner]
            .singular_features()
            .into_iter()
            .enumerate()
            .filter(|(_, f)| arc.contains_arc_strictly(&f.normal_arc))
            .map(|(fi, f)| {
                let key = f.normal_arc.start().ccw_from(arc.start());
                (
                    key,
                    VertexRec {
                        point: f.point,
                        kind: VertexKind::Inherited { owner, feature: fi },
                        normal_arc: f.normal_arc,
                    },
                )
            })
            .collect();
        inherited.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        vertices.extend(inherited.into_iter().map(|(_, v)| v));

        let (next_owner, next_arc) = raw[(k + 1) % ne];
        if next_owner == owner {
            return Err(EngineError::ModelViolation(format!(
                "consecutive edges on body {owner}"
            )));
        }
        let p = bodies[owner].boundary_at_normal(arc.end());
        let q = bodies[next_owner].boundary_at_normal(next_arc.start());
        if p.dist(q) > slack {
            return Err(EngineError::ModelViolation(format!(
                "edges on bodies {owner} and {next_owner} do not meet ({p:?} vs {q:?})"
            )));
        }
        let cone = NormalArc::between(arc.end(), next_arc.start()).ok_or_else(|| {
            EngineError::Degenerate(format!("bodies {owner} and {next_owner} meet tangentially"))
        })?;
        if cone.extent() >= S::PI() {
            return Err(EngineError::ModelViolation(format!(
                "normal cone wider than π after an edge of body {owner}"
            )));
        }
        let (i, j) = (owner.min(next_owner), owner.max(next_owner));
        vertices.push(VertexRec {
            point: p.midpoint(q),
            kind: VertexKind::Pairwise { i, j },
            normal_arc: cone,
        });
        after_edge.push(vertices.len() - 1);
    }

    let nv = vertices.len();
    for a in 0..nv {
        let b = (a + 1) % nv;
        if nv > 1 && vertices[a].point.dist(vertices[b].point) < tol.eps_geom {
            return Err(EngineError::Degenerate(format!(
                "vertices {a} and {b} coincide"
            )));
        }
    }

    // Rotate so the vertex with the smallest normal comes first.
    let shift = (0..nv)
        .min_by(|&a, &b| {
            vertices[a]
                .normal_arc
                .start()
                .value()
                .partial_cmp(&vertices[b].normal_arc.start().value())
                .unwrap()
        })
        .unwrap_or(0);
    vertices.rotate_left(shift);
    let remap = |v: usize| (v + nv - shift) % nv;
    let edges: Vec<EdgeRec<S>> = (0..ne)
        .map(|k| EdgeRec {
            owner: raw[k].0,
            normal_arc: raw[k].1,
            endpoints: (remap(after_edge[(k + ne - 1) % ne]), remap(after_edge[k])),
        })
        .collect();
    let edge_families: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..ne).filter(|&k| edges[k].owner == j).collect())
        .collect();

    let mut s = CPolygonStruct {
        scene: scene.clone(),
        vertices,
        edges,
        edge_families,
        gap_families: Vec::new(),
        proper: true,
        witness,
        diagnostics: StructureDiagnostics {
            singleton_arcs: an.singleton_arcs,
        },
        pairs: table,
    };
    s.gap_families = gap_families(&s);
    Ok(s)
}

impl<S: Scalar> CPolygonStruct<S> {
    pub fn pairwise_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| matches!(v.kind, VertexKind::Pairwise { .. }))
            .count()
    }

    pub fn inherited_count(&self) -> usize {
        self.vertices.len() - self.pairwise_count()
    }

    pub fn total(&self) -> usize {
        self.vertices.len()
    }

    /// Smallest exterior angle over all vertices.
    pub fn min_vertex_angle(&self) -> S {
        self.vertices
            .iter()
            .map(|v| v.normal_arc.extent())
            .fold(S::infinity(), S::min)
    }

    pub fn vertex_points(&self) -> Vec<Point2<S>> {
        self.vertices.iter().map(|v| v.point).collect()
    }

    pub fn pairs(&self) -> &PairTable<S> {
        &self.pairs
    }

    /// Edges cut at their inherited vertices: the smooth boundary pieces,
    /// which alternate with `vertices` (piece `k` ends at vertex `k + 1`,
    /// modulo the vertex count).
    pub fn smooth_pieces(&self) -> Vec<(usize, NormalArc<S>)> {
        let nv = self.vertices.len();
        let mut pieces = Vec::with_capacity(nv);
        for v in 0..nv {
            let here = &self.vertices[v];
            let next = &self.vertices[(v + 1) % nv];
            let owner = match (here.kind, next.kind) {
                (VertexKind::Inherited { owner, .. }, _)
                | (_, VertexKind::Inherited { owner, .. }) => owner,
                (VertexKind::Pairwise { .. }, VertexKind::Pairwise { .. }) => self
                    .edges
                    .iter()
                    .find(|e| e.endpoints == (v, (v + 1) % nv))
                    .map(|e| e.owner)
                    .unwrap_or(usize::MAX),
            };
            if let Some(arc) = NormalArc::between(here.normal_arc.end(), next.normal_arc.start()) {
                pieces.push((owner, arc));
            }
        }
        pieces
    }

    /// Bodies whose removal leaves an improper intersection of the rest.
    pub fn hereditary_failures(&self) -> Result<Vec<usize>, EngineError> {
        let n = self.scene.n();
        if n < 3 {
            return Ok(Vec::new());
        }
        let mut bad = Vec::new();
        for j in 0..n {
            let active: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            if analyze(&self.scene, &self.pairs, &active)?.report != ProperReport::Proper {
                bad.push(j);
            }
        }
        Ok(bad)
    }
}
