//! Random scenes for the experiments.
//!
//! Body `k` is placed by a face: a normal angle `φ_k`, a scale `λ_k` and a
//! depth `t_k`. Its centre is chosen so that the boundary point with outward
//! normal `u(φ_k)` sits at `t_k · u(φ_k)`, i.e. the supporting line with that
//! normal passes at distance `t_k` from the origin and the body lies on the
//! origin's side. Face angles of the base bodies are spread around the circle
//! with jitter, so most draws are proper; the rest are rejected and redrawn.
//!
//! In homothetic scenes some bodies are pokers instead: a smaller copy whose
//! face sits just inside the supporting line of a base body, slightly off
//! that body's face angle. A poker cuts a cap out of the base body's edge and
//! usually splits it in two, which is how totals above `n` arise.
//!
//! Random domains (all with diameter about 2):
//! * `disk`: the unit disk.
//! * `ellipse`: `a = 1`, `b ∈ [0.4, 1]`, rotation `∈ [0, π)`.
//! * `superellipse`: `p ∈ [1.5, 4]`, `a = 1`, `b ∈ [0.5, 1]`.
//! * `ball_polygon`: `m ∈ [m_min, m_max]` disks of radius `∈ [1, 1.3]`
//!   centred at distance `∈ [0.3, 0.6]` from the origin in directions
//!   `2πi/m` plus a jitter of a tenth of the spacing; redrawn until all `m`
//!   disks show on the boundary.

use std::sync::Arc;

use cpolygon::constructions::build_three_circle_domain;
use cpolygon::{
    compute_structure, ConvexDomain, Domain64, EngineError, HomothetSpec, NormalAngle, PlacedBody,
    Scene64, SceneSpec, Structure64, Tolerances64,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::TrialRng;
use crate::scene_io::{DiskJson, DomainJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomKind {
    Disk,
    Ellipse,
    Superellipse,
    BallPolygon,
}

/// Where the domain of each trial comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainSource {
    Fixed(DomainJson),
    /// One random domain per trial (per body when the scene is mixed).
    Random {
        kinds: Vec<RandomKind>,
        #[serde(default = "default_m_range")]
        m_range: (usize, usize),
    },
    /// The ball triangle of three disks of radius `s` on a unit triangle.
    ThreeCircle {
        s: f64,
    },
}

fn default_m_range() -> (usize, usize) {
    (2, 4)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Placement {
    /// Base scales are log-uniform in this range (ignored for translates).
    pub scale_range: (f64, f64),
    /// Face depth range of base bodies.
    pub depth_range: (f64, f64),
    /// Face angle jitter as a fraction of the spacing between base faces.
    pub jitter: f64,
    /// Chance that a body beyond the first two is a poker (homothets only).
    pub poke_prob: f64,
    /// Poker scale as a fraction of its base body's scale.
    pub poke_scale: (f64, f64),
    /// How far inside the base body's supporting line the poker's face sits.
    pub poke_depth: (f64, f64),
    /// Poker face angle offset from its base, as a fraction of the spacing.
    pub poke_offset: f64,
}

impl Default for Placement {
    fn default() -> Self {
        Placement {
            scale_range: (0.5, 2.0),
            depth_range: (0.2, 0.26),
            jitter: 0.5,
            poke_prob: 0.25,
            poke_scale: (0.2, 0.5),
            poke_depth: (0.002, 0.03),
            poke_offset: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub source: DomainSource,
    pub mixed: bool,
    pub translative: bool,
    pub n: usize,
    pub placement: Placement,
    pub tolerances: Tolerances64,
    pub max_retries: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Rejections {
    pub improper: usize,
    pub degenerate: usize,
    /// Pairs of different domains crossing more than twice (mixed scenes).
    pub multi_crossing: usize,
}

impl Rejections {
    pub fn total(&self) -> usize {
        self.improper + self.degenerate + self.multi_crossing
    }

    pub fn note(&self) -> String {
        if self.total() == 0 {
            String::new()
        } else {
            format!(
                "rejected improper={} degenerate={} multi_crossing={}",
                self.improper, self.degenerate, self.multi_crossing
            )
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("no acceptable scene after {tries} tries ({})", .rejections.note())]
    GenerationExhausted {
        tries: usize,
        rejections: Rejections,
    },
    #[error("invalid generator configuration: {0}")]
    Config(String),
    /// The engine contradicted its own model on a drawn scene. Carries the
    /// scene so it can be replayed.
    #[error("engine failure on a drawn scene: {error}")]
    Engine {
        error: EngineError,
        scene: Box<Scene64>,
    },
}

pub struct Generated {
    pub scene: Scene64,
    pub structure: Structure64,
    pub rejections: Rejections,
}

pub fn random_domain(kind: RandomKind, m_range: (usize, usize), rng: &mut TrialRng) -> DomainJson {
    use std::f64::consts::{PI, TAU};
    match kind {
        RandomKind::Disk => DomainJson::Disk,
        RandomKind::Ellipse => DomainJson::Ellipse {
            a: 1.0,
            b: rng.range(0.4, 1.0),
            rotation: rng.range(0.0, PI),
        },
        RandomKind::Superellipse => DomainJson::Superellipse {
            p: rng.range(1.5, 4.0),
            a: 1.0,
            b: rng.range(0.5, 1.0),
        },
        RandomKind::BallPolygon => loop {
            let m = m_range.0 + rng.index(m_range.1 - m_range.0 + 1);
            let rot = rng.angle();
            let disks: Vec<DiskJson> = (0..m)
                .map(|i| {
                    let a = rot + TAU * (i as f64 + rng.range(-0.05, 0.05)) / m as f64;
                    let d = rng.range(0.3, 0.6);
                    DiskJson {
                        cx: d * a.cos(),
                        cy: d * a.sin(),
                        r: rng.range(1.0, 1.3),
                    }
                })
                .collect();
            let dj = DomainJson::BallPolygon { disks };
            if matches!(dj.build(), Ok(d) if d.singular_count() == m) {
                break dj;
            }
        },
    }
}

fn draw_domain(spec: &GenSpec, rng: &mut TrialRng) -> Result<Domain64, GenError> {
    match &spec.source {
        DomainSource::Fixed(d) => d.build().map_err(|e| GenError::Config(e.to_string())),
        DomainSource::Random { kinds, m_range } => {
            if kinds.is_empty() || m_range.0 < 1 || m_range.0 > m_range.1 {
                return Err(GenError::Config("empty kind list or bad m_range".into()));
            }
            let k = kinds[rng.index(kinds.len())];
            random_domain(k, *m_range, rng)
                .build()
                .map_err(|e| GenError::Config(e.to_string()))
        }
        DomainSource::ThreeCircle { s } => {
            build_three_circle_domain(*s).map_err(|e| GenError::Config(e.to_string()))
        }
    }
}

fn face_body(
    d: &Arc<Domain64>,
    phi: NormalAngle<f64>,
    scale: f64,
    depth: f64,
) -> Result<PlacedBody<f64>, GenError> {
    let center = phi.unit() * depth - d.boundary_at_normal(phi) * scale;
    let h = HomothetSpec::new(center, scale).map_err(|e| GenError::Config(e.to_string()))?;
    Ok(PlacedBody::new(d.clone(), h))
}

/// Places `n` bodies with the given domains.
fn place_faces(
    domains: &[Arc<Domain64>],
    spec: &GenSpec,
    rng: &mut TrialRng,
) -> Result<Vec<PlacedBody<f64>>, GenError> {
    let n = domains.len();
    let p = &spec.placement;
    let poker: Vec<bool> = (0..n)
        .map(|k| k >= 2 && !spec.translative && rng.unit() < p.poke_prob)
        .collect();
    let bases: Vec<usize> = (0..n).filter(|&k| !poker[k]).collect();
    let spacing = std::f64::consts::TAU / bases.len() as f64;
    let rot = rng.angle();
    let mut placed: Vec<Option<(NormalAngle<f64>, PlacedBody<f64>)>> = vec![None; n];
    for (i, &k) in bases.iter().enumerate() {
        let phi = NormalAngle::new(rot + spacing * (i as f64 + p.jitter * rng.range(-0.5, 0.5)));
        let scale = if spec.translative {
            1.0
        } else {
            (p.scale_range.0.ln() + (p.scale_range.1 / p.scale_range.0).ln() * rng.unit()).exp()
        };
        let depth = rng.range(p.depth_range.0, p.depth_range.1);
        placed[k] = Some((phi, face_body(&domains[k], phi, scale, depth)?));
    }
    for k in (0..n).filter(|&k| poker[k]) {
        let (base_phi, base) = placed[bases[rng.index(bases.len())]]
            .clone()
            .expect("bases are placed first");
        let phi = base_phi.offset(spacing * p.poke_offset * rng.range(-1.0, 1.0));
        let scale = base.scale() * rng.range(p.poke_scale.0, p.poke_scale.1);
        let depth = base.support(phi) - rng.range(p.poke_depth.0, p.poke_depth.1);
        placed[k] = Some((phi, face_body(&domains[k], phi, scale, depth)?));
    }
    Ok(placed
        .into_iter()
        .map(|b| b.expect("every body is placed").1)
        .collect())
}

fn draw_scene(spec: &GenSpec, rng: &mut TrialRng) -> Result<Scene64, GenError> {
    let shared = if spec.mixed {
        None
    } else {
        Some(Arc::new(draw_domain(spec, rng)?))
    };
    let domains: Vec<Arc<Domain64>> = (0..spec.n)
        .map(|_| match &shared {
            Some(d) => Ok(d.clone()),
            None => draw_domain(spec, rng).map(Arc::new),
        })
        .collect::<Result<_, _>>()?;
    let bodies = place_faces(&domains, spec, rng)?;
    let scene = match &shared {
        Some(d) => {
            let placements: Vec<HomothetSpec<f64>> = bodies.iter().map(|b| b.placement).collect();
            SceneSpec::homothetic(d.clone(), &placements, spec.tolerances)
        }
        None => SceneSpec::mixed(bodies, spec.tolerances),
    };
    scene.map_err(|e| GenError::Config(e.to_string()))
}

/// Draws scenes until one is proper and non-degenerate.
pub fn random_scene(spec: &GenSpec, rng: &mut TrialRng) -> Result<Generated, GenError> {
    if spec.n < 2 {
        return Err(GenError::Config("n must be at least 2".into()));
    }
    if spec.mixed {
        if let DomainSource::Random { kinds, .. } = &spec.source {
            if kinds.contains(&RandomKind::BallPolygon) {
                return Err(GenError::Config("mixed scenes need smooth kinds".into()));
            }
        } else {
            return Err(GenError::Config(
                "mixed scenes need a random smooth source".into(),
            ));
        }
    }
    let mut rejections = Rejections::default();
    for _ in 0..spec.max_retries {
        let scene = draw_scene(spec, rng)?;
        match compute_structure(&scene) {
            Ok(structure) => {
                return Ok(Generated {
                    scene,
                    structure,
                    rejections,
                })
            }
            Err(EngineError::NotProper(_)) => rejections.improper += 1,
            Err(EngineError::Degenerate(_)) => rejections.degenerate += 1,
            Err(EngineError::MoreThanTwo { .. }) if spec.mixed => rejections.multi_crossing += 1,
            Err(error) => {
                return Err(GenError::Engine {
                    error,
                    scene: Box::new(scene),
                })
            }
        }
    }
    Err(GenError::GenerationExhausted {
        tries: spec.max_retries,
        rejections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(source: DomainSource, n: usize, translative: bool) -> GenSpec {
        GenSpec {
            source,
            mixed: false,
            translative,
            n,
            placement: Placement::default(),
            tolerances: Tolerances64::default(),
            max_retries: 1000,
        }
    }

    #[test]
    fn ellipse_translate_pair() {
        let s = spec(
            DomainSource::Fixed(DomainJson::Ellipse {
                a: 2.0,
                b: 1.0,
                rotation: 0.3,
            }),
            2,
            true,
        );
        for t in 0..5 {
            let g = random_scene(&s, &mut TrialRng::for_trial(11, t)).unwrap();
            assert!(g.scene.is_translative());
            assert_eq!(g.structure.total(), 2);
        }
    }

    #[test]
    fn eight_disks_all_contribute() {
        let s = spec(DomainSource::Fixed(DomainJson::Disk), 8, false);
        let g = random_scene(&s, &mut TrialRng::for_trial(5, 0)).unwrap();
        assert_eq!(g.scene.n(), 8);
        assert!(g.structure.edge_families.iter().all(|f| !f.is_empty()));
    }

    #[test]
    fn random_ball_polygons_have_the_requested_corners() {
        let mut rng = TrialRng::new(9);
        for _ in 0..50 {
            let d = random_domain(RandomKind::BallPolygon, (2, 4), &mut rng)
                .build()
                .unwrap();
            assert!((2..=4).contains(&d.singular_count()));
        }
    }

    #[test]
    fn tangency_heavy_ranges_still_end_proper() {
        // nearly coincident faces and depths make rejections common
        let mut s = spec(DomainSource::Fixed(DomainJson::Disk), 4, false);
        s.placement = Placement {
            scale_range: (0.95, 1.05),
            depth_range: (0.2, 0.2001),
            jitter: 1.0,
            ..Placement::default()
        };
        let mut rejected = 0;
        for t in 0..10 {
            let g = random_scene(&s, &mut TrialRng::for_trial(1, t)).unwrap();
            rejected += g.rejections.total();
            assert!(g.structure.proper);
        }
        assert!(rejected > 0);
    }

    #[test]
    fn exhaustion_is_reported() {
        let mut s = spec(DomainSource::Fixed(DomainJson::Disk), 3, true);
        s.placement.depth_range = (5.0, 6.0);
        s.max_retries = 5;
        assert!(matches!(
            random_scene(&s, &mut TrialRng::new(0)),
            Err(GenError::GenerationExhausted { tries: 5, .. })
        ));
    }
}
