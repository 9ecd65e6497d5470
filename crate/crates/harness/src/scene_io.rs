//! Scene files.
//!
//! ```json
//! {"domain": {"kind": "ellipse", "a": 2.0, "b": 1.0, "rotation": 0.0},
//!  "homothets": [{"cx": 0.0, "cy": 0.85, "scale": 1.0}, ...],
//!  "tolerances": {"eps_geom": 1e-9}}
//! ```
//!
//! Mixed scenes give a per-body `bodies` list of domains instead of (or
//! overriding) `domain`; entry `i` is placed by `homothets[i]`. Missing
//! tolerance fields take their defaults. Written files always carry the full
//! tolerance block so a scene file reproduces on its own.

use std::sync::Arc;

use cpolygon::{
    make_ball_polygon, make_disk, make_ellipse, make_rounded_polygon, make_superellipse, Circle,
    Domain64, DomainError, HomothetSpec, PlacedBody, Point64, Scene64, SceneError, SceneSpec,
    Tolerances64,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneIoError {
    #[error("malformed scene JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid domain: {0}")]
    Domain(#[from] DomainError),
    #[error("invalid scene: {0}")]
    Scene(#[from] SceneError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainJson {
    Disk,
    Ellipse {
        a: f64,
        b: f64,
        rotation: f64,
    },
    Superellipse {
        p: f64,
        a: f64,
        b: f64,
    },
    BallPolygon {
        disks: Vec<DiskJson>,
    },
    RoundedPolygon {
        n: usize,
        apothem: f64,
        corner_radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskJson {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomothetJson {
    pub cx: f64,
    pub cy: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TolerancesJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_geom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_samples: Option<usize>,
}

impl TolerancesJson {
    pub fn resolve(&self) -> Tolerances64 {
        let d = Tolerances64::default();
        Tolerances64 {
            eps_geom: self.eps_geom.unwrap_or(d.eps_geom),
            eps_angle: self.eps_angle.unwrap_or(d.eps_angle),
            refine_tol: self.refine_tol.unwrap_or(d.refine_tol),
            scan_samples: self.scan_samples.unwrap_or(d.scan_samples),
        }
    }

    pub fn full(t: &Tolerances64) -> Self {
        TolerancesJson {
            eps_geom: Some(t.eps_geom),
            eps_angle: Some(t.eps_angle),
            refine_tol: Some(t.refine_tol),
            scan_samples: Some(t.scan_samples),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainJson>,
    pub homothets: Vec<HomothetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bodies: Option<Vec<DomainJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesJson>,
}

impl DomainJson {
    pub fn build(&self) -> Result<Domain64, DomainError> {
        match self {
            DomainJson::Disk => Ok(make_disk()),
            DomainJson::Ellipse { a, b, rotation } => make_ellipse(*a, *b, *rotation),
            DomainJson::Superellipse { p, a, b } => make_superellipse(*p, *a, *b),
            DomainJson::BallPolygon { disks } => {
                let circles: Vec<Circle<f64>> = disks
                    .iter()
                    .map(|d| Circle::new(Point64::new(d.cx, d.cy), d.r))
                    .collect();
                make_ball_polygon(&circles)
            }
            DomainJson::RoundedPolygon {
                n,
                apothem,
                corner_radius,
            } => make_rounded_polygon(*n, *apothem, *corner_radius),
        }
    }

    pub fn describe(d: &Domain64) -> Self {
        match d {
            Domain64::Disk(_) => DomainJson::Disk,
            Domain64::Ellipse(e) => DomainJson::Ellipse {
                a: e.a,
                b: e.b,
                rotation: e.rotation,
            },
            Domain64::Superellipse(s) => DomainJson::Superellipse {
                p: s.p,
                a: s.a,
                b: s.b,
            },
            Domain64::BallPolygon(b) => DomainJson::BallPolygon {
                disks: b
                    .disks()
                    .iter()
                    .map(|c| DiskJson {
                        cx: c.center.x,
                        cy: c.center.y,
                        r: c.radius,
                    })
                    .collect(),
            },
            Domain64::RoundedPolygon(r) => DomainJson::RoundedPolygon {
                n: r.n,
                apothem: r.apothem,
                corner_radius: r.corner_radius,
            },
        }
    }
}

impl SceneFile {
    pub fn build(&self) -> Result<Scene64, SceneIoError> {
        let tol = self.tolerances.unwrap_or_default().resolve();
        let placements = self
            .homothets
            .iter()
            .map(|h| HomothetSpec::new(Point64::new(h.cx, h.cy), h.scale))
            .collect::<Result<Vec<_>, _>>()?;
        match (&self.bodies, &self.domain) {
            (Some(bodies), _) => {
                if bodies.len() != placements.len() {
                    return Err(SceneIoError::Invalid(format!(
                        "{} bodies but {} homothets",
                        bodies.len(),
                        placements.len()
                    )));
                }
                let placed = bodies
                    .iter()
                    .zip(&placements)
                    .map(|(d, p)| Ok(PlacedBody::new(Arc::new(d.build()?), *p)))
                    .collect::<Result<Vec<_>, DomainError>>()?;
                Ok(SceneSpec::mixed(placed, tol)?)
            }
            (None, Some(d)) => Ok(SceneSpec::homothetic(d.build()?, &placements, tol)?),
            (None, None) => Err(SceneIoError::Invalid(
                "scene needs either `domain` or `bodies`".into(),
            )),
        }
    }

    pub fn describe(scene: &Scene64) -> Self {
        let homothets = scene
            .bodies()
            .iter()
            .map(|b| HomothetJson {
                cx: b.placement.center.x,
                cy: b.placement.center.y,
                scale: b.placement.scale,
            })
            .collect();
        let (domain, bodies) = match scene.shared_domain() {
            Some(d) => (Some(DomainJson::describe(d)), None),
            None => (
                None,
                Some(
                    scene
                        .bodies()
                        .iter()
                        .map(|b| DomainJson::describe(&b.domain))
                        .collect(),
                ),
            ),
        };
        SceneFile {
            domain,
            homothets,
            bodies,
            tolerances: Some(TolerancesJson::full(scene.tolerances())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SceneIoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene files always serialize")
    }
}

pub fn load_scene(path: &std::path::Path) -> anyhow::Result<(SceneFile, Scene64)> {
    let text =
        std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let file = SceneFile::from_json(&text)?;
    let scene = file.build()?;
    Ok((file, scene))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_disk_scene() {
        let f = SceneFile::from_json(
            r#"{"domain":{"kind":"disk"},"homothets":[{"cx":0,"cy":0,"scale":1},{"cx":1,"cy":0,"scale":1}]}"#,
        )
        .unwrap();
        let s = f.build().unwrap();
        assert_eq!(s.n(), 2);
        assert!(s.is_translative());
        assert_eq!(*s.tolerances(), Tolerances64::default());
    }

    #[test]
    fn field_names_are_fixed() {
        let f = SceneFile {
            domain: Some(DomainJson::BallPolygon {
                disks: vec![DiskJson {
                    cx: 0.1,
                    cy: 0.0,
                    r: 1.0,
                }],
            }),
            homothets: vec![HomothetJson {
                cx: 0.0,
                cy: 0.0,
                scale: 2.0,
            }],
            bodies: None,
            tolerances: Some(TolerancesJson {
                eps_geom: Some(1e-8),
                ..Default::default()
            }),
        };
        let v: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(v["domain"]["kind"], "ball_polygon");
        assert_eq!(v["domain"]["disks"][0]["r"], 1.0);
        assert_eq!(v["homothets"][0]["scale"], 2.0);
        assert_eq!(v["tolerances"]["eps_geom"], 1e-8);
        assert!(v["tolerances"].get("eps_angle").is_none());
        let kinds = [
            (
                DomainJson::Ellipse {
                    a: 1.0,
                    b: 2.0,
                    rotation: 0.5,
                },
                "ellipse",
            ),
            (
                DomainJson::Superellipse {
                    p: 4.0,
                    a: 1.0,
                    b: 1.0,
                },
                "superellipse",
            ),
            (
                DomainJson::RoundedPolygon {
                    n: 4,
                    apothem: 1.0,
                    corner_radius: 0.2,
                },
                "rounded_polygon",
            ),
            (DomainJson::Disk, "disk"),
        ];
        for (d, k) in kinds {
            assert_eq!(serde_json::to_value(&d).unwrap()["kind"], k);
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let f = SceneFile {
            domain: Some(DomainJson::Ellipse {
                a: 1.0 / 3.0,
                b: std::f64::consts::E,
                rotation: 0.1 + 0.2,
            }),
            homothets: vec![
                HomothetJson {
                    cx: 0.1,
                    cy: -1e-17,
                    scale: 1.0,
                },
                HomothetJson {
                    cx: 2.0f64.sqrt(),
                    cy: 0.7,
                    scale: 1.0,
                },
            ],
            bodies: None,
            tolerances: None,
        };
        let scene = f.build().unwrap();
        let back = SceneFile::describe(&scene);
        let again = SceneFile::from_json(&back.to_json()).unwrap();
        assert_eq!(again, back);
        assert_eq!(again.domain, f.domain);
        assert_eq!(again.homothets, f.homothets);
    }

    #[test]
    fn mixed_scene_needs_matching_lengths() {
        let f = SceneFile::from_json(
            r#"{"bodies":[{"kind":"disk"}],"homothets":[{"cx":0,"cy":0,"scale":1},{"cx":1,"cy":0,"scale":1}]}"#,
        )
        .unwrap();
        assert!(matches!(f.build(), Err(SceneIoError::Invalid(_))));
        let f = SceneFile::from_json(
            r#"{"bodies":[{"kind":"disk"},{"kind":"ellipse","a":2,"b":1,"rotation":0}],
                "homothets":[{"cx":0,"cy":0,"scale":1},{"cx":1,"cy":0,"scale":1}]}"#,
        )
        .unwrap();
        let s = f.build().unwrap();
        assert!(s.is_mixed());
        assert_eq!(SceneFile::describe(&s).bodies.unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            SceneFile::from_json(r#"{"domain":{"kind":"triangle"},"homothets":[]}"#),
            Err(SceneIoError::Json(_))
        ));
        let f = SceneFile::from_json(
            r#"{"domain":{"kind":"disk"},"homothets":[{"cx":0,"cy":0,"scale":-1}]}"#,
        )
        .unwrap();
        assert!(matches!(f.build(), Err(SceneIoError::Domain(_))));
        let f = SceneFile::from_json(r#"{"homothets":[{"cx":0,"cy":0,"scale":1}]}"#).unwrap();
        assert!(matches!(f.build(), Err(SceneIoError::Invalid(_))));
    }
}
