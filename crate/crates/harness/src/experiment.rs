//! Batch experiments: draw scenes, analyse them, compare with the oracle.
//!
//! Report CSV columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | `trial` | trial index |
//! | `n` | number of bodies |
//! | `m` | singular points of the shared domain (0 for mixed scenes) |
//! | `regime` | `translative`, `homothetic` or `mixed` |
//! | `digest` | first 16 hex digits of SHA-256 of the compact scene JSON |
//! | `pairwise`, `inherited`, `total` | vertex counts from the engine |
//! | `lower`, `upper`, `holds` | the bound for the regime and whether `total` lies in it |
//! | `min_angle` | smallest vertex exterior angle (radians) |
//! | `singleton` | a body with exactly one edge (empty if none was found) |
//! | `lemma_violations` | gap lemma violations |
//! | `hereditary_failures` | bodies whose removal leaves an improper scene |
//! | `oracle_count` | corners found by the oracle (empty when it is off) |
//! | `oracle_match` | counts equal and positions within `position_tol`; empty when excluded |
//! | `oracle_max_error` | largest distance between matched vertices |
//! | `rejections` | scenes drawn and rejected before this one |
//! | `notes` | rejection breakdown and exclusion reasons |
//!
//! Scenes whose smallest vertex angle is below `2·tau` are too close to
//! degenerate for the oracle; they are still checked against the bounds but
//! left out of the comparison, with a note.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use cpolygon::{
    check_gap_lemmas, find_singleton_edge_family, oracle_report, singleton_by_gap_descent,
    verify_bounds, OracleConfig, Point64, Regime,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::generate::{random_scene, DomainSource, GenError, GenSpec, Placement};
use crate::rng::TrialRng;
use crate::scene_io::{SceneFile, TolerancesJson};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleSettings {
    pub enabled: bool,
    pub samples: usize,
    pub tau: f64,
    pub levels: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        let d = OracleConfig::default();
        OracleSettings {
            enabled: true,
            samples: d.samples,
            tau: d.tau,
            levels: d.levels,
        }
    }
}

impl OracleSettings {
    pub fn config(&self) -> OracleConfig {
        OracleConfig {
            samples: self.samples,
            tau: self.tau,
            levels: self.levels,
            ..OracleConfig::default()
        }
    }
}

fn default_name() -> String {
    "experiment".into()
}
fn default_retries() -> usize {
    1000
}
fn default_position_tol() -> f64 {
    1e-6
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub domain: DomainSource,
    #[serde(default)]
    pub mixed: bool,
    pub translative: bool,
    /// Bodies per scene; with `n_max`, trial `t` uses `n + t mod (n_max - n + 1)`.
    pub n: usize,
    #[serde(default)]
    pub n_max: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default)]
    pub tolerances: TolerancesJson,
    #[serde(default = "default_retries")]
    pub max_retries: usize,
    #[serde(default)]
    pub oracle: OracleSettings,
    #[serde(default = "default_position_tol")]
    pub position_tol: f64,
    /// Gap lemmas, singleton family and hereditary reducedness per trial.
    #[serde(default = "default_true")]
    pub structural_checks: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub summary: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n < 2 {
            return bad("n must be at least 2".into());
        }
        if let Some(hi) = self.n_max {
            if hi < self.n {
                return bad(format!("n_max {hi} below n {}", self.n));
            }
        }
        let p = &self.placement;
        if !(p.scale_range.0 > 0.0 && p.scale_range.0 <= p.scale_range.1) {
            return bad("scale_range must be positive and ordered".into());
        }
        if !(p.depth_range.0 <= p.depth_range.1
            && p.poke_scale.0 > 0.0
            && p.poke_scale.0 <= p.poke_scale.1)
        {
            return bad("depth_range and poke_scale must be ordered".into());
        }
        if self.mixed && self.translative {
            return bad("a mixed scene cannot be translative".into());
        }
        self.tolerances
            .resolve()
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        if self.oracle.enabled {
            self.oracle
                .config()
                .validate()
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn n_for(&self, trial: usize) -> usize {
        match self.n_max {
            Some(hi) => self.n + trial % (hi - self.n + 1),
            None => self.n,
        }
    }

    fn gen_spec(&self, n: usize) -> GenSpec {
        GenSpec {
            source: self.domain.clone(),
            mixed: self.mixed,
            translative: self.translative,
            n,
            placement: self.placement.clone(),
            tolerances: self.tolerances.resolve(),
            max_retries: self.max_retries,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("bad experiment configuration: {0}")]
    Config(String),
    #[error("trial {trial}: {source}")]
    Generation {
        trial: usize,
        #[source]
        source: GenError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub n: usize,
    pub m: usize,
    pub regime: &'static str,
    pub digest: String,
    pub pairwise: usize,
    pub inherited: usize,
    pub total: usize,
    pub lower: usize,
    pub upper: usize,
    pub holds: bool,
    pub min_angle: f64,
    pub singleton: Option<usize>,
    pub lemma_violations: usize,
    pub hereditary_failures: usize,
    pub oracle_count: Option<usize>,
    pub oracle_match: Option<bool>,
    pub oracle_max_error: Option<f64>,
    pub rejections: usize,
    pub notes: String,
}

impl TrialRecord {
    /// Bound failure, oracle mismatch or broken structural lemma.
    pub fn violates_theory(&self) -> bool {
        !self.holds
            || self.oracle_match == Some(false)
            || self.lemma_violations > 0
            || self.hereditary_failures > 0
            || self.singleton.is_none()
    }
}

pub struct Trial {
    pub record: TrialRecord,
    pub scene: SceneFile,
    pub engine_vertices: Vec<Point64>,
    pub oracle_vertices: Option<Vec<Point64>>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    /// Per `n`, how many trials reached each total.
    pub histogram: BTreeMap<usize, BTreeMap<usize, usize>>,
    pub bound_violations: usize,
    pub oracle_mismatches: usize,
    pub oracle_excluded: usize,
    pub lemma_violations: usize,
    pub hereditary_failures: usize,
    pub singleton_missing: usize,
    pub rejections: usize,
    pub mean_trial_ms: f64,
    pub max_trial_ms: f64,
    pub wall_ms: f64,
}

pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<Trial>,
    pub summary: Summary,
}

impl ExperimentReport {
    pub fn records(&self) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().map(|t| &t.record)
    }

    pub fn violations(&self) -> usize {
        self.records().filter(|r| r.violates_theory()).count()
    }

    pub fn csv_bytes(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in self.records() {
            w.serialize(r).expect("records serialize");
        }
        w.into_inner().expect("in-memory writer")
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }
}

pub fn scene_digest(scene: &SceneFile) -> String {
    let json = serde_json::to_string(scene).expect("scene files serialize");
    let hash = Sha256::digest(json.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Pairs up two point sets by repeatedly taking the closest unmatched pair
/// and returns the largest matched distance, or `None` when the sizes differ.
pub fn match_points(a: &[Point64], b: &[Point64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, p)| b.iter().enumerate().map(move |(j, q)| (p.dist(*q), i, j)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (mut used_a, mut used_b) = (vec![false; a.len()], vec![false; b.len()]);
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    Some(worst)
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Translative => "translative",
        Regime::Homothetic => "homothetic",
        Regime::Mixed => "mixed",
    }
}

pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Trial, ExperimentError> {
    let start = Instant::now();
    let n = cfg.n_for(trial);
    let mut rng = TrialRng::for_trial(cfg.seed, trial as u64);
    let g = random_scene(&cfg.gen_spec(n), &mut rng)
        .map_err(|source| ExperimentError::Generation { trial, source })?;
    let s = &g.structure;
    let bound = verify_bounds(s);
    let file = SceneFile::describe(&g.scene);
    let mut notes = vec![g.rejections.note()];

    let (mut singleton, mut lemma_violations, mut hereditary_failures) = (Some(0), 0, 0);
    if cfg.structural_checks {
        singleton = find_singleton_edge_family(s).ok();
        if let Err(e) = singleton_by_gap_descent(s) {
            notes.push(format!("gap descent failed: {e}"));
            singleton = None;
        }
        lemma_violations = check_gap_lemmas(s).violations.len();
        hereditary_failures = match s.hereditary_failures() {
            Ok(v) => v.len(),
            Err(e) => {
                notes.push(format!("hereditary check failed: {e}"));
                n
            }
        };
    }

    let engine_vertices = s.vertex_points();
    let min_angle = s.min_vertex_angle();
    let (mut oracle_count, mut oracle_match, mut oracle_max_error, mut oracle_vertices) =
        (None, None, None, None);
    if cfg.oracle.enabled {
        match oracle_report(&g.scene, &cfg.oracle.config()) {
            Ok(rep) => {
                let pts: Vec<Point64> = rep.singular_points.iter().map(|(p, _)| *p).collect();
                oracle_count = Some(rep.count);
                oracle_max_error = match_points(&engine_vertices, &pts);
                if min_angle < 2.0 * cfg.oracle.tau {
                    notes.push(format!(
                        "oracle comparison excluded: min vertex angle {min_angle:.4} below 2·tau"
                    ));
                } else {
                    oracle_match = Some(oracle_max_error.is_some_and(|e| e <= cfg.position_tol));
                }
                oracle_vertices = Some(pts);
            }
            Err(e) => {
                notes.push(format!("oracle failed: {e}"));
                oracle_match = Some(false);
            }
        }
    }

    let record = TrialRecord {
        trial,
        n,
        m: bound.m,
        regime: regime_name(bound.regime),
        digest: scene_digest(&file),
        pairwise: bound.pairwise,
        inherited: bound.inherited,
        total: bound.total,
        lower: bound.lower,
        upper: bound.upper,
        holds: bound.holds,
        min_angle,
        singleton,
        lemma_violations,
        hereditary_failures,
        oracle_count,
        oracle_match,
        oracle_max_error,
        rejections: g.rejections.total(),
        notes: notes
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join("; "),
    };
    Ok(Trial {
        record,
        scene: file,
        engine_vertices,
        oracle_vertices,
        elapsed: start.elapsed(),
    })
}

/// Runs every trial (in parallel) and collects them in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    let start = Instant::now();
    let results: Vec<Result<Trial, ExperimentError>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect();
    let trials = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let wall = start.elapsed();

    let mut histogram: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for t in &trials {
        *histogram
            .entry(t.record.n)
            .or_default()
            .entry(t.record.total)
            .or_default() += 1;
    }
    let count = |f: &dyn Fn(&TrialRecord) -> bool| trials.iter().filter(|t| f(&t.record)).count();
    let ms: Vec<f64> = trials
        .iter()
        .map(|t| t.elapsed.as_secs_f64() * 1e3)
        .collect();
    let summary = Summary {
        name: cfg.name.clone(),
        seed: cfg.seed,
        trials: trials.len(),
        histogram,
        bound_violations: count(&|r| !r.holds),
        oracle_mismatches: count(&|r| r.oracle_match == Some(false)),
        oracle_excluded: count(&|r| r.oracle_count.is_some() && r.oracle_match.is_none()),
        lemma_violations: trials.iter().map(|t| t.record.lemma_violations).sum(),
        hereditary_failures: trials.iter().map(|t| t.record.hereditary_failures).sum(),
        singleton_missing: count(&|r| r.singleton.is_none()),
        rejections: trials.iter().map(|t| t.record.rejections).sum(),
        mean_trial_ms: ms.iter().sum::<f64>() / ms.len() as f64,
        max_trial_ms: ms.iter().copied().fold(0.0, f64::max),
        wall_ms: wall.as_secs_f64() * 1e3,
    };
    Ok(ExperimentReport {
        config: cfg.clone(),
        trials,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene_io::DomainJson;

    fn small(seed: u64) -> ExperimentConfig {
        serde_json::from_str(&format!(
            r#"{{"domain": {{"fixed": {{"kind": "disk"}}}}, "translative": true, "n": 2, "n_max": 4,
                "trials": 6, "seed": {seed}, "oracle": {{"samples": 2048}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn config_defaults_and_validation() {
        let c = small(1);
        assert_eq!(c.max_retries, 1000);
        assert_eq!(c.position_tol, 1e-6);
        assert!(c.structural_checks);
        assert_eq!(c.domain, DomainSource::Fixed(DomainJson::Disk));
        assert_eq!((c.n_for(0), c.n_for(2), c.n_for(3)), (2, 4, 2));
        c.validate().unwrap();
        assert!(ExperimentConfig {
            trials: 0,
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(ExperimentConfig {
            n_max: Some(1),
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"domain":{"fixed":{"kind":"disk"}},"translative":true,"n":2,"trials":1,"seed":0,"bogus":1}"#).is_err());
    }

    #[test]
    fn translates_of_a_disk_have_n_vertices() {
        let rep = run_experiment(&small(3)).unwrap();
        assert_eq!(rep.trials.len(), 6);
        for r in rep.records() {
            assert_eq!(r.total, r.n);
            assert_eq!(r.oracle_match, Some(true), "{r:?}");
            assert!(!r.violates_theory());
        }
        assert_eq!(rep.summary.histogram[&3][&3], 2);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_experiment(&small(9)).unwrap();
        let b = run_experiment(&small(9)).unwrap();
        assert_eq!(a.csv_bytes(), b.csv_bytes());
        let c = run_experiment(&small(10)).unwrap();
        assert_ne!(a.csv_bytes(), c.csv_bytes());
    }

    #[test]
    fn csv_header_is_fixed() {
        let rep = run_experiment(&ExperimentConfig {
            trials: 1,
            ..small(1)
        })
        .unwrap();
        let text = String::from_utf8(rep.csv_bytes()).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "trial,n,m,regime,digest,pairwise,inherited,total,lower,upper,holds,min_angle,singleton,\
             lemma_violations,hereditary_failures,oracle_count,oracle_match,oracle_max_error,rejections,notes"
        );
    }

    #[test]
    fn matching_examples() {
        let p = |x: f64, y: f64| Point64::new(x, y);
        assert_eq!(match_points(&[p(0.0, 0.0)], &[]), None);
        let e = match_points(&[p(0.0, 0.0), p(1.0, 0.0)], &[p(1.0, 1e-7), p(0.0, 2e-7)]).unwrap();
        assert!((e - 2e-7).abs() < 1e-18);
    }
}
