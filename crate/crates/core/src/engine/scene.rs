use std::sync::Arc;

use thiserror::Error;

use crate::domains::{ConvexDomain, Domain, HomothetSpec, PlacedBody};
use crate::geom::{GeomError, Tolerances};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("a scene needs at least 2 bodies, got {0}")]
    TooFewBodies(usize),
    #[error(transparent)]
    Tolerances(#[from] GeomError),
    #[error("mixed scenes require smooth strictly convex bodies; body {0} is not")]
    MixedNotSmooth(usize),
}

/// One C-polygon instance: the generating bodies plus the tolerances used to
/// analyze them.
#[derive(Debug, Clone)]
pub struct SceneSpec<S> {
    bodies: Vec<PlacedBody<S>>,
    shared_domain: Option<Arc<Domain<S>>>,
    translative: bool,
    tolerances: Tolerances<S>,
}

impl<S: Scalar> SceneSpec<S> {
    /// Homothets `x_i + λ_i C` of one domain. The scene is translative when
    /// every scale equals one.
    pub fn homothetic(
        domain: impl Into<Arc<Domain<S>>>,
        placements: &[HomothetSpec<S>],
        tolerances: Tolerances<S>,
    ) -> Result<Self, SceneError> {
        if placements.len() < 2 {
            return Err(SceneError::TooFewBodies(placements.len()));
        }
        tolerances.validate()?;
        let domain = domain.into();
        let translative = placements.iter().all(|p| p.scale == S::one());
        let bodies = placements
            .iter()
            .map(|p| PlacedBody::new(domain.clone(), *p))
            .collect();
        Ok(SceneSpec {
            bodies,
            shared_domain: Some(domain),
            translative,
            tolerances,
        })
    }

    /// Bodies with individual domains. Every body must be smooth and
    /// strictly convex.
    pub fn mixed(
        bodies: Vec<PlacedBody<S>>,
        tolerances: Tolerances<S>,
    ) -> Result<Self, SceneError> {
        if bodies.len() < 2 {
            return Err(SceneError::TooFewBodies(bodies.len()));
        }
        tolerances.validate()?;
        if let Some(i) = bodies
            .iter()
            .position(|b| !(b.is_smooth() && b.is_strictly_convex()))
        {
            return Err(SceneError::MixedNotSmooth(i));
        }
        Ok(SceneSpec {
            bodies,
            shared_domain: None,
            translative: false,
            tolerances,
        })
    }

    pub fn bodies(&self) -> &[PlacedBody<S>] {
        &self.bodies
    }

    pub fn n(&self) -> usize {
        self.bodies.len()
    }

    pub fn shared_domain(&self) -> Option<&Arc<Domain<S>>> {
        self.shared_domain.as_ref()
    }

    pub fn is_translative(&self) -> bool {
        self.translative
    }

    pub fn is_mixed(&self) -> bool {
        self.shared_domain.is_none()
    }

    pub fn tolerances(&self) -> &Tolerances<S> {
        &self.tolerances
    }

    /// Singular point count `m` of the shared domain (0 for mixed scenes).
    pub fn m(&self) -> usize {
        self.shared_domain
            .as_ref()
            .map_or(0, |d| d.singular_count())
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances<S>) -> Result<Self, SceneError> {
        tolerances.validate()?;
        self.tolerances = tolerances;
        Ok(self)
    }

    /// The scene with body `j` removed.
    pub fn without(&self, j: usize) -> Result<Self, SceneError> {
        let bodies: Vec<_> = self
            .bodies
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, b)| b.clone())
            .collect();
        if bodies.len() < 2 {
            return Err(SceneError::TooFewBodies(bodies.len()));
        }
        Ok(SceneSpec {
            bodies,
            shared_domain: self.shared_domain.clone(),
            translative: self.translative,
            tolerances: self.tolerances,
        })
    }
}
