use crate::engine::structure::CPolygonStruct;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Translates of one domain: `n ≤ |V| ≤ n + m`.
    Translative,
    /// Homothets of one domain: `n ≤ |V| ≤ 2(n - 1) + m`.
    Homothetic,
    /// Different smooth strictly convex bodies: `n ≤ |V| ≤ 2(n - 1)`.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundReport {
    pub regime: Regime,
    pub n: usize,
    pub m: usize,
    pub pairwise: usize,
    pub inherited: usize,
    pub total: usize,
    pub lower: usize,
    pub upper: usize,
    pub holds: bool,
}

pub fn verify_bounds<S: Scalar>(s: &CPolygonStruct<S>) -> BoundReport {
    let n = s.scene.n();
    let m = s.scene.m();
    let regime = if s.scene.is_mixed() {
        Regime::Mixed
    } else if s.scene.is_translative() {
        Regime::Translative
    } else {
        Regime::Homothetic
    };
    let upper = match regime {
        Regime::Translative => n + m,
        Regime::Homothetic => 2 * (n - 1) + m,
        Regime::Mixed => 2 * (n - 1),
    };
    let total = s.total();
    BoundReport {
        regime,
        n,
        m,
        pairwise: s.pairwise_count(),
        inherited: s.inherited_count(),
        total,
        lower: n,
        upper,
        holds: n <= total && total <= upper,
    }
}
