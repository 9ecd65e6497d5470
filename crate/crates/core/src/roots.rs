//! Derivative-free 1D root finding and extremum search.

use crate::Scalar;

const MAX_ITERS: usize = 200;

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite sign (as
/// classified by `f < 0`). Stops when the bracket is narrower than `tol` or no
/// longer shrinks. Returns the midpoint of the final bracket.
pub fn bisect<S: Scalar, F: FnMut(S) -> S>(mut f: F, mut lo: S, mut hi: S, tol: S) -> S {
    let lo_neg = f(lo) < S::zero();
    let half = S::lit(0.5);
    for _ in 0..MAX_ITERS {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = lo + (hi - lo) * half;
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) < S::zero()) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) * half
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmin, min)`.
pub fn golden_min<S: Scalar, F: FnMut(S) -> S>(mut f: F, mut lo: S, mut hi: S, tol: S) -> (S, S) {
    let r = S::lit(0.618_033_988_749_895);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..MAX_ITERS {
        if (hi - lo).abs() <= tol {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
