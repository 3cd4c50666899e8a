//! One-dimensional search helpers for convex and unimodal objectives.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimisation of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` or after `max_iter` steps and
/// returns the best abscissa seen together with its value.
pub(crate) fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while hi - lo > tol && iter < max_iter {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iter += 1;
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bisection for the switch point of a monotone predicate.
///
/// `pred(lo)` and `pred(hi)` must differ. Returns the endpoint of the final
/// bracket on which the predicate is true. `lo > hi` is allowed.
pub(crate) fn bisect<P: FnMut(f64) -> bool>(mut pred: P, mut lo: f64, mut hi: f64) -> f64 {
    let lo_val = pred(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid) == lo_val {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo_val {
        lo
    } else {
        hi
    }
}
