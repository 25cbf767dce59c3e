//! Bracketing root search for sign changes of scalar functions and for
//! transitions of boolean predicates along a parameter.

use crate::scalar::Scalar;

/// Locates the point in `[lo, hi]` where `pred` flips, assuming
/// `pred(lo) != pred(hi)`. Returns the midpoint of the final bracket,
/// which has width at most `tol`. `None` if there is no flip.
pub fn bisect_transition<T, F>(mut pred: F, mut lo: T, mut hi: T, tol: T) -> Option<T>
where
    T: Scalar,
    F: FnMut(T) -> bool,
{
    let at_lo = pred(lo);
    if at_lo == pred(hi) {
        return None;
    }
    let two = T::lit(2.0);
    // cap iterations: tol below the float spacing would otherwise loop forever
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / two;
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) / two)
}

/// Root of a continuous `f` with `f(lo)` and `f(hi)` of opposite sign, in
/// the sense `f < 0` versus `f >= 0`.
pub fn bisect_sign_change<T, F>(mut f: F, lo: T, hi: T, tol: T) -> Option<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    bisect_transition(|x| f(x) < T::zero(), lo, hi, tol)
}

/// Scans a uniform grid of `n` intervals and bisects every bracket where
/// `pred` changes value. Roots are returned in increasing order.
pub fn scan_transitions<T, F>(mut pred: F, lo: T, hi: T, n: usize, tol: T) -> Vec<T>
where
    T: Scalar,
    F: FnMut(T) -> bool,
{
    let n = n.max(1);
    let step = (hi - lo) / T::from_usize(n).unwrap();
    let grid: Vec<T> = (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + step * T::from_usize(i).unwrap()
            }
        })
        .collect();
    let flags: Vec<bool> = grid.iter().map(|&x| pred(x)).collect();
    let mut roots = Vec::new();
    for i in 0..n {
        if flags[i] != flags[i + 1] {
            if let Some(r) = bisect_transition(&mut pred, grid[i], grid[i + 1], tol) {
                roots.push(r);
            }
        }
    }
    roots
}
