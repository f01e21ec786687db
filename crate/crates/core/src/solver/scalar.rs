//! One-dimensional search helpers for concave functions on an interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))`. The endpoints are compared against the interior
/// estimate, so maxima sitting on the boundary are returned exactly.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo <= hi);
    if hi - lo <= tol {
        let x = 0.5 * (lo + hi);
        return best_of(&f, [lo, x, hi]);
    }

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    best_of(&f, [lo, 0.5 * (a + b), hi])
}

fn best_of<F: Fn(f64) -> f64>(f: &F, xs: [f64; 3]) -> (f64, f64) {
    xs.into_iter()
        .map(|x| (x, f(x)))
        .fold((f64::NAN, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
}

/// Bisection on a monotone sign change of `f` between `outside` (where
/// `f < 0`) and `inside` (where `f >= 0`). The returned point always
/// satisfies `f >= 0`.
pub fn bisect_boundary<F>(f: F, mut outside: f64, mut inside: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    while (inside - outside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if f(mid) >= 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// The interval `{x in [lo, hi] : f(x) >= 0}` of a concave `f`, or `None`
/// when it is empty.
pub fn superlevel_interval<F>(f: F, lo: f64, hi: f64, tol: f64) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let (peak, f_peak) = golden_section_max(&f, lo, hi, tol);
    if !(f_peak >= 0.0) {
        return None;
    }
    let left = if f(lo) >= 0.0 {
        lo
    } else {
        bisect_boundary(&f, lo, peak, tol)
    };
    let right = if f(hi) >= 0.0 {
        hi
    } else {
        bisect_boundary(&f, hi, peak, tol)
    };
    Some((left, right))
}
