//! Monotone root search on nondecreasing step-or-continuous functions.
//!
//! Every search here returns the left generalized inverse
//! `inf { t : f(t) >= r }` resolved to adjacent floating-point numbers: on
//! return `f(prev(t)) < r <= f(t)`.

/// Bisection iteration cap. A bracket inside one binade resolves to adjacent
/// floats in 53 steps, a bracket spanning the whole positive range in ~1100,
/// so the cap only ever truncates pathological brackets.
pub(crate) const MAX_BISECTIONS: usize = 200;

/// Bisects `[lo, hi]` with `f(lo) < r <= f(hi)` until the endpoints are
/// adjacent floats or the cap is hit, returning `hi`.
pub(crate) fn bisect_left<F>(f: F, mut lo: f64, mut hi: f64, r: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo < hi);
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= r {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Polishes an approximate left quantile `guess` of a nondecreasing `f` on
/// `[0, inf)`. Steps outward with doubling increments until `guess` is
/// bracketed, then bisects. Requires `0 < r <= sup f`.
pub(crate) fn refine_left<F>(f: F, guess: f64, r: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let guess = if guess.is_finite() && guess >= 0.0 {
        guess
    } else {
        0.0
    };
    if f(0.0) >= r {
        return 0.0;
    }

    let mut hi = guess;
    let mut step = (guess * f64::EPSILON).max(f64::MIN_POSITIVE);
    while f(hi) < r {
        hi += step;
        step *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }

    let mut lo = hi;
    let mut step = (hi * f64::EPSILON).max(f64::MIN_POSITIVE);
    loop {
        lo = (lo - step).max(0.0);
        if f(lo) < r {
            break;
        }
        step *= 2.0;
    }
    bisect_left(f, lo, hi, r)
}
