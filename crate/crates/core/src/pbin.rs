//! Poisson-binomial law: the number of successes among independent Bernoulli
//! trials with unequal success probabilities.
//!
//! This is the bridge to order statistics: `k-min X_i <= t` exactly when at
//! least `k` of the events `{X_i <= t}` occur. All accumulations run in index
//! order so that results are bit-stable across runs.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest `n` accepted by [`brute_force_tail`].
pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Success probabilities `p_1..p_n`, each in `[0, 1]`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessVector {
    p: Vec<f64>,
}

impl SuccessVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(domain("success vector must be non-empty"));
        }
        if let Some(bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(domain(format!("success probability {bad} outside [0, 1]")));
        }
        Ok(Self { p })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `sum p_i`, the mean number of successes.
    pub fn mean_sum(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// Full law of the success count: entry `j` is `P(S = j)`, `j = 0..=n`.
pub fn pmf(sv: &SuccessVector) -> Vec<f64> {
    let n = sv.len();
    let mut dist = vec![0.0; n + 1];
    dist[0] = 1.0;
    for (i, &p) in sv.p.iter().enumerate() {
        let q = 1.0 - p;
        for j in (1..=i + 1).rev() {
            dist[j] = dist[j] * q + dist[j - 1] * p;
        }
        dist[0] *= q;
    }
    dist
}

/// `(P(S < k), P(S >= k))` from a DP over counts `0..k` with an absorbing
/// state for "at least k". Trials arrive as `(p, 1 - p)` pairs so callers can
/// supply an accurately computed failure probability. Both halves are
/// accumulated directly, so small probabilities on either side keep full
/// relative precision.
pub(crate) fn split_at<I>(trials: I, k: usize) -> (f64, f64)
where
    I: IntoIterator<Item = (f64, f64)>,
{
    if k == 0 {
        return (0.0, 1.0);
    }
    let mut below = vec![0.0; k];
    below[0] = 1.0;
    let mut at_least = 0.0;
    // Highest count reachable so far, capped at k - 1.
    let mut top = 0usize;
    for (p, q) in trials {
        at_least += below[k - 1] * p;
        top = (top + 1).min(k - 1);
        for j in (1..=top).rev() {
            below[j] = below[j] * q + below[j - 1] * p;
        }
        below[0] *= q;
    }
    (below.iter().sum(), at_least)
}

fn check_rank(sv: &SuccessVector, k: usize) -> Result<()> {
    if k > sv.len() + 1 {
        return Err(domain(format!(
            "count threshold {k} outside 0..={}",
            sv.len() + 1
        )));
    }
    Ok(())
}

/// `P(S >= k)` in `O(n k)` time and `O(k)` space. `k` ranges over `0..=n+1`.
pub fn tail_at_least(sv: &SuccessVector, k: usize) -> Result<f64> {
    check_rank(sv, k)?;
    Ok(split_at(sv.p.iter().map(|&p| (p, 1.0 - p)), k).1)
}

/// `P(S < k)`, computed directly rather than as `1 - tail_at_least`.
pub fn tail_below(sv: &SuccessVector, k: usize) -> Result<f64> {
    check_rank(sv, k)?;
    Ok(split_at(sv.p.iter().map(|&p| (p, 1.0 - p)), k).0)
}

/// `P(S >= k)` by enumerating all `2^n` outcomes. Reference oracle for the
/// dynamic programs; rejects `n > 20`.
pub fn brute_force_tail(sv: &SuccessVector, k: usize) -> Result<f64> {
    let n = sv.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge(format!(
            "brute-force enumeration limited to n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    check_rank(sv, k)?;
    let mut total = 0.0;
    for mask in 0u32..(1u32 << n) {
        if (mask.count_ones() as usize) < k {
            continue;
        }
        let mut prob = 1.0;
        for (i, &p) in sv.p.iter().enumerate() {
            prob *= if mask >> i & 1 == 1 { p } else { 1.0 - p };
        }
        total += prob;
    }
    Ok(total)
}

/// Exact deviation probability against the first-moment Chebyshev bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevGap {
    /// `P(|S - sum p_i| >= t)`.
    pub exact: f64,
    /// `(sum p_i) / t^2`.
    pub bound: f64,
}

impl ChebyshevGap {
    pub fn holds(&self) -> bool {
        self.exact <= self.bound
    }
}

/// Compares `P(|S - sum p_i| >= t)` with `(sum p_i) / t^2`. The bound uses the
/// mean, not the variance, which it dominates.
pub fn chebyshev_bound_gap(sv: &SuccessVector, t: f64) -> Result<ChebyshevGap> {
    if t.is_nan() || t <= 0.0 {
        return Err(domain(format!("deviation t must be positive, got {t}")));
    }
    let mean = sv.mean_sum();
    let exact = pmf(sv)
        .iter()
        .enumerate()
        .filter(|&(j, _)| (j as f64 - mean).abs() >= t)
        .map(|(_, &w)| w)
        .sum();
    Ok(ChebyshevGap {
        exact,
        bound: mean / (t * t),
    })
}
