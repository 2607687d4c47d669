//! Exact law of the k-th smallest coordinate of an independent,
//! non-identically distributed vector.

use crate::dist::{Distribution, Law, MixtureCdf};
use crate::error::{domain, Error, Result};
use crate::pbin::split_at;
use crate::search::bisect_left;

/// Doubling steps allowed in each direction when bracketing a quantile.
const MAX_DOUBLINGS: i32 = 200;

/// Components `X_1..X_n` together with the rank `k` of `k-min X_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatModel {
    components: Vec<Distribution>,
    k: usize,
}

impl OrderStatModel {
    pub fn new(components: Vec<Distribution>, k: usize) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(domain("model needs at least one component"));
        }
        if k == 0 || k > n {
            return Err(domain(format!("rank {k} outside 1..={n}")));
        }
        Ok(Self { components, k })
    }

    /// `n` copies of `d`.
    pub fn iid(d: Distribution, n: usize, k: usize) -> Result<Self> {
        Self::new(vec![d; n], k)
    }

    pub fn components(&self) -> &[Distribution] {
        &self.components
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Same components, different rank.
    pub fn with_rank(&self, k: usize) -> Result<Self> {
        Self::new(self.components.clone(), k)
    }

    /// Every component multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|d| d.scaled(factor))
            .collect::<Result<_>>()?;
        Self::new(components, self.k)
    }

    pub fn mixture(&self) -> MixtureCdf {
        MixtureCdf::new(self.components.clone()).expect("model is non-empty")
    }

    /// Distinct components, in order of first appearance.
    pub fn distinct_components(&self) -> Vec<&Distribution> {
        let mut out: Vec<&Distribution> = Vec::new();
        for d in &self.components {
            if !out.contains(&d) {
                out.push(d);
            }
        }
        out
    }

    /// Bernoulli trials `(F_i(t), 1 - F_i(t))`.
    fn success_at(&self, t: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.components.iter().map(move |d| {
            let p = d.cdf(t);
            (p, 1.0 - p)
        })
    }

    fn has_atoms(&self) -> bool {
        self.components.iter().any(|d| !d.is_continuous())
    }
}

/// `P(k-min <= t) = P(#{i : X_i <= t} >= k)`.
///
/// Bit-identical to [`crate::pbin::tail_at_least`] on the vector `F_i(t)`.
pub fn kmin_cdf(m: &OrderStatModel, t: f64) -> f64 {
    split_at(m.success_at(t), m.k).1
}

/// `P(k-min > t)`, accumulated directly for precision in the upper tail.
pub fn kmin_sf(m: &OrderStatModel, t: f64) -> f64 {
    split_at(m.components.iter().map(|d| (d.cdf(t), d.sf(t))), m.k).0
}

/// `P(k-min < t)` through the left limits of the component cdfs.
pub fn kmin_strict_cdf(m: &OrderStatModel, t: f64) -> f64 {
    if !m.has_atoms() {
        return kmin_cdf(m, t);
    }
    let trials = m.components.iter().map(|d| {
        let p = d.cdf_left_limit(t);
        (p, 1.0 - p)
    });
    split_at(trials, m.k).1
}

/// Left quantile `inf { t : P(k-min <= t) >= r }` for `0 < r < 1`.
///
/// Brackets by doubling from `t = 1` and bisects to adjacent floats, so the
/// result `t` satisfies `P(k-min <= t) >= r` and `P(k-min <= prev(t)) < r`.
pub fn kmin_quantile(m: &OrderStatModel, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(domain(format!("order-statistic quantile level must lie in (0, 1), got {r}")));
    }
    let f = |t: f64| kmin_cdf(m, t);
    if f(0.0) >= r {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.5, 1.0);
    if f(hi) >= r {
        let mut steps = 0;
        while f(lo) >= r {
            hi = lo;
            lo /= 2.0;
            steps += 1;
            if steps > MAX_DOUBLINGS {
                return Err(Error::OutOfRange);
            }
        }
    } else {
        lo = hi;
        hi *= 2.0;
        let mut steps = 0;
        while f(hi) < r {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > MAX_DOUBLINGS {
                return Err(Error::OutOfRange);
            }
        }
    }
    Ok(bisect_left(f, lo, hi, r))
}

/// Canonical left median of `k-min`.
pub fn kmin_median(m: &OrderStatModel) -> Result<f64> {
    kmin_quantile(m, 0.5)
}

/// `P(k-max <= t)` where the model's rank is read as "k-th largest"; equal
/// to the cdf of the `(n - k + 1)`-th smallest.
pub fn kmax_cdf(m: &OrderStatModel, t: f64) -> f64 {
    let dual = m.n() - m.k + 1;
    split_at(m.success_at(t), dual).1
}

/// Quantile of the averaged law at level `(k - 1/2) / n`.
pub fn averaged_quantile(m: &OrderStatModel) -> f64 {
    let level = (m.k as f64 - 0.5) / m.n() as f64;
    m.mixture()
        .quantile(level)
        .expect("level lies strictly inside (0, 1)")
}
