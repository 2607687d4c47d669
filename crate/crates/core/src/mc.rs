//! Monte Carlo cross-check of the exact engine.
//!
//! Replicate `i` draws its `n` uniforms from a ChaCha8 stream keyed by
//! `(seed, i)`, so results do not depend on scheduling or thread count.

use std::time::{Duration, Instant};

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::dist::{Distribution, Law};
use crate::error::{domain, Error, Result};
use crate::ostat::OrderStatModel;

pub const MIN_REPLICATES: usize = 100;

/// Stream derivation recorded in every [`SimResult`].
pub const GENERATOR: &str = "ChaCha8Rng::seed_from_u64(seed), set_stream(replicate_index)";

/// Inverse-transform draw: `quantile(d, u)` for `u` in `(0, 1)`.
pub fn sample(d: &Distribution, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(domain(format!("uniform variate must lie in (0, 1), got {u}")));
    }
    d.quantile(u)
}

/// Value of rank `k` (1-based, ascending, ties counted with multiplicity).
///
/// Uses introselect, so `values` is left partially reordered.
pub fn kth_smallest(values: &mut [f64], k: usize) -> Result<f64> {
    if k == 0 || k > values.len() {
        return Err(domain(format!("rank {k} outside 1..={}", values.len())));
    }
    let (_, kth, _) = values.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub replicates: usize,
    /// Sample median (rank `ceil(R/2)`) of the simulated `k-min` values.
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_level: f64,
    /// Ranks (1-based) of the order statistics bounding the interval.
    pub ci_ranks: (usize, usize),
    pub seed: u64,
    pub generator: String,
    pub elapsed: Duration,
}

impl SimResult {
    /// Equality of every field except `elapsed`.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self {
            elapsed: other.elapsed,
            ..self.clone()
        } == *other
    }

    pub fn covers(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

/// One `k-min` draw for replicate `index`.
pub fn replicate(m: &OrderStatModel, seed: u64, index: u64, buf: &mut Vec<f64>) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    buf.clear();
    for d in m.components() {
        let u: f64 = rng.sample(Open01);
        buf.push(sample(d, u).expect("Open01 lies in (0, 1)"));
    }
    kth_smallest(buf, m.k()).expect("model rank is valid")
}

/// Symmetric ranks `(l, u)` around the middle such that
/// `P(l <= B <= u - 1) >= level` for `B ~ Binomial(R, 1/2)`; the interval
/// `[X_(l), X_(u)]` then covers the median with at least that probability.
pub fn median_ci_ranks(replicates: usize, level: f64) -> Result<(usize, usize)> {
    let binom = Binomial::new(0.5, replicates as u64)
        .map_err(|e| domain(format!("binomial setup failed: {e}")))?;
    let cdf = |x: i64| if x < 0 { 0.0 } else { binom.cdf(x as u64) };
    let (lo_mid, hi_mid) = (replicates.div_ceil(2), replicates / 2 + 1);
    for c in 0..replicates {
        let (Some(l), u) = (lo_mid.checked_sub(c), hi_mid + c) else {
            break;
        };
        if l == 0 || u > replicates {
            break;
        }
        if cdf(u as i64 - 1) - cdf(l as i64 - 1) >= level {
            return Ok((l, u));
        }
    }
    Err(domain(format!(
        "{replicates} replicates cannot reach confidence {level}"
    )))
}

/// Simulates `R` draws of `k-min` and brackets the median with a
/// distribution-free order-statistic interval. `threads = None` uses the
/// global rayon pool.
pub fn simulate_median(
    m: &OrderStatModel,
    replicates: usize,
    seed: u64,
    ci_level: f64,
    threads: Option<usize>,
) -> Result<SimResult> {
    if replicates < MIN_REPLICATES {
        return Err(domain(format!(
            "need at least {MIN_REPLICATES} replicates, got {replicates}"
        )));
    }
    if !(ci_level > 0.5 && ci_level < 1.0) {
        return Err(domain(format!("confidence level must lie in (0.5, 1), got {ci_level}")));
    }
    let ranks = median_ci_ranks(replicates, ci_level)?;
    let start = Instant::now();

    let draw = || -> Vec<f64> {
        (0..replicates as u64)
            .into_par_iter()
            .map_init(Vec::new, |buf, i| replicate(m, seed, i, buf))
            .collect()
    };
    let mut draws = match threads {
        None => draw(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(draw),
    };
    draws.sort_unstable_by(f64::total_cmp);

    Ok(SimResult {
        replicates,
        estimate: draws[replicates.div_ceil(2) - 1],
        ci_low: draws[ranks.0 - 1],
        ci_high: draws[ranks.1 - 1],
        ci_level,
        ci_ranks: ranks,
        seed,
        generator: GENERATOR.to_string(),
        elapsed: start.elapsed(),
    })
}
