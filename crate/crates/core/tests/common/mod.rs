//! Independent reference computations used by the integration tests. None of
//! these go through the dynamic programs or searches under test.

#![allow(dead_code)]

use ordstat_core::Distribution;

/// `sum_{j >= k} C(n, j) t^j (1 - t)^(n - j)`: the cdf of the k-th smallest
/// of `n` i.i.d. uniforms at `t`, i.e. the Beta(k, n - k + 1) cdf.
pub fn binomial_sum_tail(n: usize, k: usize, t: f64) -> f64 {
    let mut total = 0.0;
    for j in k..=n {
        let mut c = 1.0;
        for i in 0..j {
            c = c * (n - i) as f64 / (i + 1) as f64;
        }
        total += c * t.powi(j as i32) * (1.0 - t).powi((n - j) as i32);
    }
    total
}

/// Root of `(e^-t + e^-2t) / 2 = 3/4`: `e^-t = (sqrt(7) - 1) / 2`.
pub fn mixture_exp12_quartile() -> f64 {
    -((7f64.sqrt() - 1.0) / 2.0).ln()
}

/// Every builtin family, a few parameterisations and scales.
pub fn builtin_laws() -> Vec<Distribution> {
    let mut out = vec![
        Distribution::uniform01(),
        Distribution::pareto(0.5).unwrap(),
        Distribution::pareto(2.0).unwrap(),
        Distribution::exponential(1.0).unwrap(),
        Distribution::exponential(3.5).unwrap(),
        Distribution::half_gaussian(1.0).unwrap(),
        Distribution::half_gaussian(0.2).unwrap(),
        Distribution::piecewise_linear(vec![(0.0, 0.0), (1.0, 0.25), (2.0, 0.25), (4.0, 1.0)])
            .unwrap(),
        Distribution::atomic(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
        Distribution::atomic(vec![(0.0, 0.1), (0.3, 0.2), (5.0, 0.7)]).unwrap(),
    ];
    let scaled: Vec<Distribution> = out.iter().map(|d| d.scaled(7.3).unwrap()).collect();
    out.extend(scaled);
    out
}

/// Laws whose cdf is continuous and strictly increasing on their support.
pub fn strictly_increasing_laws() -> Vec<(Distribution, f64, f64)> {
    vec![
        (Distribution::uniform01(), 1e-6, 1.0 - 1e-6),
        (Distribution::pareto(2.0).unwrap(), 1.0 + 1e-6, 1e3),
        (Distribution::exponential(1.0).unwrap(), 1e-8, 13.0),
        (Distribution::half_gaussian(1.0).unwrap(), 1e-8, 4.8),
        (Distribution::exponential(0.5).unwrap().scaled(3.0).unwrap(), 1e-6, 60.0),
    ]
}
