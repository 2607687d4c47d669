//! Builtin laws known to satisfy the regularity condition, with their
//! parameter `K`, and seeded generators of random heterogeneous models built
//! from them.

use rand::Rng;

use crate::dist::{Distribution, Family};
use crate::ostat::OrderStatModel;

/// A catalogue law with the `K` at which it is regular.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogueEntry {
    pub name: String,
    pub law: Distribution,
    pub k_param: f64,
}

/// Uniform on `[0, 1]` at `K = 2`, power tails `t^-p` at `K = 2^(1/p)` for
/// `p` in {0.5, 1, 2, 4}, and the exponential and half-Gaussian laws at `K = 3`.
pub fn regular_families() -> Vec<CatalogueEntry> {
    let mut out = vec![CatalogueEntry {
        name: "uniform01".into(),
        law: Distribution::uniform01(),
        k_param: 2.0,
    }];
    for p in [0.5, 1.0, 2.0, 4.0] {
        out.push(CatalogueEntry {
            name: format!("pareto(p={p})"),
            law: Distribution::pareto(p).unwrap(),
            k_param: pareto_k(p),
        });
    }
    out.push(CatalogueEntry {
        name: "exponential(rate=1)".into(),
        law: Distribution::exponential(1.0).unwrap(),
        k_param: 3.0,
    });
    out.push(CatalogueEntry {
        name: "half_gaussian(sigma=1)".into(),
        law: Distribution::half_gaussian(1.0).unwrap(),
        k_param: 3.0,
    });
    out
}

pub fn pareto_k(p: f64) -> f64 {
    2f64.powf(1.0 / p)
}

/// Regularity parameter of a builtin law, independent of its scale.
/// `None` for tabulated and atomic laws.
pub fn family_k(d: &Distribution) -> Option<f64> {
    match d.family() {
        Family::Uniform01 => Some(2.0),
        Family::ParetoPower { p } => Some(pareto_k(*p)),
        Family::Exponential { .. } | Family::HalfGaussian { .. } => Some(3.0),
        Family::PiecewiseLinearCdf(_) | Family::Atomic(_) => None,
    }
}

/// Smallest catalogue `K` valid for every component of `m`: the condition at
/// `K` implies it at any larger `K`.
pub fn model_k(m: &OrderStatModel) -> Option<f64> {
    m.components()
        .iter()
        .map(family_k)
        .try_fold(1.0_f64, |acc, k| k.map(|k| acc.max(k)))
}

/// How Pareto exponents are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParetoExponents {
    /// One of the catalogue exponents {0.5, 1, 2, 4}.
    Catalogue,
    /// Uniform on `[0.5, 4]`.
    Continuous,
}

/// Shape of random models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSampler {
    pub n_max: usize,
    /// Distinct laws per model; components are split into this many blocks.
    pub max_distinct: usize,
    pub pareto: ParetoExponents,
    /// Scales are log-uniform on `[scale_min, scale_max]`.
    pub scale_min: f64,
    pub scale_max: f64,
}

impl Default for ModelSampler {
    fn default() -> Self {
        Self {
            n_max: 500,
            max_distinct: 16,
            pareto: ParetoExponents::Catalogue,
            scale_min: 0.01,
            scale_max: 100.0,
        }
    }
}

impl ModelSampler {
    pub fn law<R: Rng>(&self, rng: &mut R) -> Distribution {
        let base = match rng.random_range(0..4) {
            0 => Distribution::uniform01(),
            1 => {
                let p = match self.pareto {
                    ParetoExponents::Catalogue => [0.5, 1.0, 2.0, 4.0][rng.random_range(0..4)],
                    ParetoExponents::Continuous => rng.random_range(0.5..=4.0),
                };
                Distribution::pareto(p).unwrap()
            }
            2 => Distribution::exponential(1.0).unwrap(),
            _ => Distribution::half_gaussian(1.0).unwrap(),
        };
        let (lo, hi) = (self.scale_min.ln(), self.scale_max.ln());
        base.scaled(rng.random_range(lo..=hi).exp()).unwrap()
    }

    /// Random `n` in `1..=n_max`, random rank, components in blocks of equal
    /// laws.
    pub fn model<R: Rng>(&self, rng: &mut R) -> OrderStatModel {
        let n = rng.random_range(1..=self.n_max);
        let distinct = rng.random_range(1..=self.max_distinct.min(n));
        let laws: Vec<Distribution> = (0..distinct).map(|_| self.law(rng)).collect();
        let components = (0..n).map(|i| laws[i * distinct / n].clone()).collect();
        let k = rng.random_range(1..=n);
        OrderStatModel::new(components, k).unwrap()
    }
}
