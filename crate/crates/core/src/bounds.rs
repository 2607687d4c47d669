//! End-to-end certificates for the median sandwich
//!
//! ```text
//! K^-10 q <= Med(k-min X_i) <= K^13 q,   q = q_F((k - 1/2) / n),
//! ```
//!
//! where `F` is the averaged law of the components, together with the tail
//! bounds `P(k-min < t q) <= 4 t^(1 / (4 ln K))` for `0 < t < K^-5` and
//! `P(k-min > t q) <= 4 t^(-1 / (6 ln K))` for `t > K^5`. Probabilities are
//! exact (Poisson-binomial dynamic programming); `ln` is the natural log.

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{domain, Result};
use crate::ostat::{averaged_quantile, kmin_cdf, kmin_median, kmin_sf, kmin_strict_cdf, OrderStatModel};
use crate::regularity::{check_condition, GridSpec, RegularityCertificate, Verdict};

/// Relative slack on the sandwich comparison.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;
/// Absolute slack on tail probabilities.
pub const TAIL_TOLERANCE: f64 = 1e-12;

pub const LOWER_EXPONENT: i32 = -10;
pub const UPPER_EXPONENT: i32 = 13;
/// Tail bounds apply for `t < K^-5` and `t > K^5`.
pub const TAIL_RANGE_EXPONENT: i32 = 5;

/// Name of the quantile convention behind every reported `q` and median.
pub const QUANTILE_CONVENTION: &str = "left generalized inverse inf{t : F(t) >= r}";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremVerdict {
    Pass,
    /// The sandwich itself was violated.
    Fail,
    /// Some component failed the regularity check; the sandwich numbers are
    /// diagnostic only.
    PreconditionFailed,
}

/// Certificate for one distinct component law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentCertificate {
    /// Index of the first component with this law.
    pub component: usize,
    pub multiplicity: usize,
    pub family: String,
    pub scale: f64,
    pub certificate: RegularityCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    #[serde(rename = "K")]
    pub k_param: f64,
    pub n: usize,
    pub k: usize,
    /// Averaged-law quantile at level `(k - 1/2) / n`.
    pub q: f64,
    /// Left median of `k-min`.
    pub med: f64,
    pub ratio: f64,
    /// `K^-10`.
    pub lower: f64,
    /// `K^13`.
    pub upper: f64,
    /// `P(k-min < K^-10 q)`; below 1/2 for every median convention.
    pub strict_cdf_at_lower: f64,
    /// `P(k-min <= K^13 q)`; above 1/2 for every median convention.
    pub cdf_at_upper: f64,
    pub sandwich: Verdict,
    pub convention_free: Verdict,
    pub quantile_convention: String,
    pub verdict: TheoremVerdict,
    pub certificates: Vec<ComponentCertificate>,
}

impl TheoremReport {
    pub fn preconditions_hold(&self) -> bool {
        self.certificates.iter().all(|c| c.certificate.passed())
    }
}

/// Regularity certificates for each distinct component, with multiplicities.
pub fn component_certificates(
    m: &OrderStatModel,
    k_param: f64,
    grid: &GridSpec,
) -> Result<Vec<ComponentCertificate>> {
    let mut out: Vec<(Distribution, ComponentCertificate)> = Vec::new();
    for (i, d) in m.components().iter().enumerate() {
        if let Some((_, c)) = out.iter_mut().find(|(seen, _)| seen == d) {
            c.multiplicity += 1;
            continue;
        }
        let certificate = check_condition(d, k_param, grid)?;
        out.push((
            d.clone(),
            ComponentCertificate {
                component: i,
                multiplicity: 1,
                family: d.family_name().to_string(),
                scale: d.scale(),
                certificate,
            },
        ));
    }
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

fn check_k(k_param: f64) -> Result<()> {
    if k_param.is_finite() && k_param > 1.0 {
        Ok(())
    } else {
        Err(domain(format!("K must exceed 1, got {k_param}")))
    }
}

/// Checks every component against the regularity condition at `k_param`,
/// then compares the left median with `K^-10 q` and `K^13 q`.
pub fn verify_theorem(m: &OrderStatModel, k_param: f64, grid: &GridSpec) -> Result<TheoremReport> {
    check_k(k_param)?;
    let certificates = component_certificates(m, k_param, grid)?;
    let q = averaged_quantile(m);
    let med = kmin_median(m)?;
    let lower = k_param.powi(LOWER_EXPONENT);
    let upper = k_param.powi(UPPER_EXPONENT);

    let ratio = if q > 0.0 {
        med / q
    } else if med == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let slack = 1.0 + SANDWICH_TOLERANCE;
    let sandwich = Verdict::from_pass(lower * q <= med * slack && med <= upper * q * slack);

    let strict_cdf_at_lower = kmin_strict_cdf(m, lower * q);
    let cdf_at_upper = kmin_cdf(m, upper * q);
    let convention_free = Verdict::from_pass(strict_cdf_at_lower < 0.5 && cdf_at_upper > 0.5);

    let regular = certificates.iter().all(|c| c.certificate.passed());
    let verdict = match (regular, sandwich) {
        (false, _) => TheoremVerdict::PreconditionFailed,
        (true, Verdict::Pass) => TheoremVerdict::Pass,
        (true, Verdict::Fail) => TheoremVerdict::Fail,
    };

    Ok(TheoremReport {
        k_param,
        n: m.n(),
        k: m.k(),
        q,
        med,
        ratio,
        lower,
        upper,
        strict_cdf_at_lower,
        cdf_at_upper,
        sandwich,
        convention_free,
        quantile_convention: QUANTILE_CONVENTION.to_string(),
        verdict,
        certificates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        }
    }
}

/// One tail probability against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBoundRow {
    pub t: f64,
    pub side: Side,
    /// `t * q`.
    pub threshold: f64,
    pub exact_prob: f64,
    pub bound: f64,
    /// The bound is at least one and says nothing.
    pub vacuous: bool,
    pub verdict: Verdict,
}

impl TailBoundRow {
    fn new(t: f64, side: Side, threshold: f64, exact_prob: f64, bound: f64) -> Self {
        Self {
            t,
            side,
            threshold,
            exact_prob,
            bound,
            vacuous: bound >= 1.0,
            verdict: Verdict::from_pass(exact_prob <= bound + TAIL_TOLERANCE),
        }
    }

    /// Same row judged against `factor * bound`.
    pub fn with_bound_scaled(&self, factor: f64) -> Self {
        Self::new(self.t, self.side, self.threshold, self.exact_prob, self.bound * factor)
    }
}

/// `4 t^(1 / (4 ln K))`.
pub fn lower_tail_bound(t: f64, k_param: f64) -> f64 {
    4.0 * (t.ln() / (4.0 * k_param.ln())).exp()
}

/// `4 t^(-1 / (6 ln K))`.
pub fn upper_tail_bound(t: f64, k_param: f64) -> f64 {
    4.0 * (-t.ln() / (6.0 * k_param.ln())).exp()
}

/// `K^-(5 + j)` for `j = 1..=10`.
pub fn default_lower_grid(k_param: f64) -> Vec<f64> {
    (1..=10).map(|j| k_param.powi(-TAIL_RANGE_EXPONENT - j)).collect()
}

/// `K^(5 + j)` for `j = 1..=10`.
pub fn default_upper_grid(k_param: f64) -> Vec<f64> {
    (1..=10).map(|j| k_param.powi(TAIL_RANGE_EXPONENT + j)).collect()
}

fn sorted(mut rows: Vec<TailBoundRow>) -> Vec<TailBoundRow> {
    rows.sort_by(|a, b| a.t.total_cmp(&b.t));
    rows
}

/// `P(k-min < t q)` against `4 t^(1 / (4 ln K))` for each `t` in `(0, K^-5)`.
pub fn verify_lower_tail(m: &OrderStatModel, k_param: f64, t_grid: &[f64]) -> Result<Vec<TailBoundRow>> {
    check_k(k_param)?;
    let edge = k_param.powi(-TAIL_RANGE_EXPONENT);
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > 0.0 && t < edge)) {
        return Err(domain(format!("lower-tail t = {t} outside (0, K^-5 = {edge})")));
    }
    let q = averaged_quantile(m);
    Ok(sorted(
        t_grid
            .iter()
            .map(|&t| {
                let threshold = t * q;
                TailBoundRow::new(t, Side::Lower, threshold, kmin_strict_cdf(m, threshold), lower_tail_bound(t, k_param))
            })
            .collect(),
    ))
}

/// `P(k-min > t q)` against `4 t^(-1 / (6 ln K))` for each `t` in `(K^5, inf)`.
pub fn verify_upper_tail(m: &OrderStatModel, k_param: f64, t_grid: &[f64]) -> Result<Vec<TailBoundRow>> {
    check_k(k_param)?;
    let edge = k_param.powi(TAIL_RANGE_EXPONENT);
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > edge && t.is_finite())) {
        return Err(domain(format!("upper-tail t = {t} outside (K^5 = {edge}, inf)")));
    }
    let q = averaged_quantile(m);
    Ok(sorted(
        t_grid
            .iter()
            .map(|&t| {
                let threshold = t * q;
                TailBoundRow::new(t, Side::Upper, threshold, kmin_sf(m, threshold), upper_tail_bound(t, k_param))
            })
            .collect(),
    ))
}

/// Tail rows for one side together with the regularity preconditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    #[serde(rename = "K")]
    pub k_param: f64,
    pub side: Side,
    pub q: f64,
    pub precondition: Verdict,
    pub rows: Vec<TailBoundRow>,
}

impl TailReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.verdict.is_pass()).count()
    }
}

/// Rows on the default grid for `side`, after checking every component.
pub fn tail_report(m: &OrderStatModel, k_param: f64, side: Side, grid: &GridSpec) -> Result<TailReport> {
    check_k(k_param)?;
    let certs = component_certificates(m, k_param, grid)?;
    let rows = match side {
        Side::Lower => verify_lower_tail(m, k_param, &default_lower_grid(k_param))?,
        Side::Upper => verify_upper_tail(m, k_param, &default_upper_grid(k_param))?,
    };
    Ok(TailReport {
        k_param,
        side,
        q: averaged_quantile(m),
        precondition: Verdict::from_pass(certs.iter().all(|c| c.certificate.passed())),
        rows,
    })
}
