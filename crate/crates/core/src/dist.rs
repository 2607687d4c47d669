//! Non-negative univariate laws, their uniform mixtures, and the canonical
//! left quantile.
//!
//! Every law is a base [`Family`] multiplied by a positive `scale`, i.e. the
//! law of `scale * xi`. Evaluations are exact closed forms for the parametric
//! families, linear interpolation for tabulated cdfs, and step functions for
//! atomic laws.
//!
//! Quantiles follow the left generalized inverse `inf { t : F(t) >= r }`,
//! resolved to adjacent floating-point numbers so that `cdf(q) >= r` holds
//! exactly and `cdf(prev(q)) < r`. By convention `quantile(0) = 0` and
//! `quantile(1)` may be `+inf` for unbounded support.

use statrs::function::erf::{erf, erf_inv, erfc};

use crate::error::{domain, Error, Result};
use crate::search::{bisect_left, refine_left};

/// Anything with a right-continuous nondecreasing cdf on `[0, inf)`.
pub trait Law {
    /// `P(X <= t)`.
    fn cdf(&self, t: f64) -> f64;

    /// `P(X > t)`, evaluated without cancellation where the family allows.
    fn sf(&self, t: f64) -> f64 {
        1.0 - self.cdf(t)
    }

    /// `P(X < t)`.
    fn cdf_left_limit(&self, t: f64) -> f64;

    /// Left generalized inverse of the cdf.
    fn quantile(&self, r: f64) -> Result<f64>;
}

/// Base families; the variable is `scale * xi` with `xi` drawn from these.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Uniform on `[0, 1]`.
    Uniform01,
    /// `P(xi > t) = t^-p` for `t >= 1`.
    ParetoPower { p: f64 },
    Exponential { rate: f64 },
    /// Law of `|eta|` for a centered Gaussian `eta` with deviation `sigma`.
    HalfGaussian { sigma: f64 },
    /// Continuous law, linear between knots.
    PiecewiseLinearCdf(Knots),
    /// Pure point masses.
    Atomic(Atoms),
}

/// Knots `(t, F(t))` of a piecewise-linear cdf: `t` strictly increasing from
/// some `t_0 >= 0` with `F(t_0) = 0`, `F` nondecreasing, last `F = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Knots {
    points: Vec<(f64, f64)>,
}

impl Knots {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::InvalidDistribution(msg.to_string()));
        if points.len() < 2 {
            return invalid("piecewise-linear cdf needs at least two knots");
        }
        if points
            .iter()
            .any(|&(t, f)| !t.is_finite() || !f.is_finite() || t < 0.0 || !(0.0..=1.0).contains(&f))
        {
            return invalid("knots must be finite with t >= 0 and F in [0, 1]");
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 < w[0].1) {
            return invalid("knot abscissae must increase strictly and F must not decrease");
        }
        if points[0].1 != 0.0 {
            return invalid("first knot must have F = 0");
        }
        if points[points.len() - 1].1 != 1.0 {
            return invalid("last knot must have F = 1");
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn cdf(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 {
            return 0.0;
        }
        if x >= pts[pts.len() - 1].0 {
            return 1.0;
        }
        // First knot strictly to the right of x.
        let j = pts.partition_point(|&(t, _)| t <= x);
        let (t0, f0) = pts[j - 1];
        let (t1, f1) = pts[j];
        f0 + (f1 - f0) * (x - t0) / (t1 - t0)
    }

    fn quantile_guess(&self, r: f64) -> f64 {
        let pts = &self.points;
        let j = pts.partition_point(|&(_, f)| f < r);
        if j == 0 {
            return pts[0].0;
        }
        let (t0, f0) = pts[j - 1];
        let (t1, f1) = pts[j];
        t0 + (t1 - t0) * (r - f0) / (f1 - f0)
    }
}

/// Sorted point masses with cached index-ascending cumulative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Atoms {
    atoms: Vec<(f64, f64)>,
    cumulative: Vec<f64>,
}

impl Atoms {
    /// Atoms `(value, weight)` with strictly increasing values `>= 0`,
    /// positive weights summing to one within `1e-12`.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::InvalidDistribution(msg.to_string()));
        if atoms.is_empty() {
            return invalid("atomic law needs at least one atom");
        }
        if atoms
            .iter()
            .any(|&(v, w)| !v.is_finite() || v < 0.0 || !w.is_finite() || w <= 0.0)
        {
            return invalid("atoms need finite values >= 0 and positive weights");
        }
        if atoms.windows(2).any(|w| w[1].0 <= w[0].0) {
            return invalid("atom values must increase strictly");
        }
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for &(_, w) in &atoms {
            acc += w;
            cumulative.push(acc);
        }
        if (acc - 1.0).abs() > 1e-12 {
            return invalid("atom weights must sum to 1");
        }
        // The last atom carries all remaining mass.
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Self { atoms, cumulative })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Number of atoms with `scale * value <= x` (or `< x` when `strict`).
    fn count_below(&self, scale: f64, x: f64, strict: bool) -> usize {
        if strict {
            self.atoms.partition_point(|&(v, _)| scale * v < x)
        } else {
            self.atoms.partition_point(|&(v, _)| scale * v <= x)
        }
    }

    fn mass_of_first(&self, count: usize) -> f64 {
        if count == 0 {
            0.0
        } else {
            self.cumulative[count - 1]
        }
    }
}

/// A non-negative law: `scale * xi` with `xi ~ family`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    family: Family,
    scale: f64,
}

impl Distribution {
    pub fn new(family: Family, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidDistribution(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        match &family {
            Family::ParetoPower { p } => positive("exponent p", *p)?,
            Family::Exponential { rate } => positive("rate", *rate)?,
            Family::HalfGaussian { sigma } => positive("sigma", *sigma)?,
            Family::Uniform01 | Family::PiecewiseLinearCdf(_) | Family::Atomic(_) => {}
        }
        Ok(Self { family, scale })
    }

    pub fn uniform01() -> Self {
        Self {
            family: Family::Uniform01,
            scale: 1.0,
        }
    }

    pub fn pareto(p: f64) -> Result<Self> {
        Self::new(Family::ParetoPower { p }, 1.0)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate }, 1.0)
    }

    pub fn half_gaussian(sigma: f64) -> Result<Self> {
        Self::new(Family::HalfGaussian { sigma }, 1.0)
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(Family::PiecewiseLinearCdf(Knots::new(knots)?), 1.0)
    }

    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(Family::Atomic(Atoms::new(atoms)?), 1.0)
    }

    /// Point mass at `value`.
    pub fn point_mass(value: f64) -> Result<Self> {
        Self::atomic(vec![(value, 1.0)])
    }

    /// Law of `factor * X`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.family.clone(), self.scale * factor)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Short family name as used in model files.
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Uniform01 => "uniform01",
            Family::ParetoPower { .. } => "pareto",
            Family::Exponential { .. } => "exponential",
            Family::HalfGaussian { .. } => "half_gaussian",
            Family::PiecewiseLinearCdf(_) => "piecewise_linear",
            Family::Atomic(_) => "atomic",
        }
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self.family, Family::Atomic(_))
    }

    /// Points where the cdf jumps or changes slope, in the scaled variable.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::Atomic(a) => a.atoms.iter().map(|&(v, _)| self.scale * v).collect(),
            Family::PiecewiseLinearCdf(k) => {
                k.points.iter().map(|&(t, _)| self.scale * t).collect()
            }
            Family::ParetoPower { .. } => vec![self.scale],
            Family::Uniform01 => vec![self.scale],
            Family::Exponential { .. } | Family::HalfGaussian { .. } => Vec::new(),
        }
    }

    /// cdf and survival of the unscaled variable at `x`.
    fn base_cdf_sf(&self, x: f64) -> (f64, f64) {
        if x < 0.0 || x.is_nan() {
            return (0.0, 1.0);
        }
        match &self.family {
            Family::Uniform01 => {
                let f = x.min(1.0);
                (f, 1.0 - f)
            }
            Family::ParetoPower { p } => {
                if x <= 1.0 {
                    (0.0, 1.0)
                } else {
                    let s = x.powf(-p);
                    (1.0 - s, s)
                }
            }
            Family::Exponential { rate } => {
                let z = rate * x;
                (-(-z).exp_m1(), (-z).exp())
            }
            Family::HalfGaussian { sigma } => {
                let z = x / (sigma * std::f64::consts::SQRT_2);
                (erf(z), erfc(z))
            }
            Family::PiecewiseLinearCdf(k) => {
                let f = k.cdf(x);
                (f, 1.0 - f)
            }
            Family::Atomic(_) => unreachable!("atomic laws are evaluated in scaled units"),
        }
    }

    fn quantile_guess(&self, r: f64) -> f64 {
        let base = match &self.family {
            Family::Uniform01 => r,
            Family::ParetoPower { p } => (-(-r).ln_1p() / p).exp(),
            Family::Exponential { rate } => -(-r).ln_1p() / rate,
            Family::HalfGaussian { sigma } => sigma * std::f64::consts::SQRT_2 * erf_inv(r),
            Family::PiecewiseLinearCdf(k) => k.quantile_guess(r),
            Family::Atomic(_) => unreachable!("atomic quantiles are exact"),
        };
        self.scale * base
    }

    /// Largest `t` with `cdf(t) < 1`, or `+inf` for unbounded support.
    fn support_max(&self) -> f64 {
        match &self.family {
            Family::Uniform01 => self.scale,
            Family::PiecewiseLinearCdf(k) => self.scale * k.points[k.points.len() - 1].0,
            Family::Atomic(a) => self.scale * a.atoms[a.atoms.len() - 1].0,
            Family::ParetoPower { .. } | Family::Exponential { .. } | Family::HalfGaussian { .. } => {
                f64::INFINITY
            }
        }
    }
}

impl Law for Distribution {
    fn cdf(&self, t: f64) -> f64 {
        match &self.family {
            Family::Atomic(a) => a.mass_of_first(a.count_below(self.scale, t, false)),
            _ => self.base_cdf_sf(t / self.scale).0,
        }
    }

    fn sf(&self, t: f64) -> f64 {
        match &self.family {
            Family::Atomic(_) => 1.0 - self.cdf(t),
            _ => self.base_cdf_sf(t / self.scale).1,
        }
    }

    fn cdf_left_limit(&self, t: f64) -> f64 {
        match &self.family {
            Family::Atomic(a) => a.mass_of_first(a.count_below(self.scale, t, true)),
            _ => self.cdf(t),
        }
    }

    fn quantile(&self, r: f64) -> Result<f64> {
        check_level(r)?;
        if r == 0.0 {
            return Ok(0.0);
        }
        if r == 1.0 {
            return Ok(self.support_max());
        }
        match &self.family {
            Family::Atomic(a) => {
                let j = a.cumulative.partition_point(|&c| c < r);
                Ok(self.scale * a.atoms[j.min(a.atoms.len() - 1)].0)
            }
            _ => Ok(refine_left(|t| self.cdf(t), self.quantile_guess(r), r)),
        }
    }
}

/// The averaged law `F = (1/n) * sum F_i` of `n >= 1` components.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureCdf {
    components: Vec<Distribution>,
}

impl MixtureCdf {
    pub fn new(components: Vec<Distribution>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDistribution(
                "mixture needs at least one component".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Distribution] {
        &self.components
    }

    fn mean_of(&self, f: impl Fn(&Distribution) -> f64) -> f64 {
        let sum: f64 = self.components.iter().map(f).sum();
        sum / self.components.len() as f64
    }
}

impl Law for MixtureCdf {
    fn cdf(&self, t: f64) -> f64 {
        self.mean_of(|d| d.cdf(t))
    }

    fn sf(&self, t: f64) -> f64 {
        self.mean_of(|d| d.sf(t))
    }

    fn cdf_left_limit(&self, t: f64) -> f64 {
        self.mean_of(|d| d.cdf_left_limit(t))
    }

    /// Bisection between the extreme component quantiles: the mixture cdf is
    /// below `r` left of every component quantile and at least `r` right of
    /// all of them.
    fn quantile(&self, r: f64) -> Result<f64> {
        check_level(r)?;
        if r == 0.0 {
            return Ok(0.0);
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for d in &self.components {
            let q = d.quantile(r)?;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        if r == 1.0 {
            return Ok(hi);
        }
        let f = |t: f64| self.cdf(t);
        if f(0.0) >= r {
            return Ok(0.0);
        }
        // Rounding in the average can leave cdf(hi) a hair below r.
        let mut step = (hi * f64::EPSILON).max(f64::MIN_POSITIVE);
        while f(hi) < r {
            hi += step;
            step *= 2.0;
        }
        let mut lo = lo.next_down().max(0.0);
        let mut step = (lo * f64::EPSILON).max(f64::MIN_POSITIVE);
        while f(lo) >= r {
            lo = (lo - step).max(0.0);
            step *= 2.0;
        }
        Ok(bisect_left(f, lo, hi, r))
    }
}

fn check_level(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(domain(format!("quantile level must lie in [0, 1], got {r}")))
    }
}
