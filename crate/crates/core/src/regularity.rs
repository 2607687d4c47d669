//! Grid certificates for the odds-doubling regularity condition
//!
//! ```text
//! F(Kt) / (1 - F(Kt)) >= 2 F(t) / (1 - F(t))   for all t > 0
//! ```
//!
//! and the inequalities derived from it. Every check evaluates a
//! division-free form `lhs >= rhs` at each point of a log-spaced grid (plus
//! the law's breakpoints and their float neighbours) and reports the
//! smallest margin `lhs - rhs`. A passing certificate is necessary evidence
//! on the grid, not a proof for every `t > 0`.

use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, Family, Law};
use crate::error::{domain, Error, Result};

/// Absolute slack on cross-multiplied margins.
pub const TOLERANCE: f64 = 1e-12;

const GRID_NOTE: &str = "grid evidence: necessary, not a proof for all t > 0";

/// Log-spaced grid `t_min * 10^(j / points_per_decade)` up to `t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points_per_decade: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            t_min: 1e-6,
            t_max: 1e6,
            points_per_decade: 64,
        }
    }
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, points_per_decade: u32) -> Result<Self> {
        let g = Self {
            t_min,
            t_max,
            points_per_decade,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min < self.t_max && self.t_max.is_finite()) {
            return Err(domain(format!(
                "grid needs 0 < t_min < t_max < inf, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.points_per_decade == 0 {
            return Err(domain("grid is empty: points_per_decade must be positive"));
        }
        Ok(())
    }

    /// The log-spaced points, always ending at `t_max`.
    pub fn points(&self) -> Vec<f64> {
        let ppd = f64::from(self.points_per_decade);
        let start = self.t_min.log10();
        let span = self.t_max.log10() - start;
        let steps = (span * ppd + 1e-9).floor() as usize;
        let mut pts: Vec<f64> = (0..=steps)
            .map(|j| 10f64.powf(start + j as f64 / ppd))
            .collect();
        pts[0] = self.t_min;
        if *pts.last().unwrap() < self.t_max * (1.0 - 1e-12) {
            pts.push(self.t_max);
        } else {
            *pts.last_mut().unwrap() = self.t_max;
        }
        pts
    }

    /// Grid points plus every positive breakpoint of `d` and its float
    /// neighbours, sorted and deduplicated.
    pub fn points_for(&self, d: &Distribution) -> Vec<f64> {
        let mut pts = self.points();
        for b in d.breakpoints() {
            pts.extend([b.next_down(), b, b.next_up()].into_iter().filter(|&x| x > 0.0));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Self::Pass
    }
}

/// Which inequality a certificate speaks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// `F(Kt)(1 - F(t)) >= 2 F(t)(1 - F(Kt))`.
    Condition,
    /// `mu((t, Kt]) >= mu([0, t]) mu((Kt, inf))`.
    MeasureForm,
    /// `F(t) >= 2 F(t / K^2)` where `F(t) <= 1/2`.
    WeakCondition,
    /// `F(t) >= 2^l (1 - F(t)) F(t / K^l)`.
    GrowthOdds,
    /// `1 - F(t / K^l) >= 2^l / (2^l g + 1) (1 - F(t))` where `F(t) >= 1 - g`.
    GrowthSurvival,
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointCheck {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

impl PointCheck {
    fn new(t: f64, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        Self {
            t,
            lhs,
            rhs,
            margin,
            verdict: Verdict::from_pass(margin >= -TOLERANCE),
        }
    }
}

/// Worst violation found on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub inequality: Inequality,
    #[serde(rename = "K")]
    pub k: f64,
    pub grid: GridSpec,
    pub points_checked: usize,
    pub verdict: Verdict,
    /// Present exactly when the verdict is a failure.
    pub witness: Option<Witness>,
    /// Minimum of `lhs - rhs` over applicable points; `None` if no grid point
    /// was applicable.
    pub margin: Option<f64>,
    pub note: String,
}

impl RegularityCertificate {
    pub fn from_points(inequality: Inequality, k: f64, grid: GridSpec, points: &[PointCheck]) -> Self {
        let worst = points
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin));
        let margin = worst.map(|p| p.margin);
        let pass = margin.is_none_or(|m| m >= -TOLERANCE);
        Self {
            inequality,
            k,
            grid,
            points_checked: points.len(),
            verdict: Verdict::from_pass(pass),
            witness: worst.filter(|_| !pass).map(|p| Witness {
                t: p.t,
                lhs: p.lhs,
                rhs: p.rhs,
            }),
            margin,
            note: GRID_NOTE.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 1.0 {
        Ok(())
    } else {
        Err(domain(format!("K must exceed 1, got {k}")))
    }
}

fn prepare(d: &Distribution, k: f64, grid: &GridSpec) -> Result<Vec<f64>> {
    check_k(k)?;
    grid.validate()?;
    Ok(grid.points_for(d))
}

/// Pointwise evaluation of the odds-doubling condition.
pub fn condition_points(d: &Distribution, k: f64, grid: &GridSpec) -> Result<Vec<PointCheck>> {
    Ok(prepare(d, k, grid)?
        .into_iter()
        .map(|t| {
            let lhs = d.cdf(k * t) * d.sf(t);
            let rhs = 2.0 * d.cdf(t) * d.sf(k * t);
            PointCheck::new(t, lhs, rhs)
        })
        .collect())
}

pub fn check_condition(d: &Distribution, k: f64, grid: &GridSpec) -> Result<RegularityCertificate> {
    let pts = condition_points(d, k, grid)?;
    Ok(RegularityCertificate::from_points(Inequality::Condition, k, *grid, &pts))
}

/// Pointwise evaluation of the measure form `F(Kt) - F(t) >= F(t)(1 - F(Kt))`.
pub fn measure_form_points(d: &Distribution, k: f64, grid: &GridSpec) -> Result<Vec<PointCheck>> {
    Ok(prepare(d, k, grid)?
        .into_iter()
        .map(|t| {
            let f = d.cdf(t);
            // Mass of (t, Kt], taken from whichever side avoids cancellation.
            let between = if f > 0.5 {
                d.sf(t) - d.sf(k * t)
            } else {
                d.cdf(k * t) - f
            };
            PointCheck::new(t, between, f * d.sf(k * t))
        })
        .collect())
}

pub fn check_measure_form(d: &Distribution, k: f64, grid: &GridSpec) -> Result<RegularityCertificate> {
    let pts = measure_form_points(d, k, grid)?;
    Ok(RegularityCertificate::from_points(Inequality::MeasureForm, k, *grid, &pts))
}

/// `F(t) >= 2 F(t / K^2)` at grid points with `F(t) <= 1/2`.
pub fn weak_condition_points(d: &Distribution, k: f64, grid: &GridSpec) -> Result<Vec<PointCheck>> {
    let shrink = k * k;
    Ok(prepare(d, k, grid)?
        .into_iter()
        .filter_map(|t| {
            let f = d.cdf(t);
            (f <= 0.5).then(|| PointCheck::new(t, f, 2.0 * d.cdf(t / shrink)))
        })
        .collect())
}

pub fn check_weak_condition(d: &Distribution, k: f64, grid: &GridSpec) -> Result<RegularityCertificate> {
    let pts = weak_condition_points(d, k, grid)?;
    Ok(RegularityCertificate::from_points(Inequality::WeakCondition, k, *grid, &pts))
}

/// Outcome of the two growth inequalities for one `(l, gamma)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub ell: u32,
    pub gamma: f64,
    pub odds: RegularityCertificate,
    pub survival: RegularityCertificate,
    pub verdict: Verdict,
}

/// Checks `F(t) >= 2^l (1 - F(t)) F(t / K^l)` everywhere on the grid and
/// `1 - F(t / K^l) >= 2^l / (2^l gamma + 1) (1 - F(t))` where `F(t) >= 1 - gamma`.
///
/// Both follow from the regularity condition, so `d` must first pass
/// [`check_condition`] at `k`; otherwise the call is rejected with that
/// certificate.
pub fn check_lemma_growth(
    d: &Distribution,
    k: f64,
    ell: u32,
    gamma: f64,
    grid: &GridSpec,
) -> Result<GrowthReport> {
    if ell == 0 || ell > 1000 {
        return Err(domain(format!("l must lie in 1..=1000, got {ell}")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    let pre = check_condition(d, k, grid)?;
    if !pre.passed() {
        return Err(Error::RegularityPrecondition(Box::new(pre)));
    }

    let pts = grid.points_for(d);
    let doubling = 2f64.powi(ell as i32);
    let shrink = k.powi(ell as i32);
    let odds: Vec<PointCheck> = pts
        .iter()
        .map(|&t| {
            let f = d.cdf(t);
            PointCheck::new(t, f, doubling * d.sf(t) * d.cdf(t / shrink))
        })
        .collect();
    let factor = doubling / (doubling * gamma + 1.0);
    let survival: Vec<PointCheck> = pts
        .iter()
        .filter(|&&t| d.cdf(t) >= 1.0 - gamma)
        .map(|&t| PointCheck::new(t, d.sf(t / shrink), factor * d.sf(t)))
        .collect();

    let odds = RegularityCertificate::from_points(Inequality::GrowthOdds, k, *grid, &odds);
    let survival = RegularityCertificate::from_points(Inequality::GrowthSurvival, k, *grid, &survival);
    let verdict = Verdict::from_pass(odds.passed() && survival.passed());
    Ok(GrowthReport {
        ell,
        gamma,
        odds,
        survival,
        verdict,
    })
}

/// Result of the smallest-K search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinK {
    #[serde(rename = "K")]
    pub k: f64,
    /// The bisection treats "passes at K" as monotone in K.
    pub monotonicity_assumed: bool,
    pub certificate: RegularityCertificate,
}

/// Smallest `K` in `[lo, hi]` (to `tol`) for which [`check_condition`] passes.
pub fn find_min_k(
    d: &Distribution,
    grid: &GridSpec,
    (lo, hi): (f64, f64),
    tol: f64,
) -> Result<MinK> {
    if !(lo > 1.0 && lo < hi && hi.is_finite()) {
        return Err(domain(format!("K range must satisfy 1 < lo < hi, got ({lo}, {hi})")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let top = check_condition(d, hi, grid)?;
    if !top.passed() {
        return Err(Error::NotFoundInRange { lo, hi });
    }
    let bottom = check_condition(d, lo, grid)?;
    if bottom.passed() {
        return Ok(MinK {
            k: lo,
            monotonicity_assumed: true,
            certificate: bottom,
        });
    }
    let (mut fail, mut pass, mut cert) = (lo, hi, top);
    while pass - fail > tol {
        let mid = fail + (pass - fail) / 2.0;
        let c = check_condition(d, mid, grid)?;
        if c.passed() {
            pass = mid;
            cert = c;
        } else {
            fail = mid;
        }
    }
    Ok(MinK {
        k: pass,
        monotonicity_assumed: true,
        certificate: cert,
    })
}

/// Condition check at `K = 3` for the absolute values of log-concave laws
/// shipped as builtin families.
pub fn check_logconcave_k3(d: &Distribution, grid: &GridSpec) -> Result<RegularityCertificate> {
    match d.family() {
        Family::Exponential { .. } | Family::HalfGaussian { .. } | Family::Uniform01 => {
            check_condition(d, 3.0, grid)
        }
        _ => Err(domain(format!(
            "{} is not a builtin log-concave family",
            d.family_name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    #[test]
    fn default_grid_shape() {
        let pts = grid().points();
        assert_eq!(pts.len(), 12 * 64 + 1);
        assert_eq!(pts[0], 1e-6);
        assert_eq!(*pts.last().unwrap(), 1e6);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts.contains(&0.1));
    }

    #[test]
    fn grid_includes_atom_neighbours() {
        let d = Distribution::atomic(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
        let pts = grid().points_for(&d);
        for x in [1f64.next_down(), 1.0, 1f64.next_up(), 2f64.next_down(), 2.0, 2f64.next_up()] {
            assert!(pts.contains(&x));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let u = Distribution::uniform01();
        assert!(check_condition(&u, 1.0, &grid()).is_err());
        assert!(check_condition(&u, 0.5, &grid()).is_err());
        assert!(GridSpec::new(1.0, 1.0, 8).is_err());
        assert!(GridSpec::new(0.0, 1.0, 8).is_err());
        assert!(GridSpec::new(1.0, 10.0, 0).is_err());
    }

    #[test]
    fn uniform_and_pareto_pass() {
        assert!(check_condition(&Distribution::uniform01(), 2.0, &grid()).unwrap().passed());
        assert!(check_condition(&Distribution::pareto(1.0).unwrap(), 2.0, &grid()).unwrap().passed());
    }

    #[test]
    fn uniform_fails_below_two() {
        // Odds form at t = 0.1: 0.15/0.85 < 2 * 0.1/0.9.
        let g = GridSpec::new(0.05, 0.1, 1).unwrap();
        let cert = check_condition(&Distribution::uniform01(), 1.5, &g).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        let w = cert.witness.unwrap();
        assert_eq!(w.t, 0.1);
        assert!(w.lhs < w.rhs);
        let m = check_measure_form(&Distribution::uniform01(), 1.5, &g).unwrap();
        assert_eq!(m.witness.unwrap().t, 0.1);
    }

    #[test]
    fn certificate_invariants() {
        let pass = check_condition(&Distribution::uniform01(), 2.0, &grid()).unwrap();
        assert!(pass.witness.is_none() && pass.margin.unwrap() >= -TOLERANCE);
        let fail = check_condition(&Distribution::uniform01(), 1.5, &grid()).unwrap();
        assert!(fail.witness.is_some() && fail.margin.unwrap() < -TOLERANCE);
    }

    #[test]
    fn measure_form_examples() {
        let u = Distribution::uniform01();
        let a = condition_points(&u, 2.0, &grid()).unwrap();
        let b = measure_form_points(&u, 2.0, &grid()).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.verdict == y.verdict));
        assert!(check_measure_form(&u, 2.0, &grid()).unwrap().passed());
        let e = Distribution::exponential(1.0).unwrap();
        assert!(check_measure_form(&e, 3.0, &grid()).unwrap().passed());
    }

    #[test]
    fn weak_condition_examples() {
        assert!(check_weak_condition(&Distribution::uniform01(), 2.0, &grid()).unwrap().passed());
        let e = Distribution::exponential(1.0).unwrap();
        assert!(check_weak_condition(&e, 3.0, &grid()).unwrap().passed());
        let point = Distribution::point_mass(1.0).unwrap();
        assert!(check_weak_condition(&point, 2.0, &grid()).unwrap().passed());
    }

    #[test]
    fn weak_condition_skips_upper_half() {
        let pts = weak_condition_points(&Distribution::uniform01(), 2.0, &grid()).unwrap();
        assert!(pts.iter().all(|p| p.t <= 0.5));
    }

    #[test]
    fn growth_examples() {
        let u = Distribution::uniform01();
        assert!(check_lemma_growth(&u, 2.0, 1, 0.5, &grid()).unwrap().verdict.is_pass());
        let e = Distribution::exponential(1.0).unwrap();
        let gamma = 2f64.powf(-2.5);
        assert!(check_lemma_growth(&e, 3.0, 5, gamma, &grid()).unwrap().verdict.is_pass());
        let p = Distribution::pareto(1.0).unwrap();
        let r = check_lemma_growth(&p, 2.0, 3, 0.25, &grid()).unwrap();
        assert!(r.verdict.is_pass());
        assert!(r.survival.points_checked > 0);
    }

    #[test]
    fn growth_rejects_irregular_law() {
        let err = check_lemma_growth(&Distribution::uniform01(), 1.5, 1, 0.5, &grid()).unwrap_err();
        match err {
            Error::RegularityPrecondition(cert) => assert_eq!(cert.verdict, Verdict::Fail),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(check_lemma_growth(&Distribution::uniform01(), 2.0, 0, 0.5, &grid()).is_err());
        assert!(check_lemma_growth(&Distribution::uniform01(), 2.0, 1, 1.0, &grid()).is_err());
    }

    #[test]
    fn logconcave_k3() {
        for d in [
            Distribution::exponential(1.0).unwrap(),
            Distribution::half_gaussian(1.0).unwrap(),
            Distribution::uniform01(),
        ] {
            assert!(check_logconcave_k3(&d, &grid()).unwrap().passed());
        }
        assert!(check_logconcave_k3(&Distribution::pareto(1.0).unwrap(), &grid()).is_err());
    }

    #[test]
    fn min_k_not_found() {
        let u = Distribution::uniform01();
        assert!(matches!(
            find_min_k(&u, &grid(), (1.01, 1.5), 1e-3),
            Err(Error::NotFoundInRange { .. })
        ));
        assert!(find_min_k(&u, &grid(), (0.5, 1.5), 1e-3).is_err());
    }
}
