//! Exact distributions, medians and quantiles of the k-th smallest of
//! independent, non-identically distributed non-negative random variables,
//! with grid certificates for the regularity condition
//! `F(Kt) / (1 - F(Kt)) >= 2 F(t) / (1 - F(t))` and the median sandwich
//! `K^-10 q_F((k - 1/2)/n) <= Med(k-min) <= K^13 q_F((k - 1/2)/n)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`dist`]: laws, mixtures, and left quantiles.
//! * [`pbin`]: Poisson-binomial tails, the bridge from order statistics to
//!   counting.
//! * [`ostat`]: exact cdf, median and quantiles of `k-min`.
//! * [`regularity`]: grid certificates for the regularity condition and the
//!   inequalities that follow from it.
//! * [`bounds`]: the median sandwich and the two tail bounds.
//! * [`mc`]: seeded Monte Carlo cross-checks.

pub mod bounds;
pub mod catalogue;
pub mod dist;
pub mod error;
pub mod mc;
pub mod ostat;
pub mod pbin;
pub mod regularity;
mod search;

pub use bounds::{Side, TailBoundRow, TailReport, TheoremReport, TheoremVerdict};
pub use dist::{Distribution, Family, Law, MixtureCdf};
pub use error::{Error, Result};
pub use mc::SimResult;
pub use ostat::OrderStatModel;
pub use pbin::SuccessVector;
pub use regularity::{GridSpec, RegularityCertificate, Verdict};
