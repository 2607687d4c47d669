//! `ordstat`: exact order-statistic laws and inequality certificates from the
//! command line.
//!
//! Exit codes: 0 when every verdict passes, 1 when some verdict fails, 2 for
//! usage and input errors.

mod render;
mod spec;

use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordstat_core::bounds::{tail_report, verify_theorem};
use ordstat_core::catalogue::model_k;
use ordstat_core::mc::simulate_median;
use ordstat_core::ostat::{kmin_cdf, kmin_median, kmin_quantile};
use ordstat_core::pbin::{brute_force_tail, tail_at_least};
use ordstat_core::regularity::{
    check_condition, check_measure_form, check_weak_condition, condition_points, find_min_k,
    measure_form_points, weak_condition_points,
};
use ordstat_core::{Distribution, GridSpec, OrderStatModel, Side, SuccessVector, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use render::{render, ConditionReport, Format, OracleReport, QuantileReport, Render, SimulationReport};
use spec::ModelSpec;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ordstat_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use ordstat_core::Error as E;
        match self {
            CliError::Core(E::NotFoundInRange { .. } | E::RegularityPrecondition(_) | E::Precondition(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ordstat", version, about = "Exact order-statistic laws and inequality certificates")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output serialization.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel operations; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Regularity grid as `tmin:tmax:points_per_decade`.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<GridSpec>,
}

#[derive(Debug, Args)]
struct LawArgs {
    /// One of uniform01, pareto, exponential, half_gaussian, piecewise_linear, atomic.
    #[arg(long)]
    family: String,
    /// Family parameters as a JSON object, e.g. '{"p": 2}'.
    #[arg(long, default_value = "{}")]
    params: String,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

impl LawArgs {
    fn law(&self) -> Result<Distribution, CliError> {
        let params: Map<String, Value> = serde_json::from_str(&self.params)
            .map_err(|e| CliError::Usage(format!("--params must be a JSON object: {e}")))?;
        spec::law(&self.family, &params, self.scale)
    }
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Model spec file (JSON).
    #[arg(long)]
    model: PathBuf,
}

impl ModelArgs {
    fn load(&self) -> Result<OrderStatModel, CliError> {
        let text = std::fs::read_to_string(&self.model).map_err(|source| CliError::Io {
            path: self.model.clone(),
            source,
        })?;
        ModelSpec::from_json(&text)?.model()
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    /// Odds doubling: F(Kt)/(1-F(Kt)) >= 2 F(t)/(1-F(t)).
    Condition,
    /// Mass form: mu((t, Kt]) >= mu([0, t]) mu((Kt, inf)).
    Measure,
    /// F(t) >= 2 F(t/K^2) where F(t) <= 1/2.
    Weak,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify the regularity condition for one law on the grid.
    CheckCondition {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long = "K")]
        k_param: f64,
        #[arg(long, value_enum, default_value_t = Form::Condition)]
        form: Form,
    },
    /// Smallest K in a range at which the condition holds.
    MinK {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, default_value_t = 1.01)]
        lo: f64,
        #[arg(long, default_value_t = 64.0)]
        hi: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Left median of the k-th smallest value.
    Median {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Left quantile of the k-th smallest value.
    Quantile {
        #[command(flatten)]
        model: ModelArgs,
        /// Level in (0, 1).
        #[arg(long)]
        level: f64,
    },
    /// Compare the median with the averaged-law quantile window.
    VerifyTheorem {
        #[command(flatten)]
        model: ModelArgs,
        /// Defaults to the largest catalogue K among the components.
        #[arg(long = "K")]
        k_param: Option<f64>,
    },
    /// Exact tail probabilities against their bounds.
    TailBounds {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "K")]
        k_param: Option<f64>,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Test hook: judge rows against `factor * bound`.
        #[arg(long, hide = true)]
        unsafe_override_bound: Option<f64>,
    },
    /// Monte Carlo median with a distribution-free interval.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100_000)]
        replicates: usize,
        #[arg(long, default_value_t = 0.99)]
        ci_level: f64,
    },
    /// Cross-check the exact engine against brute force and closed forms.
    Oracle {
        #[arg(long, default_value_t = 500)]
        vectors: usize,
        /// Largest n for enumeration (at most 20).
        #[arg(long, default_value_t = 15)]
        max_n: usize,
        /// Largest n for the i.i.d. uniform reduction.
        #[arg(long, default_value_t = 50)]
        beta_max_n: usize,
    },
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, ppd] = parts.as_slice() else {
        return Err("expected tmin:tmax:points_per_decade".into());
    };
    let lo: f64 = lo.parse().map_err(|e| format!("tmin: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("tmax: {e}"))?;
    let ppd: u32 = ppd.parse().map_err(|e| format!("points_per_decade: {e}"))?;
    GridSpec::new(lo, hi, ppd).map_err(|e| e.to_string())
}

fn resolve_k(given: Option<f64>, m: &OrderStatModel) -> Result<f64, CliError> {
    given.or_else(|| model_k(m)).ok_or_else(|| {
        CliError::Usage("model has components without a catalogue K; pass --K".into())
    })
}

/// `sum_{j >= k} C(n, j) t^j (1 - t)^(n - j)`, the Beta(k, n - k + 1) cdf.
fn binomial_sum_tail(n: usize, k: usize, t: f64) -> f64 {
    (k..=n)
        .map(|j| {
            let c = (0..j).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64);
            c * t.powi(j as i32) * (1.0 - t).powi((n - j) as i32)
        })
        .sum()
}

fn oracle(seed: u64, vectors: usize, max_n: usize, beta_max_n: usize) -> Result<OracleReport, CliError> {
    if max_n == 0 || beta_max_n == 0 {
        return Err(CliError::Usage("oracle sizes must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pbin: f64 = 0.0;
    for _ in 0..vectors {
        let n = rng.random_range(1..=max_n);
        let sv = SuccessVector::new((0..n).map(|_| rng.random::<f64>()).collect())?;
        for k in 0..=n + 1 {
            pbin = pbin.max((tail_at_least(&sv, k)? - brute_force_tail(&sv, k)?).abs());
        }
    }
    let mut beta: f64 = 0.0;
    for n in 1..=beta_max_n {
        for k in 1..=n {
            let m = OrderStatModel::iid(Distribution::uniform01(), n, k)?;
            for j in 1..=9 {
                let t = f64::from(j) / 10.0;
                beta = beta.max((kmin_cdf(&m, t) - binomial_sum_tail(n, k, t)).abs());
            }
        }
    }
    let (pbin_tolerance, beta_tolerance) = (1e-12, 1e-10);
    Ok(OracleReport {
        seed,
        pbin_vectors: vectors,
        pbin_max_n: max_n,
        pbin_max_discrepancy: pbin,
        pbin_tolerance,
        beta_max_n,
        beta_max_discrepancy: beta,
        beta_tolerance,
        verdict: Verdict::from_pass(pbin <= pbin_tolerance && beta <= beta_tolerance),
    })
}

fn emit<R: Render>(report: &R, common: &Common) -> Result<bool, CliError> {
    let text = render(report, common.format);
    match &common.out {
        Some(path) => write_file(path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    return Err(CliError::Io {
                        path: "<stdout>".into(),
                        source: e,
                    })
                }
                _ => {}
            }
        }
    }
    if !report.passed() {
        eprintln!("ordstat: {}", report.failure());
    }
    Ok(report.passed())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let common = &cli.common;
    let grid = common.grid.unwrap_or_default();
    match cli.command {
        Command::CheckCondition { law, k_param, form } => {
            let d = law.law()?;
            let (certificate, points) = match form {
                Form::Condition => (check_condition(&d, k_param, &grid)?, condition_points(&d, k_param, &grid)?),
                Form::Measure => (check_measure_form(&d, k_param, &grid)?, measure_form_points(&d, k_param, &grid)?),
                Form::Weak => (check_weak_condition(&d, k_param, &grid)?, weak_condition_points(&d, k_param, &grid)?),
            };
            let report = ConditionReport {
                family: d.family_name().into(),
                scale: d.scale(),
                certificate,
                points,
            };
            emit(&report, common)
        }
        Command::MinK { law, lo, hi, tol } => emit(&find_min_k(&law.law()?, &grid, (lo, hi), tol)?, common),
        Command::Median { model } => {
            let m = model.load()?;
            let median = kmin_median(&m)?;
            let report = QuantileReport {
                n: m.n(),
                k: m.k(),
                level: 0.5,
                quantile: median,
                cdf: kmin_cdf(&m, median),
            };
            emit(&report, common)
        }
        Command::Quantile { model, level } => {
            let m = model.load()?;
            let quantile = kmin_quantile(&m, level)?;
            let report = QuantileReport {
                n: m.n(),
                k: m.k(),
                level,
                quantile,
                cdf: kmin_cdf(&m, quantile),
            };
            emit(&report, common)
        }
        Command::VerifyTheorem { model, k_param } => {
            let m = model.load()?;
            let k_param = resolve_k(k_param, &m)?;
            emit(&verify_theorem(&m, k_param, &grid)?, common)
        }
        Command::TailBounds {
            model,
            k_param,
            side,
            unsafe_override_bound,
        } => {
            let m = model.load()?;
            let k_param = resolve_k(k_param, &m)?;
            let side = match side {
                SideArg::Lower => Side::Lower,
                SideArg::Upper => Side::Upper,
            };
            let mut report = tail_report(&m, k_param, side, &grid)?;
            if let Some(factor) = unsafe_override_bound {
                eprintln!("ordstat: warning: bounds scaled by {factor} for testing");
                report.rows = report.rows.iter().map(|r| r.with_bound_scaled(factor)).collect();
            }
            emit(&report, common)
        }
        Command::Simulate {
            model,
            replicates,
            ci_level,
        } => {
            let m = model.load()?;
            let simulation = simulate_median(&m, replicates, common.seed, ci_level, common.threads)?;
            let exact_median = kmin_median(&m)?;
            let report = SimulationReport {
                exact_median,
                covered: simulation.covers(exact_median),
                simulation,
            };
            emit(&report, common)
        }
        Command::Oracle {
            vectors,
            max_n,
            beta_max_n,
        } => emit(&oracle(common.seed, vectors, max_n, beta_max_n)?, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ordstat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
