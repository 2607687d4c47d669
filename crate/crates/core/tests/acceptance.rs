//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ordstat_core::bounds::{
    default_lower_grid, default_upper_grid, lower_tail_bound, upper_tail_bound, verify_lower_tail,
    verify_theorem, verify_upper_tail,
};
use ordstat_core::catalogue::{model_k, regular_families, ModelSampler};
use ordstat_core::mc::simulate_median;
use ordstat_core::ostat::{kmin_cdf, kmin_median, kmin_strict_cdf};
use ordstat_core::pbin::{brute_force_tail, chebyshev_bound_gap, tail_at_least};
use ordstat_core::regularity::{check_condition, check_lemma_growth, condition_points, measure_form_points};
use ordstat_core::{Distribution, GridSpec, OrderStatModel, SuccessVector, TheoremVerdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::binomial_sum_tail;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_models(seed: u64, count: usize) -> Vec<OrderStatModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = ModelSampler::default();
    (0..count).map(|_| sampler.model(&mut rng)).collect()
}

fn ac1() -> Outcome {
    let grid = GridSpec::default();
    let mut worst = f64::INFINITY;
    for e in regular_families() {
        let c = check_condition(&e.law, e.k_param, &grid).map_err(|x| x.to_string())?;
        ensure(c.passed(), || format!("{} fails at K={}: {:?}", e.name, e.k_param, c.witness))?;
        worst = worst.min(c.margin.unwrap_or(f64::INFINITY));
    }
    Ok(format!("7 families pass, smallest margin {worst:.3e}"))
}

fn ac2() -> Outcome {
    let grid = GridSpec::default();
    let mut points = 0;
    for e in regular_families() {
        for k in [1.5, 2.0, 3.0] {
            let a = condition_points(&e.law, k, &grid).map_err(|x| x.to_string())?;
            let b = measure_form_points(&e.law, k, &grid).map_err(|x| x.to_string())?;
            ensure(a.len() == b.len(), || format!("{} K={k}: grid mismatch", e.name))?;
            for (x, y) in a.iter().zip(&b) {
                ensure(x.verdict == y.verdict, || format!("{} K={k} t={}: verdicts differ", e.name, x.t))?;
            }
            points += a.len();
        }
    }
    Ok(format!("{points} point verdicts identical"))
}

fn ac3() -> Outcome {
    let grid = GridSpec::default();
    let mut cases = 0;
    for e in regular_families() {
        for ell in [1u32, 3, 5, 8] {
            for gamma in [2f64.powf(-(ell as f64) / 2.0), 0.25, 0.9] {
                let r = check_lemma_growth(&e.law, e.k_param, ell, gamma, &grid).map_err(|x| x.to_string())?;
                ensure(r.verdict.is_pass(), || {
                    format!("{} l={ell} gamma={gamma}: {:?} {:?}", e.name, r.odds.witness, r.survival.witness)
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (law, l, gamma) cases hold"))
}

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=50);
        let sv = SuccessVector::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap();
        for t in [0.5, 1.0, 2.0, 5.0] {
            let g = chebyshev_bound_gap(&sv, t).map_err(|x| x.to_string())?;
            ensure(g.holds(), || format!("exact {} > bound {} at t={t}", g.exact, g.bound))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} cases hold"))
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(1..=15);
        let sv = SuccessVector::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap();
        for k in 0..=n + 1 {
            let d = tail_at_least(&sv, k).unwrap() - brute_force_tail(&sv, k).unwrap();
            worst = worst.max(d.abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max discrepancy {worst:e}"))?;
    Ok(format!("max discrepancy {worst:.3e}"))
}

fn ac6() -> Outcome {
    let m = OrderStatModel::iid(Distribution::uniform01(), 3, 2).unwrap();
    let med = kmin_median(&m).map_err(|x| x.to_string())?;
    ensure((med - 0.5).abs() <= 1e-10, || format!("uniform median {med}"))?;
    let m = OrderStatModel::new(
        vec![Distribution::exponential(1.0).unwrap(), Distribution::exponential(2.0).unwrap()],
        1,
    )
    .unwrap();
    let med = kmin_median(&m).map_err(|x| x.to_string())?;
    ensure((med - 2f64.ln() / 3.0).abs() <= 1e-9, || format!("exponential median {med}"))?;
    let mut worst: f64 = 0.0;
    for n in 1..=50 {
        for k in 1..=n {
            let m = OrderStatModel::iid(Distribution::uniform01(), n, k).unwrap();
            for j in 1..=9 {
                let t = j as f64 / 10.0;
                worst = worst.max((kmin_cdf(&m, t) - binomial_sum_tail(n, k, t)).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("beta reduction discrepancy {worst:e}"))?;
    Ok(format!("medians exact, beta reduction max discrepancy {worst:.3e}"))
}

fn ac7() -> Outcome {
    let grid = GridSpec::default();
    let mut worst_ratio = (f64::INFINITY, 0.0f64);
    for (i, m) in random_models(7, 200).iter().enumerate() {
        let k = model_k(m).ok_or("model without catalogue K")?;
        let r = verify_theorem(m, k, &grid).map_err(|x| x.to_string())?;
        ensure(r.verdict == TheoremVerdict::Pass && r.convention_free.is_pass(), || {
            format!("model {i}: verdict {:?}, ratio {}", r.verdict, r.ratio)
        })?;
        let below = kmin_strict_cdf(m, r.lower * r.q);
        let above = kmin_cdf(m, r.upper * r.q);
        ensure(below < 0.5 && 0.5 < above, || format!("model {i}: {below} / {above}"))?;
        worst_ratio = (worst_ratio.0.min(r.ratio), worst_ratio.1.max(r.ratio));
    }
    Ok(format!(
        "200 models, med/q in [{:.4e}, {:.4e}]",
        worst_ratio.0, worst_ratio.1
    ))
}

fn ac8() -> Outcome {
    let mut rows = 0;
    for (i, m) in random_models(7, 200).iter().enumerate() {
        let k = model_k(m).ok_or("model without catalogue K")?;
        let lower = verify_lower_tail(m, k, &default_lower_grid(k)).map_err(|x| x.to_string())?;
        let upper = verify_upper_tail(m, k, &default_upper_grid(k)).map_err(|x| x.to_string())?;
        for row in lower.iter().chain(&upper) {
            ensure(row.verdict.is_pass(), || format!("model {i}: {row:?}"))?;
        }
        rows += lower.len() + upper.len();
    }
    for k in [1.2f64, 2.0, 3.0, 4.0] {
        let lo = lower_tail_bound(k.powi(-10), k);
        let hi = upper_tail_bound(k.powi(13), k);
        ensure((lo - 4.0 * (-2.5f64).exp()).abs() < 1e-12, || format!("K={k}: lower spot {lo}"))?;
        ensure((hi - 4.0 * (-13.0f64 / 6.0).exp()).abs() < 1e-12, || format!("K={k}: upper spot {hi}"))?;
    }
    Ok(format!("{rows} rows, zero violations; spot values 0.3283 and 0.4583"))
}

fn ac9() -> Outcome {
    let sampler = ModelSampler {
        n_max: 20,
        ..ModelSampler::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut covered = 0;
    for i in 0..40 {
        let m = sampler.model(&mut rng);
        let sim = simulate_median(&m, 100_000, i, 0.99, None).map_err(|x| x.to_string())?;
        if sim.covers(kmin_median(&m).map_err(|x| x.to_string())?) {
            covered += 1;
        }
    }
    ensure(covered >= 38, || format!("{covered}/40 intervals cover"))?;
    Ok(format!("{covered}/40 intervals cover"))
}

fn ac10() -> Outcome {
    let grid = GridSpec::default();
    let c = 7.3;
    for (i, m) in random_models(10, 40).iter().enumerate() {
        let k = model_k(m).ok_or("model without catalogue K")?;
        let a = verify_theorem(m, k, &grid).map_err(|x| x.to_string())?;
        let b = verify_theorem(m, k, &grid).map_err(|x| x.to_string())?;
        ensure(a == b, || format!("model {i}: repeated runs differ"))?;
        let s = verify_theorem(&m.scaled(c).unwrap(), k, &grid).map_err(|x| x.to_string())?;
        let rel = |x: f64, y: f64| (x / (c * y) - 1.0).abs();
        ensure(rel(s.med, a.med) <= 1e-9 && rel(s.q, a.q) <= 1e-9, || {
            format!("model {i}: med {} vs {}, q {} vs {}", s.med, a.med, s.q, a.q)
        })?;
        let verdicts = |r: &ordstat_core::TheoremReport| {
            let certs: Vec<bool> = r.certificates.iter().map(|c| c.certificate.passed()).collect();
            (r.verdict, r.sandwich, r.convention_free, certs)
        };
        ensure(verdicts(&s) == verdicts(&a), || format!("model {i}: verdict changed under scaling"))?;
    }
    let m = &random_models(10, 1)[0];
    let a = simulate_median(m, 10_000, 3, 0.99, Some(1)).map_err(|x| x.to_string())?;
    let b = simulate_median(m, 10_000, 3, 0.99, Some(4)).map_err(|x| x.to_string())?;
    ensure(a.same_outcome(&b), || "simulation depends on thread count".into())?;
    Ok("40 models bit-identical on rerun, scaling by 7.3 equivariant".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 regularity catalogue", ac1, Duration::from_secs(1)),
        ("AC2 equivalent forms", ac2, Duration::MAX),
        ("AC3 growth inequalities", ac3, Duration::MAX),
        ("AC4 chebyshev bound", ac4, Duration::from_secs(5)),
        ("AC5 poisson-binomial oracle", ac5, Duration::from_secs(30)),
        ("AC6 closed forms", ac6, Duration::MAX),
        ("AC7 median sandwich", ac7, Duration::from_secs(120)),
        ("AC8 tail bounds", ac8, Duration::MAX),
        ("AC9 monte carlo agreement", ac9, Duration::from_secs(180)),
        ("AC10 determinism and scaling", ac10, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:.0?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
