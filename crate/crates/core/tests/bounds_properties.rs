use ordstat_core::bounds::{
    default_lower_grid, default_upper_grid, lower_tail_bound, upper_tail_bound, verify_lower_tail,
    verify_theorem, verify_upper_tail,
};
use ordstat_core::catalogue::{model_k, ModelSampler, ParetoExponents};
use ordstat_core::ostat::{kmin_cdf, kmin_strict_cdf};
use ordstat_core::{GridSpec, OrderStatModel, TheoremVerdict, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fully heterogeneous models: every component drawn independently.
fn heterogeneous(seed: u64, n_max: usize) -> Vec<OrderStatModel> {
    let sampler = ModelSampler {
        n_max,
        max_distinct: n_max,
        pareto: ParetoExponents::Continuous,
        ..ModelSampler::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..12).map(|_| sampler.model(&mut rng)).collect()
}

#[test]
fn sandwich_and_one_sided_forms_hold() {
    // Coarser grid keeps per-component certificates cheap for n up to 500.
    let grid = GridSpec::new(1e-6, 1e6, 8).unwrap();
    for (i, m) in heterogeneous(31, 500).into_iter().enumerate() {
        let k = model_k(&m).unwrap();
        let r = verify_theorem(&m, k, &grid).unwrap();
        assert_eq!(r.verdict, TheoremVerdict::Pass, "model {i}: {r:?}");
        assert_eq!(r.convention_free, Verdict::Pass);
        assert!(kmin_strict_cdf(&m, r.lower * r.q) < 0.5);
        assert!(kmin_cdf(&m, r.upper * r.q) > 0.5);
    }
}

#[test]
fn tail_bounds_hold() {
    for m in heterogeneous(32, 200) {
        let k = model_k(&m).unwrap();
        for row in verify_lower_tail(&m, k, &default_lower_grid(k)).unwrap() {
            assert!(row.verdict.is_pass(), "{row:?}");
        }
        for row in verify_upper_tail(&m, k, &default_upper_grid(k)).unwrap() {
            assert!(row.verdict.is_pass(), "{row:?}");
        }
    }
}

#[test]
fn bound_shapes() {
    for k in [1.1_f64, 2.0, 3.0, 4.0] {
        let lower: Vec<f64> = (0..200)
            .map(|j| lower_tail_bound(k.powf(-5.0 - 0.1 * j as f64), k))
            .collect();
        assert!(lower.windows(2).all(|w| w[1] < w[0]), "lower bound must increase with t");
        let upper: Vec<f64> = (0..200)
            .map(|j| upper_tail_bound(k.powf(5.0 + 0.1 * j as f64), k))
            .collect();
        assert!(upper.windows(2).all(|w| w[1] < w[0]), "upper bound must decrease with t");
        // Natural log: at t = K^-5 the lower bound is 4 e^(-5/4) for every K.
        assert!((lower[0] - 4.0 * (-1.25f64).exp()).abs() < 1e-13);
    }
}

#[test]
fn pipeline_scale_equivariance() {
    let grid = GridSpec::new(1e-6, 1e6, 16).unwrap();
    for m in heterogeneous(33, 60) {
        let k = model_k(&m).unwrap();
        let base = verify_theorem(&m, k, &grid).unwrap();
        for c in [0.05, 7.3, 300.0] {
            let r = verify_theorem(&m.scaled(c).unwrap(), k, &grid).unwrap();
            assert!((r.med / (c * base.med) - 1.0).abs() <= 1e-9);
            assert!((r.q / (c * base.q) - 1.0).abs() <= 1e-9);
            assert!((r.ratio / base.ratio - 1.0).abs() <= 1e-9);
            assert_eq!(r.verdict, base.verdict);
            assert_eq!(r.convention_free, base.convention_free);
        }
    }
}
