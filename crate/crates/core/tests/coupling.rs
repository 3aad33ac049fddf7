use proptest::prelude::*;

use loosecycle::coupling::*;
use loosecycle::Seed;

#[test]
fn embedding_and_pick_counts_on_many_runs() {
    let mut successes = 0;
    let mut counts = Vec::new();
    for (n, r, eps, rho, d, eps_prime) in [
        (6, 3, 0.5, 1, None, 0.1),
        (5, 3, 1.0, 1, Some(1), 0.1),
        (6, 3, 0.5, 2, None, 0.1),
        (9, 3, 1.0, 3, Some(1), 0.0),
        (12, 3, 0.9, 4, None, 0.1),
    ] {
        let before = successes;
        for s in 0..100 {
            let mut cfg = CouplingConfig::new(n, r, eps, rho);
            cfg.d_star = d;
            cfg.eps_prime = eps_prime;
            let tr = run_coupling(&cfg, Seed::new(s)).unwrap();
            check_embedding(&tr).unwrap();
            assert_eq!(tr.layers.len(), rho);
            assert_eq!(tr.sources.len(), rho);
            for (k, src) in tr.layers.iter().zip(&tr.sources) {
                assert_eq!(k.m(), src.len());
                assert_eq!(k.m(), n * cfg.d_star());
            }
            successes += tr.success() as usize;
        }
        counts.push(successes - before);
    }
    println!("successful runs per configuration: {counts:?}");
    assert!(successes > 0);
}

#[test]
fn transcripts_are_reproducible() {
    let cfg = CouplingConfig::new(9, 3, 1.0, 3);
    let a = run_coupling(&cfg, Seed::new(4)).unwrap();
    let b = run_coupling(&cfg, Seed::new(4)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn split_identities_in_both_precisions() {
    for (n, r, eps, rho) in [
        (10usize, 3usize, 0.5, 3usize),
        (50, 3, 0.2, 4),
        (30, 5, 1.0, 12),
        (200, 4, 0.05, 6),
    ] {
        let p64 = SplitProbabilities::<f64>::new(n, r, eps, rho).unwrap();
        let id = p64.identities();
        for v in [id.layers, id.type3, id.type1, id.slack] {
            assert!(v.abs() < 1e-14, "{n} {r} {id:?}");
        }
        let p32 = SplitProbabilities::<f32>::new(n, r, eps as f32, rho).unwrap();
        let id = p32.identities();
        for v in [id.layers, id.type3, id.type1, id.slack] {
            assert!(v.abs() < 1e-5, "{n} {r} {id:?}");
        }
        assert!(((p32.p2 as f64) - p64.p2).abs() < 1e-6 * p64.p2.max(1e-30));
    }
    assert!(SplitProbabilities::<f64>::new(4, 3, 50.0, 2).is_err());
    assert!(SplitProbabilities::<f64>::new(10, 3, 0.5, 0).is_err());
}

#[test]
fn dominance_marginals_fit() {
    let pairs = couple_binomials(12, 0.25, 3, 4, 20_000, Seed::new(8)).unwrap();
    let xs: Vec<u64> = pairs.iter().map(|p| p.x).collect();
    let ys: Vec<u64> = pairs.iter().map(|p| p.y).collect();
    assert!(binomial_gof(&xs, 12, 0.25).p_value > 1e-4);
    assert!(binomial_gof(&ys, 12 * 3 * 4, 0.25 / 3.0).p_value > 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dominance_never_fails(n in 1u64..30, p in 0.0f64..=0.5, k in 1u64..6, l in 2u64..6, seed in any::<u64>()) {
        let c = BinomialCoupler::new(n, p, k, l).unwrap();
        prop_assert!(c.p0 >= p - 1e-15);
        prop_assert!(c.p0_residual() < 1e-12);
        let mut rng = Seed::new(seed).rng();
        for _ in 0..50 {
            let d = c.sample(&mut rng);
            prop_assert!(d.x <= d.z && d.z <= d.y);
        }
    }

    #[test]
    fn split_probabilities_are_ordered(n in 8usize..200, r in 3usize..6, eps in 0.01f64..1.0, rho in 1usize..12) {
        prop_assume!(n > r);
        if let Ok(s) = SplitProbabilities::<f64>::new(n, r, eps, rho) {
            prop_assert!(s.p1_prime <= s.p1 && s.p1 <= s.p1_tilde);
            prop_assert!(s.p3 <= s.p2 && s.p2 <= s.p);
            prop_assert!((s.p - s.p1_tilde - s.p2).abs() <= 1e-15 * s.p.max(1.0));
        }
    }
}
