use lupus_core::benchfns::{sphere, BenchmarkId};
use lupus_core::curves::InertiaScaling;
use lupus_core::optimizer::{
    candidate_from_leader, coefficients_from_draws, combine_candidates, pso_run, run, Algorithm, GwoConfig, GwoRun, Leaders, PsoConfig, SearchSpace, Variant,
};
use proptest::prelude::*;

const VARIANTS: [Variant; 4] = [Variant::Gwo, Variant::Cgwo, Variant::Agwo, Variant::Acgwo];

fn small_cfg(variant: Variant, seed: u64) -> GwoConfig<f64> {
    GwoConfig {
        variant,
        n_agents: 8,
        max_iter: 25,
        seed,
        parallel: false,
        ..GwoConfig::default()
    }
}

fn bench_fn(idx: usize) -> BenchmarkId {
    BenchmarkId::TABLE[idx % BenchmarkId::TABLE.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn positions_stay_in_bounds_and_leaders_ordered(
        v in 0usize..4, f in 0usize..6, seed in any::<u64>(), dim in 2usize..8, raw in any::<bool>()
    ) {
        let func = bench_fn(f).info();
        let space = SearchSpace::uniform(dim, func.lower, func.upper).unwrap();
        let mut cfg = small_cfg(VARIANTS[v], seed);
        if raw {
            cfg.inertia_scaling = InertiaScaling::Raw;
        }
        let mut r = GwoRun::new(&func, &space, &cfg).unwrap();
        while !r.is_done() {
            r.step().unwrap();
            let st = r.state();
            for x in &st.positions {
                prop_assert!(space.contains(x), "{x:?}");
            }
            let s = st.leaders.scores;
            prop_assert!(s[0] <= s[1] && s[1] <= s[2], "{s:?}");
        }
        let h = r.history();
        prop_assert!(h.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn history_non_increasing(alg in 0usize..5, f in 0usize..6, seed in any::<u64>()) {
        let func = bench_fn(f).info();
        let space = SearchSpace::uniform(4, func.lower, func.upper).unwrap();
        let result = match Algorithm::ALL[alg].variant() {
            Some(v) => run(&func, &space, &small_cfg(v, seed)).unwrap(),
            None => pso_run(&func, &space, &PsoConfig { n_particles: 8, max_iter: 25, seed, ..PsoConfig::default() }).unwrap(),
        };
        prop_assert!(result.history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(*result.history.last().unwrap(), result.best_score);
        prop_assert!(space.contains(&result.best_position));
    }

    #[test]
    fn leader_offers_keep_order(scores in proptest::collection::vec(-1e6..1e6f64, 1..40)) {
        let mut leaders = Leaders::new(1);
        for &s in &scores {
            leaders.offer(&[s.clamp(-1.0, 1.0)], s);
            let t = leaders.scores;
            prop_assert!(t[0] <= t[1] && t[1] <= t[2]);
        }
        let mut sorted = scores.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert_eq!(leaders.scores[0], sorted[0]);
        if sorted.len() >= 3 {
            prop_assert_eq!(leaders.scores[2], sorted[2]);
        }
    }

    #[test]
    fn equal_candidates_combine_to_themselves(
        v in proptest::collection::vec(-100.0..100.0f64, 1..10),
        w in proptest::array::uniform3(0.1..5.0f64),
    ) {
        let out = combine_candidates([&v, &v, &v], Some(w)).unwrap();
        for (a, b) in out.iter().zip(&v) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }
}

#[test]
fn same_seed_same_result_serial_and_parallel() {
    let space = SearchSpace::uniform(10, -100.0, 100.0).unwrap();
    for v in VARIANTS {
        let serial = small_cfg(v, 99);
        let parallel = GwoConfig { parallel: true, ..serial.clone() };
        let a = run(&sphere::<f64>, &space, &serial).unwrap();
        let b = run(&sphere::<f64>, &space, &serial).unwrap();
        let c = run(&sphere::<f64>, &space, &parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c, "{v:?}");
    }
}

#[test]
fn stochastic_objective_is_reproducible() {
    let func = BenchmarkId::F5.info();
    let space = SearchSpace::uniform(5, func.lower, func.upper).unwrap();
    let cfg = GwoConfig { parallel: true, ..small_cfg(Variant::Acgwo, 3) };
    assert_eq!(run(&func, &space, &cfg).unwrap(), run(&func, &space, &cfg).unwrap());
}

#[test]
fn different_seeds_differ() {
    let space = SearchSpace::uniform(5, -10.0, 10.0).unwrap();
    let a = run(&sphere::<f64>, &space, &small_cfg(Variant::Acgwo, 1)).unwrap();
    let b = run(&sphere::<f64>, &space, &small_cfg(Variant::Acgwo, 2)).unwrap();
    assert_ne!(a.best_position, b.best_position);
}

#[test]
fn nan_objective_never_leads() {
    let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
    let f = |x: &[f64]| if x[0] > 0.0 { f64::NAN } else { x[0] * x[0] + x[1] * x[1] };
    let r = run(&f, &space, &small_cfg(Variant::Acgwo, 5)).unwrap();
    assert!(r.best_score.is_finite());
    assert!(r.best_position[0] <= 0.0);
}

#[test]
fn f32_run_converges_on_sphere() {
    let space = SearchSpace::<f32>::uniform(5, -100.0, 100.0).unwrap();
    let cfg = GwoConfig::<f32> { n_agents: 20, max_iter: 200, seed: 4, ..GwoConfig::default() };
    let r = run(&sphere::<f32>, &space, &cfg).unwrap();
    assert!(r.best_score < 1e-6, "{}", r.best_score);
}

#[test]
fn zero_control_maps_wolves_onto_leader_mean() {
    let leaders = [vec![1.0, -2.0, 3.0], vec![2.0, 0.0, 1.0], vec![0.0, 5.0, -1.0]];
    let wolf = [7.0, 7.0, -7.0];
    let r = [0.3, 0.9, 0.1];
    let (a, c) = coefficients_from_draws(0.0, &r, &r);
    assert!(a.iter().all(|&v| v == 0.0));
    let cands: Vec<Vec<f64>> = leaders
        .iter()
        .map(|l| candidate_from_leader(&wolf, l, &a, &c, 1.0, true))
        .collect();
    let out = combine_candidates([&cands[0], &cands[1], &cands[2]], None).unwrap();
    assert_eq!(out, vec![1.0, 1.0, 1.0]);
}
