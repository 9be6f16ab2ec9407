use lupus_core::benchfns::{quartic, BenchmarkId};
use lupus_core::harness::{format_sci, mean_std, run_plan, ExperimentPlan};
use lupus_core::optimizer::{Algorithm, Objective};
use lupus_core::seed::rng_from_seed;
use proptest::prelude::*;

const ALL_FUNCTIONS: [BenchmarkId; 7] = [
    BenchmarkId::F1,
    BenchmarkId::F2,
    BenchmarkId::F3,
    BenchmarkId::F4,
    BenchmarkId::F5,
    BenchmarkId::F6,
    BenchmarkId::F5r,
];

proptest! {
    #[test]
    fn benchmarks_non_negative_in_range(
        idx in 0usize..7,
        unit in proptest::collection::vec(0.0..=1.0f64, 2..12),
        seed in any::<u64>(),
    ) {
        let f = ALL_FUNCTIONS[idx].info();
        let x: Vec<f64> = unit.iter().map(|u| f.lower + u * (f.upper - f.lower)).collect();
        let v = f.evaluate(&x, &mut rng_from_seed(seed));
        prop_assert!(v >= 0.0, "{}: {v}", f.id);
        if !f.stochastic {
            prop_assert_eq!(v, f.evaluate(&x, &mut rng_from_seed(seed.wrapping_add(1))));
        }
    }

    #[test]
    fn mean_std_matches_definition(v in proptest::collection::vec(-1e3..1e3f64, 1..30)) {
        let (m, s) = mean_std(&v);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        prop_assert!((m - mean).abs() <= 1e-9 * mean.abs().max(1.0));
        prop_assert!((s - var.sqrt()).abs() <= 1e-9 * var.sqrt().max(1.0));
    }

    #[test]
    fn format_sci_round_trips_to_three_digits(v in 1e-300..1e300f64) {
        let text = format_sci(v);
        let parsed: f64 = text.parse().unwrap();
        prop_assert!(((parsed - v) / v).abs() <= 5e-3, "{v} -> {text}");
    }
}

#[test]
fn optimum_values_are_zero() {
    for id in ALL_FUNCTIONS {
        let f = id.info();
        let x = f.optimum_point::<f64>(30);
        if f.stochastic {
            // the noise term is the only non-zero part at the optimum
            assert_eq!(quartic(&x), 0.0);
        } else {
            assert_eq!(f.evaluate(&x, &mut rng_from_seed(0)), 0.0, "{id}");
        }
    }
}

fn small_plan(functions: &[&str]) -> ExperimentPlan {
    ExperimentPlan {
        algorithms: vec![Algorithm::Pso, Algorithm::Acgwo],
        functions: functions.iter().map(|s| s.to_string()).collect(),
        dims: vec![5],
        n_runs: 3,
        n_agents: 10,
        max_iter: 30,
        base_seed: 7,
        ..ExperimentPlan::default()
    }
}

#[test]
fn cells_are_independent() {
    let full = run_plan(&small_plan(&["f1", "f5", "f6"])).unwrap();
    let partial = run_plan(&small_plan(&["f6"])).unwrap();
    let pick = |o: &lupus_core::harness::PlanOutcome| {
        o.runs
            .iter()
            .filter(|r| r.cell.function == BenchmarkId::F6)
            .map(|r| (r.cell, r.run, r.seed, r.result.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(pick(&full), pick(&partial));
}

#[test]
fn rows_are_recomputable_from_runs() {
    let out = run_plan(&small_plan(&["f1", "f2"])).unwrap();
    for row in &out.rows {
        let finals: Vec<f64> = out
            .runs
            .iter()
            .filter(|r| r.cell.algorithm == row.algorithm && r.cell.function == row.function && r.cell.dim == row.dim)
            .map(|r| r.result.best_score)
            .collect();
        assert_eq!(finals.len(), row.n_runs);
        assert_eq!(mean_std(&finals), (row.mean, row.std));
    }
}

#[test]
fn invalid_plans_fail_before_running() {
    assert!(run_plan(&small_plan(&["f1", "f9"])).is_err());
    let mut p = small_plan(&["f4"]);
    p.dims = vec![1];
    assert!(run_plan(&p).is_err());
    let mut p = small_plan(&["f1"]);
    p.n_runs = 0;
    assert!(run_plan(&p).is_err());
}
