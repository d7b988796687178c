use proptest::prelude::*;

use rerm::bounds::{
    expected_bound, high_prob_bound, kernel_stability, sufficient_training, ConvergenceErrors, Regime, RhoSource,
};
use rerm::data::{parse_libsvm_str, to_libsvm_string, Dataset, Instance, LabelKind, Task};
use rerm::model::{read_params, write_params, LossSpec, Model};
use rerm::objective::Objective;
use rerm::optim::{Algorithm, StepSchedule};
use rerm::ParameterVector;

fn rho(rho0: f64, rho1: f64) -> ConvergenceErrors {
    ConvergenceErrors::new(rho0, rho1, 0.0).unwrap()
}

fn dataset_strategy(task: Task) -> impl Strategy<Value = Dataset> {
    (1usize..6, 2usize..20).prop_flat_map(move |(d, n)| {
        let row = (prop::collection::vec(prop_oneof![Just(0.0), -1e3f64..1e3], d), any::<bool>(), -5.0f64..5.0);
        prop::collection::vec(row, n).prop_map(move |rows| {
            let instances = rows
                .into_iter()
                .map(|(x, b, y)| {
                    let label = match task {
                        Task::Binary => {
                            if b {
                                1.0
                            } else {
                                -1.0
                            }
                        }
                        _ => y,
                    };
                    Instance::new(x, label)
                })
                .collect();
            Dataset::new(instances, task).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn bound_totals_are_term_sums(
        rho0 in 0.0f64..1.0, rho1 in 0.0f64..10.0, k in 0.1f64..10.0, lambda in 1e-3f64..1.0, n in 1usize..10_000,
    ) {
        let beta = kernel_stability(1.0, k, lambda, n).unwrap();
        let e = expected_bound(&beta, &rho(rho0, rho1), 1.0, 0.25, n, RhoSource::Supplied).unwrap();
        let sum: f64 = e.terms.iter().map(|t| t.value).sum();
        prop_assert!((e.total_excess - sum).abs() <= 1e-12 * sum.max(1.0));
        let groups = e.stability_term + e.optimization_term + e.concentration_term;
        prop_assert!((e.total_excess - groups).abs() <= 1e-12 * sum.max(1.0));
    }

    #[test]
    fn bounds_grow_with_optimization_error(
        rho0 in 0.0f64..1.0, rho1 in 0.0f64..10.0, d0 in 0.0f64..1.0, d1 in 0.0f64..1.0, n in 2usize..5000,
    ) {
        let beta = kernel_stability(1.0, 3.0, 0.1, n).unwrap();
        let exp = |a, b| expected_bound(&beta, &rho(a, b), 1.0, 0.25, n, RhoSource::Supplied).unwrap().total_excess;
        let hp = |a, b| {
            high_prob_bound(&beta, &rho(a, b), 1.0, 0.25, 5.0, n, 0.1, RhoSource::Supplied).unwrap().total_excess
        };
        prop_assert!(exp(rho0 + d0, rho1 + d1) >= exp(rho0, rho1));
        prop_assert!(hp(rho0 + d0, rho1 + d1) >= hp(rho0, rho1));
    }

    #[test]
    fn high_prob_bound_tightens_as_delta_grows(delta in 0.01f64..0.5, bump in 0.01f64..0.4) {
        let beta = kernel_stability(1.0, 2.0, 0.05, 400).unwrap();
        let hp = |d| high_prob_bound(&beta, &rho(1e-3, 1e-2), 1.0, 0.25, 3.0, 400, d, RhoSource::Supplied)
            .unwrap()
            .total_excess;
        prop_assert!(hp(delta) >= hp((delta + bump).min(0.99)));
    }

    #[test]
    fn stability_constants_scale_as_one_over_n(
        l in 0.1f64..10.0, k in 0.1f64..10.0, lambda in 1e-4f64..10.0, n in 1usize..100_000, m in 2usize..10,
    ) {
        let a = kernel_stability(l, k, lambda, n).unwrap();
        let b = kernel_stability(l, k, lambda, n * m).unwrap();
        prop_assert!((a.beta0 / b.beta0 - m as f64).abs() < 1e-9 * m as f64);
        prop_assert!((a.beta1 / b.beta1 - m as f64).abs() < 1e-9 * m as f64);
        prop_assert!((a.beta0 - l * k * a.beta1).abs() <= 1e-12 * a.beta0);
    }

    #[test]
    fn sufficient_training_is_linear_in_the_constant(
        n in 16.0f64..1e7, d in 1.0f64..1e3, c in 0.01f64..100.0, eps in 1e-4f64..1.0, alg in 0usize..3,
    ) {
        let alg = Algorithm::ALL[alg];
        for (regime, e) in [(Regime::Convex, None), (Regime::Nonconvex, Some(eps))] {
            let one = sufficient_training(alg, regime, n.sqrt(), n, d, e, 1.0).unwrap();
            let scaled = sufficient_training(alg, regime, n.sqrt(), n, d, e, c).unwrap();
            prop_assert!((scaled.time_units - c * one.time_units).abs() <= 1e-9 * scaled.time_units);
            prop_assert!((scaled.iterations - c * one.iterations).abs() <= 1e-9 * scaled.iterations);
        }
    }

    #[test]
    fn libsvm_round_trip(data in dataset_strategy(Task::Binary)) {
        let text = to_libsvm_string(&data);
        let parsed = parse_libsvm_str(&text, LabelKind::Binary);
        if data.instances().iter().all(|z| z.features.iter().all(|v| *v == 0.0)) {
            prop_assert!(parsed.is_err());
        } else {
            let parsed = parsed.unwrap().with_dim(data.dim()).unwrap();
            prop_assert_eq!(parsed.instances(), data.instances());
        }
    }

    #[test]
    fn split_is_a_partition(data in dataset_strategy(Task::Regression), frac in 0.1f64..0.9, seed in any::<u64>()) {
        let Ok((train, test)) = data.split(frac, seed) else {
            return Ok(());
        };
        prop_assert_eq!(train.len(), (frac * data.len() as f64).floor() as usize);
        let key = |z: &Instance| format!("{:?}", z);
        let mut joined: Vec<String> = train.instances().iter().chain(test.instances()).map(key).collect();
        let mut original: Vec<String> = data.instances().iter().map(key).collect();
        joined.sort();
        original.sort();
        prop_assert_eq!(joined, original);
        let (again, _) = data.split(frac, seed).unwrap();
        prop_assert_eq!(again.instances(), train.instances());
    }

    #[test]
    fn decaying_schedules_are_positive_and_nonincreasing(
        c in 1e-4f64..100.0, offset in 0.0f64..1000.0, t in 1u64..1_000_000,
    ) {
        for s in [StepSchedule::Inverse { c, offset }, StepSchedule::InverseSqrt { c, offset }] {
            prop_assert!(s.step(t) > 0.0);
            prop_assert!(s.step(t + 1) <= s.step(t));
        }
    }

    #[test]
    fn checkpoint_round_trip(dim in 1usize..6, mlp in any::<bool>(), seed in any::<u64>()) {
        let model = if mlp { Model::mlp(dim) } else { Model::linear(dim) };
        let w = model.init_params(seed);
        let mut buf = Vec::new();
        write_params(&model, &w, &mut buf).unwrap();
        let (m2, w2) = read_params(buf.as_slice()).unwrap();
        prop_assert_eq!(m2, model);
        prop_assert_eq!(w2, w);
    }

    #[test]
    fn mlp_outputs_are_distributions(dim in 1usize..5, seed in any::<u64>(), x in prop::collection::vec(-5.0f64..5.0, 5)) {
        let model = Model::mlp(dim);
        let p = model.predict(&model.init_params(seed), &x[..dim]).unwrap();
        prop_assert_eq!(p.len(), 10);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|v| *v > 0.0 && *v < 1.0));
    }

    #[test]
    fn full_gradient_is_mean_of_instance_gradients(
        data in dataset_strategy(Task::Regression), lambda in 0.0f64..1.0, seed in any::<u64>(),
    ) {
        let d = data.dim();
        let model = Model::linear(d);
        let w = ParameterVector::from_vec(model.init_params(seed).iter().map(|v| 3.0 * v).collect());
        let obj = Objective::new(data, model, LossSpec::Squared, lambda).unwrap();
        let full = obj.full_gradient(&w).unwrap();
        let mut mean = vec![0.0; d];
        for i in 0..obj.n() {
            for (m, g) in mean.iter_mut().zip(obj.stochastic_gradient(&w, i).unwrap().iter()) {
                *m += g / obj.n() as f64;
            }
        }
        let scale = full.norm().max(1.0);
        for (a, b) in mean.iter().zip(full.iter()) {
            prop_assert!((a - b).abs() <= 1e-10 * scale);
        }
    }
}
