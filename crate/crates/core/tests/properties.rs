use proptest::prelude::*;
use qmsgap_core::gap::GapProblem;
use qmsgap_core::harness::{block_model, gauss_legendre, random_balanced};
use qmsgap_core::metric::{moreau_form, QuadraticForm};
use qmsgap_core::operators::herm_eig;
use qmsgap_core::qms::random::{complex_gaussian, random_density_matrix, random_matrix, random_model, random_psd};
use qmsgap_core::{Matrix, Metric, Monotone, State, C};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn suite() -> Vec<Monotone> {
    let mut v = Monotone::builtins();
    v.push(Monotone::bkm());
    v.push(Monotone::power(0.3).unwrap());
    v
}

fn tr(m: &Matrix) -> C<f64> {
    m.trace()
}

fn gap(p: &GapProblem<f64>, f: Monotone) -> f64 {
    p.spectral_gap(&p.metric(f).unwrap()).unwrap().lambda.to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weights_reproduce_trace_formulas(seed in any::<u64>(), d in 2usize..6) {
        let mut r = rng(seed);
        let rho: State = random_density_matrix(d, 1e-3, &mut r).unwrap();
        let x: Matrix = random_matrix(d, &mut r);
        let y: Matrix = random_matrix(d, &mut r);
        let p = rho.matrix();
        let xh = x.adjoint();
        let sandwich = |s: f64| tr(&(&(&(&xh * &rho.power(s).unwrap()) * &y) * &rho.power(1.0 - s).unwrap()));
        let bkm: C<f64> = gauss_legendre(64).into_iter().map(|(s, w)| sandwich(s) * w).sum();
        let cases = [
            (Monotone::gns(), tr(&(&(&xh * &y) * p))),
            (Monotone::anti_gns(), tr(&(&(&xh * p) * &y))),
            (Monotone::kms(), sandwich(0.5)),
            (Monotone::bkm(), bkm),
        ];
        for (f, expected) in cases {
            let got = Metric::new(&rho, f.clone()).unwrap().f_inner(&x, &y);
            prop_assert!((got - expected).norm() < 1e-10, "{}: {got} vs {expected}", f.name());
        }
    }

    #[test]
    fn anti_gns_norm_is_phi_of_xx_star(seed in any::<u64>(), d in 2usize..6) {
        let mut r = rng(seed);
        let rho: State = random_density_matrix(d, 1e-3, &mut r).unwrap();
        let x: Matrix = random_matrix(d, &mut r);
        let n = Metric::new(&rho, Monotone::anti_gns()).unwrap().f_norm(&x);
        let phi = rho.expectation(&(&x * &x.adjoint())).re;
        prop_assert!((n * n - phi).abs() < 1e-10);
    }

    #[test]
    fn star_swaps_f_with_its_transpose(seed in any::<u64>(), d in 2usize..6, alpha in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let rho: State = random_density_matrix(d, 1e-3, &mut r).unwrap();
        let x: Matrix = random_matrix(d, &mut r);
        for f in suite().into_iter().chain([Monotone::power(alpha).unwrap()]) {
            let lhs = Metric::new(&rho, f.clone()).unwrap().f_norm(&x.adjoint());
            let rhs = Metric::new(&rho, f.transpose()).unwrap().f_norm(&x);
            prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.max(1.0), "{}", f.name());
        }
    }

    #[test]
    fn moreau_envelope_increases_to_q(seed in any::<u64>(), d in 1usize..6) {
        let mut r = rng(seed);
        let q = QuadraticForm::new(random_psd::<f64, _>(d, d, &mut r)).unwrap();
        let xi: Vec<C<f64>> = (0..d).map(|_| complex_gaussian(&mut r)).collect();
        let vals: Vec<f64> = [1.0, 0.1, 0.01, 0.001].iter().map(|&l| moreau_form(&q, l, &xi).unwrap()).collect();
        let qx = q.eval(&xi);
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        prop_assert!(vals[3] <= qx + 1e-12);
    }

    #[test]
    fn gram_sandwich(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let rho: State = random_density_matrix(d, 1e-3, &mut r).unwrap();
        let upper = Metric::new(&rho, Monotone::gns()).unwrap().gram().add(&Metric::new(&rho, Monotone::anti_gns()).unwrap().gram());
        for f in suite() {
            let g = Metric::new(&rho, f).unwrap().gram();
            prop_assert!(herm_eig(&upper.sub(&g).matrix().hermitian_part()).unwrap().min_eigenvalue() > -1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gaps_dominate_gns_and_match_transposes(seed in any::<u64>(), d in 2usize..5) {
        let rm = random_model::<f64, _>(d, &mut rng(seed)).unwrap();
        let p = GapProblem::new(rm.model, rm.state).unwrap();
        let g = gap(&p, Monotone::gns());
        for f in suite() {
            let l = gap(&p, f.clone());
            prop_assert!(l >= g - 1e-7 * g.max(1.0), "{}: {l} < {g}", f.name());
            let lt = gap(&p, f.transpose());
            prop_assert!((l - lt).abs() <= 1e-7 * l.max(1.0));
        }
    }

    #[test]
    fn semigroup_contracts_in_every_metric(seed in any::<u64>(), d in 2usize..5, t in 0.01f64..20.0) {
        let rm = random_model::<f64, _>(d, &mut rng(seed)).unwrap();
        let p = GapProblem::new(rm.model, rm.state).unwrap();
        for f in suite() {
            let n = p.f_operator_norm(&p.metric(f).unwrap(), t).unwrap();
            prop_assert!(n <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn balanced_generators_collapse(seed in any::<u64>(), d in 2usize..5) {
        let (model, rho) = random_balanced(d, &mut rng(seed)).unwrap();
        let p = GapProblem::new(model, rho).unwrap();
        let g = gap(&p, Monotone::gns());
        for f in suite() {
            prop_assert!((gap(&p, f) - g).abs() <= 1e-7 * g);
        }
    }

    #[test]
    fn degenerate_basis_lies_in_ker_e(seed in any::<u64>(), index in 0usize..4) {
        let cm = block_model(seed, index).unwrap();
        let p = GapProblem::new(cm.model, cm.state).unwrap();
        prop_assert!(p.fixed_points().degenerate());
        let e = p.fixed_points().projector();
        for f in suite() {
            for x in p.decaying_subspace(&p.metric(f).unwrap()).unwrap().matrices().unwrap() {
                prop_assert!(e.apply(&x).frobenius_norm() < 1e-9);
            }
        }
    }
}

#[test]
fn single_precision_depolarizing() {
    use qmsgap_core::single;
    let p = single::Problem::from_model(single::Model::depolarizing_qubit(0.5)).unwrap();
    for f in single::Monotone::builtins() {
        let l = p.spectral_gap(&p.metric(f).unwrap()).unwrap().lambda.finite().unwrap();
        assert!((l - 1.0).abs() < 1e-4);
    }
}
