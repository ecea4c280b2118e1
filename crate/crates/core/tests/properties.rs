use proptest::prelude::*;
use simplicial_green::curvature::{poincare_hopf_indices, unstable_curvature, FieldFunction};
use simplicial_green::io::{complex_to_json, parse_complex};
use simplicial_green::linalg::int;
use simplicial_green::potential::{is_unimodular, total_energy};
use simplicial_green::thermo::{critical_points, gradient_fd_check, hessian_fd_check, FreeEnergy, NewtonOptions};
use simplicial_green::{fixtures, green_function, GraphSpec, SimplicialComplex};

fn graph() -> impl Strategy<Value = GraphSpec> {
    (1usize..8).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m)
            .prop_map(move |keep| GraphSpec::new(n, pairs.iter().zip(&keep).filter(|(_, k)| **k).map(|(e, _)| *e)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn green_function_identities(g in graph()) {
        let c = SimplicialComplex::whitney(&g).unwrap();
        let gf = green_function(&c).unwrap();
        let chi = c.euler_characteristic();
        prop_assert!(is_unimodular(&gf));
        prop_assert!(gf.is_integer());
        prop_assert_eq!(total_energy(&gf), int(chi));
        prop_assert_eq!(gf.matrix().super_trace(&c.dims()).unwrap(), int(chi));
        let k = unstable_curvature(&c);
        prop_assert_eq!(gf.matrix().row_sums(), k.values.iter().map(|&v| int(v)).collect::<Vec<_>>());
    }

    #[test]
    fn json_round_trip(g in graph()) {
        let c = SimplicialComplex::whitney(&g).unwrap();
        prop_assert_eq!(parse_complex(&complex_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn index_sums_equal_euler_characteristic(g in graph(), seed in any::<u64>()) {
        let c = SimplicialComplex::whitney(&g).unwrap();
        let f = FieldFunction::random_permutation(&c, seed);
        prop_assert_eq!(poincare_hopf_indices(&c, &f).iter().sum::<i64>(), c.euler_characteristic());
    }
}

#[test]
fn derivative_checks_on_fixtures() {
    for c in [fixtures::complete_complex(2), fixtures::complete_complex(3), fixtures::cycle_complex(4)] {
        let fe = FreeEnergy::new(&green_function(&c).unwrap());
        for beta in [0.3, 0.7] {
            assert!(gradient_fd_check(&fe, beta, 50, 1e-6, 1) < 1e-5);
            assert!(hessian_fd_check(&fe, beta, 10, 1e-6, 2) < 1e-4);
        }
    }
}

#[test]
fn multistart_points_are_stationary() {
    let opts = NewtonOptions::default();
    for c in [fixtures::complete_complex(3), fixtures::cycle_complex(4)] {
        let fe = FreeEnergy::new(&green_function(&c).unwrap());
        for beta in [0.1, 0.5, 0.9] {
            let pts = critical_points(&fe, beta, 32, 3, &opts).unwrap();
            assert!(!pts.is_empty());
            for p in pts {
                assert!(fe.stationarity_residual(&p.p, &p.log_p, p.lambda, beta) < 1e-12);
            }
        }
    }
}
