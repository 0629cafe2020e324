//! Properties of the sine-transform propagator `G(t)`.

use cca_core::oracle::one_photon_propagator;
use cca_core::{decompose, LatticeSpec, SpectralDecomposition};
use num_complex::Complex64;
use proptest::prelude::*;

fn chain(n: usize, omega: f64, hopping: f64) -> SpectralDecomposition {
    decompose(&LatticeSpec::new(n, omega, hopping).unwrap()).unwrap()
}

fn lattice_params() -> impl Strategy<Value = (usize, f64, f64)> {
    (2usize..=32, 0.1f64..3.0, 0.0f64..2.0)
}

#[test]
fn row_15_of_29_site_chain_matches_matrix_exponential() {
    let lattice = LatticeSpec::new(29, 1.0, 1.0).unwrap();
    let t = 83.57;
    let g = decompose(&lattice).unwrap().propagator_matrix(t);
    let reference = one_photon_propagator(&lattice, t);
    for l in 1..=29 {
        let dev = (g.at(15, l) - reference[14 * 29 + (l - 1)]).norm();
        assert!(dev < 1e-9, "G(15,{l}) off by {dev:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_symmetric_and_bounded((n, omega, hopping) in lattice_params(), t in -50.0f64..200.0) {
        let g = chain(n, omega, hopping).propagator_matrix(t);
        prop_assert!(g.unitarity_deviation() < 1e-10);
        for j in 1..=n {
            for l in 1..=n {
                prop_assert_eq!(g.at(j, l), g.at(l, j));
                prop_assert!(g.at(j, l).norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn mirror_symmetric((n, omega, hopping) in lattice_params(), t in 0.0f64..100.0) {
        let g = chain(n, omega, hopping).propagator_matrix(t);
        for j in 1..=n {
            for l in 1..=n {
                prop_assert!((g.at(j, l) - g.at(n + 1 - j, n + 1 - l)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn composes_in_time((n, omega, hopping) in lattice_params(), t1 in 0.0f64..100.0, t2 in 0.0f64..100.0) {
        let d = chain(n, omega, hopping);
        let a = d.propagator_matrix(t1);
        let b = d.propagator_matrix(t2);
        let ab = d.propagator_matrix(t1 + t2);
        for j in 1..=n {
            for l in 1..=n {
                let prod: Complex64 = (1..=n).map(|m| a.at(j, m) * b.at(m, l)).sum();
                prop_assert!((prod - ab.at(j, l)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn columns_agree_with_matrix((n, omega, hopping) in lattice_params(), t in 0.0f64..500.0, pick in any::<prop::sample::Index>()) {
        let d = chain(n, omega, hopping);
        let site = pick.index(n) + 1;
        let g = d.propagator_matrix(t);
        let col = &d.propagator_columns(t, &[site]).unwrap()[0];
        for j in 1..=n {
            prop_assert!((col.at(j) - g.at(j, site)).norm() < 1e-14);
        }
    }

    #[test]
    fn agrees_with_one_photon_oracle(n in 2usize..=12, omega in 0.1f64..3.0, hopping in 0.0f64..2.0, t in 0.0f64..50.0) {
        let lattice = LatticeSpec::new(n, omega, hopping).unwrap();
        let g = decompose(&lattice).unwrap().propagator_matrix(t);
        let reference = one_photon_propagator(&lattice, t);
        for (a, b) in g.entries().iter().zip(&reference) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }
}
