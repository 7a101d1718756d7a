use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcvur_core::dm_model::{thermal_state, ModelParams};
use qcvur_core::kernel::pauli::{sigma_x, sigma_z};
use qcvur_core::kernel::{
    eig_hermitian, exp_hermitian_scaled, kron, partial_trace, ComplexMatrix, C64,
};
use qcvur_core::measurement::{
    condition_on_outcome, expectation, projective_decomposition, variance, Observable,
};
use qcvur_core::random::{random_density, random_hermitian, random_qubit_unitary, random_unitary};
use qcvur_core::relations::{qc_vur, qm_eur, MeasurementPair, MeasurementSetup};
use qcvur_core::state::{concurrence_two_qubit, mixedness, von_neumann_entropy, DensityOperator};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    &random_hermitian(n, rng) + &random_hermitian(n, rng).scale(C64::new(0.0, 1.0))
}

fn conjugate(rho: &DensityOperator, u: &ComplexMatrix) -> DensityOperator {
    let m = &(u * rho.matrix()) * &u.adjoint();
    DensityOperator::new(m.hermitian_part(), rho.dims().to_vec()).unwrap()
}

fn swap_qubits(rho: &DensityOperator) -> DensityOperator {
    let mut swap = ComplexMatrix::zeros(4);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        swap[(i, j)] = C64::new(1.0, 0.0);
    }
    conjugate(rho, &swap)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative_and_traces_multiply(seed in any::<u64>(), na in 1usize..4, nb in 1usize..4, nc in 1usize..3) {
        let mut r = rng(seed);
        let (a, b, c) = (random_matrix(na, &mut r), random_matrix(nb, &mut r), random_matrix(nc, &mut r));
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-13);
        prop_assert!((kron(&a, &b).trace() - a.trace() * b.trace()).norm() <= 1e-13 * (1.0 + a.frobenius_norm() * b.frobenius_norm()));
    }

    #[test]
    fn sequential_partial_traces_give_the_trace(seed in any::<u64>(), sites in 1usize..5) {
        let mut r = rng(seed);
        let dims = vec![2; sites];
        let m = random_matrix(1 << sites, &mut r);
        let mut current = m.clone();
        let mut remaining = dims.clone();
        while remaining.len() > 1 {
            current = partial_trace(&current, &remaining, &(1..remaining.len()).collect::<Vec<_>>()).unwrap();
            remaining.remove(0);
        }
        let last = current.trace();
        prop_assert!((last - m.trace()).norm() <= 1e-12 * (1.0 + m.frobenius_norm()));
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), n in 1usize..9) {
        let m = random_hermitian(n, &mut rng(seed));
        let eig = eig_hermitian(&m).unwrap();
        let sum: f64 = eig.values.iter().sum();
        prop_assert!((sum - m.trace().re).abs() <= 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eig.reconstruct().max_abs_diff(&m) <= 1e-10);
    }

    #[test]
    fn exponentials_invert(seed in any::<u64>(), s in -1.0f64..1.0) {
        let m = random_hermitian(4, &mut rng(seed));
        let prod = &exp_hermitian_scaled(&m, s).unwrap() * &exp_hermitian_scaled(&m, -s).unwrap();
        prop_assert!(prod.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-10);
    }

    #[test]
    fn state_measures_are_unitarily_invariant(seed in any::<u64>(), rank in 1usize..5) {
        let mut r = rng(seed);
        let rho = random_density(&[2, 2], rank, &mut r);
        let local = kron(&random_qubit_unitary(&mut r), &random_qubit_unitary(&mut r));
        let global = random_unitary(4, &mut r);
        for u in [&local, &global] {
            let moved = conjugate(&rho, u);
            prop_assert!((mixedness(&moved) - mixedness(&rho)).abs() <= 1e-12);
            prop_assert!((von_neumann_entropy(&moved).unwrap() - von_neumann_entropy(&rho).unwrap()).abs() <= 1e-10);
        }
        let c = concurrence_two_qubit(&rho).unwrap();
        prop_assert!((concurrence_two_qubit(&conjugate(&rho, &local)).unwrap() - c).abs() <= 1e-10);
        prop_assert!((concurrence_two_qubit(&swap_qubits(&rho)).unwrap() - c).abs() <= 1e-10);
    }

    #[test]
    fn branches_are_consistent_with_the_marginal(seed in any::<u64>(), sites in 2usize..4) {
        let mut r = rng(seed);
        let rho = random_density(&vec![2; sites], 1 << sites, &mut r);
        let q = Observable::new(random_hermitian(2, &mut r), 0).unwrap();
        let o = Observable::new(random_hermitian(2, &mut r), sites - 1).unwrap();
        let (mut total, mut mean) = (0.0, 0.0);
        for outcome in projective_decomposition(&o).unwrap().outcomes {
            let branch = condition_on_outcome(&rho, &outcome.projector, o.subsystem()).unwrap();
            total += branch.prob;
            mean += branch.prob * expectation(&branch.state, &q).unwrap();
        }
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!((mean - expectation(&rho, &q).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn lhs_and_explained_add_to_total_variance(seed in any::<u64>(), sites in 2usize..5, k in 2usize..4) {
        let mut r = rng(seed);
        let rho = random_density(&vec![2; sites], r.random_range(1..=1 << sites), &mut r);
        let n_controls = r.random_range(1..sites);
        let pairs: Vec<MeasurementPair> = (0..k)
            .map(|_| MeasurementPair {
                q: Observable::new(random_hermitian(2, &mut r), 0).unwrap(),
                controls: (1..=n_controls)
                    .map(|s| Observable::new(random_hermitian(2, &mut r), s).unwrap())
                    .collect(),
            })
            .collect();
        let total: f64 = pairs.iter().map(|p| variance(&rho, &p.q).unwrap()).sum();
        let setup = MeasurementSetup { pairs, ltra_operator: random_matrix(2, &mut r), theta: r.random_range(0.0..6.3) };
        let result = qc_vur(&rho, &setup).unwrap();
        prop_assert!((result.lhs + result.subtracted - total).abs() <= 1e-9);
        prop_assert!(result.lhs >= result.w - 1e-9);
        if let Some(u) = result.u {
            if result.w > 1e-6 {
                prop_assert!(u >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn entropic_bound_holds(seed in any::<u64>(), rank in 1usize..5) {
        let mut r = rng(seed);
        let rho = random_density(&[2, 2], rank, &mut r);
        let a = Observable::new(random_hermitian(2, &mut r), 0).unwrap();
        let b = Observable::new(random_hermitian(2, &mut r), 0).unwrap();
        let e = qm_eur(&rho, &a, &b).unwrap();
        prop_assert!(e.lhs() >= e.rhs - 1e-9);
        if let Some(u) = e.u_eur {
            if e.rhs > 1e-6 {
                prop_assert!(u >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn thermal_relations_depend_on_coupling_over_temperature(
        d in 0.0f64..2.5,
        j in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
        t in 0.05f64..5.0,
        k in 0.1f64..10.0,
    ) {
        let setup = MeasurementSetup::standard(0.5);
        let base = qc_vur(&thermal_state(&ModelParams::new(d, j, t).unwrap()).unwrap(), &setup).unwrap();
        let scaled = qc_vur(&thermal_state(&ModelParams::new(d, k * j, k * t).unwrap()).unwrap(), &setup).unwrap();
        prop_assert!((base.lhs - scaled.lhs).abs() <= 1e-10);
        prop_assert!((base.w - scaled.w).abs() <= 1e-10);
        match (base.u, scaled.u) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0)),
            (None, None) => {}
            _ => prop_assert!(base.w.abs() < 1e-8),
        }
    }

    #[test]
    fn thermal_records_respect_bounds(d in 0.0f64..3.0, j in prop_oneof![-3.0f64..-0.01, 0.01f64..3.0], t in 0.001f64..10.0) {
        let rho = thermal_state(&ModelParams::new(d, j, t).unwrap()).unwrap();
        let g = mixedness(&rho);
        prop_assert!((-1e-12..=0.75 + 1e-12).contains(&g));
        let c = concurrence_two_qubit(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        let setup = MeasurementSetup::standard(0.5);
        let v = qc_vur(&rho, &setup).unwrap();
        prop_assert!(v.lhs >= v.w - 1e-9);
        let e = qm_eur(&rho, &setup.pairs[0].q, &setup.pairs[1].q).unwrap();
        prop_assert!(e.lhs() >= e.rhs - 1e-9);
    }
}

#[test]
fn standard_setup_matches_explicit_construction() {
    let explicit = MeasurementSetup {
        pairs: vec![
            MeasurementPair {
                q: Observable::new(sigma_x(), 0).unwrap(),
                controls: vec![Observable::new(sigma_x(), 1).unwrap()],
            },
            MeasurementPair {
                q: Observable::new(sigma_z(), 0).unwrap(),
                controls: vec![Observable::new(sigma_z(), 1).unwrap()],
            },
        ],
        ltra_operator: &sigma_x() + &sigma_z(),
        theta: 0.5,
    };
    let rho = thermal_state(&ModelParams::new(0.7, -1.3, 0.9).unwrap()).unwrap();
    assert_eq!(
        qc_vur(&rho, &explicit).unwrap(),
        qc_vur(&rho, &MeasurementSetup::standard(0.5)).unwrap()
    );
}
