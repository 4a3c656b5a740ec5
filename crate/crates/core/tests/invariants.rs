use athermal_markov::experiments::random::{random_density, random_hermitian, random_phases, random_unitary};
use athermal_markov::linalg::{eigh, kron, partial_trace_op, partial_transpose_op, trace_norm, Matrix, Subsystem};
use athermal_markov::measures::{
    chi_lambda_bound, delta, discord, distance_measure, log_negativity, mutual_information, MeasureKind, MtoFamily,
};
use athermal_markov::optimize::OptimizerConfig;
use athermal_markov::thermal::{
    beta_from_temperature, gibbs_state, EnergyBlockUnitary, Hamiltonian, PerturbationSpec, ThermalOperation,
};
use athermal_markov::{ComplexMatrix, DensityMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn quick() -> OptimizerConfig {
    OptimizerConfig { seeds: 6, grid_resolution: 10, ..OptimizerConfig::default() }
}

fn joint(seed: u64, d1: usize, d2: usize) -> DensityMatrix {
    DensityMatrix::new(random_density(&mut rng(seed), d1 * d2), vec![d1, d2]).unwrap()
}

fn product(seed: u64, d1: usize, d2: usize) -> DensityMatrix {
    let mut r = rng(seed);
    let a = random_density(&mut r, d1);
    let b = random_density(&mut r, d2);
    DensityMatrix::new(kron(&a, &b), vec![d1, d2]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_traces_of_products_recover_factors(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
        let mut r = rng(seed);
        let a = random_density(&mut r, d1);
        let b = random_density(&mut r, d2);
        let ab = kron(&a, &b);
        prop_assert!(partial_trace_op(&ab, (d1, d2), Subsystem::First).unwrap().approx_eq(&a, 1e-13));
        prop_assert!(partial_trace_op(&ab, (d1, d2), Subsystem::Second).unwrap().approx_eq(&b, 1e-13));
    }

    #[test]
    fn trace_norm_of_a_state_is_one(seed in any::<u64>(), d in 1usize..6) {
        let rho = random_density(&mut rng(seed), d);
        prop_assert!((trace_norm(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstructs_and_is_ascending(seed in any::<u64>(), d in 1usize..7) {
        let h = random_hermitian(&mut rng(seed), d);
        let e = eigh(&h).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.reconstruct().approx_eq(&h, 1e-12));
    }

    #[test]
    fn mutual_information_is_nonnegative_and_vanishes_on_products(seed in any::<u64>(), d2 in 2usize..4) {
        let i = mutual_information(&joint(seed, 2, d2)).unwrap().value;
        prop_assert!(i >= -1e-12);
        let p = mutual_information(&product(seed, 2, d2)).unwrap().value;
        prop_assert!(p.abs() < 1e-10, "{}", p);
    }

    #[test]
    fn products_have_no_negativity(seed in any::<u64>(), d2 in 2usize..4) {
        prop_assert!(log_negativity(&product(seed, 2, d2)).unwrap().value.abs() < 1e-10);
    }

    #[test]
    fn phase_diagonal_unitaries_preserve_the_partial_transpose_spectrum(seed in any::<u64>(), db in 2usize..4) {
        let mut r = rng(seed);
        let hs = Hamiltonian::new(random_hermitian(&mut r, 2)).unwrap();
        let hb = Hamiltonian::new(random_hermitian(&mut r, db)).unwrap();
        let u = EnergyBlockUnitary::phase_diagonal(&hs, &hb, &random_phases(&mut r, 2 * db)).unwrap();
        let op = ThermalOperation::new(u, gibbs_state(&hb, 0.7).unwrap(), hs).unwrap();
        let j = op.apply(&DensityMatrix::single(random_density(&mut r, 2)).unwrap()).unwrap().joint;
        let mut a = eigh(j.matrix()).unwrap().values;
        let mut b = eigh(&partial_transpose_op(j.matrix(), (2, db), Subsystem::First).unwrap().hermitian_part()).unwrap().values;
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn discord_is_bounded_by_mutual_information(seed in any::<u64>(), d2 in 2usize..4) {
        let rho = joint(seed, 2, d2);
        let d = discord(&rho, &quick()).unwrap().value;
        let i = mutual_information(&rho).unwrap().value;
        prop_assert!(d <= i + 1e-7, "discord {} > I {}", d, i);
        prop_assert!(d >= -1e-7);
    }

    #[test]
    fn markovian_family_members_are_at_zero_distance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let z = Hamiltonian::pauli_z();
        let hb = z.scaled(2.0);
        let bath = gibbs_state(&hb, 0.8).unwrap();
        let family = MtoFamily::markovian(&z, &bath).unwrap();
        let op = family.operation(&random_phases(&mut r, family.free_dim())).unwrap();
        let d = distance_measure(&op, &family, &quick(), None).unwrap().value;
        prop_assert!((0.0..1e-6).contains(&d), "{}", d);
    }
}

#[test]
fn chi_bound_dominates_the_distance_change() {
    let z = Hamiltonian::pauli_z();
    let hb = z.scaled(10.0);
    let u = EnergyBlockUnitary::phase_diagonal(&z, &hb, &[0.4, 2.1, 5.0, 1.3]).unwrap();
    let op =
        ThermalOperation::new(u, gibbs_state(&hb, beta_from_temperature(3.0).unwrap()).unwrap(), z.clone()).unwrap();
    let family = MtoFamily::for_operation(&op).unwrap();
    let cfg = OptimizerConfig { seeds: 12, ..OptimizerConfig::default() };
    let p = Matrix::from_real_diagonal(&[0.9, 0.1]);
    for eps in [0.01, 0.1] {
        let pert = PerturbationSpec::new(Hamiltonian::pauli_x(), eps).unwrap();
        let d = delta(MeasureKind::ChoiDistance, &op, &p, &pert, &cfg).unwrap();
        let chi = chi_lambda_bound(&op, &family, &pert, &cfg).unwrap();
        assert!(d.delta.abs() <= chi.value + 1e-6, "ε={eps}: |ΔD| {} > χ {}", d.delta, chi.value);
        assert!(d.unperturbed.value >= 0.0);
    }
}

fn to_nalgebra(m: &ComplexMatrix) -> nalgebra::DMatrix<nalgebra::Complex<f64>> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

#[test]
fn eigh_agrees_with_nalgebra() {
    let mut r = rng(11);
    for d in 1..9 {
        for _ in 0..10 {
            let h = random_hermitian(&mut r, d);
            let ours = eigh(&h).unwrap().values;
            let mut theirs: Vec<f64> = to_nalgebra(&h).symmetric_eigen().eigenvalues.iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-11, "d={d}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn random_unitaries_conjugate_states_to_states() {
    let mut r = rng(5);
    let u = random_unitary(&mut r, 4);
    let rho = random_density(&mut r, 4);
    let out = u.conjugate(&rho);
    assert!(DensityMatrix::single(out).is_ok());
}
