use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtomo::linalg::{frobenius_sq, identity, trace};
use qtomo::metrics::{fidelity, mse};
use qtomo::sim::apply_depolarizing;
use qtomo::{
    cluster, density_from_stokes, eigenbasis_projectors, ghz, psd_project, stokes_parameter,
    to_density, w, y_parity, DensityMatrix, PauliString, PureState, YParity,
};

fn random_matrix(dim: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn random_hermitian(dim: usize, seed: u64) -> DMatrix<C64> {
    let g = random_matrix(dim, seed);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

fn random_density(n: usize, seed: u64) -> DensityMatrix {
    let g = random_matrix(1 << n, seed);
    let m = &g * g.adjoint();
    let t = trace(&m);
    DensityMatrix::new(m / t).unwrap()
}

fn random_pure(n: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn setting_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    proptest::collection::vec(prop::sample::select(vec!['X', 'Y', 'Z']), n)
        .prop_map(|letters| letters.into_iter().collect::<String>().parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn stokes_expansion_reconstructs_state(n in 1usize..=3, seed in any::<u64>()) {
        let rho = random_density(n, seed);
        let coeffs: BTreeMap<PauliString, f64> = PauliString::all(n)
            .into_iter()
            .map(|s| {
                let c = stokes_parameter(&rho, &s).unwrap();
                (s, c)
            })
            .collect();
        let back = density_from_stokes(n, &coeffs).unwrap();
        prop_assert!(mse(&rho, &back).unwrap() <= 1e-20);
    }

    #[test]
    fn real_states_have_no_odd_y_parameters(n in 2usize..=4, kind in 0usize..3) {
        let state = match kind {
            0 => ghz(n),
            1 => w(n),
            _ => cluster(n),
        }
        .unwrap();
        let rho = to_density(&state);
        for s in PauliString::all(n).into_iter().filter(|s| y_parity(s) == YParity::Odd) {
            prop_assert!(stokes_parameter(&rho, &s).unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn projectors_resolve_identity_and_signed_sum_is_stokes(
        (n, setting) in (1usize..=3).prop_flat_map(|n| (Just(n), setting_strategy(n))),
        seed in any::<u64>(),
    ) {
        let set = eigenbasis_projectors(&setting).unwrap();
        let rho = random_density(n, seed);
        let total: DMatrix<C64> = set.projectors().iter().sum();
        prop_assert!(frobenius_sq(&(total - identity(1 << n))) <= 1e-20);
        let probs = set.probabilities(rho.matrix());
        let signed: f64 = probs.iter().zip(set.signs()).map(|(p, s)| p * s).sum();
        prop_assert!((signed - stokes_parameter(&rho, &setting).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn psd_projection_is_idempotent_and_nonexpansive(n in 1usize..=3, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_hermitian(1 << n, s1);
        let b = random_hermitian(1 << n, s2);
        let pa = psd_project(&a).unwrap();
        let pb = psd_project(&b).unwrap();
        prop_assert!(frobenius_sq(&(psd_project(&pa).unwrap() - &pa)) <= 1e-20);
        prop_assert!(frobenius_sq(&(&pa - &pb)) <= frobenius_sq(&(&a - &b)) + 1e-12);
    }

    #[test]
    fn depolarizing_preserves_trace_and_positivity(
        n in 2usize..=3,
        seed in any::<u64>(),
        p in 0.0f64..=1.0,
        pair in any::<bool>(),
    ) {
        let rho = random_density(n, seed);
        let qubits: &[usize] = if pair { &[0, 1] } else { &[1] };
        let out = apply_depolarizing(&rho, qubits, p).unwrap();
        prop_assert!((trace(out.matrix()).re - 1.0).abs() <= 1e-12);
        prop_assert!(DensityMatrix::new(out.into_matrix()).is_ok());
    }

    #[test]
    fn mse_is_a_relaxed_squared_metric(n in 1usize..=3, s in any::<[u64; 3]>()) {
        let (a, b, c) = (random_density(n, s[0]), random_density(n, s[1]), random_density(n, s[2]));
        prop_assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        prop_assert_eq!(mse(&a, &a).unwrap(), 0.0);
        prop_assert!(mse(&a, &c).unwrap() <= 2.0 * (mse(&a, &b).unwrap() + mse(&b, &c).unwrap()) + 1e-15);
    }

    #[test]
    fn fidelity_to_pure_target_decreases_under_depolarizing(n in 1usize..=3, seed in any::<u64>()) {
        let target = to_density(&random_pure(n, seed));
        let all: Vec<usize> = (0..n.min(2)).collect();
        let mut last = f64::INFINITY;
        for k in 0..=10 {
            let noisy = apply_depolarizing(&target, &all, k as f64 / 10.0).unwrap();
            let f = fidelity(&noisy, &target).unwrap();
            prop_assert!(f <= last + 1e-12);
            last = f;
        }
    }
}
