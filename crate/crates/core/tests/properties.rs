//! Property tests over randomly generated states.

use gconc::axisym::{axisym_to_matrix, cg_axisym, distance_lower_bound, project_axisym};
use gconc::linalg;
use gconc::multipartite::{bipartition_reshape, cluster_state, white_noise_threshold, Partition};
use gconc::pure_measures::{cg_of_f, cg_pure, cg_pure_lower};
use gconc::random::{haar_unitary, random_density, random_pure_state, seeded_rng};
use gconc::state::{
    apply_local, dm_from_pure, fidelity_phi, hs_distance, partial_trace, schmidt, BipartiteOperator, Dim,
    Subsystem,
};
use gconc::witness::bg_witness;
use proptest::prelude::*;

fn dim(d: usize) -> Dim {
    Dim::new(d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_states_are_valid(seed in any::<u64>(), d in 2usize..=4, rank in 1usize..=16) {
        let rho = random_density(dim(d), rank.min(d * d), &mut seeded_rng(seed, 0));
        let m = rho.matrix();
        prop_assert!(linalg::hermiticity_residual(m) <= 1e-10);
        prop_assert!((linalg::trace(m).re - 1.0).abs() <= 1e-10);
        prop_assert!(linalg::min_eigenvalue(m) >= -1e-9);
        prop_assert!((linalg::trace(&partial_trace(&rho, Subsystem::B)).re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn schmidt_and_cg_are_local_unitary_invariant(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = seeded_rng(seed, 0);
        let psi = random_pure_state(dim(d), &mut rng);
        let (u, v) = (haar_unitary(d, &mut rng), haar_unitary(d, &mut rng));
        let amps = &u * psi.amplitudes() * v.transpose();
        let rotated = gconc::PureState::normalized(dim(d), amps).unwrap();
        for (a, b) in schmidt(&psi).lambdas().iter().zip(schmidt(&rotated).lambdas()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        prop_assert!((cg_pure(&psi) - cg_pure(&rotated)).abs() <= 1e-9);
        let rho = apply_local(&dm_from_pure(&psi), &u, &v).unwrap();
        prop_assert!((linalg::trace(rho.matrix()).re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn fidelity_two_ways(seed in any::<u64>(), d in 2usize..=5) {
        let psi = random_pure_state(dim(d), &mut seeded_rng(seed, 0));
        let c = psi.amplitudes();
        let direct = (0..d).map(|j| c[(j, j)]).sum::<num_complex::Complex64>().norm_sqr() / d as f64;
        prop_assert!((fidelity_phi(&dm_from_pure(&psi)) - direct).abs() <= 1e-12);
    }

    #[test]
    fn pure_lower_bound_and_witness(seed in any::<u64>(), d in 2usize..=5) {
        let psi = random_pure_state(dim(d), &mut seeded_rng(seed, 0));
        let lower = cg_pure_lower(&psi);
        prop_assert!(lower <= cg_pure(&psi) + 1e-9);
        let w = bg_witness(&dm_from_pure(&psi));
        prop_assert!((w.raw - lower).abs() <= 1e-10);
        prop_assert!(w.permutation_term >= 0.0 && w.diagonal_term >= 0.0);
    }

    #[test]
    fn twirling_never_increases_cg(seed in any::<u64>(), d in 2usize..=5) {
        let psi = random_pure_state(dim(d), &mut seeded_rng(seed, 0));
        let projected = project_axisym(&dm_from_pure(&psi));
        prop_assert!(cg_axisym(projected.fidelity(), dim(d)) <= cg_pure(&psi) + 1e-9);
    }

    #[test]
    fn projection_idempotent_and_fidelity_preserving(seed in any::<u64>(), d in 2usize..=4) {
        let rho = random_density(dim(d), d, &mut seeded_rng(seed, 0));
        let once = project_axisym(&rho);
        let twice = project_axisym(&axisym_to_matrix(&once).unwrap());
        prop_assert!((once.a - twice.a).abs() <= 1e-12);
        prop_assert!((once.b - twice.b).abs() <= 1e-12);
        prop_assert!((once.c - twice.c).abs() <= 1e-12);
        prop_assert!((once.fidelity() - fidelity_phi(&rho)).abs() <= 1e-12);
    }

    #[test]
    fn distance_bound_is_lipschitz(seed in any::<u64>(), d in 2usize..=4, k in 1usize..4) {
        let mut rng = seeded_rng(seed, 0);
        let k = k.min(d - 1);
        let a = random_density(dim(d), d * d, &mut rng);
        let b = random_density(dim(d), 2, &mut rng);
        let gap = (distance_lower_bound(&a, k).unwrap() - distance_lower_bound(&b, k).unwrap()).abs();
        prop_assert!(gap <= hs_distance(&a, &b).unwrap() + 1e-12);
    }

    #[test]
    fn axisym_bound_below_curve(d in 2usize..=8, t in 0.0f64..=1.0) {
        let df = d as f64;
        let f = (df - 1.0) / df + t / df;
        prop_assert!(cg_axisym(f, dim(d)) <= cg_of_f(dim(d), f).unwrap().cg + 1e-12);
    }

    #[test]
    fn reshape_preserves_norm(n in (2usize..=6).prop_map(|h| 2 * h), mask in any::<u64>()) {
        let state = cluster_state(n).unwrap();
        // a half-size subset drawn from the mask bits
        let mut side: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).take(n / 2).collect();
        for q in 0..n {
            if side.len() < n / 2 && !side.contains(&q) {
                side.push(q);
            }
        }
        let psi = bipartition_reshape(&state, &Partition::new(n, &side).unwrap()).unwrap();
        prop_assert!((psi.amplitudes().norm_squared() - 1.0).abs() <= 1e-12);
        let total: f64 = schmidt(&psi).lambdas().iter().map(|l| l * l).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn noise_threshold_monotone(d in 2usize..=64, f1 in 0.0f64..=1.0, f2 in 0.0f64..=1.0) {
        let dim = Dim::with_cap(d, 64).unwrap();
        let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        prop_assert!(white_noise_threshold(dim, lo) <= white_noise_threshold(dim, hi));
    }
}

#[test]
fn curve_is_concave_with_affine_chord() {
    for d in 2..=8 {
        let df = d as f64;
        let lo = (df - 1.0) / df;
        let n = 1000;
        let grid: Vec<f64> = (0..=n).map(|i| lo + (1.0 - lo) * i as f64 / n as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&f| cg_of_f(dim(d), f).unwrap().cg).collect();
        for w in values.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-8, "d={d}");
        }
        for (&f, &v) in grid.iter().zip(&values) {
            assert!(v >= 1.0 - df * (1.0 - f) - 1e-12);
        }
        assert!(values[0].abs() < 1e-12 && (values[n] - 1.0).abs() < 1e-12);
    }
}
