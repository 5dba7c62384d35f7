//! Seeded generators for random states and unitaries.
//!
//! Every consumer derives its stream from `(seed, index)`, so parallel restarts draw the
//! same numbers regardless of scheduling.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMatrix};
use crate::state::{DensityMatrix, Dim, PureState};

/// Independent ChaCha stream for `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-distributed `n×n` unitary (QR of a Ginibre matrix with the phase of `R` removed).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c(1.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Haar-random `rows×cols` isometry (`rows ≥ cols`).
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    haar_unitary(rows, rng).columns(0, cols).into_owned()
}

/// Unitarily invariant random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: Dim, rng: &mut R) -> PureState {
    let d = dim.get();
    PureState::normalized(dim, ginibre(d, d, rng)).expect("gaussian amplitudes are nonzero")
}

/// Random pure state whose Schmidt rank is at most `k`.
pub fn random_pure_with_rank<R: Rng + ?Sized>(dim: Dim, k: usize, rng: &mut R) -> PureState {
    let d = dim.get();
    let amps = ginibre(d, k, rng) * ginibre(k, d, rng);
    PureState::normalized(dim, amps).expect("gaussian amplitudes are nonzero")
}

/// Induced-measure random state `G G† / tr(G G†)` with `G` of size `d²×rank`.
pub fn random_density<R: Rng + ?Sized>(dim: Dim, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim.composite(), rank, rng);
    let m = &g * g.adjoint();
    let tr = crate::linalg::trace(&m).re;
    DensityMatrix::from_trusted(dim, crate::linalg::hermitian_part(&m.unscale(tr)))
}

/// Random mixture of pure states with Schmidt rank at most `k`.
pub fn random_schmidt_bounded<R: Rng + ?Sized>(
    dim: Dim,
    k: usize,
    terms: usize,
    rng: &mut R,
) -> DensityMatrix {
    let n = dim.composite();
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut m = CMatrix::zeros(n, n);
    for w in weights {
        let v = random_pure_with_rank(dim, k, rng).to_vector();
        m += (&v * v.adjoint()) * c(w / total);
    }
    DensityMatrix::from_trusted(dim, crate::linalg::hermitian_part(&m))
}

/// `(1−w)|ψ⟩⟨ψ| + w·σ` with `ψ` Haar-random and `σ` a full-rank induced-measure state.
pub fn random_noisy_pure<R: Rng + ?Sized>(dim: Dim, w: f64, rng: &mut R) -> DensityMatrix {
    let psi = crate::state::dm_from_pure(&random_pure_state(dim, rng));
    let noise = random_density(dim, dim.composite(), rng);
    psi.mix(&noise, w)
}

/// Uniform phases in `[0, 2π)`.
pub fn random_phases<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect()
}
