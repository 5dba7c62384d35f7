//! Fully entangled fraction maximized over local unitaries.
//!
//! For unitaries `U_A, U_B` the rotated fidelity is
//! `⟨Φ_d|(U_A⊗U_B)† ρ (U_A⊗U_B)|Φ_d⟩ = ⟨Φ_W|ρ|Φ_W⟩` with `|Φ_W⟩ = (W⊗1)|Φ_d⟩` and
//! `W = U_A U_Bᵀ`, because `(1⊗U_B)|Φ_d⟩ = (U_Bᵀ⊗1)|Φ_d⟩`. The search therefore runs over a
//! single unitary `W`, with objective `F(W) = (1/d) vec(W)† ρ vec(W)`.
//!
//! Power–polar update: `W ← polar(unvec(ρ vec W))`. Since `ρ ⪰ 0` the objective is convex
//! in `W`, so `F(W_new) ≥ F(W) + (2/d) Re⟨W_new − W, ρW⟩ ≥ F(W)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{self, CMatrix};
use crate::random::{haar_unitary, seeded_rng};
use crate::state::{apply_local, BipartiteOperator, DensityMatrix, PureState};

const FEF_TOL: f64 = 1e-12;
const MAX_FEF_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FefResult {
    pub f_max: f64,
    /// `W` with `|Φ_W⟩ = (1/√d) Σ_jk W_jk |jk⟩` the best maximally entangled state.
    #[serde(skip)]
    pub correlation_unitary: CMatrix,
    pub restarts_used: usize,
    /// Power–polar steps taken by the winning start.
    pub iterations: usize,
}

/// Applies `ρ` to `vec(W)` and reshapes back.
trait QuadraticForm: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, w: &CMatrix) -> CMatrix;

    fn value(&self, w: &CMatrix) -> f64 {
        linalg::inner(w, &self.apply(w)).re / self.dim() as f64
    }
}

struct Mixed<'a>(&'a DensityMatrix);

impl QuadraticForm for Mixed<'_> {
    fn dim(&self) -> usize {
        self.0.dim().get()
    }
    fn apply(&self, w: &CMatrix) -> CMatrix {
        let d = self.dim();
        linalg::unvec(&(self.0.matrix() * linalg::vec_rows(w)), d, d)
    }
}

/// Rank-one `ρ = |ψ⟩⟨ψ|`: `unvec(ρ vec W) = c ⟨c, W⟩`.
struct Pure<'a>(&'a PureState);

impl QuadraticForm for Pure<'_> {
    fn dim(&self) -> usize {
        self.0.dim().get()
    }
    fn apply(&self, w: &CMatrix) -> CMatrix {
        let amps = self.0.amplitudes();
        amps * linalg::inner(amps, w)
    }
}

/// One power–polar run; stops when the gain drops below tolerance and returns the
/// previous iterate if a step ever decreases the objective.
fn ascend<Q: QuadraticForm>(form: &Q, start: CMatrix) -> (f64, CMatrix, usize) {
    let mut w = start;
    let mut value = form.value(&w);
    for iter in 0..MAX_FEF_ITER {
        let next = linalg::polar_unitary(&form.apply(&w));
        let next_value = form.value(&next);
        if next_value < value - FEF_TOL {
            return (value, w, iter);
        }
        let gained = next_value - value;
        w = next;
        value = next_value;
        if gained < FEF_TOL {
            return (value, w, iter + 1);
        }
    }
    (value, w, MAX_FEF_ITER)
}

fn multistart<Q: QuadraticForm>(form: &Q, restarts: usize, seed: u64) -> FefResult {
    let d = form.dim();
    let starts = restarts.max(1);
    let runs: Vec<(f64, CMatrix, usize)> = (0..starts)
        .into_par_iter()
        .map(|idx| {
            let start = if idx == 0 {
                CMatrix::identity(d, d)
            } else {
                haar_unitary(d, &mut seeded_rng(seed, idx as u64))
            };
            ascend(form, start)
        })
        .collect();
    let mut best: Option<(f64, CMatrix, usize)> = None;
    for run in runs {
        if best.as_ref().is_none_or(|b| run.0 > b.0) {
            best = Some(run);
        }
    }
    let (f_max, w, iterations) = best.expect("at least one start");
    FefResult { f_max: f_max.clamp(0.0, 1.0), correlation_unitary: w, restarts_used: starts, iterations }
}

/// Multi-start maximization: start 0 is the identity, starts `1..restarts` are seeded
/// Haar-random unitaries. Ties keep the lowest start index.
pub fn maximize_fef(rho: &DensityMatrix, restarts: usize, seed: u64) -> FefResult {
    multistart(&Mixed(rho), restarts, seed)
}

/// Same iteration for a pure state, using only its `d×d` amplitude matrix.
pub fn maximize_fef_pure(psi: &PureState, restarts: usize, seed: u64) -> FefResult {
    multistart(&Pure(psi), restarts, seed)
}

/// `(W†⊗1) ρ (W⊗1)`, whose fidelity with `|Φ_d⟩` is `F(W)`.
pub fn rotate_to_fef(rho: &DensityMatrix, w: &CMatrix) -> DensityMatrix {
    let d = rho.dim().get();
    let rotated = apply_local(rho, &w.adjoint(), &CMatrix::identity(d, d)).expect("unitary is nonsingular");
    DensityMatrix::from_trusted(rho.dim(), rotated.matrix().clone())
}
