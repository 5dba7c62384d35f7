//! Nonlinear witness lower bound on the G-concurrence of mixed states.
//!
//! The bound is
//!
//! ```text
//! B(ρ) = Σ_{i≠j} Re⟨ii|ρ|jj⟩ − (d−2) Σ_i ⟨ii|ρ|ii⟩ − d Σ_{σ≠id} (Π_i ⟨iσ(i)|ρ|iσ(i)⟩)^{1/d}
//! ```
//!
//! and only reads the `d²` populations `⟨jk|ρ|jk⟩` plus the `d(d−1)/2` coherences
//! `⟨ii|ρ|jj⟩` with `i < j`. [`WitnessInputs`] gathers exactly those entries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::oracles::threshold_bisect;
use crate::perm;
use crate::random::{random_phases, seeded_rng};
use crate::state::{BipartiteOperator, Dim};

/// Coordinate ascent stops once a sweep gains less than this.
const PHASE_TOL: f64 = 1e-12;
const MAX_PHASE_SWEEPS: usize = 10_000;

/// The matrix entries the witness depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessInputs {
    d: usize,
    /// `⟨jk|ρ|jk⟩`.
    populations: DMatrix<f64>,
    /// `⟨ii|ρ|jj⟩` for `i < j`, row-major over the upper triangle.
    coherences: Vec<Complex64>,
}

impl WitnessInputs {
    pub fn gather<O: BipartiteOperator + ?Sized>(op: &O) -> Self {
        let d = op.dim().get();
        let populations = crate::state::populations(op);
        let mut coherences = Vec::with_capacity(d * (d - 1) / 2);
        for i in 0..d {
            for j in (i + 1)..d {
                coherences.push(op.entry(i, i, j, j));
            }
        }
        Self { d, populations, coherences }
    }

    /// Number of density-matrix entries read: `d² + d(d−1)/2`.
    pub fn entries_read(&self) -> usize {
        self.populations.len() + self.coherences.len()
    }

    /// Hermitian `d×d` matrix `M_ij = ⟨ii|ρ|jj⟩`.
    fn coherence_matrix(&self) -> CMatrix {
        let d = self.d;
        let mut m = CMatrix::zeros(d, d);
        let mut idx = 0;
        for i in 0..d {
            m[(i, i)] = Complex64::new(self.populations[(i, i)], 0.0);
            for j in (i + 1)..d {
                m[(i, j)] = self.coherences[idx];
                m[(j, i)] = self.coherences[idx].conj();
                idx += 1;
            }
        }
        m
    }

    fn positive_term(&self) -> f64 {
        2.0 * self.coherences.iter().map(|z| z.re).sum::<f64>()
    }

    fn diagonal_term(&self) -> f64 {
        let diag: f64 = (0..self.d).map(|i| self.populations[(i, i)]).sum();
        (self.d as f64 - 2.0) * diag
    }

    fn permutation_term(&self) -> f64 {
        let clipped = self.populations.map(|p| p.max(0.0));
        self.d as f64 * perm::nonidentity_root_sum(&clipped)
    }
}

/// Witness value together with its three terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessResult {
    pub raw: f64,
    pub clamped: f64,
    pub positive_term: f64,
    pub diagonal_term: f64,
    pub permutation_term: f64,
    /// `(θ_0..θ_{d−1}, φ_0..φ_{d−1})` of the local phase rotation, when one was applied.
    pub phases_applied: Option<Vec<f64>>,
}

impl WitnessResult {
    fn from_terms(positive_term: f64, diagonal_term: f64, permutation_term: f64) -> Self {
        let raw = positive_term - diagonal_term - permutation_term;
        Self { raw, clamped: raw.max(0.0), positive_term, diagonal_term, permutation_term, phases_applied: None }
    }
}

pub fn bg_witness<O: BipartiteOperator + ?Sized>(rho: &O) -> WitnessResult {
    bg_from_inputs(&WitnessInputs::gather(rho))
}

pub fn bg_from_inputs(inputs: &WitnessInputs) -> WitnessResult {
    WitnessResult::from_terms(inputs.positive_term(), inputs.diagonal_term(), inputs.permutation_term())
}

/// Witness after the best local phase rotation `diag(e^{iθ}) ⊗ diag(e^{iφ})`.
///
/// Such rotations leave populations untouched and only rotate the coherences, so the
/// problem is `max Σ_{i≠j} Re(e^{i(ψ_i−ψ_j)} M_ij)` over `ψ = θ + φ`. Start 0 uses the
/// phases of the leading eigenvector of `M`; starts `1..restarts` are seeded uniform
/// phases. Each start runs cyclic coordinate ascent, which never decreases the objective.
pub fn phase_optimized_bg<O: BipartiteOperator + ?Sized>(rho: &O, restarts: usize, seed: u64) -> WitnessResult {
    let inputs = WitnessInputs::gather(rho);
    let base = bg_from_inputs(&inputs);
    let d = inputs.d;
    let m = inputs.coherence_matrix();

    let starts = restarts.max(1);
    let results: Vec<(f64, Vec<f64>)> = (0..starts)
        .into_par_iter()
        .map(|idx| {
            let init = if idx == 0 {
                eigenvector_phases(&m)
            } else {
                random_phases(d, &mut seeded_rng(seed, idx as u64))
            };
            let psi = coordinate_ascent(&m, init);
            (rotated_positive_term(&m, &psi), psi)
        })
        .collect();

    let mut best = (inputs.positive_term(), vec![0.0; d]);
    for (value, psi) in results {
        if value > best.0 {
            best = (value, psi);
        }
    }
    let mut out = WitnessResult::from_terms(best.0, base.diagonal_term, base.permutation_term);
    let mut phases = best.1;
    phases.extend(std::iter::repeat_n(0.0, d));
    out.phases_applied = Some(phases);
    out
}

/// `Σ_{i≠j} Re(e^{i(ψ_i−ψ_j)} M_ij)`.
fn rotated_positive_term(m: &CMatrix, psi: &[f64]) -> f64 {
    let d = psi.len();
    let mut acc = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            acc += 2.0 * (Complex64::from_polar(1.0, psi[i] - psi[j]) * m[(i, j)]).re;
        }
    }
    acc
}

fn eigenvector_phases(m: &CMatrix) -> Vec<f64> {
    let (_, vecs) = linalg::eigh(m);
    let top = vecs.column(m.ncols() - 1);
    // z_i = e^{−iψ_i} aligned with the leading eigenvector
    top.iter().map(|z| if z.norm() > 0.0 { -z.arg() } else { 0.0 }).collect()
}

fn coordinate_ascent(m: &CMatrix, mut psi: Vec<f64>) -> Vec<f64> {
    let d = psi.len();
    let mut value = rotated_positive_term(m, &psi);
    for _ in 0..MAX_PHASE_SWEEPS {
        for k in 0..d {
            // terms in ψ_k: 2 Re(e^{iψ_k} g_k), g_k = Σ_{j≠k} M_kj e^{−iψ_j}
            let g: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| m[(k, j)] * Complex64::from_polar(1.0, -psi[j]))
                .sum();
            if g.norm() > 0.0 {
                psi[k] = -g.arg();
            }
        }
        let next = rotated_positive_term(m, &psi);
        let gained = next - value;
        value = next;
        if gained < PHASE_TOL {
            break;
        }
    }
    let gauge = psi[0];
    psi.iter().map(|p| (p - gauge).rem_euclid(std::f64::consts::TAU)).collect()
}

/// Witness value on the isotropic state `p|Φ_d⟩⟨Φ_d| + (1−p) 1/d²`.
///
/// Populations take two values (`a` on `|ii⟩`, `c` elsewhere), so a permutation's product
/// depends only on its number of fixed points; the sum is grouped by rencontres numbers.
pub fn isotropic_witness_raw(dim: Dim, p: f64) -> f64 {
    let d = dim.get();
    let df = dim.as_f64();
    let a = p / df + (1.0 - p) / (df * df);
    let c = (1.0 - p) / (df * df);
    let positive = (df - 1.0) * p;
    let diagonal = (df - 2.0) * df * a;
    let mut root_sum = 0.0;
    for fixed in 0..d.saturating_sub(1) {
        let count = perm::binomial(d, fixed) * perm::derangements(d - fixed);
        if count == 0.0 {
            continue;
        }
        let term = if c == 0.0 {
            0.0
        } else {
            (a.ln() * fixed as f64 + c.ln() * (d - fixed) as f64).exp().powf(1.0 / df)
        };
        root_sum += count * term;
    }
    positive - diagonal - df * root_sum
}

/// Smallest isotropic weight `p` at which the witness turns positive.
pub fn isotropic_threshold(dim: Dim) -> Result<f64> {
    let f = |p: f64| isotropic_witness_raw(dim, p);
    // one sign change on a coarse grid before bisecting
    let grid: Vec<f64> = (0..=200).map(|i| f(i as f64 / 200.0)).collect();
    let changes = grid.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    if changes != 1 || grid[0] >= 0.0 || grid[200] <= 0.0 {
        return Err(Error::NoSignChange { lo: 0.0, hi: 1.0 });
    }
    threshold_bisect(f, 0.0, 1.0, 1e-12)
}
