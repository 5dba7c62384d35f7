//! Linear cluster states, their equal bipartitions, and white-noise robustness of the
//! full Schmidt rank across a cut.
//!
//! Qubit 0 is the most significant bit of the amplitude index. The chain is built as
//! `|+⟩^⊗n`, then `CZ` on every neighbouring pair, then a Hadamard on every odd-indexed
//! qubit. For `n = 4` this gauge gives exactly `½(|0000⟩+|0111⟩+|1011⟩+|1100⟩)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::axisym::cg_axisym;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pure_measures::cg_pure;
use crate::slopt::maximize_fef_pure;
use crate::state::{dm_from_pure, fidelity_phi, schmidt, Dim, PureState};

pub const MIN_QUBITS: usize = 4;
pub const MAX_QUBITS: usize = 12;

/// Largest bipartite local dimension reached by an equal cut of `MAX_QUBITS` qubits.
pub const MAX_CUT_DIM: usize = 1 << (MAX_QUBITS / 2);

/// Relative singular-value cutoff for the Schmidt rank.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiQubitState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl MultiQubitState {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Shape { expected: format!("{}", 1usize << n_qubits), found: amplitudes.len().to_string() });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > crate::state::NORM_TOL * 1e2 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Value of qubit `q` in basis index `x`.
    fn bit(&self, x: usize, q: usize) -> usize {
        (x >> (self.n_qubits - 1 - q)) & 1
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n % 2 == 1 || !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(Error::InvalidQubitCount(n));
    }
    Ok(())
}

/// Linear cluster state on `n` qubits in the gauge described in the module docs.
pub fn cluster_state(n: usize) -> Result<MultiQubitState> {
    check_qubits(n)?;
    let dim = 1usize << n;
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let scale = (dim as f64).sqrt().recip();
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|x| {
            let edges: usize = (0..n - 1).map(|q| bit(x, q) & bit(x, q + 1)).sum();
            Complex64::new(if edges.is_multiple_of(2) { scale } else { -scale }, 0.0)
        })
        .collect();

    let h = std::f64::consts::FRAC_1_SQRT_2;
    for q in (1..n).step_by(2) {
        let mask = 1 << (n - 1 - q);
        for x in 0..dim {
            if x & mask == 0 {
                let (a0, a1) = (amps[x], amps[x | mask]);
                amps[x] = (a0 + a1) * h;
                amps[x | mask] = (a0 - a1) * h;
            }
        }
    }
    Ok(MultiQubitState { n_qubits: n, amplitudes: amps })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    n_qubits: usize,
    side_a: Vec<usize>,
}

impl Partition {
    /// `side_a` is sorted on construction and must hold exactly half of the qubits.
    pub fn new(n_qubits: usize, side_a: &[usize]) -> Result<Self> {
        let mut side_a = side_a.to_vec();
        side_a.sort_unstable();
        side_a.dedup();
        if n_qubits % 2 == 1 || side_a.len() != n_qubits / 2 {
            return Err(Error::InvalidPartition(format!("{side_a:?} is not half of {n_qubits} qubits")));
        }
        if side_a.iter().any(|&q| q >= n_qubits) {
            return Err(Error::InvalidPartition(format!("{side_a:?} has a qubit outside 0..{n_qubits}")));
        }
        Ok(Self { n_qubits, side_a })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !self.side_a.contains(q)).collect()
    }

    /// Letters per side, e.g. `(AC)(BD)`.
    pub fn label(&self) -> String {
        let letters = |qs: &[usize]| qs.iter().map(|&q| char::from(b'A' + q as u8)).collect::<String>();
        format!("({})({})", letters(&self.side_a), letters(&self.side_b()))
    }
}

/// Amplitude matrix across the cut: rows index `side_a` (first listed qubit most
/// significant), columns index the remaining qubits in ascending order.
pub fn bipartition_reshape(state: &MultiQubitState, part: &Partition) -> Result<PureState> {
    if state.n_qubits != part.n_qubits {
        return Err(Error::DimensionMismatch { left: state.n_qubits, right: part.n_qubits });
    }
    let half = part.n_qubits / 2;
    let d = 1usize << half;
    let side_b = part.side_b();
    let mut c = CMatrix::zeros(d, d);
    for (x, amp) in state.amplitudes.iter().enumerate() {
        let index = |qs: &[usize]| qs.iter().fold(0, |acc, &q| (acc << 1) | state.bit(x, q));
        c[(index(&part.side_a), index(&side_b))] = *amp;
    }
    PureState::normalized(Dim::with_cap(d, MAX_CUT_DIM)?, c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub d: Dim,
    pub f_opt: f64,
    pub w_star: f64,
    /// Quoted comparison constant, never computed here.
    pub gme_reference: Option<f64>,
}

/// White-noise weight at which `(1−w)·f + w/d²` reaches `(d−1)/d`, or 0 if `f` is already
/// at or below that level.
pub fn white_noise_threshold(dim: Dim, f: f64) -> f64 {
    let d = dim.as_f64();
    let level = (d - 1.0) / d;
    if f <= level {
        return 0.0;
    }
    ((f - level) / (f - 1.0 / (d * d))).clamp(0.0, 1.0)
}

/// Robustness of full Schmidt rank of `psi` against white noise, certified by the
/// axisymmetric bound. With `with_lu_opt` the fidelity is first maximized over local
/// unitaries (on the amplitude matrix directly, which scales to `d = 64`).
pub fn noise_threshold(psi: &PureState, with_lu_opt: bool, restarts: usize, seed: u64) -> ThresholdResult {
    let f_opt = if with_lu_opt {
        maximize_fef_pure(psi, restarts, seed).f_max
    } else {
        fidelity_phi(&dm_from_pure(psi))
    };
    ThresholdResult { d: psi.dim(), f_opt, w_star: white_noise_threshold(psi.dim(), f_opt), gme_reference: None }
}

/// Axisymmetric bound of `(1−w)|ψ⟩⟨ψ| + w·1/d²` after rotating to the optimal frame.
pub fn noisy_axisym_bound(dim: Dim, f_opt: f64, w: f64) -> f64 {
    let d = dim.as_f64();
    cg_axisym((1.0 - w) * f_opt + w / (d * d), dim)
}

/// Quoted genuine-multipartite-entanglement noise tolerance for the cluster state.
pub fn gme_reference(n: usize) -> f64 {
    if n == 4 {
        8.0 / 13.0
    } else {
        let third = n as f64 / 3.0;
        1.0 - third * 2f64.powf(-third)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterRow {
    pub partition: String,
    pub side_a: Vec<usize>,
    pub schmidt_rank: usize,
    pub cg_pure: f64,
    /// Full Schmidt rank across the cut; otherwise `w_star` is 0 by construction.
    pub applicable: bool,
    pub threshold: ThresholdResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    pub n_qubits: usize,
    pub d: Dim,
    /// `2^{−n/2}`, the expected scale of `w_star`.
    pub scaling_reference: f64,
    pub gme_reference: f64,
    pub rows: Vec<ClusterRow>,
}

/// Half-size subsets of `0..n` that contain qubit 0, in lexicographic order.
fn half_cuts(n: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, n: usize, need: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if need == 0 {
            out.push(acc.clone());
            return;
        }
        for q in start..=n - need {
            acc.push(q);
            extend(q + 1, n, need - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    extend(1, n, n / 2 - 1, &mut vec![0], &mut out);
    out
}

/// One row per equal bipartition (each unordered cut once, labelled with qubit 0 on
/// side A), sorted by `side_a`.
pub fn cluster_report(n: usize, restarts: usize, seed: u64) -> Result<ClusterReport> {
    let state = cluster_state(n)?;
    let reference = gme_reference(n);
    let rows = half_cuts(n)
        .into_par_iter()
        .map(|side_a| {
            let part = Partition::new(n, &side_a)?;
            let psi = bipartition_reshape(&state, &part)?;
            let d = psi.dim().get();
            let schmidt_rank = schmidt(&psi).rank(RANK_TOL);
            let applicable = schmidt_rank == d;
            let mut threshold = noise_threshold(&psi, true, restarts, seed);
            threshold.gme_reference = Some(reference);
            Ok(ClusterRow { partition: part.label(), side_a, schmidt_rank, cg_pure: cg_pure(&psi), applicable, threshold })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClusterReport {
        n_qubits: n,
        d: Dim::with_cap(1 << (n / 2), MAX_CUT_DIM)?,
        scaling_reference: 2f64.powf(-(n as f64) / 2.0),
        gme_reference: reference,
        rows,
    })
}
