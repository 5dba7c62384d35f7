use serde::Serialize;

use crate::linalg::{self, c, CMatrix};
use crate::state::{partial_trace_matrix, BipartiteOperator, DensityMatrix, Subsystem, UnnormalizedState};

/// Trace or marginal eigenvalue below which the normal form is declared to vanish.
pub const VANISH_TOL: f64 = 1e-12;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormResult {
    pub tau: UnnormalizedState,
    /// `tr τ`; the G-concurrence of the input equals `trace_factor · C_G(τ / tr τ)`.
    pub trace_factor: f64,
    pub converged: bool,
    /// Number of filtering steps applied.
    pub iterations: usize,
    pub vanished: bool,
    /// `tr τ` before the first step and after every step.
    pub trace_history: Vec<f64>,
}

/// Diagnostic summary without the matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalFormSummary {
    pub trace_factor: f64,
    pub converged: bool,
    pub iterations: usize,
    pub vanished: bool,
}

impl NormalFormResult {
    pub fn summary(&self) -> NormalFormSummary {
        NormalFormSummary {
            trace_factor: self.trace_factor,
            converged: self.converged,
            iterations: self.iterations,
            vanished: self.vanished,
        }
    }
}

/// Largest entry of `m / tr m − 1/d`.
fn marginal_deviation(m: &CMatrix) -> f64 {
    let d = m.nrows();
    let tr = linalg::trace(m).re;
    let target = CMatrix::identity(d, d) * c(1.0 / d as f64);
    linalg::max_abs_diff(&m.unscale(tr), &target)
}

/// Alternating determinant-one local filtering towards maximally mixed marginals.
///
/// Each step takes the current marginal `m` on one side and applies
/// `f = det(m)^{1/(2d)} m^{−1/2}` there, so `det f = 1` and the G-concurrence of the
/// unnormalized state is unchanged. The new marginal is `det(m)^{1/d}·1`, so by AM–GM
/// the trace never increases.
pub fn normal_form(rho: &DensityMatrix, tol: f64, max_iter: usize) -> NormalFormResult {
    let dim = rho.dim();
    let d = dim.get();
    let mut tau = rho.matrix().clone();
    let mut side = Subsystem::A;
    let mut trace_history = vec![linalg::trace(&tau).re];
    let mut iterations = 0;

    let finish = |tau: CMatrix, iterations, converged, vanished, trace_history: Vec<f64>| {
        let trace_factor = *trace_history.last().expect("history starts non-empty");
        NormalFormResult {
            tau: UnnormalizedState::from_trusted(dim, tau),
            trace_factor: trace_factor.max(0.0),
            converged,
            iterations,
            vanished,
            trace_history,
        }
    };

    loop {
        let tr = *trace_history.last().unwrap();
        if tr < VANISH_TOL {
            return finish(tau, iterations, false, true, trace_history);
        }
        let ma = partial_trace_matrix(&tau, d, Subsystem::A);
        let mb = partial_trace_matrix(&tau, d, Subsystem::B);
        if marginal_deviation(&ma).max(marginal_deviation(&mb)) < tol {
            return finish(tau, iterations, true, false, trace_history);
        }
        if iterations >= max_iter {
            return finish(tau, iterations, false, false, trace_history);
        }

        let m = match side {
            Subsystem::A => ma,
            Subsystem::B => mb,
        };
        let (eigs, _) = linalg::eigh(&m);
        if eigs[0] < VANISH_TOL {
            return finish(tau, iterations, false, true, trace_history);
        }
        let log_det: f64 = eigs.iter().map(|e| e.ln()).sum();
        let scale = (log_det / (2.0 * d as f64)).exp();
        let filter = linalg::hermitian_function(&m, |x| scale / x.sqrt());
        tau = crate::state::conjugate_one_side(&tau, d, &filter, side);

        iterations += 1;
        trace_history.push(linalg::trace(&tau).re);
        side = side.other();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pure_measures::cg_pure;
    use crate::random::{random_density, random_pure_state, random_pure_with_rank, seeded_rng};
    use crate::state::{dm_from_pure, max_entangled, partial_trace, Dim, PureState};

    fn dim(d: usize) -> Dim {
        Dim::new(d).unwrap()
    }

    #[test]
    fn max_entangled_is_already_normal() {
        for d in 2..=5 {
            let rho = dm_from_pure(&max_entangled(dim(d)));
            let nf = normal_form(&rho, DEFAULT_TOL, DEFAULT_MAX_ITER);
            assert!(nf.converged && !nf.vanished);
            assert!(nf.iterations <= 1);
            assert!((nf.trace_factor - 1.0).abs() < 1e-12);
            assert!(linalg::max_abs_diff(nf.tau.matrix(), rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn full_rank_pure_trace_is_cg() {
        let mut rng = seeded_rng(41, 0);
        for d in [2, 3, 4] {
            for _ in 0..10 {
                let psi = random_pure_state(dim(d), &mut rng);
                let nf = normal_form(&dm_from_pure(&psi), DEFAULT_TOL, DEFAULT_MAX_ITER);
                assert!(nf.converged);

                // oracle: c = U diag(λ) V†, filter diag((Πλ)^{1/d}/λ_j) in the Schmidt basis
                let svd = psi.amplitudes().clone().svd(true, true);
                let lambdas = &svd.singular_values;
                let gm = lambdas.iter().map(|l| l.ln()).sum::<f64>() / d as f64;
                let filtered = lambdas.map(|l| gm.exp() / l);
                let c_new = svd.u.unwrap()
                    * CMatrix::from_diagonal(&filtered.map(c))
                    * CMatrix::from_diagonal(&lambdas.map(c))
                    * svd.v_t.unwrap();
                let oracle_trace = c_new.norm_squared();
                assert!((nf.trace_factor - oracle_trace).abs() < 1e-8);
                assert!((nf.trace_factor - cg_pure(&psi) / 1.0).abs() < 1e-8 * d as f64);

                let normalized = nf.tau.normalized().unwrap();
                let (eigs, vecs) = linalg::eigh(normalized.matrix());
                assert!((eigs[d * d - 1] - 1.0).abs() < 1e-8);
                let top = linalg::unvec(&vecs.column(d * d - 1).into_owned(), d, d);
                let top = PureState::normalized(dim(d), top).unwrap();
                assert!((cg_pure(&top) - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn rank_deficient_pure_vanishes() {
        let mut rng = seeded_rng(42, 0);
        let psi = random_pure_with_rank(dim(3), 2, &mut rng);
        let nf = normal_form(&dm_from_pure(&psi), DEFAULT_TOL, DEFAULT_MAX_ITER);
        assert!(nf.vanished);
        let nf = normal_form(&dm_from_pure(&PureState::basis(dim(3), 0, 1)), DEFAULT_TOL, DEFAULT_MAX_ITER);
        assert!(nf.vanished);
    }

    #[test]
    fn mixed_state_marginals_and_trace() {
        let mut rng = seeded_rng(43, 0);
        for _ in 0..10 {
            let rho = random_density(dim(3), 9, &mut rng);
            let nf = normal_form(&rho, DEFAULT_TOL, DEFAULT_MAX_ITER);
            assert!(nf.converged, "iterations {}", nf.iterations);
            for w in nf.trace_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-14);
            }
            let n = nf.tau.normalized().unwrap();
            for side in [Subsystem::A, Subsystem::B] {
                let m = partial_trace(&n, side);
                let target = CMatrix::identity(3, 3) * c(1.0 / 3.0);
                assert!(linalg::max_abs_diff(&m, &target) < 1e-8);
            }
        }
    }
}
