//! Independent reference computations used to cross-check the bounds.
//!
//! Nothing here feeds a certified lower bound. The convex-roof estimate is an upper
//! bound by construction (any decomposition is feasible), so every lower bound must sit
//! below it; the constrained minimizer solves the pure-state curve problem numerically.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, ONE, ZERO};
use crate::random::{haar_isometry, seeded_rng};
use crate::state::{BipartiteOperator, DensityMatrix, Dim};

/// Eigenvalues below this are dropped from the decomposition.
const EIG_CUTOFF: f64 = 1e-14;
const DESCENT_ITERS: usize = 1000;
const ARMIJO: f64 = 1e-4;
/// Relative gain below which a descent stage stops.
const GAIN_TOL: f64 = 1e-9;
/// Objective level treated as converged to zero.
const FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBoundResult {
    pub value: f64,
    pub trials: usize,
    /// Number of pure states in the best decomposition found.
    pub best_decomposition_size: usize,
}

/// Blocks `C_k = Σ_i Y_ki V_i`; `d|det C_k|^{2/d}` equals `p_k · C_G(ψ_k)`.
struct RoofObjective {
    d: usize,
    /// Row `i` is `vec(V_i)`.
    vs: CMatrix,
}

impl RoofObjective {
    /// Row `k` is `vec(C_k)`.
    fn blocks(&self, y: &CMatrix) -> CMatrix {
        y * &self.vs
    }

    fn block(&self, rows: &CMatrix, k: usize) -> CMatrix {
        CMatrix::from_fn(self.d, self.d, |a, b| rows[(k, a * self.d + b)])
    }

    /// `Σ_k |det C_k|^q`.
    fn power_sum(&self, y: &CMatrix, q: f64) -> f64 {
        let rows = self.blocks(y);
        (0..rows.nrows()).map(|k| self.block(&rows, k).determinant().norm().powf(q)).sum()
    }

    /// The decomposition's average G-concurrence.
    fn value(&self, y: &CMatrix) -> f64 {
        let df = self.d as f64;
        df * self.power_sum(y, 2.0 / df)
    }

    /// Gradient of `power_sum` with respect to `conj(Y)`, up to a positive factor:
    /// `G_ki = |det C_k|^q · conj(tr(C_k⁻¹ V_i))`. Singular blocks contribute zero.
    fn gradient(&self, y: &CMatrix, q: f64) -> CMatrix {
        let rows = self.blocks(y);
        // row k holds |det C_k|^q · vec((C_k⁻¹)ᵀ), so that W·vsᵀ gives the traces
        let mut w = CMatrix::zeros(rows.nrows(), self.d * self.d);
        for k in 0..rows.nrows() {
            let ck = self.block(&rows, k);
            let weight = ck.determinant().norm().powf(q);
            if weight < 1e-300 {
                continue;
            }
            let Some(inv) = ck.try_inverse() else { continue };
            for a in 0..self.d {
                for b in 0..self.d {
                    w[(k, a * self.d + b)] = inv[(b, a)] * weight;
                }
            }
        }
        (w * self.vs.transpose()).map(|z| z.conj())
    }
}

/// Riemannian descent of `Σ|det C_k|^q` on the Stiefel manifold `Y†Y = 1` with polar
/// retraction and Armijo backtracking.
fn descend(obj: &RoofObjective, mut y: CMatrix, q: f64) -> CMatrix {
    let mut value = obj.power_sum(&y, q);
    let mut last_step = f64::INFINITY;
    for _ in 0..DESCENT_ITERS {
        let g = obj.gradient(&y, q);
        let yg = y.adjoint() * &g;
        let xi = &g - &y * ((&yg + yg.adjoint()) * c(0.5));
        let norm_sq = xi.norm_squared();
        if norm_sq < 1e-30 {
            break;
        }
        // warm start from twice the last accepted step, capped at unit displacement
        let mut step = (2.0 * last_step).min(norm_sq.sqrt().recip());
        let mut accepted = None;
        for _ in 0..60 {
            let trial = linalg::polar_unitary(&(&y - &xi * c(step)));
            let trial_value = obj.power_sum(&trial, q);
            if trial_value <= value - ARMIJO * step * norm_sq {
                accepted = Some((trial, trial_value));
                break;
            }
            step *= 0.5;
        }
        let Some((next, next_value)) = accepted else { break };
        last_step = step;
        let gain = value - next_value;
        y = next;
        value = next_value;
        if gain <= GAIN_TOL * value || value <= FLOOR {
            break;
        }
    }
    y
}

/// Smooth stage on `Σ|det C_k|²` (same zero set, no kink at singular blocks), then a
/// stage on the true objective. Returns the best true value seen.
fn refine(obj: &RoofObjective, y: CMatrix) -> f64 {
    let q = 2.0 / obj.d as f64;
    let start = obj.value(&y);
    let smooth = descend(obj, y, 2.0);
    let after_smooth = obj.value(&smooth);
    let exact = descend(obj, smooth, q);
    start.min(after_smooth).min(obj.value(&exact))
}

/// Upper estimate of the convex roof.
///
/// With `ρ = Σ_i μ_i |e_i⟩⟨e_i|`, every decomposition into `m ≥ r` pure states has
/// unnormalized members `Σ_i Y_ki √μ_i |e_i⟩` for an isometry `Y` (`m×r`). Trial 0 is
/// the eigendecomposition; the others draw a Haar isometry with `m` alternating between
/// `r` and `2r`. Each trial is refined by local descent and the minimum is kept.
pub fn convex_roof_upper(rho: &DensityMatrix, trials: usize, seed: u64) -> UpperBoundResult {
    let d = rho.dim().get();
    let (eigs, vecs) = linalg::eigh(rho.matrix());
    let kept: Vec<usize> = (0..eigs.len()).filter(|&i| eigs[i] > EIG_CUTOFF).collect();
    let r = kept.len();
    let vs = CMatrix::from_fn(r, d * d, |i, j| vecs[(j, kept[i])] * eigs[kept[i]].sqrt());
    let obj = RoofObjective { d, vs };
    let trials = trials.max(1);

    let runs: Vec<(f64, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let y = if t == 0 {
                CMatrix::from_fn(r, r, |i, j| if i == j { ONE } else { ZERO })
            } else {
                let m = if t % 2 == 0 { 2 * r } else { r };
                haar_isometry(m, r, &mut seeded_rng(seed, t as u64))
            };
            let size = y.nrows();
            (refine(&obj, y).max(0.0), size)
        })
        .collect();

    let mut best = (f64::INFINITY, 0);
    for run in runs {
        if run.0 < best.0 {
            best = run;
        }
    }
    UpperBoundResult { value: best.0.min(1.0), trials, best_decomposition_size: best.1 }
}

/// `Σ ln λ` on the feasible sphere, or `None` when some coefficient is not positive.
fn log_product(lambda: &[f64]) -> Option<f64> {
    lambda.iter().all(|&l| l > 0.0).then(|| lambda.iter().map(|l| l.ln()).sum())
}

/// Two-value points: `m` coefficients `α`, the remaining `d − m` equal to `β`.
fn two_value_seeds(d: usize, s: f64) -> Vec<Vec<f64>> {
    let df = d as f64;
    let mut seeds = Vec::new();
    for m in 1..d {
        let mf = m as f64;
        let disc = ((df - mf) * (df - s * s) / mf).max(0.0).sqrt();
        for sign in [-1.0, 1.0] {
            let alpha = (s + sign * disc) / df;
            let beta = (s - mf * alpha) / (df - mf);
            seeds.push((0..d).map(|j| if j < m { alpha } else { beta }).collect());
        }
    }
    seeds
}

/// Projected descent of `Σ ln λ` over `λ = √(F/d)·1 + √(1−F)·u`, `|u| = 1`, `u ⊥ 1`.
/// Returns `None` if the iterate reaches the boundary `λ_j = 0`.
fn descend_log_product(lambda: Vec<f64>, f: f64) -> Option<f64> {
    let d = lambda.len();
    let df = d as f64;
    let center = (f / df).sqrt();
    let radius = (1.0 - f).sqrt();
    if radius < 1e-15 {
        return log_product(&lambda);
    }
    let mut u: Vec<f64> = lambda.iter().map(|l| (l - center) / radius).collect();
    let to_lambda = |u: &[f64]| u.iter().map(|x| center + radius * x).collect::<Vec<_>>();
    let tangent = |v: &mut Vec<f64>, u: &[f64]| {
        let mean = v.iter().sum::<f64>() / df;
        v.iter_mut().for_each(|x| *x -= mean);
        let along: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(u).for_each(|(x, b)| *x -= along * b);
    };
    // re-centres as well, so rounding never drifts off the constraint set
    let normalize = |v: &mut Vec<f64>| {
        let mean = v.iter().sum::<f64>() / df;
        v.iter_mut().for_each(|x| *x -= mean);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
    };

    normalize(&mut u);
    let mut value = log_product(&to_lambda(&u))?;
    for _ in 0..2000 {
        let lam = to_lambda(&u);
        let mut grad: Vec<f64> = lam.iter().map(|l| radius / l).collect();
        tangent(&mut grad, &u);
        let norm_sq: f64 = grad.iter().map(|x| x * x).sum();
        if norm_sq < 1e-24 {
            break;
        }
        let mut step = 1.0 / norm_sq.sqrt();
        let mut moved = false;
        for _ in 0..60 {
            let mut next: Vec<f64> = u.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
            normalize(&mut next);
            match log_product(&to_lambda(&next)) {
                None => return None,
                Some(v) if v < value - 1e-15 => {
                    u = next;
                    value = v;
                    moved = true;
                    break;
                }
                Some(_) => step *= 0.5,
            }
        }
        if !moved {
            break;
        }
    }
    Some(value)
}

/// Numerical minimum of `d(Πλ)^{2/d}` subject to `Σλ = √(dF)`, `Σλ² = 1`, `λ ≥ 0`.
///
/// Seeds every two-value split plus `trials` random directions, then runs local descent.
/// Reaching `λ_j = 0` from a feasible start means the minimum is 0.
pub fn constrained_cg_min(dim: Dim, f: f64, trials: usize, seed: u64) -> Result<f64> {
    let d = dim.get();
    let df = d as f64;
    let lo = (df - 1.0) / df;
    if !(lo - 1e-12..=1.0 + 1e-12).contains(&f) || f.is_nan() {
        return Err(Error::FidelityOutOfRange { f, lo, hi: 1.0 });
    }
    let f = f.clamp(lo, 1.0);
    let mut starts = two_value_seeds(d, (df * f).sqrt());

    let center = (f / df).sqrt();
    let radius = (1.0 - f).sqrt();
    let mut rng = seeded_rng(seed, 0);
    for _ in 0..trials {
        let mut u: Vec<f64> = (0..d).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)).collect();
        let mean = u.iter().sum::<f64>() / df;
        u.iter_mut().for_each(|x| *x -= mean);
        let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        starts.push(u.iter().map(|x| center + radius * x / n).collect());
    }

    let mut best = f64::INFINITY;
    for start in starts {
        if start.iter().any(|&l| l <= 0.0) {
            // a feasible point outside the orthant: the connected feasible set meets λ_j = 0
            best = best.min(f64::NEG_INFINITY);
            continue;
        }
        match descend_log_product(start, f) {
            Some(v) => best = best.min(v),
            None => best = f64::NEG_INFINITY,
        }
    }
    Ok((df * (2.0 * best / df).exp()).clamp(0.0, 1.0))
}

/// Bisection for a root of `f` on `[lo, hi]`, which must bracket a sign change.
pub fn threshold_bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let lo_negative = f_lo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axisym::cg_axisym;
    use crate::pure_measures::{cg_of_f, cg_pure};
    use crate::random::{random_pure_state, random_pure_with_rank};
    use crate::state::dm_from_pure;

    fn dim(d: usize) -> Dim {
        Dim::new(d).unwrap()
    }

    #[test]
    fn bisect_linear() {
        let root = threshold_bisect(|x| x - 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((root - 0.5).abs() < 1e-12);
        let root = threshold_bisect(|x| 0.3 - x, 0.0, 1.0, 1e-12).unwrap();
        assert!((root - 0.3).abs() < 1e-12);
        assert!(threshold_bisect(|x| x + 1.0, 0.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn bisect_isotropic_axisym_threshold() {
        let d = dim(3);
        // cg_axisym is clamped at zero below the threshold, so bracket the unclamped margin
        let margin = |p: f64| crate::axisym::axisym_margin(p + (1.0 - p) / 9.0, d);
        let root = threshold_bisect(margin, 0.0, 1.0, 1e-12).unwrap();
        assert!((root - 0.625).abs() < 1e-9);
        assert!(cg_axisym(0.7 + 0.3 / 9.0, d) > 0.0);
    }

    #[test]
    fn pure_roof_is_exact() {
        let mut rng = seeded_rng(71, 0);
        for d in [2, 3] {
            let psi = random_pure_state(dim(d), &mut rng);
            let res = convex_roof_upper(&dm_from_pure(&psi), 4, 1);
            assert!((res.value - cg_pure(&psi)).abs() < 1e-10);
        }
        let psi = random_pure_with_rank(dim(3), 2, &mut rng);
        assert!(convex_roof_upper(&dm_from_pure(&psi), 2, 1).value < 1e-8);
    }

    #[test]
    fn maximally_mixed_qubits_roof_near_zero() {
        let res = convex_roof_upper(&DensityMatrix::maximally_mixed(dim(2)), 200, 3);
        assert!(res.value <= 0.05, "{}", res.value);
    }

    #[test]
    fn running_minimum_in_trials() {
        let rho = DensityMatrix::isotropic(dim(3), 0.8).unwrap();
        let few = convex_roof_upper(&rho, 3, 5).value;
        let more = convex_roof_upper(&rho, 9, 5).value;
        assert!(more <= few + 1e-15);
    }

    #[test]
    fn constrained_min_endpoints() {
        for d in 2..=5 {
            let top = constrained_cg_min(dim(d), 1.0, 10, 1).unwrap();
            assert!((top - 1.0).abs() < 1e-12);
            let lo = (d as f64 - 1.0) / d as f64;
            assert!(constrained_cg_min(dim(d), lo, 10, 1).unwrap() < 1e-9);
        }
        assert!(constrained_cg_min(dim(3), 0.5, 10, 1).is_err());
    }

    #[test]
    fn constrained_min_matches_closed_form() {
        for d in 2..=6 {
            for i in 0..=20 {
                let lo = (d as f64 - 1.0) / d as f64;
                let f = lo + (1.0 - lo) * i as f64 / 20.0;
                let numeric = constrained_cg_min(dim(d), f, 20, 2).unwrap();
                let closed = cg_of_f(dim(d), f).unwrap().cg;
                assert!(numeric >= closed - 1e-6, "d={d} F={f}: {numeric} < {closed}");
                assert!(numeric <= closed + 1e-4, "d={d} F={f}: {numeric} > {closed}");
            }
        }
    }
}
