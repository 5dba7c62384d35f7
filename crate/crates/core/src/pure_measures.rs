//! Exact monotones of pure bipartite states and the pure-state lower bound.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::perm;
use crate::state::{dm_from_pure, partial_trace, schmidt, Dim, PureState, SchmidtSpectrum, Subsystem};

/// Coefficients below this fraction of the largest are treated as zero.
const RANK_TOL: f64 = 1e-15;

/// Slack allowed on the fidelity range of [`cg_of_f`].
const F_SLACK: f64 = 1e-12;

/// G-concurrence `d (λ₁⋯λ_d)^{2/d}` from the singular values.
pub fn cg_pure(psi: &PureState) -> f64 {
    cg_from_spectrum(&schmidt(psi))
}

pub fn cg_from_spectrum(spectrum: &SchmidtSpectrum) -> f64 {
    let lambdas = spectrum.lambdas();
    let d = lambdas.len() as f64;
    let top = lambdas.first().copied().unwrap_or(0.0);
    if lambdas.iter().any(|&l| l <= RANK_TOL * top) {
        return 0.0;
    }
    let log_sum: f64 = lambdas.iter().map(|l| l.ln()).sum();
    (d * (2.0 * log_sum / d).exp()).min(1.0)
}

/// Determinant route `d |det c|^{2/d}`; loses precision for large `d`.
pub fn cg_pure_via_det(psi: &PureState) -> f64 {
    let d = psi.dim().as_f64();
    d * psi.amplitudes().determinant().norm().powf(2.0 / d)
}

/// `√(d/(d−1) (1 − tr ρ_A²))`.
pub fn c2_pure(psi: &PureState) -> f64 {
    let d = psi.dim().as_f64();
    let rho_a = partial_trace(&dm_from_pure(psi), Subsystem::A);
    let purity = linalg::inner(&rho_a, &rho_a).re;
    (d / (d - 1.0) * (1.0 - purity)).max(0.0).sqrt()
}

/// Pure-state lower bound on the G-concurrence built from the diagonal `c_ii` and the
/// off-identity permutation products. May be negative.
pub fn cg_pure_lower(psi: &PureState) -> f64 {
    let c = psi.amplitudes();
    let d = psi.dim().get();
    let mut cross = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                cross += (c[(i, i)] * c[(j, j)].conj()).re;
            }
        }
    }
    let diag: f64 = (0..d).map(|i| c[(i, i)].norm_sqr()).sum();
    let weights = DMatrix::from_fn(d, d, |i, j| c[(i, j)].norm_sqr());
    cross - (d as f64 - 2.0) * diag - d as f64 * perm::nonidentity_root_sum(&weights)
}

/// Minimum of the pure-state G-concurrence at fixed fidelity `F` with `|Φ_d⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureCurvePoint {
    pub fidelity: f64,
    /// The single small Schmidt coefficient.
    pub alpha: f64,
    /// The `d − 1` equal large coefficients.
    pub beta: f64,
    pub cg: f64,
}

/// Closed-form minimum over Schmidt vectors, valid for `(d−1)/d ≤ F ≤ 1`.
pub fn cg_of_f(dim: Dim, f: f64) -> Result<PureCurvePoint> {
    let d = dim.as_f64();
    let lo = (d - 1.0) / d;
    if !(lo - F_SLACK..=1.0 + F_SLACK).contains(&f) {
        return Err(Error::FidelityOutOfRange { f, lo, hi: 1.0 });
    }
    let f = f.clamp(lo, 1.0);
    let sqrt_d = d.sqrt();
    let (sf, sg) = (f.sqrt(), (1.0 - f).sqrt());
    // rationalized form; gaps at rounding level are the lower endpoint itself
    let gap = d * f - (d - 1.0);
    let alpha = if gap <= 8.0 * f64::EPSILON * d { 0.0 } else { gap / (sqrt_d * (sf + (d - 1.0).sqrt() * sg)) };
    let beta = (sf + sg / (d - 1.0).sqrt()) / sqrt_d;
    let cg = if alpha == 0.0 {
        0.0
    } else {
        d * ((alpha.ln() + (d - 1.0) * beta.ln()) * 2.0 / d).exp()
    };
    Ok(PureCurvePoint { fidelity: f, alpha, beta, cg: cg.clamp(0.0, 1.0) })
}
