use serde::Serialize;

use super::fef::{maximize_fef, rotate_to_fef};
use super::normal_form::{normal_form, NormalFormSummary, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::axisym::{cg_axisym, project_axisym};
use crate::state::{fidelity_phi, BipartiteOperator, DensityMatrix};
use crate::witness::{bg_witness, phase_optimized_bg, WitnessResult};

/// Above this local dimension the witness is not evaluated (its sum has d! terms).
pub const WITNESS_MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundConfig {
    pub use_nf: bool,
    pub use_lu: bool,
    pub use_phases: bool,
    pub restarts: usize,
    pub seed: u64,
    pub witness_max_dim: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { use_nf: true, use_lu: true, use_phases: true, restarts: 8, seed: 0, witness_max_dim: WITNESS_MAX_DIM }
    }
}

/// Bounds computed on one (normalized) representative of the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteReport {
    pub fidelity: f64,
    pub fidelity_optimized: Option<f64>,
    pub witness: Option<WitnessResult>,
    pub axisym_bound: f64,
    /// Multiplier carried from filtering (1 for the unfiltered route).
    pub scale: f64,
    /// `scale · max(witness, axisym_bound)`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalFormRoute {
    #[serde(flatten)]
    pub summary: NormalFormSummary,
    /// Absent when the normal form vanished.
    pub route: Option<RouteReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestBound {
    pub d: usize,
    pub direct: RouteReport,
    pub normal_form: Option<NormalFormRoute>,
    pub final_bound: f64,
    /// Set when the normal form vanished, which makes `final_bound = 0` exact.
    pub exact_zero: bool,
}

fn evaluate_route(rho: &DensityMatrix, scale: f64, config: &BoundConfig) -> RouteReport {
    let fidelity = fidelity_phi(rho);
    let (state, fidelity_optimized) = if config.use_lu {
        let fef = maximize_fef(rho, config.restarts, config.seed);
        if fef.f_max > fidelity {
            (rotate_to_fef(rho, &fef.correlation_unitary), Some(fef.f_max))
        } else {
            (rho.clone(), Some(fidelity))
        }
    } else {
        (rho.clone(), None)
    };

    let witness = (rho.dim().get() <= config.witness_max_dim).then(|| {
        if config.use_phases {
            phase_optimized_bg(&state, config.restarts, config.seed)
        } else {
            bg_witness(&state)
        }
    });
    let axisym_bound = cg_axisym(project_axisym(&state).fidelity(), rho.dim());
    let best = witness.as_ref().map_or(0.0, |w| w.clamped).max(axisym_bound);
    RouteReport { fidelity, fidelity_optimized, witness, axisym_bound, scale, bound: scale * best }
}

/// Best certified lower bound on `C_G(ρ)`.
///
/// The unfiltered state is always evaluated. With `use_nf`, the normal form `τ` is
/// evaluated too and its bounds are scaled by `tr τ`, since `C_G(ρ) = tr τ · C_G(τ/tr τ)`.
/// Each route optionally rotates to the best local-unitary frame before reading off the
/// witness and the axisymmetric bound.
pub fn best_bound(rho: &DensityMatrix, config: &BoundConfig) -> BestBound {
    let direct = evaluate_route(rho, 1.0, config);
    let mut final_bound = direct.bound;
    let mut exact_zero = false;

    let normal_form = config.use_nf.then(|| {
        let nf = normal_form(rho, DEFAULT_TOL, DEFAULT_MAX_ITER);
        let summary = nf.summary();
        if nf.vanished {
            exact_zero = true;
            return NormalFormRoute { summary, route: None };
        }
        let route = nf.tau.normalized().ok().map(|tau| evaluate_route(&tau, nf.trace_factor, config));
        if let Some(r) = &route {
            final_bound = final_bound.max(r.bound);
        }
        NormalFormRoute { summary, route }
    });

    if exact_zero {
        final_bound = 0.0;
    }
    BestBound { d: rho.dim().get(), direct, normal_form, final_bound: final_bound.max(0.0), exact_zero }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pure_measures::cg_pure;
    use crate::random::{random_pure_state, random_pure_with_rank, seeded_rng};
    use crate::state::{dm_from_pure, max_entangled, Dim};

    fn dim(d: usize) -> Dim {
        Dim::new(d).unwrap()
    }

    #[test]
    fn tight_on_max_entangled() {
        for d in 2..=6 {
            let b = best_bound(&dm_from_pure(&max_entangled(dim(d))), &BoundConfig::default());
            assert!((b.final_bound - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn isotropic_axisym_route() {
        let rho = DensityMatrix::isotropic(dim(3), 0.7).unwrap();
        let config = BoundConfig { use_nf: false, use_lu: false, use_phases: false, ..Default::default() };
        let b = best_bound(&rho, &config);
        assert!((b.direct.axisym_bound - 0.2).abs() < 1e-12);
        assert!(b.final_bound >= 0.2 - 1e-12);
    }

    #[test]
    fn exact_on_pure_states() {
        let mut rng = seeded_rng(61, 0);
        for d in [2, 3, 4] {
            for _ in 0..5 {
                let psi = random_pure_state(dim(d), &mut rng);
                let b = best_bound(&dm_from_pure(&psi), &BoundConfig::default());
                assert!((b.final_bound - cg_pure(&psi)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rank_deficient_is_exact_zero() {
        let mut rng = seeded_rng(62, 0);
        let psi = random_pure_with_rank(dim(3), 2, &mut rng);
        let b = best_bound(&dm_from_pure(&psi), &BoundConfig::default());
        assert!(b.exact_zero);
        assert_eq!(b.final_bound, 0.0);
    }

    #[test]
    fn aggregates_every_route() {
        let rho = DensityMatrix::isotropic(dim(3), 0.9).unwrap();
        let b = best_bound(&rho, &BoundConfig::default());
        assert!(b.final_bound >= b.direct.bound);
        assert!(b.final_bound >= b.direct.axisym_bound);
        if let Some(route) = b.normal_form.as_ref().and_then(|n| n.route.as_ref()) {
            assert!(b.final_bound >= route.bound);
        }
    }

    #[test]
    fn deterministic() {
        let rho = crate::random::random_density(dim(3), 3, &mut seeded_rng(63, 0));
        let config = BoundConfig { seed: 17, ..Default::default() };
        assert_eq!(best_bound(&rho, &config), best_bound(&rho, &config));
    }
}
