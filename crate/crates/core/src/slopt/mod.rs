//! Bound sharpening through local filtering and local-unitary optimization.
//!
//! The G-concurrence is invariant under `SL(d,ℂ)⊗SL(d,ℂ)` and homogeneous of degree one,
//! so any determinant-one filtering of `ρ` preserves it exactly. Filtering to the normal
//! form, rotating to the best maximally entangled frame, and only then projecting onto
//! the axisymmetric family (or evaluating the witness) yields a sharper bound.

mod fef;
mod normal_form;
mod pipeline;

pub use fef::{maximize_fef, maximize_fef_pure, rotate_to_fef, FefResult};
pub use normal_form::{
    normal_form, NormalFormResult, NormalFormSummary, DEFAULT_MAX_ITER, DEFAULT_TOL, VANISH_TOL,
};
pub use pipeline::{best_bound, BestBound, BoundConfig, NormalFormRoute, RouteReport, WITNESS_MAX_DIM};
