//! Certified lower bounds on the G-concurrence of bipartite `d×d` states.
//!
//! The G-concurrence of a pure state with Schmidt coefficients `λ_j` is
//! `d (λ₁⋯λ_d)^{2/d}`; for mixed states it is the convex roof. It vanishes exactly on
//! states of Schmidt number below `d`, so a positive lower bound certifies full Schmidt
//! rank.
//!
//! Lower bounds come from two routes: a witness that reads a handful of matrix entries
//! ([`witness`]), and the exact solution on the axisymmetric family combined with
//! twirling ([`axisym`]). [`slopt`] sharpens both by local filtering and local-unitary
//! optimization. [`oracles`] provides independent upper estimates for cross-checking.

pub mod axisym;
pub mod error;
pub mod linalg;
pub mod multipartite;
pub mod oracles;
mod perm;
pub mod pure_measures;
pub mod random;
pub mod slopt;
pub mod state;
pub mod witness;

pub use error::{Error, Result};
pub use state::{BipartiteOperator, DensityMatrix, Dim, PureState, Subsystem, UnnormalizedState};
