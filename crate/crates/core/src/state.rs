//! Bipartite states on ℂ^d ⊗ ℂ^d and the exact primitives every bound is built from.
//!
//! Composite basis vectors `|jk⟩` are stored at row-major index `j·d + k`, so the
//! amplitude matrix of a pure state reshapes row by row into its state vector.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, ONE, ZERO};

/// Default upper limit on the local dimension; the witness sums over d! permutations.
pub const DEFAULT_DIM_CAP: usize = 16;

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

/// Local Hilbert-space dimension `d ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Dim(usize);

impl Dim {
    pub fn new(d: usize) -> Result<Self> {
        Self::with_cap(d, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(d: usize, cap: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if d > cap {
            return Err(Error::DimensionAboveCap { d, cap });
        }
        Ok(Self(d))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Dimension of the composite space, `d²`.
    #[inline]
    pub fn composite(self) -> usize {
        self.0 * self.0
    }

    #[inline]
    pub(crate) fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which party's reduced state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Anything stored as a `d²×d²` operator on the composite space.
pub trait BipartiteOperator {
    fn dim(&self) -> Dim;
    fn matrix(&self) -> &CMatrix;

    /// `⟨jk|X|lm⟩`.
    fn entry(&self, j: usize, k: usize, l: usize, m: usize) -> Complex64 {
        let d = self.dim().get();
        self.matrix()[(j * d + k, l * d + m)]
    }
}

/// Normalized pure state `Σ_jk c_jk |jk⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim: Dim,
    amps: CMatrix,
}

impl PureState {
    pub fn new(dim: Dim, amps: CMatrix) -> Result<Self> {
        check_shape(&amps, dim.get())?;
        let norm_sq = amps.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((norm_sq - 1.0).abs()));
        }
        Ok(Self { dim, amps })
    }

    /// Rescales `amps` to unit norm before validating.
    pub fn normalized(dim: Dim, amps: CMatrix) -> Result<Self> {
        check_shape(&amps, dim.get())?;
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(1.0));
        }
        Self::new(dim, amps.unscale(norm))
    }

    /// From a row-major state vector of length `d²`.
    pub fn from_vector(dim: Dim, v: &[Complex64]) -> Result<Self> {
        if v.len() != dim.composite() {
            return Err(Error::Shape {
                expected: format!("vector of length {}", dim.composite()),
                found: format!("length {}", v.len()),
            });
        }
        Self::new(dim, linalg::unvec(&CVector::from_column_slice(v), dim.get(), dim.get()))
    }

    /// Computational basis state `|jk⟩`.
    pub fn basis(dim: Dim, j: usize, k: usize) -> Self {
        let mut amps = CMatrix::zeros(dim.get(), dim.get());
        amps[(j, k)] = ONE;
        Self { dim, amps }
    }

    /// Product state `|a⟩ ⊗ |b⟩`; each factor is normalized first.
    pub fn product(dim: Dim, a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let d = dim.get();
        if a.len() != d || b.len() != d {
            return Err(Error::Shape {
                expected: format!("two factors of length {d}"),
                found: format!("{} and {}", a.len(), b.len()),
            });
        }
        Self::normalized(dim, CMatrix::from_fn(d, d, |j, k| a[j] * b[k]))
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn amplitudes(&self) -> &CMatrix {
        &self.amps
    }

    pub fn to_vector(&self) -> CVector {
        linalg::vec_rows(&self.amps)
    }
}

/// Hermitian, trace-one, positive semidefinite `d²×d²` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: Dim,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity; stores the Hermitian part.
    pub fn new(dim: Dim, mat: CMatrix) -> Result<Self> {
        check_shape(&mat, dim.composite())?;
        let herm = linalg::hermiticity_residual(&mat);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = linalg::trace(&mat).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne((tr - 1.0).abs()));
        }
        let mat = linalg::hermitian_part(&mat);
        let min_eig = linalg::min_eigenvalue(&mat);
        if min_eig < -PSD_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { dim, mat })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_trusted(dim: Dim, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), dim.composite());
        Self { dim, mat }
    }

    pub fn maximally_mixed(dim: Dim) -> Self {
        let n = dim.composite();
        Self::from_trusted(dim, CMatrix::identity(n, n) * c(1.0 / n as f64))
    }

    /// `p |Φ_d⟩⟨Φ_d| + (1 - p) 1/d²`.
    pub fn isotropic(dim: Dim, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} outside [0, 1]")));
        }
        let phi = dm_from_pure(&max_entangled(dim));
        Ok(phi.mix(&Self::maximally_mixed(dim), 1.0 - p))
    }

    /// `(1 - w) self + w other`.
    pub fn mix(&self, other: &Self, w: f64) -> Self {
        assert_eq!(self.dim, other.dim, "mixing states of different dimension");
        assert!((0.0..=1.0).contains(&w), "mixing weight outside [0, 1]");
        Self::from_trusted(self.dim, &self.mat * c(1.0 - w) + &other.mat * c(w))
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }
}

impl BipartiteOperator for DensityMatrix {
    fn dim(&self) -> Dim {
        self.dim
    }
    fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Hermitian positive semidefinite operator with positive but arbitrary trace,
/// e.g. the result of local filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct UnnormalizedState {
    dim: Dim,
    mat: CMatrix,
}

impl UnnormalizedState {
    pub fn new(dim: Dim, mat: CMatrix) -> Result<Self> {
        check_shape(&mat, dim.composite())?;
        let tr = linalg::trace(&mat).re;
        if tr <= 0.0 {
            return Err(Error::NonPositiveTrace(tr));
        }
        let herm = linalg::hermiticity_residual(&mat);
        if herm > HERMITIAN_TOL * tr.max(1.0) {
            return Err(Error::NotHermitian(herm));
        }
        let mat = linalg::hermitian_part(&mat);
        let min_eig = linalg::min_eigenvalue(&mat);
        if min_eig < -PSD_TOL * tr.max(1.0) {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { dim, mat })
    }

    pub(crate) fn from_trusted(dim: Dim, mat: CMatrix) -> Self {
        Self { dim, mat }
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.mat).re
    }

    /// Divides by the trace and validates the result as a density matrix.
    pub fn normalized(&self) -> Result<DensityMatrix> {
        let tr = self.trace();
        if tr <= 0.0 {
            return Err(Error::NonPositiveTrace(tr));
        }
        DensityMatrix::new(self.dim, self.mat.unscale(tr))
    }
}

impl BipartiteOperator for UnnormalizedState {
    fn dim(&self) -> Dim {
        self.dim
    }
    fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

impl From<DensityMatrix> for UnnormalizedState {
    fn from(rho: DensityMatrix) -> Self {
        Self { dim: rho.dim, mat: rho.mat }
    }
}

/// Schmidt coefficients in nonincreasing order; their squares sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtSpectrum {
    lambdas: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Number of coefficients above `tol · λ_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let top = self.lambdas.first().copied().unwrap_or(0.0);
        self.lambdas.iter().filter(|&&l| l > tol * top).count()
    }
}

fn check_shape(m: &CMatrix, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Shape {
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    Ok(())
}

/// Rank-one projector `|ψ⟩⟨ψ|`.
pub fn dm_from_pure(psi: &PureState) -> DensityMatrix {
    let v = psi.to_vector();
    DensityMatrix::from_trusted(psi.dim, &v * v.adjoint())
}

/// Reduced state of the party `keep`.
pub fn partial_trace<O: BipartiteOperator + ?Sized>(op: &O, keep: Subsystem) -> CMatrix {
    partial_trace_matrix(op.matrix(), op.dim().get(), keep)
}

pub(crate) fn partial_trace_matrix(m: &CMatrix, d: usize, keep: Subsystem) -> CMatrix {
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        for s in 0..d {
            let mut acc = ZERO;
            for t in 0..d {
                acc += match keep {
                    Subsystem::A => m[(r * d + t, s * d + t)],
                    Subsystem::B => m[(t * d + r, t * d + s)],
                };
            }
            out[(r, s)] = acc;
        }
    }
    out
}

/// Singular values of the amplitude matrix.
pub fn schmidt(psi: &PureState) -> SchmidtSpectrum {
    SchmidtSpectrum { lambdas: linalg::singular_values(&psi.amps) }
}

/// `|Φ_d⟩ = Σ_j |jj⟩ / √d`.
pub fn max_entangled(dim: Dim) -> PureState {
    let d = dim.get();
    PureState { dim, amps: CMatrix::identity(d, d) * c(1.0 / dim.as_f64().sqrt()) }
}

/// Fidelity with `|Φ_d⟩`: `(1/d) Σ_jk ⟨jj|ρ|kk⟩`, clamped to `[0, 1]`.
pub fn fidelity_phi(rho: &DensityMatrix) -> f64 {
    phi_overlap(rho).clamp(0.0, 1.0)
}

/// Unclamped `⟨Φ_d|X|Φ_d⟩` for any bipartite operator.
pub fn phi_overlap<O: BipartiteOperator + ?Sized>(op: &O) -> f64 {
    let d = op.dim().get();
    let mut acc = ZERO;
    for j in 0..d {
        for k in 0..d {
            acc += op.entry(j, j, k, k);
        }
    }
    acc.re / d as f64
}

/// Hilbert–Schmidt (Frobenius) distance.
pub fn hs_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { left: a.dim.get(), right: b.dim.get() });
    }
    Ok((&a.mat - &b.mat).norm())
}

/// `(A⊗B) X (A⊗B)†` without renormalization.
pub fn apply_local<O: BipartiteOperator + ?Sized>(
    op: &O,
    a: &CMatrix,
    b: &CMatrix,
) -> Result<UnnormalizedState> {
    let d = op.dim().get();
    check_shape(a, d)?;
    check_shape(b, d)?;
    if is_singular(a) || is_singular(b) {
        return Err(Error::SingularOperator);
    }
    let ab = linalg::kron(a, b);
    let mat = &ab * op.matrix() * ab.adjoint();
    Ok(UnnormalizedState::from_trusted(op.dim(), linalg::hermitian_part(&mat)))
}

/// Applies a one-sided operator `X ⊗ 1` or `1 ⊗ X` by conjugation.
pub(crate) fn conjugate_one_side(m: &CMatrix, d: usize, x: &CMatrix, side: Subsystem) -> CMatrix {
    let id = CMatrix::identity(d, d);
    let full = match side {
        Subsystem::A => linalg::kron(x, &id),
        Subsystem::B => linalg::kron(&id, x),
    };
    linalg::hermitian_part(&(&full * m * full.adjoint()))
}

fn is_singular(m: &CMatrix) -> bool {
    let s = linalg::singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    let bottom = s.last().copied().unwrap_or(0.0);
    top == 0.0 || bottom <= 1e-14 * top
}

/// Real diagonal populations `⟨jk|X|jk⟩` arranged as a `d×d` table.
pub(crate) fn populations<O: BipartiteOperator + ?Sized>(op: &O) -> DMatrix<f64> {
    let d = op.dim().get();
    DMatrix::from_fn(d, d, |j, k| op.entry(j, k, j, k).re)
}
