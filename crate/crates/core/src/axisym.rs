//! The axisymmetric family: states sharing the symmetries of `|Φ_d⟩`.
//!
//! An invariant state has three distinct entries: `a = ⟨jj|ρ|jj⟩`, `b = ⟨jj|ρ|kk⟩` and
//! `c = ⟨jk|ρ|jk⟩` (`j ≠ k`). Its spectrum is `{a + (d−1)b, a − b, c}`, its fidelity
//! with `|Φ_d⟩` is `F = a + (d−1)b`, and within the family the G-concurrence is the
//! affine function `max(1 − d(1 − F), 0)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::state::{BipartiteOperator, DensityMatrix, Dim, PSD_TOL, TRACE_TOL};

/// Twirl-invariant state in `(a, b, c)` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisymState {
    #[serde(skip)]
    dim: Dim,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AxisymState {
    /// Validates the trace condition `d·a + d(d−1)·c = 1` and positivity.
    pub fn new(dim: Dim, a: f64, b: f64, c: f64) -> Result<Self> {
        let s = Self { dim, a, b, c };
        let d = dim.as_f64();
        let tr = d * a + d * (d - 1.0) * c;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne((tr - 1.0).abs()));
        }
        let min_eig = s.min_eigenvalue();
        if min_eig < -1e-10 {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(s)
    }

    /// Mixture `p|Φ_d⟩⟨Φ_d| + (1−p)[q ρ₁ + (1−q) ρ₂]` with
    /// `ρ₁ = (1 − |Φ_d⟩⟨Φ_d|)/(d²−1)` and `ρ₂ = Σ_{j≠k} |jk⟩⟨jk| / (d(d−1))`.
    pub fn from_pq(dim: Dim, p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidArgument(format!("(p, q) = ({p}, {q}) outside the unit square")));
        }
        let d = dim.as_f64();
        let n = d * d - 1.0;
        // entries of each component: Φ = (1/d, 1/d, 0), ρ₁ = ((1−1/d)/n, −1/(d n), 1/n), ρ₂ = (0, 0, 1/(d(d−1)))
        let w_phi = p;
        let w1 = (1.0 - p) * q;
        let w2 = (1.0 - p) * (1.0 - q);
        let a = w_phi / d + w1 * (1.0 - 1.0 / d) / n;
        let b = w_phi / d - w1 / (d * n);
        let c = w1 / n + w2 / (d * (d - 1.0));
        Self::new(dim, a, b, c)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// `F = a + (d−1) b`.
    pub fn fidelity(&self) -> f64 {
        self.a + (self.dim.as_f64() - 1.0) * self.b
    }

    /// Smallest of `a + (d−1)b`, `a − b` and `c`.
    pub fn min_eigenvalue(&self) -> f64 {
        self.fidelity().min(self.a - self.b).min(self.c)
    }

    /// `(|Φ_d⟩ corner, W corner, ρ₂ corner)` of the triangle of valid states.
    pub fn vertices(dim: Dim) -> [AxisymState; 3] {
        let d = dim.as_f64();
        [
            Self { dim, a: 1.0 / d, b: 1.0 / d, c: 0.0 },
            Self { dim, a: 1.0 / d, b: -1.0 / (d * (d - 1.0)), c: 0.0 },
            Self { dim, a: 0.0, b: 0.0, c: 1.0 / (d * (d - 1.0)) },
        ]
    }
}

/// Orthonormal Hilbert–Schmidt coordinates of the traceless part of an axisymmetric state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HsCoords {
    pub x: f64,
    pub y: f64,
}

impl HsCoords {
    pub fn distance(&self, other: &HsCoords) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Twirl of `ρ` onto the axisymmetric family.
pub fn project_axisym<O: BipartiteOperator + ?Sized>(rho: &O) -> AxisymState {
    let dim = rho.dim();
    let d = dim.get();
    let df = dim.as_f64();
    let mut diag = 0.0;
    let mut off = 0.0;
    let mut coh = 0.0;
    for j in 0..d {
        diag += rho.entry(j, j, j, j).re;
        for k in 0..d {
            if j != k {
                off += rho.entry(j, k, j, k).re;
            }
        }
        for k in 0..j {
            coh += 2.0 * rho.entry(j, j, k, k).re;
        }
    }
    let pairs = df * (df - 1.0);
    AxisymState { dim, a: diag / df, b: coh / pairs, c: off / pairs }
}

/// Dense matrix of an axisymmetric state.
pub fn axisym_to_matrix(s: &AxisymState) -> Result<DensityMatrix> {
    let min_eig = s.min_eigenvalue();
    if min_eig < -PSD_TOL {
        return Err(Error::NotPositive(min_eig));
    }
    let d = s.dim.get();
    let mut m = CMatrix::zeros(d * d, d * d);
    for j in 0..d {
        for k in 0..d {
            if j == k {
                m[(j * d + j, j * d + j)] = c(s.a);
            } else {
                m[(j * d + j, k * d + k)] = c(s.b);
                m[(j * d + k, j * d + k)] = c(s.c);
            }
        }
    }
    Ok(DensityMatrix::from_trusted(s.dim, m))
}

/// Unclamped `1 − d(1 − F)`.
pub fn axisym_margin(f: f64, dim: Dim) -> f64 {
    1.0 - dim.as_f64() * (1.0 - f)
}

/// Exact G-concurrence of an axisymmetric state with fidelity `F`.
pub fn cg_axisym(f: f64, dim: Dim) -> f64 {
    axisym_margin(f, dim).max(0.0)
}

/// 2-concurrence of an axisymmetric state, `√(2d/(d−1)) (F − 1/d)` above `F = 1/d`.
pub fn c2_axisym(f: f64, dim: Dim) -> f64 {
    let d = dim.as_f64();
    ((2.0 * d / (d - 1.0)).sqrt() * (f - 1.0 / d)).max(0.0)
}

/// 2-concurrence rescaled so that `|Φ_d⟩` has value 1: `(dF − 1)/(d − 1)` above `F = 1/d`.
/// This is [`c2_axisym`] times `√(d/(2(d−1)))`, matching
/// [`c2_pure`](crate::pure_measures::c2_pure).
pub fn c2_axisym_unit(f: f64, dim: Dim) -> f64 {
    let d = dim.as_f64();
    ((d * f - 1.0) / (d - 1.0)).max(0.0)
}

pub fn coords_xy(s: &AxisymState) -> HsCoords {
    let d = s.dim.as_f64();
    HsCoords { x: (d * (d - 1.0)).sqrt() * s.b, y: (d * s.a - 1.0 / d) / (d - 1.0).sqrt() }
}

/// Fidelity of the axisymmetric state at `coords` (an affine function of `x, y`).
pub fn fidelity_at(coords: &HsCoords, dim: Dim) -> f64 {
    let d = dim.as_f64();
    1.0 / (d * d) + ((d - 1.0) / d).sqrt() * coords.x + (d - 1.0).sqrt() / d * coords.y
}

/// Corners of the region `{axisymmetric, F ≤ k/d}` in coordinate space, in boundary order.
pub fn bounded_schmidt_region(dim: Dim, k: usize) -> Result<Vec<HsCoords>> {
    let d = dim.get();
    if k == 0 || k >= d {
        return Err(Error::SchmidtNumberOutOfRange { k, max: d - 1 });
    }
    let [phi, w, r2] = AxisymState::vertices(dim).map(|v| coords_xy(&v));
    // F is 1 at the Φ corner and 0 at the other two
    let t = k as f64 / d as f64;
    let lerp = |from: &HsCoords, to: &HsCoords| HsCoords { x: from.x + t * (to.x - from.x), y: from.y + t * (to.y - from.y) };
    Ok(vec![w, r2, lerp(&r2, &phi), lerp(&w, &phi)])
}

/// Hilbert–Schmidt distance from the twirl of `ρ` to the axisymmetric states with
/// `F ≤ k/d`, which contain every twirled state of Schmidt number at most `k`.
pub fn distance_lower_bound<O: BipartiteOperator + ?Sized>(rho: &O, k: usize) -> Result<f64> {
    let dim = rho.dim();
    let region = bounded_schmidt_region(dim, k)?;
    let point = coords_xy(&project_axisym(rho));
    Ok(geometry::distance_to_convex_polygon(&point, &region))
}

mod geometry {
    use super::HsCoords;

    fn cross(o: &HsCoords, a: &HsCoords, b: &HsCoords) -> f64 {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    }

    fn distance_to_segment(p: &HsCoords, a: &HsCoords, b: &HsCoords) -> f64 {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len_sq = dx * dx + dy * dy;
        let t = if len_sq == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq).clamp(0.0, 1.0) };
        p.distance(&HsCoords { x: a.x + t * dx, y: a.y + t * dy })
    }

    /// Zero inside; otherwise the distance to the nearest edge.
    pub(super) fn distance_to_convex_polygon(p: &HsCoords, verts: &[HsCoords]) -> f64 {
        let n = verts.len();
        let orientation = cross(&verts[0], &verts[1], &verts[2]).signum();
        let inside = (0..n).all(|i| orientation * cross(&verts[i], &verts[(i + 1) % n], p) >= 0.0);
        if inside {
            return 0.0;
        }
        (0..n).map(|i| distance_to_segment(p, &verts[i], &verts[(i + 1) % n])).fold(f64::INFINITY, f64::min)
    }

}
