//! Sums over permutations of the second party's levels.

use nalgebra::DMatrix;

/// `Σ_{σ ≠ id} (Π_i w[i, σ(i)])^{1/d}` for a nonnegative `d×d` table.
///
/// Permutations are visited depth first in lexicographic order, and a branch is cut as
/// soon as a factor is exactly zero, so sparse tables cost far less than `d!`.
pub(crate) fn nonidentity_root_sum(w: &DMatrix<f64>) -> f64 {
    let d = w.nrows();
    debug_assert_eq!(d, w.ncols());
    let mut used = vec![false; d];
    let mut total = 0.0;
    descend(w, 0, 1.0, true, &mut used, &mut total);
    total
}

fn descend(w: &DMatrix<f64>, row: usize, prod: f64, identity: bool, used: &mut [bool], total: &mut f64) {
    let d = w.nrows();
    if row == d {
        if !identity {
            *total += prod.powf(1.0 / d as f64);
        }
        return;
    }
    for col in 0..d {
        if used[col] {
            continue;
        }
        let factor = w[(row, col)];
        if factor == 0.0 {
            continue;
        }
        used[col] = true;
        descend(w, row + 1, prod * factor, identity && col == row, used, total);
        used[col] = false;
    }
}

/// Number of derangements of `n` objects.
pub(crate) fn derangements(n: usize) -> f64 {
    let (mut prev, mut cur) = (1.0_f64, 0.0_f64);
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let next = (k as f64 - 1.0) * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
