//! Unimodular decorrelation of the float-ambiguity covariance.
//!
//! Integer size reduction drives the unit-triangular factor's off-diagonals
//! to |l| <= 0.5, and adjacent symmetric swaps reorder the spectrum of
//! sequential conditional variances until no swap can move a smaller
//! conditional variance earlier. The search consumes components first to
//! last, so "earlier" means the root of the search tree; this is the
//! mirror image of the usual last-to-first textbook presentation.

use nalgebra::DMatrix;

use crate::ldl::ldl;
use crate::{AmbiguityError, MAX_DIMENSION};

/// Result of the decorrelation adjustment.
#[derive(Debug, Clone)]
pub struct Decorrelation {
    /// Integer unimodular transform; decorrelated ambiguities are z = Z' a.
    pub z: DMatrix<f64>,
    /// Exact integer inverse of `z`.
    pub z_inv: DMatrix<f64>,
    /// Q_z = Z' Q_a Z.
    pub q_z: DMatrix<f64>,
    /// Unit lower-triangular factor of Q_z.
    pub l: DMatrix<f64>,
    /// Sequential conditional variances of Q_z, in search order.
    pub d: Vec<f64>,
}

pub fn decorrelate(q_a: &DMatrix<f64>) -> Result<Decorrelation, AmbiguityError> {
    let n = q_a.nrows();
    if n == 0 {
        return Err(AmbiguityError::EmptyProblem);
    }
    if n > MAX_DIMENSION {
        return Err(AmbiguityError::DimensionTooLarge(n));
    }
    let (mut l, mut d) = ldl(q_a)?;
    let mut z = DMatrix::<f64>::identity(n, n);
    let mut z_inv = DMatrix::<f64>::identity(n, n);

    loop {
        size_reduce(&mut l, &mut z, &mut z_inv);
        let mut swapped = false;
        for k in 0..n.saturating_sub(1) {
            let a = l[(k + 1, k)];
            let d_new = d[k + 1] + a * a * d[k];
            // Strictness guard keeps float round-off from cycling.
            if d_new < d[k] * (1.0 - 1e-12) {
                swap_adjacent(k, &mut l, &mut d, &mut z, &mut z_inv);
                swapped = true;
                break;
            }
        }
        if !swapped {
            break;
        }
    }

    let q_z = z.transpose() * q_a * &z;
    Ok(Decorrelation { z, z_inv, q_z, l, d })
}

/// Integer Gauss reduction of every subdiagonal entry. Reducing column j
/// only touches columns <= j, so sweeping each row right-to-left leaves
/// previously reduced entries intact.
fn size_reduce(l: &mut DMatrix<f64>, z: &mut DMatrix<f64>, z_inv: &mut DMatrix<f64>) {
    let n = l.nrows();
    for i in 1..n {
        for j in (0..i).rev() {
            let m = l[(i, j)].round();
            if m != 0.0 {
                for c in 0..=j {
                    let v = l[(j, c)];
                    l[(i, c)] -= m * v;
                }
                for r in 0..n {
                    let v = z[(r, j)];
                    z[(r, i)] -= m * v;
                    let w = z_inv[(i, r)];
                    z_inv[(j, r)] += m * w;
                }
            }
        }
    }
}

/// Exchange states k and k+1, updating (L, D) in place via the standard
/// two-by-two refactorization.
fn swap_adjacent(
    k: usize,
    l: &mut DMatrix<f64>,
    d: &mut [f64],
    z: &mut DMatrix<f64>,
    z_inv: &mut DMatrix<f64>,
) {
    let n = l.nrows();
    let a = l[(k + 1, k)];
    let dk = d[k];
    let dk1 = d[k + 1];
    let d_new_k = dk1 + a * a * dk;
    let mu = a * dk / d_new_k;
    let nu = dk1 / d_new_k;

    for i in (k + 2)..n {
        let lik = l[(i, k)];
        let lik1 = l[(i, k + 1)];
        l[(i, k)] = mu * lik + nu * lik1;
        l[(i, k + 1)] = lik - a * lik1;
    }
    for j in 0..k {
        let tmp = l[(k, j)];
        l[(k, j)] = l[(k + 1, j)];
        l[(k + 1, j)] = tmp;
    }
    l[(k + 1, k)] = mu;
    d[k] = d_new_k;
    d[k + 1] = nu * dk;

    z.swap_columns(k, k + 1);
    z_inv.swap_rows(k, k + 1);
}
