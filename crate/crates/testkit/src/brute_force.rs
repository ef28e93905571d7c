//! Exhaustive integer least squares over a fixed box. Exact by
//! construction: every lattice point in the box is scored.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub best: Vec<i64>,
    pub second: Vec<i64>,
    pub cost_best: f64,
    pub cost_second: f64,
}

/// Enumerate every integer vector within `half_width` of `round(a_float)`
/// per axis and return the two lowest (a - v)' Q^-1 (a - v) values.
///
/// The quadratic form is evaluated through a locally computed LDL' factor
/// with incremental partial sums, so the full box is affordable up to
/// dimension 6 with half_width 6 (13^6 points).
pub fn brute_force_ils(a_float: &DVector<f64>, q: &DMatrix<f64>, half_width: i64) -> BruteForceResult {
    let n = a_float.len();
    let (l, d) = ldl_lower(q);

    let center: Vec<i64> = a_float.iter().map(|v| v.round() as i64).collect();

    let mut best = vec![0i64; n];
    let mut second = vec![0i64; n];
    let mut cost_best = f64::INFINITY;
    let mut cost_second = f64::INFINITY;

    // Depth-first over box levels with partial eta accumulation:
    // diff = v - a, eta = L^-1 diff by forward substitution, cost = sum eta_i^2 / d_i.
    let mut v = vec![0i64; n];
    let mut eta = vec![0.0f64; n];
    let mut partial = vec![0.0f64; n + 1];

    fn recurse(
        level: usize,
        n: usize,
        center: &[i64],
        half_width: i64,
        l: &DMatrix<f64>,
        d: &[f64],
        a: &DVector<f64>,
        v: &mut Vec<i64>,
        eta: &mut Vec<f64>,
        partial: &mut Vec<f64>,
        best: &mut Vec<i64>,
        second: &mut Vec<i64>,
        cost_best: &mut f64,
        cost_second: &mut f64,
    ) {
        // Forward-substitution carry from already-fixed components.
        let mut carry = 0.0;
        for j in 0..level {
            carry += l[(level, j)] * eta[j];
        }
        for cand in (center[level] - half_width)..=(center[level] + half_width) {
            v[level] = cand;
            let e = (cand as f64 - a[level]) - carry;
            eta[level] = e;
            let cost = partial[level] + e * e / d[level];
            partial[level + 1] = cost;
            if level + 1 == n {
                if cost < *cost_best {
                    *cost_second = *cost_best;
                    second.clone_from(best);
                    *cost_best = cost;
                    best.clone_from(v);
                } else if cost < *cost_second {
                    *cost_second = cost;
                    second.clone_from(v);
                }
            } else {
                recurse(
                    level + 1,
                    n,
                    center,
                    half_width,
                    l,
                    d,
                    a,
                    v,
                    eta,
                    partial,
                    best,
                    second,
                    cost_best,
                    cost_second,
                );
            }
        }
    }

    recurse(
        0,
        n,
        &center,
        half_width,
        &l,
        &d,
        a_float,
        &mut v,
        &mut eta,
        &mut partial,
        &mut best,
        &mut second,
        &mut cost_best,
        &mut cost_second,
    );

    BruteForceResult {
        best,
        second,
        cost_best,
        cost_second,
    }
}

/// Q = L D L' with unit lower-triangular L, written out longhand.
fn ldl_lower(q: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let n = q.nrows();
    let mut l = DMatrix::identity(n, n);
    let mut d = vec![0.0f64; n];
    for j in 0..n {
        let mut dj = q[(j, j)];
        for k in 0..j {
            dj -= l[(j, k)] * l[(j, k)] * d[k];
        }
        assert!(dj > 0.0, "oracle LDL: matrix not positive definite");
        d[j] = dj;
        for i in (j + 1)..n {
            let mut v = q[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)] * d[k];
            }
            l[(i, j)] = v / dj;
        }
    }
    (l, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_metric_nearest_integer() {
        let a = DVector::from_vec(vec![1.2, -0.4, 3.0]);
        let q = DMatrix::identity(3, 3);
        let r = brute_force_ils(&a, &q, 6);
        assert_eq!(r.best, vec![1, 0, 3]);
        assert!((r.cost_best - (0.04 + 0.16)).abs() < 1e-12);
        // Second-best flips the cheapest coordinate, -0.4 -> -1.
        assert_eq!(r.second, vec![1, -1, 3]);
        assert!((r.cost_second - (0.04 + 0.36)).abs() < 1e-12);
    }

    #[test]
    fn ldl_reconstructs() {
        let q = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let (l, d) = ldl_lower(&q);
        let rebuilt = &l * DMatrix::from_diagonal(&DVector::from_vec(d)) * l.transpose();
        assert!((rebuilt - q).norm() < 1e-12);
    }
}
