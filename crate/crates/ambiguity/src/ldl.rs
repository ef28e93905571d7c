use nalgebra::DMatrix;

use crate::AmbiguityError;

/// Q = L D L' with unit lower-triangular L and positive diagonal D.
///
/// In this orientation d[i] is the conditional variance of component i
/// given components 0..i, which is the order the search consumes them.
pub fn ldl(q: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>), AmbiguityError> {
    let n = q.nrows();
    let mut l = DMatrix::identity(n, n);
    let mut d = vec![0.0f64; n];
    for j in 0..n {
        let mut dj = q[(j, j)];
        for k in 0..j {
            dj -= l[(j, k)] * l[(j, k)] * d[k];
        }
        if dj <= 0.0 || !dj.is_finite() {
            return Err(AmbiguityError::NotPositiveDefinite {
                index: j,
                pivot: dj,
            });
        }
        d[j] = dj;
        for i in (j + 1)..n {
            let mut v = q[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)] * d[k];
            }
            l[(i, j)] = v / dj;
        }
    }
    Ok((l, d))
}
