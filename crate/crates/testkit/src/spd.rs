//! Random SPD matrices and correlated Gaussian draws for test harnesses.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random SPD matrix with eigenvalues spread between `sigma_min^2` and
/// `sigma_max^2`, built as R diag(s^2) R' from a random orthonormal basis.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize, sigma_min: f64, sigma_max: f64) -> DMatrix<f64> {
    // Orthonormal basis from QR of a Gaussian matrix.
    let g = DMatrix::from_fn(n, n, |_, _| standard_normal(rng));
    let q = g.qr().q();
    let mut eig = DVector::zeros(n);
    for i in 0..n {
        let s = if i == 0 {
            sigma_max
        } else if i == n - 1 {
            sigma_min
        } else {
            rng.gen_range(sigma_min..sigma_max)
        };
        eig[i] = s * s;
    }
    &q * DMatrix::from_diagonal(&eig) * q.transpose()
}

/// Draw x ~ N(mean, cov) through a Cholesky factor.
pub fn sample_gaussian_vector(
    rng: &mut ChaCha8Rng,
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
) -> DVector<f64> {
    let chol = cov
        .clone()
        .cholesky()
        .expect("sample_gaussian_vector: covariance not SPD");
    let n = mean.len();
    let z = DVector::from_fn(n, |_, _| standard_normal(rng));
    mean + chol.l() * z
}

/// Box-Muller standard normal.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
