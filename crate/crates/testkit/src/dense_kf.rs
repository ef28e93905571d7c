//! Dense covariance-form mixed real/integer Kalman filter, used as the
//! oracle for the square-root information implementation. State ordering
//! here is [x(6); N(n)] with x = [baseline enu; velocity enu].

use nalgebra::{DMatrix, DVector};

pub struct DenseMixedKf;

#[derive(Debug, Clone)]
pub struct JointPosterior {
    /// Posterior mean over [x(6); N(n)].
    pub mean: DVector<f64>,
    /// Posterior covariance over [x(6); N(n)].
    pub cov: DMatrix<f64>,
    pub n_amb: usize,
}

impl DenseMixedKf {
    /// Constant-velocity propagation with velocity random walk.
    pub fn propagate(
        mean: &DVector<f64>,
        cov: &DMatrix<f64>,
        dt: f64,
        q_h: f64,
        q_v: f64,
    ) -> (DVector<f64>, DMatrix<f64>) {
        let mut f = DMatrix::identity(6, 6);
        for i in 0..3 {
            f[(i, i + 3)] = dt;
        }
        let mut q = DMatrix::zeros(6, 6);
        q[(3, 3)] = q_h * q_h * dt;
        q[(4, 4)] = q_h * q_h * dt;
        q[(5, 5)] = q_v * q_v * dt;
        let mean_prop = &f * mean;
        let cov_prop = &f * cov * f.transpose() + q;
        (mean_prop, cov_prop)
    }

    /// Joint measurement update. Code rows see only x; phase row i sees x
    /// plus `lambda[i]` times its own (new, diffuse) ambiguity. `y_*` are
    /// the linearized right-hand sides and `r_full` the joint measurement
    /// noise covariance over [code; phase].
    #[allow(clippy::too_many_arguments)]
    pub fn update(
        prior_mean: &DVector<f64>,
        prior_cov: &DMatrix<f64>,
        sigma_n0: f64,
        h_code: &DMatrix<f64>,
        y_code: &DVector<f64>,
        h_phase: &DMatrix<f64>,
        lambda: &[f64],
        y_phase: &DVector<f64>,
        r_full: &DMatrix<f64>,
    ) -> JointPosterior {
        let n_code = h_code.nrows();
        let n_phase = h_phase.nrows();
        assert_eq!(lambda.len(), n_phase);
        let n_aug = 6 + n_phase;

        let mut x = DVector::zeros(n_aug);
        x.rows_mut(0, 6).copy_from(prior_mean);
        let mut p = DMatrix::zeros(n_aug, n_aug);
        p.view_mut((0, 0), (6, 6)).copy_from(prior_cov);
        for i in 0..n_phase {
            p[(6 + i, 6 + i)] = sigma_n0 * sigma_n0;
        }

        let m = n_code + n_phase;
        let mut h = DMatrix::zeros(m, n_aug);
        h.view_mut((0, 0), (n_code, 6)).copy_from(h_code);
        h.view_mut((n_code, 0), (n_phase, 6)).copy_from(h_phase);
        for i in 0..n_phase {
            h[(n_code + i, 6 + i)] = lambda[i];
        }
        let mut y = DVector::zeros(m);
        y.rows_mut(0, n_code).copy_from(y_code);
        y.rows_mut(n_code, n_phase).copy_from(y_phase);

        let s = &h * &p * h.transpose() + r_full;
        let s_inv = s.clone().try_inverse().expect("oracle: singular S");
        let k = &p * h.transpose() * s_inv;
        let innov = &y - &h * &x;
        let mean = &x + &k * innov;
        // Joseph form keeps the subtraction well behaved.
        let ikh = DMatrix::identity(n_aug, n_aug) - &k * &h;
        let cov = &ikh * &p * ikh.transpose() + &k * r_full * k.transpose();

        JointPosterior {
            mean,
            cov,
            n_amb: n_phase,
        }
    }

    /// Marginal of the real states: just the x block of the joint.
    pub fn marginal_x(joint: &JointPosterior) -> (DVector<f64>, DMatrix<f64>) {
        (
            joint.mean.rows(0, 6).into_owned(),
            joint.cov.view((0, 0), (6, 6)).into_owned(),
        )
    }

    /// Conditional of x given the ambiguities fixed to `z_int`.
    pub fn condition_on_integers(
        joint: &JointPosterior,
        z_int: &[i64],
    ) -> (DVector<f64>, DMatrix<f64>) {
        let n = joint.n_amb;
        assert_eq!(z_int.len(), n);
        let x_hat = joint.mean.rows(0, 6).into_owned();
        let n_hat = joint.mean.rows(6, n).into_owned();
        let p_xx = joint.cov.view((0, 0), (6, 6)).into_owned();
        let p_xn = joint.cov.view((0, 6), (6, n)).into_owned();
        let p_nn = joint.cov.view((6, 6), (n, n)).into_owned();
        let p_nn_inv = p_nn.try_inverse().expect("oracle: singular P_NN");
        let fixed = DVector::from_iterator(n, z_int.iter().map(|&v| v as f64));
        let mean = &x_hat + &p_xn * &p_nn_inv * (fixed - n_hat);
        let cov = &p_xx - &p_xn * &p_nn_inv * p_xn.transpose();
        (mean, cov)
    }

    /// Normalized innovations squared over the code rows only, divided by
    /// the number of DD combinations.
    pub fn nis_code(
        prior_mean: &DVector<f64>,
        prior_cov: &DMatrix<f64>,
        h_code: &DMatrix<f64>,
        y_code: &DVector<f64>,
        r_code: &DMatrix<f64>,
        n_dd: usize,
    ) -> f64 {
        let innov = y_code - h_code * prior_mean;
        let s = h_code * prior_cov * h_code.transpose() + r_code;
        let s_inv = s.try_inverse().expect("oracle: singular code S");
        (innov.transpose() * s_inv * innov)[(0, 0)] / n_dd as f64
    }
}
