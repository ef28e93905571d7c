//! Difference aperture test and its fixed-failure-rate Monte Carlo
//! calibration.
//!
//! The analytic threshold for an ILS-based aperture test is intractable;
//! the threshold is instead calibrated by simulation so that the empirical
//! wrong-fix acceptance rate stays at or below the budget. A small keyed
//! cache amortizes calibration across epochs whose geometry class has not
//! materially changed.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decorrelate::decorrelate;
use crate::ldl::ldl;
use crate::search::{search_decorrelated, IlsResult};
use crate::AmbiguityError;

/// Accept the fix iff the cost gap between the second-best and best
/// integer candidates reaches the aperture threshold `mu`.
pub fn difference_test(r: &IlsResult, mu: f64) -> bool {
    r.cost_second - r.cost_best >= mu
}

/// Monte Carlo aperture threshold for a fixed failure rate.
///
/// Draws float ambiguities around a fixed truth, runs the integer search,
/// and returns the smallest `mu` for which the fraction of accepted wrong
/// fixes over all trials is at most `p_bar_f`. Deterministic for a given
/// seed. Requires `n_trials >= 10 / p_bar_f` so the budget quantile is
/// resolvable at all.
pub fn calibrate_aperture_threshold(
    q_a: &DMatrix<f64>,
    p_bar_f: f64,
    n_trials: usize,
    seed: u64,
) -> Result<f64, AmbiguityError> {
    if !(0.0..1.0).contains(&p_bar_f) || p_bar_f == 0.0 {
        return Err(AmbiguityError::BadFailureRate(p_bar_f));
    }
    let required = (10.0 / p_bar_f).ceil() as usize;
    if n_trials < required {
        return Err(AmbiguityError::InsufficientTrials {
            given: n_trials,
            required,
            p_bar_f,
        });
    }

    // Decorrelate once; wrong-fix events and cost gaps are invariant under
    // the unimodular transform, so trials run entirely in z-space around
    // integer truth zero.
    let dec = decorrelate(q_a)?;
    let n = dec.d.len();
    let (chol_l, chol_d) = ldl(&dec.q_z)?;
    let sd: Vec<f64> = chol_d.iter().map(|v| v.sqrt()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wrong_gaps: Vec<f64> = Vec::new();
    let mut g = vec![0.0f64; n];
    for _ in 0..n_trials {
        for gi in g.iter_mut() {
            *gi = standard_normal(&mut rng);
        }
        // z = L * (sqrt(d) .* g), mean zero.
        let mut z = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = sd[i] * g[i];
            for j in 0..i {
                acc += chol_l[(i, j)] * sd[j] * g[j];
            }
            z[i] = acc;
        }
        let kept = search_decorrelated(&dec, &z, 2);
        let best_is_truth = kept[0].1.iter().all(|&v| v == 0);
        if !best_is_truth {
            wrong_gaps.push(kept[1].0 - kept[0].0);
        }
    }

    let budget = (p_bar_f * n_trials as f64).floor() as usize;
    if wrong_gaps.len() <= budget {
        return Ok(0.0);
    }
    wrong_gaps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Smallest mu with at most `budget` wrong gaps >= mu: just above the
    // (budget+1)-th largest gap.
    Ok(wrong_gaps[budget].next_up())
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// One persisted calibration record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationEntry {
    pub n_dd: usize,
    pub signature: u64,
    pub mu: f64,
    pub p_bar_f: f64,
    pub seed: u64,
    pub trials: usize,
}

/// Cached aperture calibrator keyed by (dimension, trace-normalized
/// covariance signature). Entries go stale after `refresh_s`; a dimension
/// or signature change is a new key and calibrates immediately. Set
/// `per_epoch` to recalibrate on every query instead.
#[derive(Debug, Clone)]
pub struct ApertureCalibrator {
    pub p_bar_f: f64,
    pub trials: usize,
    pub refresh_s: f64,
    pub per_epoch: bool,
    base_seed: u64,
    cache: HashMap<(usize, u64), (CalibrationEntry, f64)>,
}

impl ApertureCalibrator {
    pub fn new(p_bar_f: f64, trials: usize, refresh_s: f64, per_epoch: bool, base_seed: u64) -> Self {
        Self {
            p_bar_f,
            trials,
            refresh_s,
            per_epoch,
            base_seed,
            cache: HashMap::new(),
        }
    }

    /// Aperture threshold for this epoch's float covariance. `now_s` is any
    /// monotone run clock (seconds) used for staleness.
    pub fn mu_for(&mut self, q_a: &DMatrix<f64>, now_s: f64) -> Result<f64, AmbiguityError> {
        let n = q_a.nrows();
        let sig = signature(q_a)?;
        let seed = mix_seed(self.base_seed, n as u64, sig);
        if self.per_epoch {
            return calibrate_aperture_threshold(q_a, self.p_bar_f, self.trials, seed);
        }
        if let Some((entry, t)) = self.cache.get(&(n, sig)) {
            if now_s - t <= self.refresh_s {
                return Ok(entry.mu);
            }
        }
        let mu = calibrate_aperture_threshold(q_a, self.p_bar_f, self.trials, seed)?;
        self.cache.insert(
            (n, sig),
            (
                CalibrationEntry {
                    n_dd: n,
                    signature: sig,
                    mu,
                    p_bar_f: self.p_bar_f,
                    seed,
                    trials: self.trials,
                },
                now_s,
            ),
        );
        Ok(mu)
    }

    /// Serialize the cache as CSV (`n_dd,signature,mu,p_bar_f,seed,trials`),
    /// sorted for deterministic output.
    pub fn to_csv(&self) -> String {
        let mut entries: Vec<&CalibrationEntry> = self.cache.values().map(|(e, _)| e).collect();
        entries.sort_by_key(|e| (e.n_dd, e.signature));
        let mut out = String::from("n_dd,signature,mu,p_bar_f,seed,trials\n");
        for e in entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                e.n_dd, e.signature, e.mu, e.p_bar_f, e.seed, e.trials
            );
        }
        out
    }

    /// Merge persisted entries into the cache, stamped as fresh at `now_s`.
    pub fn load_csv(&mut self, text: &str, now_s: f64) -> Result<usize, String> {
        let mut loaded = 0;
        for (i, line) in text.lines().enumerate() {
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(format!("line {}: expected 6 columns, got {}", i + 1, cols.len()));
            }
            let entry = CalibrationEntry {
                n_dd: cols[0].parse().map_err(|e| format!("line {}: n_dd: {e}", i + 1))?,
                signature: cols[1].parse().map_err(|e| format!("line {}: signature: {e}", i + 1))?,
                mu: cols[2].parse().map_err(|e| format!("line {}: mu: {e}", i + 1))?,
                p_bar_f: cols[3].parse().map_err(|e| format!("line {}: p_bar_f: {e}", i + 1))?,
                seed: cols[4].parse().map_err(|e| format!("line {}: seed: {e}", i + 1))?,
                trials: cols[5].parse().map_err(|e| format!("line {}: trials: {e}", i + 1))?,
            };
            self.cache
                .insert((entry.n_dd, entry.signature), (entry, now_s));
            loaded += 1;
        }
        Ok(loaded)
    }
}

/// Scale-free fingerprint of a covariance's conditional-variance spectrum.
/// Trace-normalized so that epochs differing only by overall noise level
/// share a calibration class.
fn signature(q_a: &DMatrix<f64>) -> Result<u64, AmbiguityError> {
    let n = q_a.nrows();
    let trace: f64 = (0..n).map(|i| q_a[(i, i)]).sum();
    if trace <= 0.0 {
        return Err(AmbiguityError::NotPositiveDefinite { index: 0, pivot: trace });
    }
    let normalized = q_a * (n as f64 / trace);
    let dec = decorrelate(&normalized)?;
    // FNV-1a over the quantized log-spectrum; stable across platforms.
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for d in &dec.d {
        let q = (d.log2() * 4.0).round() as i32;
        for b in q.to_le_bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x1000_0000_01b3);
        }
    }
    Ok(hash)
}

fn mix_seed(base: u64, n: u64, sig: u64) -> u64 {
    // SplitMix64 over the combined key.
    let mut x = base ^ n.rotate_left(17) ^ sig;
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Convenience for tests: empirical wrong-fix acceptance rate of a
/// threshold on an independent trial stream.
pub fn empirical_failure_rate(
    q_a: &DMatrix<f64>,
    mu: f64,
    n_trials: usize,
    seed: u64,
) -> Result<f64, AmbiguityError> {
    let dec = decorrelate(q_a)?;
    let n = dec.d.len();
    let (chol_l, chol_d) = ldl(&dec.q_z)?;
    let sd: Vec<f64> = chol_d.iter().map(|v| v.sqrt()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted_wrong = 0usize;
    let mut g = vec![0.0f64; n];
    for _ in 0..n_trials {
        for gi in g.iter_mut() {
            *gi = standard_normal(&mut rng);
        }
        let mut z = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = sd[i] * g[i];
            for j in 0..i {
                acc += chol_l[(i, j)] * sd[j] * g[j];
            }
            z[i] = acc;
        }
        let kept = search_decorrelated(&dec, &z, 2);
        let wrong = !kept[0].1.iter().all(|&v| v == 0);
        if wrong && kept[1].0 - kept[0].0 >= mu {
            accepted_wrong += 1;
        }
    }
    Ok(accepted_wrong as f64 / n_trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dummy_result(c1: f64, c2: f64) -> IlsResult {
        IlsResult {
            best: vec![0],
            second: vec![1],
            cost_best: c1,
            cost_second: c2,
            nodes_visited: 0,
        }
    }

    #[test]
    fn difference_test_cases() {
        // Tie rejects for any positive mu.
        assert!(!difference_test(&dummy_result(4.0, 4.0), 1e-9));
        // mu = 0 accepts everything.
        assert!(difference_test(&dummy_result(4.0, 4.0), 0.0));
        assert!(difference_test(&dummy_result(3.0, 10.0), 5.0));
        assert!(!difference_test(&dummy_result(3.0, 7.9), 5.0));
    }

    #[test]
    fn acceptance_region_monotone_in_second_cost() {
        let mu = 2.5;
        for c2 in [5.6, 6.0, 9.5, 100.0] {
            assert!(difference_test(&dummy_result(3.0, c2), mu));
        }
    }

    #[test]
    fn ultra_precise_model_needs_no_aperture() {
        // Wrong fixes vanish as Q_a -> 0, so mu -> 0.
        let q = DMatrix::<f64>::identity(3, 3) * 1e-6;
        let mu = calibrate_aperture_threshold(&q, 0.01, 2000, 7).unwrap();
        assert_eq!(mu, 0.0);
    }

    #[test]
    fn mu_non_increasing_in_p_bar_f() {
        let q = DMatrix::from_row_slice(2, 2, &[0.16, 0.08, 0.08, 0.09]);
        let mut last = f64::INFINITY;
        for p in [0.002, 0.01, 0.05, 0.2] {
            let mu = calibrate_aperture_threshold(&q, p, 20_000, 11).unwrap();
            assert!(mu <= last, "mu must not grow with a looser budget");
            last = mu;
        }
        assert!(last >= 0.0);
    }

    #[test]
    fn too_few_trials_reports_requirement() {
        let q = DMatrix::<f64>::identity(2, 2);
        match calibrate_aperture_threshold(&q, 0.001, 500, 1) {
            Err(AmbiguityError::InsufficientTrials { required, .. }) => {
                assert_eq!(required, 10_000)
            }
            other => panic!("expected InsufficientTrials, got {other:?}"),
        }
    }

    #[test]
    fn cache_reuses_within_refresh_window() {
        let q = DMatrix::from_row_slice(2, 2, &[0.25, 0.1, 0.1, 0.2]);
        let mut cal = ApertureCalibrator::new(0.01, 2000, 30.0, false, 42);
        let a = cal.mu_for(&q, 0.0).unwrap();
        let b = cal.mu_for(&(q.clone() * 1.0), 10.0).unwrap();
        assert_eq!(a, b, "same class within 30 s reuses the cached mu");
        // Scaling the covariance keeps the trace-normalized class.
        let c = cal.mu_for(&(q.clone() * 4.0), 20.0).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn csv_round_trip() {
        let q = DMatrix::from_row_slice(2, 2, &[0.25, 0.1, 0.1, 0.2]);
        let mut cal = ApertureCalibrator::new(0.01, 2000, 30.0, false, 42);
        let mu = cal.mu_for(&q, 0.0).unwrap();
        let csv = cal.to_csv();
        let mut cal2 = ApertureCalibrator::new(0.01, 2000, 30.0, false, 42);
        let loaded = cal2.load_csv(&csv, 0.0).unwrap();
        assert_eq!(loaded, 1);
        assert_eq!(cal2.mu_for(&q, 5.0).unwrap(), mu);
    }
}
