//! Integer least-squares machinery for carrier-phase ambiguity resolution.
//!
//! The pipeline is the classical one: a unimodular decorrelation of the
//! float-ambiguity covariance, an exact sequential conditional search for
//! the two lowest-cost integer vectors, a difference aperture test on the
//! cost gap, and Monte Carlo calibration of the aperture threshold for a
//! fixed failure rate. Everything operates on value types and is freely
//! parallelizable; the calibration cache is the only stateful piece.

mod aperture;
mod decorrelate;
mod error;
mod ldl;
mod search;

pub use aperture::{
    calibrate_aperture_threshold, difference_test, empirical_failure_rate, ApertureCalibrator,
    CalibrationEntry,
};
pub use decorrelate::{decorrelate, Decorrelation};
pub use error::AmbiguityError;
pub use search::{ils_search, ils_search_k, IlsProblem, IlsResult};

/// Engineering bound on problem dimension; urban epochs top out well below
/// this.
pub const MAX_DIMENSION: usize = 64;
