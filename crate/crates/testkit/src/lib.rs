//! Independent oracles used by the test suites. Nothing in here is linked
//! into the library crates; every routine is written from first principles
//! so that it cannot share a bug with the implementation it checks.

mod brute_force;
mod dense_kf;
mod spd;

pub use brute_force::{brute_force_ils, BruteForceResult};
pub use dense_kf::DenseMixedKf;
pub use spd::{random_spd, sample_gaussian_vector, standard_normal};
