//! Shared domain types, constants, and geometry utilities for the
//! urban RTK workspace.
//!
//! Everything here is an immutable value object: times, signal identities,
//! observables, satellite states, and the ECEF/ENU geometry that every
//! downstream module (tracking simulator, RTK engine, scenario generator)
//! builds on. All positioning downstream is done in a local ENU frame
//! anchored at the reference-station antenna, so the geometry helpers are
//! oriented around that convention.

mod error;
mod geometry;
mod observable;
mod signal;
mod time;

pub use error::GnssError;
pub use geometry::{
    dd_geometry, ecef_to_geodetic, enu_basis, geodetic_to_ecef, los_and_elevation, LosResult,
    WGS84_A, WGS84_F,
};
pub use observable::{Observable, SatState};
pub use signal::{Band, Constellation, SignalId, F_L1_HZ, F_L2_HZ, SPEED_OF_LIGHT};
pub use time::GnssTime;
