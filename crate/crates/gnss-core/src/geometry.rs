//! WGS-84 ECEF/geodetic conversions, ENU frames, and the line-of-sight and
//! range-difference primitives the double-difference engine builds on.

use nalgebra::{Matrix3, Vector3};

use crate::{GnssError, SatState};

pub const WGS84_A: f64 = 6_378_137.0;
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;

fn e2() -> f64 {
    WGS84_F * (2.0 - WGS84_F)
}

/// Geodetic (lat rad, lon rad, height m) to ECEF meters.
pub fn geodetic_to_ecef(lat_rad: f64, lon_rad: f64, height_m: f64) -> Vector3<f64> {
    let n = WGS84_A / (1.0 - e2() * lat_rad.sin().powi(2)).sqrt();
    Vector3::new(
        (n + height_m) * lat_rad.cos() * lon_rad.cos(),
        (n + height_m) * lat_rad.cos() * lon_rad.sin(),
        (n * (1.0 - e2()) + height_m) * lat_rad.sin(),
    )
}

/// ECEF meters to geodetic (lat rad, lon rad, height m), by fixed-point
/// iteration on the latitude. Converges well below 1e-12 rad for any
/// terrestrial or orbital point.
pub fn ecef_to_geodetic(pos: &Vector3<f64>) -> (f64, f64, f64) {
    let p = (pos.x * pos.x + pos.y * pos.y).sqrt();
    let lon = pos.y.atan2(pos.x);
    let mut lat = pos.z.atan2(p * (1.0 - e2()));
    let mut height = 0.0;
    for _ in 0..8 {
        let n = WGS84_A / (1.0 - e2() * lat.sin().powi(2)).sqrt();
        height = if lat.abs() < 1.3 {
            p / lat.cos() - n
        } else {
            pos.z / lat.sin() - n * (1.0 - e2())
        };
        lat = pos.z.atan2(p * (1.0 - e2() * n / (n + height)));
    }
    (lat, lon, height)
}

/// Rows are the east, north, up unit vectors in ECEF; multiplying an ECEF
/// difference vector by this matrix yields its ENU components.
pub fn enu_basis(lat_rad: f64, lon_rad: f64) -> Matrix3<f64> {
    let (slat, clat) = lat_rad.sin_cos();
    let (slon, clon) = lon_rad.sin_cos();
    Matrix3::new(
        -slon, clon, 0.0, //
        -slat * clon, -slat * slon, clat, //
        clat * clon, clat * slon, slat,
    )
}

/// Line of sight from a receiver to a satellite, expressed in the
/// receiver's local ENU frame.
#[derive(Debug, Clone, Copy)]
pub struct LosResult {
    pub unit_enu: Vector3<f64>,
    pub elevation_deg: f64,
    pub azimuth_deg: f64,
}

/// Unit line-of-sight vector (ENU), elevation, and azimuth of `sat` as seen
/// from `receiver_pos_ecef`. Azimuth is compass convention in [0, 360).
pub fn los_and_elevation(
    sat: &SatState,
    receiver_pos_ecef: &Vector3<f64>,
) -> Result<LosResult, GnssError> {
    let d = sat.pos_ecef_m - receiver_pos_ecef;
    let r = d.norm();
    if r <= 1.0e6 {
        return Err(GnssError::DegenerateGeometry { separation_m: r });
    }
    let (lat, lon, _) = ecef_to_geodetic(receiver_pos_ecef);
    let unit_enu = enu_basis(lat, lon) * (d / r);
    let elevation_deg = unit_enu.z.clamp(-1.0, 1.0).asin().to_degrees();
    let azimuth_deg = unit_enu.x.atan2(unit_enu.y).to_degrees().rem_euclid(360.0);
    Ok(LosResult {
        unit_enu,
        elevation_deg,
        azimuth_deg,
    })
}

/// Between-satellite range difference evaluated at a fixed position:
/// |sat_i - pos| - |sat_pivot - pos|. The caller forms the full double
/// difference of predicted ranges as (rover term - reference term).
pub fn dd_geometry(base_pos: &Vector3<f64>, sat_i: &SatState, sat_pivot: &SatState) -> f64 {
    (sat_i.pos_ecef_m - base_pos).norm() - (sat_pivot.pos_ecef_m - base_pos).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Band, Constellation, SignalId};

    fn sig() -> SignalId {
        SignalId::new(Constellation::Gps, 1, Band::L1).unwrap()
    }

    fn sat_at(pos: Vector3<f64>) -> SatState {
        SatState::new(sig(), pos, 0.0).unwrap()
    }

    #[test]
    fn zenith_case_at_equator_prime_meridian() {
        let rcv = geodetic_to_ecef(0.0, 0.0, 0.0);
        let sat = sat_at(Vector3::new(rcv.x + 2.0e7, 0.0, 0.0));
        let los = los_and_elevation(&sat, &rcv).unwrap();
        assert!((los.elevation_deg - 90.0).abs() < 1e-9);
        assert!((los.unit_enu - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn horizon_due_east() {
        let rcv = geodetic_to_ecef(0.0, 0.0, 0.0);
        // Due east at the equator/prime meridian is +y in ECEF.
        let sat = sat_at(rcv + Vector3::new(0.0, 2.5e7, 0.0));
        let los = los_and_elevation(&sat, &rcv).unwrap();
        assert!(los.elevation_deg.abs() < 1e-9);
        assert!((los.azimuth_deg - 90.0).abs() < 1e-9);
    }

    #[test]
    fn coincident_positions_are_degenerate() {
        let rcv = geodetic_to_ecef(0.4, -1.2, 200.0);
        let sat = SatState {
            sig: sig(),
            pos_ecef_m: rcv + Vector3::new(10.0, 0.0, 0.0),
            clock_bias_m: 0.0,
        };
        assert!(matches!(
            los_and_elevation(&sat, &rcv),
            Err(GnssError::DegenerateGeometry { .. })
        ));
    }

    #[test]
    fn los_unit_norm_and_frame_round_trip() {
        // ENU components rotated back to ECEF must reproduce the normalized
        // line of sight to 1e-12.
        let rcv = geodetic_to_ecef(30.5_f64.to_radians(), (-97.7_f64).to_radians(), 150.0);
        let sat = sat_at(Vector3::new(1.2e7, -1.9e7, 1.4e7));
        let los = los_and_elevation(&sat, &rcv).unwrap();
        assert!((los.unit_enu.norm() - 1.0).abs() < 1e-12);

        let (lat, lon, _) = ecef_to_geodetic(&rcv);
        let back = enu_basis(lat, lon).transpose() * los.unit_enu;
        let direct = (sat.pos_ecef_m - rcv).normalize();
        assert!((back - direct).norm() < 1e-12);
    }

    #[test]
    fn geodetic_round_trip() {
        for &(lat_deg, lon_deg, h) in &[
            (0.0, 0.0, 0.0),
            (30.2672, -97.7431, 150.0),
            (-45.0, 170.0, 2000.0),
            (89.5, 10.0, 50.0),
            (-89.9, -120.0, 0.0),
        ] {
            let ecef = geodetic_to_ecef(
                (lat_deg as f64).to_radians(),
                (lon_deg as f64).to_radians(),
                h,
            );
            let (lat, lon, height) = ecef_to_geodetic(&ecef);
            assert!(
                (lat.to_degrees() - lat_deg).abs() < 1e-9,
                "lat mismatch at {lat_deg}"
            );
            assert!((lon.to_degrees() - lon_deg).abs() < 1e-9);
            assert!((height - h).abs() < 1e-6);
        }
    }

    #[test]
    fn dd_geometry_identities() {
        let base = geodetic_to_ecef(0.53, -1.7, 300.0);
        let s1 = sat_at(Vector3::new(2.0e7, 1.0e7, 1.2e7));
        assert_eq!(dd_geometry(&base, &s1, &s1), 0.0);

        // Receiver equidistant from two satellites.
        let s2 = sat_at(Vector3::new(2.0e7, 1.0e7, -1.2e7));
        let mid = Vector3::new(2.0e7, 1.0e7, 0.0);
        let d = dd_geometry(&mid, &s1, &s2);
        assert!(d.abs() < 1e-9);

        // Random configuration equals the direct norm difference.
        let s3 = sat_at(Vector3::new(-0.9e7, 2.3e7, 0.9e7));
        let expect = (s1.pos_ecef_m - base).norm() - (s3.pos_ecef_m - base).norm();
        assert!((dd_geometry(&base, &s1, &s3) - expect).abs() < 1e-9);
    }
}
