use nalgebra::Vector3;

use crate::{GnssError, SignalId};

/// One signal's measurement record at one epoch.
///
/// Conventions: `carrier_phase` grows with range (cycles); `doppler` is
/// positive when range is decreasing, so phase extrapolation over a short
/// gap `dt` is `carrier_phase - doppler * dt`. `s_theta` is the phase-lock
/// statistic in [-1, 1]; `coherent_code` marks pseudoranges produced under
/// the coherent code discriminator. Elevation is derived from satellite
/// geometry and is not transported by the CSV schema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    pub sig: SignalId,
    pub pseudorange_m: f64,
    pub carrier_phase_cyc: f64,
    pub doppler_hz: f64,
    pub cn0_dbhz: f64,
    pub s_theta: f64,
    pub elevation_deg: f64,
    pub coherent_code: bool,
    pub valid: bool,
}

impl Observable {
    /// Range-based invariants; only meaningful for valid observables.
    pub fn check(&self) -> Result<(), String> {
        if !self.valid {
            return Ok(());
        }
        if !(-1.0..=1.0).contains(&self.s_theta) {
            return Err(format!("s_theta {} outside [-1, 1]", self.s_theta));
        }
        if self.cn0_dbhz < 0.0 {
            return Err(format!("cn0 {} negative", self.cn0_dbhz));
        }
        if !(0.0..=90.0).contains(&self.elevation_deg) {
            return Err(format!("elevation {} outside [0, 90]", self.elevation_deg));
        }
        Ok(())
    }
}

/// Satellite position (and clock, zero in pure simulation) for one signal
/// at one epoch. Positions are supplied per epoch rather than propagated
/// from ephemeris.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatState {
    pub sig: SignalId,
    pub pos_ecef_m: Vector3<f64>,
    pub clock_bias_m: f64,
}

impl SatState {
    pub fn new(sig: SignalId, pos_ecef_m: Vector3<f64>, clock_bias_m: f64) -> Result<Self, GnssError> {
        let norm = pos_ecef_m.norm();
        if !(2.5e7..=4.5e7).contains(&norm) {
            return Err(GnssError::SatPositionOutOfRange { norm_m: norm });
        }
        Ok(Self {
            sig,
            pos_ecef_m,
            clock_bias_m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Band, Constellation};

    fn sig() -> SignalId {
        SignalId::new(Constellation::Gps, 7, Band::L1).unwrap()
    }

    #[test]
    fn sat_state_norm_sanity() {
        assert!(SatState::new(sig(), Vector3::new(2.66e7, 0.0, 0.0), 0.0).is_ok());
        assert!(SatState::new(sig(), Vector3::new(6.4e6, 0.0, 0.0), 0.0).is_err());
        assert!(SatState::new(sig(), Vector3::new(5.0e7, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn observable_invariants() {
        let mut obs = Observable {
            sig: sig(),
            pseudorange_m: 2.2e7,
            carrier_phase_cyc: 1.0e8,
            doppler_hz: 1000.0,
            cn0_dbhz: 45.0,
            s_theta: 0.98,
            elevation_deg: 55.0,
            coherent_code: true,
            valid: true,
        };
        assert!(obs.check().is_ok());
        obs.s_theta = 1.2;
        assert!(obs.check().is_err());
        obs.valid = false;
        assert!(obs.check().is_ok());
    }
}
