use std::fmt;

use crate::GnssError;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const F_L1_HZ: f64 = 1_575.42e6;
pub const F_L2_HZ: f64 = 1_227.60e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constellation {
    Gps,
    Galileo,
    Sbas,
}

impl Constellation {
    /// Single-letter code used by RINEX and the native CSV schema.
    pub fn letter(&self) -> char {
        match self {
            Constellation::Gps => 'G',
            Constellation::Galileo => 'E',
            Constellation::Sbas => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'G' => Some(Constellation::Gps),
            'E' => Some(Constellation::Galileo),
            'S' => Some(Constellation::Sbas),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Band {
    L1,
    L2,
}

impl Band {
    pub fn carrier_frequency_hz(&self) -> f64 {
        match self {
            Band::L1 => F_L1_HZ,
            Band::L2 => F_L2_HZ,
        }
    }

    /// Carrier wavelength in meters (c / f).
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency_hz()
    }
}

/// One tracked signal: constellation, PRN, and band.
///
/// Only the combinations the receiver tracks are representable: GPS L1,
/// GPS L2, Galileo L1, and SBAS L1. The derived ordering (constellation,
/// prn, band) is the deterministic tie-break used throughout scoring and
/// pivot selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignalId {
    pub constellation: Constellation,
    pub prn: u16,
    pub band: Band,
}

impl SignalId {
    pub fn new(constellation: Constellation, prn: u16, band: Band) -> Result<Self, GnssError> {
        let ok = matches!(
            (constellation, band),
            (Constellation::Gps, Band::L1)
                | (Constellation::Gps, Band::L2)
                | (Constellation::Galileo, Band::L1)
                | (Constellation::Sbas, Band::L1)
        );
        if !ok {
            return Err(GnssError::UnsupportedSignal {
                constellation,
                band,
            });
        }
        Ok(Self {
            constellation,
            prn,
            band,
        })
    }

    /// Whether the signal carries a pilot component. Fully-modulated
    /// signals (GPS L1 C/A, SBAS L1) rely on symbol wipeoff for full-cycle
    /// carrier recovery; pilot-bearing signals do not.
    pub fn has_pilot(&self) -> bool {
        match (self.constellation, self.band) {
            (Constellation::Gps, Band::L1) => false,
            (Constellation::Sbas, Band::L1) => false,
            (Constellation::Gps, Band::L2) => true,
            (Constellation::Galileo, Band::L1) => true,
            _ => false,
        }
    }

    pub fn wavelength_m(&self) -> f64 {
        self.band.wavelength_m()
    }
}

impl fmt::Display for SignalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let band = match self.band {
            Band::L1 => "L1",
            Band::L2 => "L2",
        };
        write!(f, "{}{:02}-{}", self.constellation.letter(), self.prn, band)
    }
}
