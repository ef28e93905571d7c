use thiserror::Error;

/// Errors produced by the core domain types and geometry helpers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GnssError {
    #[error("degenerate geometry: satellite and receiver separated by only {separation_m} m")]
    DegenerateGeometry { separation_m: f64 },

    #[error("seconds of week {0} outside [0, 604800)")]
    TimeOutOfRange(f64),

    #[error("unsupported signal: {constellation:?} on {band:?}")]
    UnsupportedSignal {
        constellation: crate::Constellation,
        band: crate::Band,
    },

    #[error("satellite position norm {norm_m:.3e} m outside MEO/GEO sanity range")]
    SatPositionOutOfRange { norm_m: f64 },
}
