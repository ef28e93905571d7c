use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmbiguityError {
    #[error("covariance is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("problem dimension {0} exceeds the supported bound {max}", max = crate::MAX_DIMENSION)]
    DimensionTooLarge(usize),

    #[error("empty ambiguity problem")]
    EmptyProblem,

    #[error("requested failure rate {0} outside (0, 1)")]
    BadFailureRate(f64),

    #[error("{given} trials cannot resolve p_bar_f = {p_bar_f}; at least {required} required")]
    InsufficientTrials {
        given: usize,
        required: usize,
        p_bar_f: f64,
    },
}
