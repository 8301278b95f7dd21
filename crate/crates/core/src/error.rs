use thiserror::Error;

/// Errors produced by kernel validation, symbol computation and the solvers.
#[derive(Debug, Error)]
pub enum CzError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Spherical density violates the zero-mean condition.
    #[error("spherical density has nonzero mean {mean:.3e} (tolerance {tol:.1e})")]
    NonzeroMean { mean: f64, tol: f64 },

    /// The symbol (or a + symbol) vanishes where it must not.
    #[error("ellipticity failure: {0}")]
    Ellipticity(String),

    /// Argument variation did not land near an integer multiple of 2pi.
    #[error("winding unresolved: {0}")]
    WindingUnresolved(String),

    /// A Riemann problem / Wiener-Hopf slice has nonzero index; the
    /// solvability conditions are defined by the index of the coefficient.
    #[error("nonzero index kappa = {kappa}{}", match .xi_prime {
        Some(xs) => format!(" at lateral frequency {:?}", xs),
        None => String::new(),
    })]
    NonzeroIndex { kappa: i64, xi_prime: Option<Vec<f64>> },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CzError>;
