use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A Verblunsky coefficient (or disk argument) is not strictly inside the unit disk.
    #[error("value at index {index} has modulus {modulus} which is not < 1")]
    OutsideDisk {
        /// Position of the offending value.
        index: usize,
        /// Its modulus.
        modulus: f64,
    },
    /// A parameter violates its precondition.
    #[error("invalid `{name}`: {reason}")]
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// What is wrong with it.
        reason: String,
    },
    /// The summation-by-parts denominator `e^{-i(kη-φ)} - 1` vanishes.
    #[error("resonant frequency k*eta - phi = {frequency} (k = {k}, phi = {phi}, eta = {eta}): |e^(-i(k eta - phi)) - 1| = {modulus:e}")]
    Resonant {
        /// Integer frequency.
        k: i64,
        /// Phase shift.
        phi: f64,
        /// Spectral angle.
        eta: f64,
        /// `k·η − φ`.
        frequency: f64,
        /// Modulus of the denominator.
        modulus: f64,
    },
    /// A density sampler returned a non-finite value.
    #[error("sampler returned a non-finite value at theta = {theta}")]
    NonFiniteSample {
        /// Angle of the failed sample.
        theta: f64,
    },
    /// The exponent fit had too few usable points.
    #[error("exponent fit rejected: {usable} usable grid points (need at least 2)")]
    FitRejected {
        /// Number of grid points with `|log w| ≥ 1e-12`.
        usable: usize,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
