use thiserror::Error;

/// Errors raised when an operation is called outside its domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("alpha must lie in (0, 1) for the integral representation, got {0}")]
    AlphaOutsideUnitInterval(f64),

    #[error("theta = {0} is outside the open interval (2pi/3, pi)")]
    ThetaOutOfRange(f64),

    #[error("z = {0} is not below -4/27")]
    ZOutOfRange(f64),

    #[error("z must be nonzero for the cubic 1 + t + z t^3")]
    DegenerateCubic,

    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("m must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },

    #[error("A(z) and B(z) are both the zero polynomial")]
    ZeroGenerator,

    #[error("H_m is constant; it has no zeros to check")]
    ConstantPolynomial,

    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

pub(crate) fn check_alpha_unit(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutsideUnitInterval(alpha))
    }
}
