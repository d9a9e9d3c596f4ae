use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate curve: {0}")]
    Degenerate(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("on-curve query at ({re}, {im}): distance {distance:e}")]
    OnCurve { re: f64, im: f64, distance: f64 },

    #[error("pole near curve: distance {distance:e} <= margin {margin:e}")]
    PoleNearCurve { distance: f64, margin: f64 },

    #[error("resample required: {0}")]
    ResampleRequired(String),

    #[error("curve length {0} is not normalized to 2π")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function does not match curve: {0}")]
    Mismatch(String),

    #[error("mask disconnected: {components} components at h = {h}")]
    MaskDisconnected { components: usize, h: f64 },

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("near-boundary evaluation at |z| = {0}")]
    NearBoundary(f64),

    #[error("no interior basepoint found for reflection")]
    NoInteriorBasepoint,

    #[error("pole is interior to the curve")]
    InteriorPole,

    #[error("inconsistent seminorms: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
