use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("velocity squared equals c^2 (lightlike), gamma undefined")]
    LightSpeedVelocity,
    #[error("gamma = -1, boost matrix denominator vanishes")]
    DegenerateGamma,
    #[error("degenerate composition: 1 + u.v/c^2 or condition (gamma_uv = +-1) vanishes")]
    DegenerateComposition,
    #[error("complex velocity with v.v = 0 cannot be normalized or split")]
    IsotropicVector,
    #[error("zero velocity not admissible here")]
    ZeroVelocity,
    #[error("matrix is singular or nearly singular (|det| = {det_abs:.3e})")]
    SingularMatrix { det_abs: f64 },
    #[error("matrix is not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },
    #[error("matrix is not in the (complex) Lorentz group (residual {residual:.3e})")]
    NotLorentz { residual: f64 },
    #[error("top-left entry of the frame map vanishes; row read-off impossible")]
    LightlikeRow,
    #[error("direction vector is not a real unit vector")]
    NotUnit,
    #[error("triple parameters violate the orthonormality constraints (residual {residual:.3e})")]
    ConstraintViolation { residual: f64 },
    #[error("direction is degenerate for this construction (u1 = 0 or u parallel to e1)")]
    DegenerateDirection,
    #[error("sampled rows are rank deficient; resample with more points")]
    RankDeficientSampling,
    #[error("iteration did not converge; best residual {best_residual:.3e}")]
    NoConvergence { best_residual: f64 },
    #[error("finite-difference step too small relative to coordinate scale")]
    StepTooSmall,
    #[error("magnetic field is (numerically) zero; ratio extraction undefined")]
    ZeroB,
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("invalid constants: {0}")]
    BadConstants(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
