use num_complex::Complex64;
use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series of order 0 has no derivative")]
    ZeroOrder,

    #[error("constant term is zero (|c0| <= 1e-12); operation undefined")]
    ZeroConstantTerm,

    #[error("coefficient magnitude exceeded 1e150; series blew up")]
    CoefficientOverflow,

    #[error("non-finite coefficient in series")]
    NonFiniteCoefficient,

    #[error("derivative degenerate at z = {z}: denominator below 1e-12")]
    DegenerateDerivative { z: Complex64 },

    #[error("dilatation modulus reached 1 at z = {z}")]
    DilatationOnBoundary { z: Complex64 },

    #[error("Jacobian of an origin-fixed map is singular at z = 0")]
    OriginSingularity,

    #[error("radial field excludes z = 0")]
    OriginExcluded,

    #[error("origin-fixed dilatation must vanish at 0, got |omega(0)| = {value}")]
    DilatationNotVanishingAtZero { value: f64 },

    #[error("h is not normalized: |a1 - 1| = {deviation}")]
    NotNormalized { deviation: f64 },

    #[error("map variant {found} not accepted here, expected {expected}")]
    WrongVariant {
        expected: &'static str,
        found: &'static str,
    },

    #[error("field evaluation failed at every probe point")]
    AllPointsFailed,

    #[error("evaluation failed: {0}")]
    EvaluationFailure(String),

    #[error("f vanishes on the probe circle at z = {z}")]
    ZeroOnCircle { z: Complex64 },

    #[error("adaptive quadrature did not converge within depth limit")]
    QuadratureNonConvergence,

    #[error("second derivative unavailable for this map representation")]
    SecondDerivativeUnavailable,

    #[error("empty curve set, nothing to emit")]
    EmptyCurveSet,

    #[error("invalid manifest: {0}")]
    InvalidManifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
