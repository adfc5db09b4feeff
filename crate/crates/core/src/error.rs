use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot differentiate with respect to parameter `{0}`; only x, y, z are dynamical")]
    DiffByParameter(String),
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("parameter `{0}` is bound to 0 but occurs in a denominator")]
    ZeroDenominator(String),
    #[error("cannot substitute `{param}` := {replacement} into a negative power (replacement is not an invertible monomial)")]
    NonInvertibleSubstitution { param: String, replacement: String },
    #[error("polynomial exceeds the {limit}-term guard")]
    TooManyTerms { limit: usize },
    #[error("exponent overflow (limit {limit})")]
    ExponentOverflow { limit: u32 },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("vector is not Poisson: J.(curl J) = {0}")]
    NotPoisson(String),
    #[error("source term is nonzero ({0}); evaluate grad(H).rhs directly instead")]
    SourceTermPresent(String),
    #[error("multiplier must be a nonzero constant monomial, got {0}; evaluate numerically instead")]
    NonConstantMultiplier(String),
    #[error("matrix is not orthogonal: T^T T - I = {0}")]
    NotOrthogonal(String),
    #[error("conservative part is not volume preserving: div(J x grad H) = {0}")]
    VolumeNotPreserved(String),
    #[error("closed form gradient disagrees with finite differences at {point:?} (relative error {error:e})")]
    GradientMismatch { point: [f64; 3], error: f64 },
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
