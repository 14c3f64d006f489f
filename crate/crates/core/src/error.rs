use thiserror::Error;

/// Errors raised anywhere in the synthesis and simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is a nonzero constant and has no roots")]
    ConstantPolynomial,
    #[error("eigenvalue solver failed to converge")]
    NoConvergence,

    #[error("spectral density has a root on the imaginary axis")]
    ImaginaryAxisRoot,
    #[error("polynomials share a root (not coprime)")]
    NotCoprime,
    #[error("Sylvester system is rank deficient")]
    SingularSylvester,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("transfer function denominator is identically zero")]
    ZeroDenominator,
    #[error("algebraic loop: 1 + loop gain vanishes identically")]
    AlgebraicLoop,
    #[error("pole on the imaginary axis at omega = {0} rad/s")]
    PoleOnAxis(f64),
    #[error("transfer function is not strictly proper")]
    NotStrictlyProper,
    #[error("transfer function is unstable")]
    Unstable,
    #[error("transfer function is improper (numerator degree exceeds denominator degree)")]
    Improper,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("time step {dt} s exceeds limit {limit} s for the fastest mode")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("trace does not settle within the 2% band")]
    NotSettled,

    #[error("velocity plant has complex poles; an overdamped motor is required")]
    OverdampedRequired,
    #[error("velocity plant has complex poles")]
    ComplexPoles,
    #[error("velocity plant poles are repeated")]
    RepeatedPoles,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("closed loop has a biproper entry; impulse energy is infinite")]
    InfiniteCost,
    #[error("plant is non-minimum-phase: numerator is not Hurwitz, so N(s) cannot be inverted")]
    NonMinimumPhasePlant,
    #[error("X - N*Q2 is identically zero")]
    DegenerateDenominator,
    #[error("closed loop is not internally stable")]
    NotInternallyStable,

    #[error("bad scenario: {0}")]
    BadSpec(String),
    #[error("simulation diverged (trace {0} exceeded the guard)")]
    UnstableLoop(String),
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
