use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("superluminal orbit: R*Omega = {speed} m/s exceeds c")]
    SuperluminalOrbit { speed: f64 },
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),
    #[error("cavity is not at resonance: |omega_c - omega0| = {detuning} rad/s")]
    NotAtResonance { detuning: f64 },
    #[error("inertial off-resonant formula diverges at resonance")]
    DivergentAtResonance,
    #[error("wrong rotation regime: {0}")]
    WrongRegime(String),
    #[error("emission and excitation peaks coincide: {0}")]
    CoincidentPeaks(String),
    #[error("both transition rates are zero")]
    BothRatesZero,
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("unknown scenario: {0}")]
    UnknownScenario(String),
    #[error("scan window excludes the peak (maximum at window boundary)")]
    WindowExcludesPeak,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
