use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate parameters: g = 0 and delta = 0 make every Rabi frequency vanish")]
    DegenerateParameters,

    #[error(
        "truncation n_max = {n_max} leaves coherent tail probability {tail:e} (must be < 1e-12)"
    )]
    TruncationTooSmall { n_max: usize, tail: f64 },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("step size {dt:e} exceeds the allowed maximum {limit:e}")]
    StepSize { dt: f64, limit: f64 },

    #[error("integration lost unitarity: final norm deviates from initial by {deviation:e}")]
    NonConvergence { deviation: f64 },

    #[error("manifold {0} carries no population; cannot normalize")]
    EmptyManifold(usize),

    #[error("vacuum field: <a^dag a> = {0:e}, Mandel Q is undefined")]
    VacuumField(f64),

    #[error("zero denominator in the manifold-{0} closed-form expression")]
    ZeroDenominator(usize),

    #[error("Laguerre argument must be non-negative, got {0}")]
    LaguerreDomain(f64),

    #[error("Wigner series at beta = {beta} did not converge within {limit} terms")]
    SeriesConvergence { beta: Complex64, limit: usize },

    #[error("Wigner series at beta = {beta} has imaginary residue {residue:e}")]
    ImaginaryResidue { beta: Complex64, residue: f64 },

    #[error(
        "displacement |beta|^2 = {beta_sq} exceeds n_max/4 = {limit}; basis truncation unsafe"
    )]
    DisplacementTruncation { beta_sq: f64, limit: f64 },

    #[error("Wigner value {value} at beta = {beta} violates the 2/pi bound")]
    WignerBound { beta: Complex64, value: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
