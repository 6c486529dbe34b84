use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid modulus of continuity: {0}")]
    InvalidModulus(String),

    #[error("quadrature on [{a}, {b}] failed: {detail}")]
    Quadrature { a: f64, b: f64, detail: String },

    /// The weight precursor is bounded by `sup_phi`; values beyond it have no
    /// preimage. This is what a modulus failing the Osgood condition looks like.
    #[error("weight argument {requested} is beyond the reachable range (sup phi ~ {sup_phi:.6e}); the modulus is not Osgood on the representable range")]
    NonOsgoodRange { requested: f64, sup_phi: f64 },

    #[error("weight table covers tau <= {available}, but {requested} was requested; rebuild the table with a larger tau_max")]
    WeightRange { requested: f64, available: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("block index {q} exceeds the Nyquist-supported range q_max = {q_max}; the data are not resolved at this scale")]
    UnresolvedBlock { q: i32, q_max: i32 },

    #[error("function is not resolved: {fraction:.3e} of its spectral energy lies in the top two dyadic blocks or beyond (tolerance {tolerance:.1e})")]
    Unresolved { fraction: f64, tolerance: f64 },

    #[error("block {q} violates its spectral support: {mass:.3e} of its energy lies outside {region}")]
    SupportViolation { q: i32, mass: f64, region: String },

    #[error("block {q} needs frequencies up to {needed:.3} but the grid resolves only {nyquist:.3}")]
    Margin { q: i32, needed: f64, nyquist: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("time resolution: {0}")]
    Resolution(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
