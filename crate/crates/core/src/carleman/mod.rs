//! The conjugated backward-parabolic operator and numerical evaluation of
//! both sides of the transformed Carleman inequality
//!
//! ```text
//! ∫₀^{T/2} ‖∂_t v + Σ∂_j(a_jk ∂_k v) + Φ′(γ(T−t))v‖²_{H^{-s}} dt
//!     ≥ C γ^{1/4} ∫₀^{T/2} (‖∇v‖²_{H^{-s}_Ω} + γ^{3/4}‖v‖²_{L²}) dt.
//! ```

mod coefficients;
mod evaluate;
mod operator;

pub use coefficients::{CoefficientField, CoefficientNorms};
pub use evaluate::{
    block_diagnostics, evaluate_carleman, BlockDiagnostics, BlockRow, CarlemanConfig, CarlemanReport, CarlemanRun,
    ExponentRow, SweepRow, DEFAULT_RATIO_FLOOR, EXPONENT_PAIRS,
};
pub use operator::{
    apply_conjugated_operator, bump, bump_mode, conjugation_check, elliptic_part, time_derivative, ConjugationCheck,
};
