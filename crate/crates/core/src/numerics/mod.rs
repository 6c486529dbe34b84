//! Scalar numerical building blocks shared by the modulus and weight code.

pub mod diff;
pub mod interp;
pub mod quad;
pub mod root;

pub use interp::MonotoneCubic;
pub use quad::{integrate, simpson, QuadOptions, Quadrature};
pub use root::newton_bracketed;
