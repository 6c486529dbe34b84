//! Littlewood–Paley analysis on periodic grids, Osgood-type weights and
//! numerical evaluation of a Carleman inequality for backward parabolic
//! operators with non-Lipschitz coefficients.

pub mod carleman;
pub mod error;
pub mod lp;
pub mod modulus;
pub mod numerics;
pub mod paraproduct;
pub mod sampling;
pub mod verifiers;
pub mod weight;

pub use error::{Error, Result};
