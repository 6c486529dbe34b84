//! Periodic grids, Littlewood–Paley blocks and dyadic Sobolev norms.

pub mod blocks;
pub mod cutoff;
pub mod fft;
pub mod grid;
pub mod io;
pub mod norms;

pub use blocks::{block_annulus, Block, BlockSummary, DyadicDecomposition, LittlewoodPaley, RESOLVEDNESS_TOLERANCE};
pub use cutoff::CutoffPair;
pub use grid::{Grid, GridFunction, Spectrum};
pub use io::{Dtype, Encoding, GridFile, TimeSeries};
pub use norms::{
    dyadic_sobolev_norm, dyadic_sobolev_norm_sq_spectrum, holder_block_norm, multiplier_sobolev_norm_sq,
    synthesis_norm_bound, HolderBlockNorm, SobolevSpec, SynthesisReport,
};
