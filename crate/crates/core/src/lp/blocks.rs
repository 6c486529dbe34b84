//! Dyadic blocks `Δ_q` and low-pass operators `S_q` as Fourier multipliers.

use rayon::prelude::*;
use serde::Serialize;

use super::cutoff::CutoffPair;
use super::grid::{Grid, GridFunction, Spectrum};
use crate::error::{Error, Result};

/// Energy fraction above which a function counts as unresolved.
pub const RESOLVEDNESS_TOLERANCE: f64 = 1e-8;

/// Littlewood–Paley operators for a fixed cutoff pair.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LittlewoodPaley {
    cutoffs: CutoffPair,
}

impl LittlewoodPaley {
    pub fn new(cutoffs: CutoffPair) -> Self {
        Self { cutoffs }
    }

    pub fn cutoffs(&self) -> &CutoffPair {
        &self.cutoffs
    }

    /// Highest block index needed so that `Σ_{q ≤ q_top} Δ_q = I` on the grid.
    pub fn q_top(grid: &Grid) -> i32 {
        let radius = grid.nyquist() * (grid.dim() as f64).sqrt();
        let mut q = 0;
        while 0.75 * 2f64.powi(q + 1) <= radius {
            q += 1;
        }
        q
    }

    /// Fraction of spectral energy at `|ξ| ≥ 3/4·2^{q_max−1}`, i.e. in the top
    /// two admissible blocks or beyond them.
    pub fn unresolved_fraction(&self, spec: &Spectrum) -> f64 {
        let grid = spec.grid();
        let edge = 0.75 * 2f64.powi(grid.q_max() - 1);
        spec.mass_outside(0.0, edge * (1.0 - 1e-14))
    }

    pub fn check_resolved(&self, u: &GridFunction) -> Result<Spectrum> {
        let spec = Spectrum::of(u);
        let fraction = self.unresolved_fraction(&spec);
        if fraction > RESOLVEDNESS_TOLERANCE {
            return Err(Error::Unresolved {
                fraction,
                tolerance: RESOLVEDNESS_TOLERANCE,
            });
        }
        Ok(spec)
    }

    fn check_q(grid: &Grid, q: i32) -> Result<()> {
        if q > grid.q_max() {
            return Err(Error::UnresolvedBlock { q, q_max: grid.q_max() });
        }
        Ok(())
    }

    /// `Δ_q u` for a resolved `u` and `q ≤ q_max`; zero for `q ≤ −2`.
    pub fn delta_q(&self, u: &GridFunction, q: i32) -> Result<GridFunction> {
        Self::check_q(u.grid(), q)?;
        let spec = self.check_resolved(u)?;
        Ok(self.block_spectrum(&spec, q).to_function())
    }

    /// `S_q u` for a resolved `u` and `q ≤ q_max`; zero for `q ≤ −1`.
    pub fn s_q(&self, u: &GridFunction, q: i32) -> Result<GridFunction> {
        Self::check_q(u.grid(), q)?;
        let spec = self.check_resolved(u)?;
        Ok(self.lowpass_spectrum(&spec, q).to_function())
    }

    /// Unchecked `Δ_q` on spectral coefficients, valid for any `q`.
    pub fn block_spectrum(&self, spec: &Spectrum, q: i32) -> Spectrum {
        spec.apply(&self.cutoffs.block_multiplier(spec.grid(), q))
    }

    /// Unchecked `S_q` on spectral coefficients, valid for any `q`.
    pub fn lowpass_spectrum(&self, spec: &Spectrum, q: i32) -> Spectrum {
        spec.apply(&self.cutoffs.lowpass_multiplier(spec.grid(), q))
    }

    pub fn block(&self, u: &GridFunction, q: i32) -> GridFunction {
        self.block_spectrum(&Spectrum::of(u), q).to_function()
    }

    pub fn lowpass(&self, u: &GridFunction, q: i32) -> GridFunction {
        self.lowpass_spectrum(&Spectrum::of(u), q).to_function()
    }

    /// `‖Δ_q u‖²_{L²}` for `q = −1..=q_top` without synthesizing the blocks.
    pub fn block_energies(&self, spec: &Spectrum, q_top: i32) -> Vec<(i32, f64)> {
        (-1..=q_top)
            .map(|q| {
                let m = self.cutoffs.block_multiplier(spec.grid(), q);
                (q, spec.weighted_l2_norm_sq(&m))
            })
            .collect()
    }

    /// All blocks `q = −1..=q_max` of a resolved function, with support certificates.
    pub fn decompose(&self, u: &GridFunction) -> Result<DyadicDecomposition> {
        let spec = self.check_resolved(u)?;
        let grid = *u.grid();
        let blocks: Vec<Block> = (-1..=grid.q_max())
            .into_par_iter()
            .map(|q| {
                let bs = self.block_spectrum(&spec, q);
                let (lo, hi) = block_annulus(q);
                let outside_mass = absolute_mass_outside(&bs, lo, hi);
                Block {
                    q,
                    function: bs.to_function(),
                    outside_mass,
                }
            })
            .collect();
        let mut sum = GridFunction::zeros(grid);
        for b in &blocks {
            sum = sum.try_add(&b.function)?;
        }
        let norm = u.l2_norm();
        let residual = (&sum - u).l2_norm();
        let reconstruction_error = if norm > 0.0 { residual / norm } else { residual };
        Ok(DyadicDecomposition {
            grid,
            blocks,
            reconstruction_error,
        })
    }
}

/// Theoretical spectral support `[lo, hi]` of block `q`.
pub fn block_annulus(q: i32) -> (f64, f64) {
    if q < 0 {
        (0.0, 4.0 / 3.0)
    } else {
        (0.75 * 2f64.powi(q), 8.0 / 3.0 * 2f64.powi(q))
    }
}

/// Spectral energy outside `[lo, hi]` relative to the parent's scale (not the block's own).
fn absolute_mass_outside(spec: &Spectrum, lo: f64, hi: f64) -> f64 {
    let norms = spec.grid().frequency_norms();
    let total: f64 = spec.coeffs().iter().map(|c| c.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tol = 1e-12 * hi.max(1.0);
    let outside: f64 = spec
        .coeffs()
        .iter()
        .zip(&norms)
        .filter(|(_, r)| **r < lo - tol || **r > hi + tol)
        .map(|(c, _)| c.norm_sqr())
        .sum();
    outside / total
}

#[derive(Clone, Debug)]
pub struct Block {
    pub q: i32,
    pub function: GridFunction,
    /// Fraction of the block's spectral energy outside its theoretical annulus.
    pub outside_mass: f64,
}

#[derive(Clone, Debug)]
pub struct DyadicDecomposition {
    pub grid: Grid,
    pub blocks: Vec<Block>,
    /// `‖Σ_q Δ_q u − u‖ / ‖u‖` in `L²`.
    pub reconstruction_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSummary {
    pub q: i32,
    pub l2_norm: f64,
    pub outside_mass: f64,
}

impl DyadicDecomposition {
    pub fn summary(&self) -> Vec<BlockSummary> {
        self.blocks
            .iter()
            .map(|b| BlockSummary {
                q: b.q,
                l2_norm: b.function.l2_norm(),
                outside_mass: b.outside_mass,
            })
            .collect()
    }

    pub fn block(&self, q: i32) -> Option<&GridFunction> {
        self.blocks.iter().find(|b| b.q == q).map(|b| &b.function)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_lives_in_one_block() {
        let g = Grid::line(1024).unwrap();
        let lp = LittlewoodPaley::default();
        // |k| = 22 lies in [4/3·16, 3/2·16] where phi_cut(2^{-4}·) = 1.
        let u = GridFunction::mode(g, [22, 0]);
        let b4 = lp.delta_q(&u, 4).unwrap();
        assert!((&b4 - &u).linf_norm() < 1e-13);
        for q in [-1, 0, 1, 2, 6, 7] {
            assert!(lp.delta_q(&u, q).unwrap().linf_norm() < 1e-13);
        }
    }

    #[test]
    fn constant_is_all_low_frequency() {
        let g = Grid::line(256).unwrap();
        let lp = LittlewoodPaley::default();
        let u = GridFunction::constant(g, 2.5);
        assert!((&lp.delta_q(&u, -1).unwrap() - &u).linf_norm() < 1e-14);
        for q in 0..=g.q_max() {
            assert!(lp.delta_q(&u, q).unwrap().linf_norm() < 1e-14);
        }
        assert_eq!(lp.delta_q(&u, -3).unwrap().linf_norm(), 0.0);
    }

    #[test]
    fn lowpass_examples() {
        let g = Grid::line(1024).unwrap();
        let lp = LittlewoodPaley::default();
        let low = GridFunction::mode(g, [6, 0]);
        assert!((&lp.s_q(&low, 3).unwrap() - &low).linf_norm() < 1e-13);
        let high = GridFunction::mode(g, [11, 0]);
        assert!(lp.s_q(&high, 3).unwrap().linf_norm() < 1e-13);
    }

    #[test]
    fn block_above_q_max_is_rejected() {
        let g = Grid::line(256).unwrap();
        let u = GridFunction::constant(g, 1.0);
        let err = LittlewoodPaley::default().delta_q(&u, g.q_max() + 1).unwrap_err();
        assert!(matches!(err, Error::UnresolvedBlock { .. }));
    }

    #[test]
    fn unresolved_function_is_rejected() {
        let g = Grid::line(256).unwrap();
        let u = GridFunction::mode(g, [100, 0]);
        assert!(matches!(
            LittlewoodPaley::default().delta_q(&u, 0),
            Err(Error::Unresolved { .. })
        ));
    }

    #[test]
    fn q_top_covers_corners() {
        let g = Grid::square(64).unwrap();
        let q = LittlewoodPaley::q_top(&g);
        assert!(0.75 * 2f64.powi(q + 1) > g.nyquist() * 2f64.sqrt());
    }
}
