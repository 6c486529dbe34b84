//! Seeded band-limited random fields.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lp::{Grid, GridFunction, Spectrum};
use crate::modulus::Modulus;

/// Per-shell amplitude of the random Fourier coefficients; shell `q` holds
/// `2^q ≤ |ξ| < 2^{q+1}` and shell `−1` holds `|ξ| < 1`.
#[derive(Clone, Debug, Default)]
pub enum Profile {
    /// Equal amplitude in every shell.
    #[default]
    Flat,
    /// `ω(2^{-q})`, so the field has a bounded `C^ω` norm.
    Holder(Modulus),
    /// `2^{sq}/Ω(q)`, which balances the block weights of `H^{-s}_Ω`.
    Sobolev { s: f64, omega: Option<Modulus> },
}

impl Profile {
    fn amplitude(&self, q: i32) -> f64 {
        match self {
            Profile::Flat => 1.0,
            Profile::Holder(w) => w.value(2f64.powi(-q.max(0))),
            Profile::Sobolev { s, omega } => {
                let big = omega.as_ref().map_or(1.0, |w| w.dyadic_weight(q));
                2f64.powf(s * q.max(0) as f64) / big
            }
        }
    }
}

/// Default band edge `3/4·2^{q_max−1}`: spectra strictly inside keep the field resolved.
pub fn default_band(grid: &Grid) -> f64 {
    0.75 * 2f64.powi(grid.q_max() - 1)
}

/// Real random field with spectrum in `|ξ| < band`, normalized to unit `L²` norm.
///
/// Coefficients are drawn per integer wavenumber in a fixed order, so the same
/// seed and band give the same function on every grid that resolves the band.
pub fn band_limited_with<R: Rng>(grid: Grid, rng: &mut R, profile: &Profile, band: f64) -> GridFunction {
    let n = grid.n() as i64;
    let step = 2.0 * std::f64::consts::PI / grid.period();
    let reach = ((band / step).floor() as i64).min(n / 2 - 1);
    let wrap = |k: i64| k.rem_euclid(n) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut draw = |k: [i64; 2]| -> Option<Complex64> {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let r = step * ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
        if r >= band {
            return None;
        }
        let q = if r < 1.0 { -1 } else { r.log2().floor() as i32 };
        Some(Complex64::new(re, im) * profile.amplitude(q))
    };
    match grid.dim() {
        1 => {
            for k in -reach..=reach {
                if let Some(c) = draw([k, 0]) {
                    coeffs[wrap(k)] = c;
                }
            }
        }
        _ => {
            for k0 in -reach..=reach {
                for k1 in -reach..=reach {
                    if let Some(c) = draw([k0, k1]) {
                        coeffs[wrap(k0) * grid.n() + wrap(k1)] = c;
                    }
                }
            }
        }
    }
    // Unnormalized DFT: scale so the field does not depend on N.
    let scale = grid.len() as f64;
    let spec = Spectrum::from_coeffs(grid, coeffs.into_iter().map(|c| c * scale).collect(), false)
        .expect("coefficient count matches grid");
    let u = spec.to_function().into_real();
    let norm = u.l2_norm();
    if norm > 0.0 {
        u.scale(1.0 / norm)
    } else {
        u
    }
}

/// Like [`band_limited`] with an explicit band edge.
pub fn band_limited_in(grid: Grid, seed: u64, profile: &Profile, band: f64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    band_limited_with(grid, &mut rng, profile, band)
}

pub fn band_limited(grid: Grid, seed: u64, profile: &Profile) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    band_limited_with(grid, &mut rng, profile, default_band(&grid))
}
