use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::coefficients::CoefficientField;
use crate::error::{Error, Result};
use crate::lp::{Grid, GridFunction, TimeSeries};
use crate::numerics::diff;
use crate::weight::WeightTable;

/// `g(t) = exp(−c/(σ(1−σ)))` with `σ = 2t/T` on `0 < σ < 1`, zero elsewhere.
pub fn bump(t: f64, horizon: f64, sharpness: f64) -> f64 {
    let sigma = 2.0 * t / horizon;
    if sigma <= 0.0 || sigma >= 1.0 {
        0.0
    } else {
        (-sharpness / (sigma * (1.0 - sigma))).exp()
    }
}

/// `g(t)·e^{ik·x}` sampled at `m` times on `[0, T]`, supported in `[0, T/2]`.
pub fn bump_mode(grid: Grid, horizon: f64, m: usize, k: [i64; 2], sharpness: f64) -> TimeSeries {
    let h = horizon / (m.max(2) - 1) as f64;
    let mode = GridFunction::mode(grid, k);
    let frames = (0..m).map(|i| mode.scale(bump(i as f64 * h, horizon, sharpness))).collect();
    TimeSeries { horizon, frames }
}

/// Fourth-order finite-difference `∂_t` of the frames at sample `i`.
pub fn time_derivative(v: &TimeSeries, i: usize) -> Result<GridFunction> {
    let m = v.frames.len();
    if m < 5 {
        return Err(Error::Resolution("time derivative needs at least five samples".into()));
    }
    let grid = *v.frames[0].grid();
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (j, c) in diff::stencil(i, m, v.step()) {
        for (a, x) in acc.iter_mut().zip(v.frames[j].values()) {
            *a += c * x;
        }
    }
    GridFunction::from_complex(grid, acc)
}

/// `Σ_{j,k} ∂_j(a_jk ∂_k v)` with the coefficients at sample `i`.
pub fn elliptic_part(coeffs: &CoefficientField, v: &GridFunction, i: usize) -> Result<GridFunction> {
    coeffs.grid().ensure_same(v.grid())?;
    let grad = v.gradient();
    let mut out = GridFunction::zeros(*v.grid());
    for j in 0..coeffs.dim() {
        let mut flux = GridFunction::zeros(*v.grid());
        for (k, dk) in grad.iter().enumerate() {
            flux = flux.try_add(&coeffs.entry(j, k).frames[i].product(dk)?)?;
        }
        out = out.try_add(&flux.derivative(j))?;
    }
    Ok(out)
}

/// `∂_t v + Σ ∂_j(a_jk ∂_k v)`, plus `c·v` when a zero-order term is attached.
pub(crate) fn base_operator(coeffs: &CoefficientField, v: &TimeSeries, i: usize) -> Result<GridFunction> {
    let mut out = time_derivative(v, i)?.try_add(&elliptic_part(coeffs, &v.frames[i], i)?)?;
    if let Some(c) = coeffs.zero_order() {
        out = out.try_add(&c.frames[i].product(&v.frames[i])?)?;
    }
    Ok(out)
}

/// `∂_t v + Σ ∂_j(a_jk ∂_k v) + Φ′(γ(T−t))v` at time sample `i`.
pub fn apply_conjugated_operator(
    coeffs: &CoefficientField,
    weight: &WeightTable,
    v: &TimeSeries,
    gamma: f64,
    i: usize,
) -> Result<GridFunction> {
    coeffs.check_axis(v)?;
    let tau = gamma * (v.horizon - v.time(i));
    let dphi = weight.phi_prime(tau.max(0.0))?;
    base_operator(coeffs, v, i)?.axpy(dphi, &v.frames[i])
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationCheck {
    pub gamma: f64,
    /// `‖P u − e^{−Φ/γ} L v‖ / ‖e^{−Φ/γ} L v‖` in `L²` over time and space.
    pub relative_residual: f64,
}

/// Compares the operator applied to `u = e^{−Φ(γ(T−t))/γ}v` with the
/// conjugated operator applied to `v`, both discretized on the same grids.
pub fn conjugation_check(coeffs: &CoefficientField, weight: &WeightTable, v: &TimeSeries, gamma: f64) -> Result<ConjugationCheck> {
    coeffs.check_axis(v)?;
    let m = v.frames.len();
    let factors = (0..m)
        .map(|i| {
            let tau = (gamma * (v.horizon - v.time(i))).max(0.0);
            Ok((-weight.big_phi(tau)? / gamma).exp())
        })
        .collect::<Result<Vec<f64>>>()?;
    let u = TimeSeries {
        horizon: v.horizon,
        frames: v.frames.iter().zip(&factors).map(|(f, e)| f.scale(*e)).collect(),
    };
    let sums = (0..m)
        .into_par_iter()
        .map(|i| {
            let pu = base_operator(coeffs, &u, i)?;
            let lv = apply_conjugated_operator(coeffs, weight, v, gamma, i)?.scale(factors[i]);
            Ok(((&pu - &lv).l2_norm_sq(), lv.l2_norm_sq()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (num, den) = sums.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    if den == 0.0 {
        return Err(Error::Degenerate("conjugated operator vanishes".into()));
    }
    Ok(ConjugationCheck {
        gamma,
        relative_residual: (num / den).sqrt(),
    })
}
