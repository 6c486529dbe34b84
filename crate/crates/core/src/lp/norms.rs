//! Dyadic Sobolev norms, weighted variants and the block characterization of `C^ω`.

use serde::{Deserialize, Serialize};

use super::blocks::LittlewoodPaley;
use super::grid::{GridFunction, Spectrum};
use crate::error::{Error, Result};
use crate::modulus::{check_omega_conditions, Modulus, Verdict};

/// Exponent `s` and an optional weight `Ω(q) = 2^q ω(2^{-q})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevSpec {
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Modulus>,
}

impl SobolevSpec {
    pub fn plain(s: f64) -> Self {
        Self { s, omega: None }
    }

    pub fn weighted(s: f64, omega: Modulus) -> Self {
        Self { s, omega: Some(omega) }
    }

    /// `2^{sq} Ω(q)`; block `−1` uses `2^{-s}` and `Ω(0)`.
    pub fn block_weight(&self, q: i32) -> f64 {
        let omega = self.omega.as_ref().map_or(1.0, |w| w.dyadic_weight(q));
        2f64.powf(self.s * q as f64) * omega
    }
}

/// `Σ_q 2^{2sq} Ω(q)² ‖Δ_q u‖²` summed over every block the grid can hold.
pub fn dyadic_sobolev_norm_sq_spectrum(lp: &LittlewoodPaley, spec: &Spectrum, sob: &SobolevSpec) -> f64 {
    let q_top = LittlewoodPaley::q_top(spec.grid());
    lp.block_energies(spec, q_top)
        .into_iter()
        .map(|(q, e)| sob.block_weight(q).powi(2) * e)
        .sum()
}

/// `(Σ_q 2^{2sq} Ω(q)² ‖Δ_q u‖²_{L²})^{1/2}` for a resolved `u`.
pub fn dyadic_sobolev_norm(lp: &LittlewoodPaley, u: &GridFunction, sob: &SobolevSpec) -> Result<f64> {
    let spec = lp.check_resolved(u)?;
    Ok(dyadic_sobolev_norm_sq_spectrum(lp, &spec, sob).sqrt())
}

/// `‖(1 + |ξ|²)^{s/2} û‖` with the continuous normalization, offered as a cross-check.
pub fn multiplier_sobolev_norm_sq(spec: &Spectrum, s: f64) -> f64 {
    let m: Vec<f64> = spec
        .grid()
        .frequency_norms()
        .iter()
        .map(|r| (1.0 + r * r).powf(0.5 * s))
        .collect();
    spec.weighted_l2_norm_sq(&m)
}

#[derive(Clone, Debug, Serialize)]
pub struct SynthesisReport {
    /// Dyadic `H^s` norm of `Σ u_q`.
    pub sum_norm: f64,
    /// `(Σ 2^{2qs} ‖u_q‖²)^{1/2}`.
    pub sequence_norm: f64,
    pub ratio: f64,
    pub ceiling: f64,
    pub passed: bool,
}

/// Sums blocks with controlled spectral support and compares the `H^s` norm of
/// the sum with the `ℓ²` norm of the weighted block sequence.
///
/// Each `u_q` must have its spectrum in `{R^{-1}2^q ≤ |ξ| ≤ 2R·2^q}`, or in the
/// ball `{|ξ| ≤ R·2^q}` when `s > 0`.
pub fn synthesis_norm_bound(
    lp: &LittlewoodPaley,
    blocks: &[(i32, GridFunction)],
    s: f64,
    radius: f64,
    ceiling: f64,
) -> Result<SynthesisReport> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidInput("no blocks supplied".into()))?;
    let grid = *first.1.grid();
    let mut sum = GridFunction::zeros(grid);
    let mut seq = 0.0;
    for (q, u) in blocks {
        let spec = Spectrum::of(u);
        let scale = 2f64.powi(*q);
        let (lo, hi, region) = if s > 0.0 {
            (0.0, radius * scale, format!("the ball |ξ| ≤ {}", radius * scale))
        } else {
            (
                scale / radius,
                2.0 * radius * scale,
                format!("the annulus {} ≤ |ξ| ≤ {}", scale / radius, 2.0 * radius * scale),
            )
        };
        let slack = 1e-12 * hi.max(1.0);
        let mass = spec.mass_outside(lo - slack, hi + slack);
        if mass > 1e-12 {
            return Err(Error::SupportViolation { q: *q, mass, region });
        }
        seq += 2f64.powf(2.0 * s * *q as f64) * u.l2_norm_sq();
        sum = sum.try_add(u)?;
    }
    let sum_norm = dyadic_sobolev_norm_sq_spectrum(lp, &Spectrum::of(&sum), &SobolevSpec::plain(s)).sqrt();
    let sequence_norm = seq.sqrt();
    let ratio = if sequence_norm > 0.0 { sum_norm / sequence_norm } else { 0.0 };
    Ok(SynthesisReport {
        sum_norm,
        sequence_norm,
        ratio,
        ceiling,
        passed: ratio <= ceiling && ratio >= 1.0 / ceiling,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderBlockNorm {
    pub value: f64,
    /// Block index attaining the supremum.
    pub q: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// `sup_{q ≥ 0} ‖∇ S_q u‖_{L∞} / (2^q ω(2^{-q}))` for a resolved `u`.
pub fn holder_block_norm(lp: &LittlewoodPaley, u: &GridFunction, omega: &Modulus) -> Result<HolderBlockNorm> {
    let spec = lp.check_resolved(u)?;
    let grid = *u.grid();
    let mut best = (0.0f64, 0);
    for q in 0..=grid.q_max() {
        let low = lp.lowpass_spectrum(&spec, q).to_function();
        let r = low.gradient_linf() / omega.dyadic_weight(q);
        if r > best.0 {
            best = (r, q);
        }
    }
    let dini = &check_omega_conditions(omega, &[], 20)[0];
    let warning = (dini.verdict != Verdict::Pass)
        .then(|| "ω does not pass the Dini check; the block characterization is not guaranteed".to_string());
    Ok(HolderBlockNorm {
        value: best.0,
        q: best.1,
        warning,
    })
}
