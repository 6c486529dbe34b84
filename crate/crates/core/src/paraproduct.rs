//! Bony paraproduct, remainders and the block-wise product decomposition
//! `Δ_q(ab) = S_{q−1}a·Δ_q b + R_q(a,b)` with `R_q = R_q¹ + R_q² + R_q³`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{
    dyadic_sobolev_norm_sq_spectrum, GridFunction, LittlewoodPaley, SobolevSpec, Spectrum,
};
use crate::modulus::{modulus_seminorm, Modulus};

/// Spectra of the two factors, computed once and shared by all block operations.
struct Factors<'a> {
    lp: &'a LittlewoodPaley,
    a: Spectrum,
    b: Spectrum,
}

impl<'a> Factors<'a> {
    fn new(lp: &'a LittlewoodPaley, a: &GridFunction, b: &GridFunction) -> Result<Self> {
        a.grid().ensure_same(b.grid())?;
        Ok(Self {
            lp,
            a: Spectrum::of(a),
            b: Spectrum::of(b),
        })
    }

    fn low(&self, x: &Spectrum, q: i32) -> GridFunction {
        self.lp.lowpass_spectrum(x, q).to_function()
    }

    fn block(&self, x: &Spectrum, q: i32) -> GridFunction {
        self.lp.block_spectrum(x, q).to_function()
    }

    fn q_top(&self) -> i32 {
        LittlewoodPaley::q_top(self.a.grid())
    }
}

fn sum_all(terms: Vec<GridFunction>, grid: crate::lp::Grid) -> Result<GridFunction> {
    terms.iter().try_fold(GridFunction::zeros(grid), |acc, t| acc.try_add(t))
}

fn block_of(lp: &LittlewoodPaley, u: &GridFunction, q: i32) -> GridFunction {
    lp.block(u, q)
}

/// `T_a b = Σ_{q ≥ 1} S_{q−1}a · Δ_q b`.
pub fn paraproduct(lp: &LittlewoodPaley, a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    let f = Factors::new(lp, a, b)?;
    let terms = (1..=f.q_top())
        .into_par_iter()
        .map(|q| f.low(&f.a, q - 1).product(&f.block(&f.b, q)))
        .collect::<Result<Vec<_>>>()?;
    sum_all(terms, *a.grid())
}

/// `R(a,b) = Σ_q Δ_q a · (Δ_{q−1} + Δ_q + Δ_{q+1}) b`.
pub fn remainder(lp: &LittlewoodPaley, a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    let f = Factors::new(lp, a, b)?;
    let terms = (-1..=f.q_top())
        .into_par_iter()
        .map(|q| {
            let near = f.lp.block_spectrum(&f.b, q - 1)
                .try_add(&f.lp.block_spectrum(&f.b, q))?
                .try_add(&f.lp.block_spectrum(&f.b, q + 1))?
                .to_function();
            f.block(&f.a, q).product(&near)
        })
        .collect::<Result<Vec<_>>>()?;
    sum_all(terms, *a.grid())
}

/// `R̃(a,b) = Σ_{q′ ≥ −1} S_{q′+2}b · Δ_{q′}a`, equal to `T_b a + R(a,b)`.
pub fn tilde_remainder(lp: &LittlewoodPaley, a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    let f = Factors::new(lp, a, b)?;
    let terms = (-1..=f.q_top())
        .into_par_iter()
        .map(|q| f.low(&f.b, q + 2).product(&f.block(&f.a, q)))
        .collect::<Result<Vec<_>>>()?;
    sum_all(terms, *a.grid())
}

/// The pieces of `Δ_q(ab)` for one block index.
#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub q: i32,
    /// `S_{q−1}a · Δ_q b`.
    pub main: GridFunction,
    /// `Σ_{|q′−q|≤4} [Δ_q, S_{q′−1}a] Δ_{q′}b`.
    pub r1: GridFunction,
    /// `Σ_{|q′−q|≤4} (S_{q′−1}a − S_{q−1}a) Δ_qΔ_{q′}b`.
    pub r2: GridFunction,
    /// `Σ_{q′>q−4} Δ_q(S_{q′+2}b · Δ_{q′}a)`.
    pub r3: GridFunction,
    /// `‖main + r1 + r2 + r3 − Δ_q(ab)‖ / ‖ab‖` in `L²` (absolute when the product vanishes).
    pub residual: f64,
    /// Spectral energy fraction of the reassembled block outside `|ξ| ≤ 10/3·2^q`.
    pub outside_mass: f64,
}

/// Largest `q` whose product spectrum `|ξ| ≤ 10/3·2^q` stays below the Nyquist frequency.
pub fn margin_q_max(grid: &crate::lp::Grid) -> i32 {
    let mut q = 0;
    while 10.0 / 3.0 * 2f64.powi(q + 1) < grid.nyquist() {
        q += 1;
    }
    q
}

fn check_margin(grid: &crate::lp::Grid, q: i32) -> Result<()> {
    let needed = 10.0 / 3.0 * 2f64.powi(q);
    if needed >= grid.nyquist() {
        return Err(Error::Margin {
            q,
            needed,
            nyquist: grid.nyquist(),
        });
    }
    Ok(())
}

/// Splits `Δ_q(ab)` into the main term and the three remainder pieces.
pub fn decompose_product(lp: &LittlewoodPaley, a: &GridFunction, b: &GridFunction, q: i32) -> Result<ProductDecomposition> {
    check_margin(a.grid(), q)?;
    let f = Factors::new(lp, a, b)?;
    let grid = *a.grid();
    let s_a = f.low(&f.a, q - 1);
    let b_q = f.lp.block_spectrum(&f.b, q);
    let main = s_a.product(&b_q.to_function())?;

    let near: Vec<i32> = ((q - 4).max(-1)..=q + 4).collect();
    let pieces = near
        .par_iter()
        .map(|&qp| {
            let s_qp = f.low(&f.a, qp - 1);
            let b_qp = f.block(&f.b, qp);
            // Δ_qΔ_{q′}b
            let bb = f.lp.block_spectrum(&f.lp.block_spectrum(&f.b, qp), q).to_function();
            let comm = block_of(f.lp, &s_qp.product(&b_qp)?, q).try_sub(&s_qp.product(&bb)?)?;
            let shift = s_qp.try_sub(&s_a)?.product(&bb)?;
            Ok((comm, shift))
        })
        .collect::<Result<Vec<_>>>()?;
    let (r1_terms, r2_terms): (Vec<_>, Vec<_>) = pieces.into_iter().unzip();
    let r1 = sum_all(r1_terms, grid)?;
    let r2 = sum_all(r2_terms, grid)?;

    let r3_terms = ((q - 3).max(-1)..=f.q_top())
        .into_par_iter()
        .map(|qp| Ok(block_of(f.lp, &f.low(&f.b, qp + 2).product(&f.block(&f.a, qp))?, q)))
        .collect::<Result<Vec<_>>>()?;
    let r3 = sum_all(r3_terms, grid)?;

    let ab = a.product(b)?;
    let target = block_of(lp, &ab, q);
    let total = main.try_add(&r1)?.try_add(&r2)?.try_add(&r3)?;
    let diff = total.try_sub(&target)?.l2_norm();
    let scale = ab.l2_norm();
    let residual = if scale > 0.0 { diff / scale } else { diff };
    let spec = Spectrum::of(&total);
    let slack = 1e-12 * 2f64.powi(q.max(0));
    let outside_mass = spec.mass_outside(0.0, 10.0 / 3.0 * 2f64.powi(q) + slack);
    Ok(ProductDecomposition {
        q,
        main,
        r1,
        r2,
        r3,
        residual,
        outside_mass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportRuleCheck {
    pub q: i32,
    /// `max_{|q′−q|≥5} ‖Δ_q(S_{q′−1}a·Δ_{q′}b)‖ / (‖a‖‖b‖)`.
    pub far_paraproduct: f64,
    /// `max_{q′≤q−4} ‖Δ_q(S_{q′+2}a·Δ_{q′}b)‖ / (‖a‖‖b‖)`.
    pub low_tilde: f64,
}

/// Measures the terms that vanish by spectral support.
pub fn check_support_rules(lp: &LittlewoodPaley, a: &GridFunction, b: &GridFunction, q: i32) -> Result<SupportRuleCheck> {
    let f = Factors::new(lp, a, b)?;
    let scale = (a.l2_norm() * b.l2_norm()).max(f64::MIN_POSITIVE);
    let mut far = 0.0f64;
    for qp in -1..=f.q_top() {
        if (qp - q).abs() >= 5 {
            let t = block_of(lp, &f.low(&f.a, qp - 1).product(&f.block(&f.b, qp))?, q);
            far = far.max(t.l2_norm() / scale);
        }
    }
    let mut low = 0.0f64;
    for qp in -1..=(q - 4) {
        let t = block_of(lp, &f.low(&f.a, qp + 2).product(&f.block(&f.b, qp))?, q);
        low = low.max(t.l2_norm() / scale);
    }
    Ok(SupportRuleCheck {
        q,
        far_paraproduct: far,
        low_tilde: low,
    })
}

/// Measured ratios `(Σ_q 2^{2(1−s)q}‖R_q^{(i)}‖²)^{1/2} / (‖a‖_{C^ω} ‖b‖_{H^{-s}_Ω})`.
#[derive(Clone, Debug, Serialize)]
pub struct RemainderEstimate {
    pub s: f64,
    pub ratios: [f64; 3],
    pub numerators: [f64; 3],
    /// `‖a‖_{L∞} + [a]_ω`.
    pub a_holder_norm: f64,
    /// `‖b‖_{H^{-s}_Ω}`.
    pub b_weighted_norm: f64,
    pub q_min: i32,
    pub q_max: i32,
    /// Fraction of the energy of `a` beyond the resolved blocks; the truncated
    /// tail of the third piece is controlled by it.
    pub r3_tail_fraction: f64,
}

pub fn verify_remainder_estimate(
    lp: &LittlewoodPaley,
    a: &GridFunction,
    b: &GridFunction,
    s: f64,
    omega: &Modulus,
    q_min: Option<i32>,
) -> Result<RemainderEstimate> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidInput(format!("s must lie in (0, 1), got {s}")));
    }
    let grid = *a.grid();
    let a_holder_norm = a.linf_norm() + modulus_seminorm(a, omega)?;
    let b_spec = Spectrum::of(b);
    let b_weighted_norm =
        dyadic_sobolev_norm_sq_spectrum(lp, &b_spec, &SobolevSpec::weighted(-s, omega.clone())).sqrt();
    if a_holder_norm == 0.0 || b_weighted_norm == 0.0 {
        return Err(Error::Degenerate(format!(
            "‖a‖_Cω = {a_holder_norm:e}, ‖b‖_H = {b_weighted_norm:e}"
        )));
    }
    let q_min = q_min.unwrap_or(0);
    let q_max = margin_q_max(&grid).min(grid.q_max());
    let sums = (q_min..=q_max)
        .into_par_iter()
        .map(|q| {
            let d = decompose_product(lp, a, b, q)?;
            let w = 2f64.powf(2.0 * (1.0 - s) * q as f64);
            Ok([
                w * d.r1.l2_norm_sq(),
                w * d.r2.l2_norm_sq(),
                w * d.r3.l2_norm_sq(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut numerators = [0.0; 3];
    for row in &sums {
        for i in 0..3 {
            numerators[i] += row[i];
        }
    }
    let numerators = numerators.map(f64::sqrt);
    let denom = a_holder_norm * b_weighted_norm;
    Ok(RemainderEstimate {
        s,
        ratios: numerators.map(|n| n / denom),
        numerators,
        a_holder_norm,
        b_weighted_norm,
        q_min,
        q_max,
        r3_tail_fraction: lp.unresolved_fraction(&Spectrum::of(a)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Grid;
    use crate::sampling::{band_limited, Profile};

    fn rel(a: &GridFunction, b: &GridFunction) -> f64 {
        (a - b).l2_norm() / b.l2_norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn paraproduct_with_constant_second_factor_vanishes() {
        let g = Grid::line(256).unwrap();
        let lp = LittlewoodPaley::default();
        let a = band_limited(g, 1, &Profile::Flat);
        let b = GridFunction::constant(g, 2.0);
        assert!(paraproduct(&lp, &a, &b).unwrap().l2_norm() < 1e-13);
    }

    #[test]
    fn paraproduct_with_unit_first_factor() {
        let g = Grid::line(256).unwrap();
        let lp = LittlewoodPaley::default();
        let b = band_limited(g, 2, &Profile::Flat);
        let one = GridFunction::constant(g, 1.0);
        let t = paraproduct(&lp, &one, &b).unwrap();
        let expect = b.try_sub(&lp.block(&b, -1)).unwrap().try_sub(&lp.block(&b, 0)).unwrap();
        assert!(rel(&t, &expect) < 1e-12);
    }

    #[test]
    fn product_identities() {
        let g = Grid::line(256).unwrap();
        let lp = LittlewoodPaley::default();
        let a = band_limited(g, 3, &Profile::Flat);
        let b = band_limited(g, 4, &Profile::Flat);
        let ab = a.product(&b).unwrap();
        let tab = paraproduct(&lp, &a, &b).unwrap();
        let tba = paraproduct(&lp, &b, &a).unwrap();
        let r = remainder(&lp, &a, &b).unwrap();
        let rt = tilde_remainder(&lp, &a, &b).unwrap();
        assert!(rel(&tab.try_add(&tba).unwrap().try_add(&r).unwrap(), &ab) < 1e-10);
        assert!(rel(&tab.try_add(&rt).unwrap(), &ab) < 1e-10);
        assert!(rel(&rt, &tba.try_add(&r).unwrap()) < 1e-10);
    }

    #[test]
    fn zero_second_factor() {
        let g = Grid::line(128).unwrap();
        let lp = LittlewoodPaley::default();
        let a = band_limited(g, 5, &Profile::Flat);
        let z = GridFunction::zeros(g);
        assert_eq!(remainder(&lp, &a, &z).unwrap().l2_norm(), 0.0);
        assert_eq!(tilde_remainder(&lp, &a, &z).unwrap().l2_norm(), 0.0);
    }

    #[test]
    fn tilde_remainder_with_constant_first_factor() {
        let g = Grid::line(256).unwrap();
        let lp = LittlewoodPaley::default();
        let a = GridFunction::constant(g, 3.0);
        let b = band_limited(g, 6, &Profile::Flat);
        let rt = tilde_remainder(&lp, &a, &b).unwrap();
        let expect = lp.lowpass(&b, 1).scale(3.0);
        assert!(rel(&rt, &expect) < 1e-12);
    }

    #[test]
    fn decomposition_reconstructs_block() {
        let g = Grid::line(512).unwrap();
        let lp = LittlewoodPaley::default();
        let a = band_limited(g, 7, &Profile::Flat);
        let b = band_limited(g, 8, &Profile::Flat);
        for q in 0..=margin_q_max(&g) {
            let d = decompose_product(&lp, &a, &b, q).unwrap();
            assert!(d.residual < 1e-10, "q = {q}: {}", d.residual);
            assert!(d.outside_mass < 1e-12);
        }
    }

    #[test]
    fn constant_first_factor_has_no_remainder() {
        let g = Grid::line(512).unwrap();
        let lp = LittlewoodPaley::default();
        let a = GridFunction::constant(g, -1.5);
        let b = band_limited(g, 9, &Profile::Flat);
        for q in 3..=margin_q_max(&g) {
            let d = decompose_product(&lp, &a, &b, q).unwrap();
            for r in [&d.r1, &d.r2, &d.r3] {
                assert!(r.linf_norm() < 1e-12);
            }
            let expect = lp.block(&b, q).scale(-1.5);
            assert!((&d.main - &expect).linf_norm() < 1e-12);
        }
    }

    #[test]
    fn margin_violation() {
        let g = Grid::line(64).unwrap();
        let a = GridFunction::constant(g, 1.0);
        let err = decompose_product(&LittlewoodPaley::default(), &a, &a, 4).unwrap_err();
        assert!(matches!(err, Error::Margin { .. }));
    }

    #[test]
    fn support_rules_hold() {
        let g = Grid::line(512).unwrap();
        let lp = LittlewoodPaley::default();
        let a = band_limited(g, 10, &Profile::Flat);
        let b = band_limited(g, 11, &Profile::Flat);
        for q in 0..=g.q_max() {
            let c = check_support_rules(&lp, &a, &b, q).unwrap();
            assert!(c.far_paraproduct < 1e-14 && c.low_tilde < 1e-14, "{c:?}");
        }
    }

    #[test]
    fn remainder_ratios_scale_invariant_in_a() {
        let g = Grid::line(256).unwrap();
        let lp = LittlewoodPaley::default();
        let w = Modulus::power(1.0).unwrap();
        let a = band_limited(g, 12, &Profile::Holder(w.clone()));
        let b = band_limited(g, 13, &Profile::Flat);
        let one = verify_remainder_estimate(&lp, &a, &b, 0.5, &w, None).unwrap();
        let two = verify_remainder_estimate(&lp, &a.scale(2.0), &b, 0.5, &w, None).unwrap();
        for i in 0..3 {
            assert!(one.ratios[i].is_finite());
            assert!((one.ratios[i] - two.ratios[i]).abs() <= 1e-10 * one.ratios[i].max(1e-300));
        }
    }

    #[test]
    fn remainder_ratios_vanish_for_constant_a_from_block_three() {
        let g = Grid::line(256).unwrap();
        let lp = LittlewoodPaley::default();
        let w = Modulus::power(1.0).unwrap();
        let a = GridFunction::constant(g, 2.0);
        let b = band_limited(g, 14, &Profile::Flat);
        let r = verify_remainder_estimate(&lp, &a, &b, 0.5, &w, Some(3)).unwrap();
        assert!(r.ratios.iter().all(|x| *x < 1e-12), "{:?}", r.ratios);
    }
}
