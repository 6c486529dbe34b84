use crate::error::{Error, Result};
use crate::lp::{GridFunction, LittlewoodPaley};

use super::{Bound, EstimateReport};

/// Block spectra sit in `3/4·2^q ≤ |ξ| ≤ 8/3·2^q`, so the normalized gradient
/// ratio of a block lies in `[3/4, 8/3]`.
pub const BERNSTEIN_FLOOR: f64 = 0.75 - 1e-6;
pub const BERNSTEIN_CEILING: f64 = 8.0 / 3.0 + 1e-6;

fn linf_ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

/// Bernstein ratios at block index `q`:
///
/// * `lowpass-l2`, `lowpass-linf`: `‖∇S_q u‖ / (2^q‖u‖)` (for `q ≥ 0`);
/// * `block-l2`, `block-linf`: `2^{−q}‖∇Δ_q u‖ / ‖Δ_q u‖`, and for `q = −1`
///   the unscaled `‖∇Δ_{−1}u‖ / ‖Δ_{−1}u‖`.
///
/// The `L²` block ratios are checked against `[3/4, 8/3]` (upper bound only
/// for `q = −1`), the low-pass `L²` ratio against the upper bound.
pub fn verify_bernstein(lp: &LittlewoodPaley, u: &GridFunction, q: i32) -> Result<EstimateReport> {
    if q < -1 {
        return Err(Error::Domain {
            value: q as f64,
            domain: "block index q ≥ −1",
        });
    }
    lp.check_resolved(u)?;
    let mut report = EstimateReport::new("bernstein", Some(BERNSTEIN_FLOOR), Some(BERNSTEIN_CEILING));
    let scale = 2f64.powi(q.max(0));
    if q >= 0 {
        let s = lp.lowpass(u, q);
        match linf_ratio(s.gradient_l2(), scale * u.l2_norm()) {
            Some(r) => report.push(format!("lowpass-l2 q={q}"), r, Bound::Upper),
            None => report.skip(format!("lowpass q={q}: u = 0")),
        }
        if let Some(r) = linf_ratio(s.gradient_linf(), scale * u.linf_norm()) {
            report.push(format!("lowpass-linf q={q}"), r, Bound::None);
        }
    }
    let d = lp.block(u, q);
    let bound = if q >= 0 { Bound::Both } else { Bound::Upper };
    match linf_ratio(d.gradient_l2(), scale * d.l2_norm()) {
        Some(r) => report.push(format!("block-l2 q={q}"), r, bound),
        None => report.skip(format!("block q={q}: Δ_q u = 0")),
    }
    if let Some(r) = linf_ratio(d.gradient_linf(), scale * d.linf_norm()) {
        report.push(format!("block-linf q={q}"), r, Bound::None);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Grid;
    use crate::sampling::{band_limited, Profile};

    #[test]
    fn single_mode_ratio_is_scaled_wavenumber() {
        let g = Grid::line(512).unwrap();
        let lp = LittlewoodPaley::default();
        // 4/3·16 ≤ 22 ≤ 3/2·16: only Δ_4 sees the mode, with multiplier 1.
        let u = GridFunction::mode(g, [22, 0]);
        let r = verify_bernstein(&lp, &u, 4).unwrap();
        let block = r.samples.iter().find(|s| s.label.starts_with("block-l2")).unwrap();
        assert!((block.ratio - 22.0 / 16.0).abs() < 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn constant_has_zero_gradient_at_bottom_block() {
        let g = Grid::line(64).unwrap();
        let u = GridFunction::constant(g, 2.0);
        let r = verify_bernstein(&LittlewoodPaley::default(), &u, -1).unwrap();
        assert_eq!(r.samples[0].ratio, 0.0);
        assert!(r.passed);
        let r0 = verify_bernstein(&LittlewoodPaley::default(), &u, 2).unwrap();
        assert!(r0.skipped.iter().any(|s| s.contains("Δ_q u = 0")));
    }

    #[test]
    fn random_fields_stay_in_the_annulus_bounds() {
        let g = Grid::line(512).unwrap();
        let lp = LittlewoodPaley::default();
        for seed in 0..5 {
            let u = band_limited(g, seed, &Profile::Flat);
            for q in -1..=g.q_max() {
                let r = verify_bernstein(&lp, &u, q).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }
}
