use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{GridFunction, LittlewoodPaley, Spectrum};

use super::{Bound, EstimateReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub q: i32,
    pub q_prime: i32,
    pub p: i32,
}

impl LatticePoint {
    /// All `(q, q′, p)` with `q, p ∈ [lo, hi]` and `q′ ∈ [max(lo, 0), hi]`.
    pub fn cube(lo: i32, hi: i32) -> Vec<Self> {
        let mut out = Vec::new();
        for q in lo..=hi {
            for q_prime in lo.max(0)..=hi {
                for p in lo..=hi {
                    out.push(Self { q, q_prime, p });
                }
            }
        }
        out
    }
}

fn check_indices(pt: LatticePoint) -> Result<()> {
    if pt.q_prime < 0 || pt.q < -1 || pt.p < -1 {
        return Err(Error::Domain {
            value: pt.q_prime.min(pt.q).min(pt.p) as f64,
            domain: "q′ ≥ 0 and p, q ≥ −1",
        });
    }
    Ok(())
}

fn ratio_from_parts(
    lp: &LittlewoodPaley,
    sa: &GridFunction,
    grad_sa: f64,
    up: &Spectrum,
    q: i32,
    p: i32,
) -> Result<Option<f64>> {
    let up_fn = up.to_function();
    let up_norm = up_fn.l2_norm();
    if up_norm == 0.0 {
        return Ok(None);
    }
    if grad_sa == 0.0 {
        return Ok(Some(0.0));
    }
    let inner = lp.block_spectrum(up, q).to_function();
    let comm = sa.product(&inner)?.try_sub(&lp.block(&sa.product(&up_fn)?, q))?;
    Ok(Some(comm.l2_norm() / (2f64.powi(-p) * grad_sa * up_norm)))
}

/// `‖[S_{q′}a, Δ_q]Δ_p u‖ / (2^{−p}‖∇S_{q′}a‖_{L∞}‖Δ_p u‖)`; `None` when `Δ_p u = 0`,
/// zero when `S_{q′}a` is constant.
pub fn commutator_ratio(lp: &LittlewoodPaley, a: &GridFunction, u: &GridFunction, pt: LatticePoint) -> Result<Option<f64>> {
    check_indices(pt)?;
    a.grid().ensure_same(u.grid())?;
    let sa = lp.lowpass(a, pt.q_prime);
    let up = lp.block_spectrum(&Spectrum::of(u), pt.p);
    ratio_from_parts(lp, &sa, sa.gradient_linf(), &up, pt.q, pt.p)
}

/// Commutator ratios over a lattice of `(q, q′, p)`; the report maximum is the measured constant.
pub fn verify_commutator(
    lp: &LittlewoodPaley,
    a: &GridFunction,
    u: &GridFunction,
    lattice: &[LatticePoint],
    ceiling: Option<f64>,
) -> Result<EstimateReport> {
    a.grid().ensure_same(u.grid())?;
    for pt in lattice {
        check_indices(*pt)?;
    }
    let a_spec = Spectrum::of(a);
    let u_spec = Spectrum::of(u);
    let results = lattice
        .par_iter()
        .map(|pt| {
            let sa = lp.lowpass_spectrum(&a_spec, pt.q_prime).to_function();
            let up = lp.block_spectrum(&u_spec, pt.p);
            ratio_from_parts(lp, &sa, sa.gradient_linf(), &up, pt.q, pt.p).map(|r| (*pt, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = if ceiling.is_some() { Bound::Upper } else { Bound::None };
    let mut report = EstimateReport::new("commutator", None, ceiling);
    for (pt, r) in results {
        let label = format!("q={} q'={} p={}", pt.q, pt.q_prime, pt.p);
        match r {
            Some(r) => report.push(label, r, bound),
            None => report.skip(format!("{label}: Δ_p u = 0")),
        }
    }
    Ok(report)
}
