//! Numerical checks of the hypotheses placed on moduli of continuity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Modulus, LN2};
use crate::numerics::{integrate, QuadOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionId {
    Osgood,
    Dini,
    Techcond1,
    Techcond2,
    Duplication,
    Concavity,
    Monotonicity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Where the worst sampled ratio occurred.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "lowercase")]
pub enum Witness {
    Scale { s: f64 },
    Pair { s: f64, t: f64 },
    Index { k: u32 },
    Blocks { p: u32, q: u32 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResolutionParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub verdict: Verdict,
    /// Measured constant; `None` when the quantity is unbounded or undefined.
    pub constant: Option<f64>,
    pub witness: Option<Witness>,
    pub params: ResolutionParams,
    /// The sequence the verdict was read from (partial integrals, sums or ratios).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConditionReport {
    fn new(condition: ConditionId, verdict: Verdict) -> Self {
        Self {
            condition,
            verdict,
            constant: None,
            witness: None,
            params: ResolutionParams::default(),
            series: Vec::new(),
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `∫_{2^{-k}}^{2^{-k+1}} ds/μ(s)`, computed in the variable `u = -log2 s`.
fn osgood_increment(mu: &Modulus, k: u32) -> crate::error::Result<f64> {
    let f = |u: f64| LN2 * (-u * LN2 - mu.log_value_dyadic(u)).exp();
    let a = (k - 1) as f64;
    Ok(integrate(f, a, a + 1.0, QuadOptions::relative(1e-13))?.value)
}

/// Classifies divergence of `∫_0^1 ds/μ(s)` from the partial integrals
/// `I_k = ∫_{2^{-k}}^1 ds/μ(s)`, `k = 1..k_max`.
///
/// Divergent (pass) when `I_{k_max} > 50` or the increments decay like `k^{-p}`
/// with `p ≤ 1.1`; convergent (fail) when the increments decay geometrically
/// with ratio at most 0.95 or like `k^{-p}` with `p ≥ 1.5`; inconclusive otherwise.
pub fn check_osgood(mu: &Modulus, k_max: u32) -> ConditionReport {
    let mut report = ConditionReport::new(ConditionId::Osgood, Verdict::Inconclusive);
    report.params.k_max = Some(k_max);
    if k_max < 11 {
        report.note = Some(format!("k_max = {k_max} is too small; at least 11 is required"));
        return report;
    }
    let mut increments = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        match osgood_increment(mu, k) {
            Ok(d) => increments.push(d),
            Err(e) => {
                report.note = Some(format!("quadrature failed on block {k}: {e}"));
                return report;
            }
        }
    }
    let mut partial = Vec::with_capacity(increments.len());
    let mut acc = 0.0;
    for d in &increments {
        acc += d;
        partial.push(acc);
    }
    let last = *partial.last().unwrap_or(&0.0);
    report.series = partial;
    report.witness = Some(Witness::Index { k: k_max });

    let k = k_max as usize;
    let d_now = increments[k - 1];
    let d_before = increments[k - 11];
    let ratio = (d_now / d_before).powf(0.1);
    let exponent = (d_before / d_now).ln() / (k as f64 / (k - 10) as f64).ln();

    if last > 50.0 || exponent <= 1.1 {
        report.verdict = Verdict::Pass;
        report.note = Some(format!(
            "partial integral {last:.6} still growing; increments decay like k^-{exponent:.3}"
        ));
    } else if ratio <= 0.95 {
        let tail = d_now * ratio / (1.0 - ratio);
        report.verdict = Verdict::Fail;
        report.constant = Some(last + tail);
        report.note = Some(format!("geometric decay ratio {ratio:.4}; tail bound {tail:.3e}"));
    } else if exponent >= 1.5 {
        let tail = d_now * k as f64 / (exponent - 1.0);
        report.verdict = Verdict::Fail;
        report.constant = Some(last + tail);
        report.note = Some(format!("power-law decay k^-{exponent:.3}; tail bound {tail:.3e}"));
    } else {
        report.note = Some(format!(
            "increments decay like k^-{exponent:.3} with ratio {ratio:.4}; cannot classify at k_max = {k_max}"
        ));
    }
    report
}

/// True when the sequence grew by more than 5% over its last quarter.
fn still_growing(values: &[f64]) -> bool {
    if values.len() < 4 {
        return false;
    }
    let n = values.len();
    let start = values[n - 1 - n / 4];
    let end = values[n - 1];
    end > 1.05 * start
}

fn dini_report(omega: &Modulus, q_max: u32) -> ConditionReport {
    let mut report = ConditionReport::new(ConditionId::Dini, Verdict::Fail);
    report.params.q_max = Some(q_max);
    // Unit chunks of ln2 ∫ ω(2^{-u}) du, which equals ∫ ω(t)/t dt over dyadic shells.
    let f = |u: f64| LN2 * omega.log_value_dyadic(u).exp();
    let mut chunks: Vec<f64> = Vec::new();
    let mut total = 0.0;
    let limit = q_max as usize + 2000;
    let mut converged = false;
    for k in 0..limit {
        let c = match integrate(f, k as f64, k as f64 + 1.0, QuadOptions::relative(1e-13)) {
            Ok(q) => q.value,
            Err(e) => {
                report.verdict = Verdict::Inconclusive;
                report.note = Some(format!("quadrature failed on shell {k}: {e}"));
                return report;
            }
        };
        chunks.push(c);
        total += c;
        if k > q_max as usize && c <= 1e-17 * total {
            converged = true;
            break;
        }
    }
    if !converged {
        report.note = Some(format!(
            "∫ ω(t)/t dt did not converge after {limit} dyadic shells"
        ));
        return report;
    }
    let mut tails = vec![0.0; chunks.len() + 1];
    for k in (0..chunks.len()).rev() {
        tails[k] = tails[k + 1] + chunks[k];
    }
    let ratios: Vec<f64> = (0..=q_max as usize)
        .map(|j| tails[j] / omega.log_value_dyadic(j as f64).exp())
        .collect();
    let (j_worst, worst) = argmax(&ratios);
    report.constant = Some(worst);
    report.witness = Some(Witness::Scale {
        s: 2f64.powi(-(j_worst as i32)),
    });
    report.verdict = if still_growing(&ratios) {
        report.note = Some("ratio still growing at the finest sampled scale".into());
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    report.series = ratios;
    report
}

fn techcond1_report(omega: &Modulus, q_max: u32) -> ConditionReport {
    let mut report = ConditionReport::new(ConditionId::Techcond1, Verdict::Pass);
    report.params.q_max = Some(q_max);
    let lw = |k: u32| omega.log_value_dyadic(k as f64);
    let mut per_q = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for q in 2..=q_max {
        let mut best_q = f64::NEG_INFINITY;
        for p in 1..q {
            let r = (lw(q) - lw(p) - lw(q - p)).exp();
            if r > best_q {
                best_q = r;
            }
            if r > worst {
                worst = r;
                witness = Some(Witness::Blocks { p, q });
            }
        }
        per_q.push(best_q);
    }
    let running: Vec<f64> = per_q
        .iter()
        .scan(f64::NEG_INFINITY, |m, v| {
            *m = m.max(*v);
            Some(*m)
        })
        .collect();
    report.constant = Some(worst);
    report.witness = witness;
    if !worst.is_finite() || still_growing(&running) {
        report.verdict = Verdict::Fail;
        report.note = Some("supremum still growing at the largest sampled q".into());
    }
    report.series = per_q;
    report
}

fn techcond2_report(omega: &Modulus, s: f64, q_max: u32) -> ConditionReport {
    let mut report = ConditionReport::new(ConditionId::Techcond2, Verdict::Inconclusive);
    report.params.q_max = Some(q_max);
    report.params.s = Some(s);
    let term = |k: u32| ((1.0 - s) * k as f64 * LN2 + omega.log_value_dyadic(k as f64)).exp();
    let mut sums = Vec::with_capacity(q_max as usize + 1);
    let mut acc = 0.0;
    for k in 0..=q_max {
        acc += term(k);
        sums.push(acc);
    }
    let k = q_max.max(10);
    let rho = (term(k) / term(k - 10)).powf(0.1);
    report.witness = Some(Witness::Index { k });
    if rho < 0.98 {
        report.verdict = Verdict::Pass;
        report.constant = Some(acc + term(q_max) * rho / (1.0 - rho));
        report.note = Some(format!("tail ratio {rho:.4}"));
    } else if rho >= 1.0 - 1e-9 {
        report.verdict = Verdict::Fail;
        report.note = Some(format!("terms do not decay (tail ratio {rho:.4})"));
    } else {
        report.note = Some(format!("tail ratio {rho:.4} too close to 1 to classify"));
    }
    report.series = sums;
    report
}

/// Dini condition, the first technical condition, and the summability
/// condition for every `s` in `s_values`.
pub fn check_omega_conditions(omega: &Modulus, s_values: &[f64], q_max: u32) -> Vec<ConditionReport> {
    let q_max = q_max.max(10);
    let mut out = vec![dini_report(omega, q_max), techcond1_report(omega, q_max)];
    for &s in s_values {
        out.push(techcond2_report(omega, s, q_max));
    }
    out
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}

fn shape_samples(k_max: u32, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<f64> = (0..=k_max).map(|k| 2f64.powi(-(k as i32))).collect();
    for _ in 0..32 {
        s.push(rng.random_range(0.0..1.0f64).max(1e-300));
    }
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}

/// Monotonicity, concavity and duplication on the dyadic grid `{2^{-k}}`
/// augmented with 32 seeded random points.
pub fn check_shape(mu: &Modulus, k_max: u32, seed: u64) -> Vec<ConditionReport> {
    let samples = shape_samples(k_max, seed);
    let values: Vec<f64> = samples.iter().map(|s| mu.value(*s)).collect();
    let params = ResolutionParams {
        k_max: Some(k_max),
        ..Default::default()
    };

    let mut mono = ConditionReport::new(ConditionId::Monotonicity, Verdict::Pass);
    mono.params = params.clone();
    let mut worst_step = f64::INFINITY;
    for i in 1..samples.len() {
        let step = values[i] - values[i - 1];
        if step < worst_step {
            worst_step = step;
            mono.witness = Some(Witness::Pair {
                s: samples[i - 1],
                t: samples[i],
            });
        }
    }
    mono.constant = Some(worst_step);
    if worst_step <= 0.0 {
        mono.verdict = Verdict::Fail;
        mono.note = Some("not strictly increasing on the samples".into());
    }

    let mut conc = ConditionReport::new(ConditionId::Concavity, Verdict::Pass);
    conc.params = params.clone();
    let mut worst_defect = 0.0f64;
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            let mid = mu.value(0.5 * (samples[i] + samples[j]));
            let chord = 0.5 * (values[i] + values[j]);
            let defect = (chord - mid) / chord.max(f64::MIN_POSITIVE);
            if defect > worst_defect {
                worst_defect = defect;
                conc.witness = Some(Witness::Pair {
                    s: samples[i],
                    t: samples[j],
                });
            }
        }
    }
    conc.constant = Some(worst_defect);
    if worst_defect > 1e-10 {
        conc.verdict = Verdict::Fail;
        conc.note = Some("midpoint value below the chord".into());
    }

    let mut dup = ConditionReport::new(ConditionId::Duplication, Verdict::Pass);
    dup.params = params;
    let mut worst_ratio = 0.0f64;
    for &s in samples.iter().filter(|s| **s <= 0.5) {
        let r = mu.value(2.0 * s) / mu.value(s);
        if !r.is_finite() {
            dup.verdict = Verdict::Fail;
        }
        if r > worst_ratio {
            worst_ratio = r;
            dup.witness = Some(Witness::Scale { s });
        }
    }
    dup.constant = Some(worst_ratio);
    vec![mono, conc, dup]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn osgood(m: &str) -> Verdict {
        check_osgood(&m.parse().unwrap(), 60).verdict
    }

    #[test]
    fn osgood_partial_integrals_match_closed_forms() {
        let r = check_osgood(&Modulus::power(1.0).unwrap(), 20);
        for (k, ik) in r.series.iter().enumerate() {
            assert!((ik - (k + 1) as f64 * LN2).abs() < 1e-12);
        }
        let r = check_osgood(&Modulus::power(0.5).unwrap(), 20);
        for (k, ik) in r.series.iter().enumerate() {
            let expect = 2.0 * (1.0 - 2f64.powf(-((k + 1) as f64) / 2.0));
            assert!((ik - expect).abs() < 1e-12);
        }
        let r = check_osgood(&Modulus::log_lipschitz(1.0).unwrap(), 20);
        for (k, ik) in r.series.iter().enumerate() {
            let expect = (1.0 + (k + 1) as f64 * LN2).ln();
            assert!((ik - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn osgood_classification() {
        assert_eq!(osgood("power:1"), Verdict::Pass);
        assert_eq!(osgood("power:0.5"), Verdict::Fail);
        assert_eq!(osgood("loglip:1"), Verdict::Pass);
        assert_eq!(osgood("loglip:2"), Verdict::Fail);
    }

    #[test]
    fn omega_conditions_for_power() {
        let w = Modulus::power(0.6).unwrap();
        let reports = check_omega_conditions(&w, &[0.5], 20);
        let tc1 = &reports[1];
        assert!((tc1.constant.unwrap() - 1.0).abs() < 1e-12);
        let id = Modulus::power(1.0).unwrap();
        let dini = &check_omega_conditions(&id, &[], 20)[0];
        assert_eq!(dini.verdict, Verdict::Pass);
        assert!((dini.constant.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn summability_borderline_fails() {
        let w = Modulus::power(0.75).unwrap();
        let r = &check_omega_conditions(&w, &[0.25, 0.5], 20)[2..];
        assert_eq!(r[0].verdict, Verdict::Fail);
        assert_eq!(r[1].verdict, Verdict::Pass);
    }

    #[test]
    fn shape_checks_on_families() {
        for text in ["power:0.3", "loglip:1", "sqrt:loglip:1"] {
            let m: Modulus = text.parse().unwrap();
            let reports = check_shape(&m, 40, 1);
            assert!(reports.iter().all(|r| r.passed()), "{text}: {reports:?}");
            let dup = reports[2].constant.unwrap();
            assert!(dup <= 2.0 + 1e-12 && dup >= 1.0);
        }
    }

    #[test]
    fn strong_log_lipschitz_is_not_monotone() {
        let m = Modulus::log_lipschitz(2.0).unwrap();
        let reports = check_shape(&m, 40, 1);
        assert_eq!(reports[0].verdict, Verdict::Fail);
    }
}
