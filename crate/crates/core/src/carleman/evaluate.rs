use rayon::prelude::*;
use serde::Serialize;

use super::coefficients::CoefficientField;
use super::operator::base_operator;
use crate::error::{Error, Result};
use crate::lp::{LittlewoodPaley, SobolevSpec, Spectrum, TimeSeries};
use crate::modulus::Modulus;
use crate::numerics::simpson;
use crate::weight::WeightTable;

pub const DEFAULT_RATIO_FLOOR: f64 = 1e-3;

/// Exponent pairs `(β_∇, β_{L²})` tried against the sweep; the first is the
/// pair of the inequality, `lhs ≥ C(γ^{1/4}∫‖∇v‖² + γ∫‖v‖²)`.
pub const EXPONENT_PAIRS: [(f64, f64); 6] = [(0.25, 1.0), (0.5, 1.0), (0.75, 1.0), (1.0, 1.0), (0.25, 1.5), (0.25, 2.0)];

#[derive(Clone, Debug)]
pub struct CarlemanConfig {
    pub s: f64,
    pub mu: Modulus,
    pub omega: Modulus,
    pub weight: WeightTable,
    /// Ascending.
    pub gammas: Vec<f64>,
    pub v: TimeSeries,
    pub floor: f64,
}

impl CarlemanConfig {
    /// Checks `s ∈ (0, 1)`, a positive sweep and `v = 0` for `t > T/2`, derives
    /// `ω` from `μ` and builds the weight up to `γ_max T`.
    pub fn new(s: f64, mu: Modulus, mut gammas: Vec<f64>, v: TimeSeries) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Config(format!("s must lie in (0, 1), got {s}")));
        }
        if gammas.is_empty() || gammas.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
            return Err(Error::Config("γ sweep must be a non-empty list of positive values".into()));
        }
        gammas.sort_by(f64::total_cmp);
        gammas.dedup();
        if v.frames.len() < 5 {
            return Err(Error::Config("test function needs at least five time samples".into()));
        }
        let half = 0.5 * v.horizon * (1.0 + 1e-12);
        for (i, f) in v.frames.iter().enumerate() {
            let t = v.time(i);
            if t > half && f.linf_norm() > 0.0 {
                return Err(Error::Config(format!(
                    "test function must vanish for t > T/2; |v| = {:e} at t = {t}",
                    f.linf_norm()
                )));
            }
        }
        let omega = mu.derive_omega();
        let tau_max = gammas[gammas.len() - 1] * v.horizon;
        let weight = WeightTable::build(&mu, tau_max)?;
        Ok(Self {
            s,
            mu,
            omega,
            weight,
            gammas,
            v,
            floor: DEFAULT_RATIO_FLOOR,
        })
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    /// `∫‖(conjugated operator)v‖²_{H^{-s}} dt` with the dyadic norm.
    pub lhs: f64,
    /// `∫‖∇v‖²_{H^{-s}_Ω} dt`.
    pub rhs_gradient: f64,
    /// `∫‖v‖²_{L²} dt`.
    pub rhs_l2: f64,
    /// `lhs / (γ^{1/4}(rhs_gradient + γ^{3/4} rhs_l2))`; absent for `v = 0`.
    pub ratio: Option<f64>,
    /// `lhs` with the multiplier norm `‖(1+|ξ|²)^{−s/2} f̂‖`.
    pub lhs_multiplier: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentRow {
    pub grad_exponent: f64,
    pub l2_exponent: f64,
    pub ratios: Vec<f64>,
    /// Minimum ratio from `γ₀` on.
    pub min_ratio: Option<f64>,
    /// Log-log slope of the ratio over the last four sweep values.
    pub tail_slope: Option<f64>,
    /// Ratio stays above the floor from `γ₀` on and is not decaying at the end of the sweep.
    pub holds_on_sweep: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CarlemanReport {
    pub s: f64,
    pub horizon: f64,
    pub frames: usize,
    pub a0: f64,
    pub rows: Vec<SweepRow>,
    pub floor: f64,
    /// Smallest sweep value from which the ratio stays above the floor and does not decrease.
    pub gamma0: Option<f64>,
    /// Minimum ratio over `γ ≥ γ₀`.
    pub constant: Option<f64>,
    pub degenerate: bool,
    /// A zero-order term was included, which the inequality does not cover.
    pub exploratory: bool,
    pub exponent_scan: Vec<ExponentRow>,
    pub diagnostics: Vec<BlockDiagnostics>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockRow {
    pub q: i32,
    /// `2^{−2sq}`.
    pub weight: f64,
    /// `∫‖Δ_q(conjugated operator)v‖² dt`.
    pub lhs_block: f64,
    /// `∫‖Σ∂_j(S_{q−1}a_jk ∂_k v_q) + Φ′ v_q‖² dt`.
    pub elliptic_term: f64,
    /// `γ∫Φ″(γ(T−t))‖v_q‖² dt`.
    pub phi_term: f64,
    /// `[a]_{C^μ}(μ(ε)/ε·2^{2q} + 2^{4q}μ(ε))∫‖v_q‖² dt` with `ε = 2^{−2q}`.
    pub penalty: f64,
    /// `∫‖v_q‖² dt`.
    pub mass: f64,
    /// Fraction of the time samples carrying `v_q` with `Φ′ ≤ ½C₄a₀2^{2q}`.
    pub high_fraction: f64,
    /// `∫(γ/2 + γ^{1/4}Ω²(q)2^{2q})‖v_q‖² dt`.
    pub lower_bound: f64,
    /// `lhs_block / lower_bound`.
    pub lower_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockDiagnostics {
    pub gamma: f64,
    /// Measured elliptic block constant.
    pub c4: Option<f64>,
    pub a0: f64,
    /// Measured `[a]_{C^μ}` in time, the factor of the penalty term.
    pub time_seminorm: f64,
    pub rows: Vec<BlockRow>,
    /// `Σ_q 2^{−2sq} lhs_block`.
    pub dyadic_lhs: f64,
}

/// Per-frame quadratic forms. For a real block multiplier `Δ_q`,
/// `‖Δ_q(E + φ v)‖² = ee + 2φ·ev + φ²·vv`.
#[derive(Clone, Debug, Default)]
struct FrameForms {
    ee: Vec<f64>,
    ev: Vec<f64>,
    vv: Vec<f64>,
    m_ee: f64,
    m_ev: f64,
    m_vv: f64,
    grad_omega: f64,
    l2: f64,
    /// `A_q = Σ∂_j(S_{q−1}a_jk ∂_k v_q)`: `‖A_q‖²` and `Re⟨A_q, v_q⟩`.
    aa: Vec<f64>,
    av: Vec<f64>,
}

/// Precomputed data for one test function and coefficient field; each γ then costs scalar work.
pub struct CarlemanRun<'a> {
    config: &'a CarlemanConfig,
    a0: f64,
    exploratory: bool,
    q_top: i32,
    forms: Vec<FrameForms>,
    with_blocks: bool,
    time_seminorm: f64,
}

fn stencil_touches_support(v: &TimeSeries, i: usize) -> bool {
    let m = v.frames.len();
    let lo = i.saturating_sub(4);
    let hi = (i + 4).min(m - 1);
    (lo..=hi).any(|j| v.frames[j].linf_norm() > 0.0)
}

impl<'a> CarlemanRun<'a> {
    pub fn prepare(config: &'a CarlemanConfig, coeffs: &CoefficientField, lp: &LittlewoodPaley, with_blocks: bool) -> Result<Self> {
        let v = &config.v;
        coeffs.check_axis(v)?;
        for f in &v.frames {
            lp.check_resolved(f)?;
        }
        let grid = *coeffs.grid();
        let q_top = LittlewoodPaley::q_top(&grid);
        let blocks: Vec<i32> = (-1..=q_top).collect();
        let mults: Vec<_> = blocks.iter().map(|&q| lp.cutoffs().block_multiplier(&grid, q)).collect();
        let omega_spec = SobolevSpec::weighted(-config.s, config.omega.clone());
        let multiplier: Vec<f64> = grid
            .frequency_norms()
            .iter()
            .map(|r| (1.0 + r * r).powf(-0.5 * config.s))
            .collect();
        let forms = (0..v.frames.len())
            .into_par_iter()
            .map(|i| {
                if !stencil_touches_support(v, i) {
                    return Ok(FrameForms {
                        ee: vec![0.0; blocks.len()],
                        ev: vec![0.0; blocks.len()],
                        vv: vec![0.0; blocks.len()],
                        aa: vec![0.0; blocks.len()],
                        av: vec![0.0; blocks.len()],
                        ..Default::default()
                    });
                }
                let e = Spectrum::of(&base_operator(coeffs, v, i)?);
                let vs = Spectrum::of(&v.frames[i]);
                let mut f = FrameForms {
                    l2: v.frames[i].l2_norm_sq(),
                    m_ee: e.weighted_l2_norm_sq(&multiplier),
                    m_ev: e.weighted_inner(&vs, &multiplier).re,
                    m_vv: vs.weighted_l2_norm_sq(&multiplier),
                    ..Default::default()
                };
                let grads: Vec<Spectrum> = (0..grid.dim()).map(|j| vs.derivative(j)).collect();
                for (bi, m) in mults.iter().enumerate() {
                    f.ee.push(e.weighted_l2_norm_sq(m));
                    f.ev.push(e.weighted_inner(&vs, m).re);
                    f.vv.push(vs.weighted_l2_norm_sq(m));
                    let w = omega_spec.block_weight(blocks[bi]).powi(2);
                    f.grad_omega += w * grads.iter().map(|d| d.weighted_l2_norm_sq(m)).sum::<f64>();
                }
                f.aa = vec![0.0; blocks.len()];
                f.av = vec![0.0; blocks.len()];
                if with_blocks {
                    let a_specs: Vec<Spectrum> = (0..grid.dim() * grid.dim())
                        .map(|jk| Spectrum::of(&coeffs.entry(jk / grid.dim(), jk % grid.dim()).frames[i]))
                        .collect();
                    for (bi, &q) in blocks.iter().enumerate() {
                        if f.vv[bi] == 0.0 {
                            continue;
                        }
                        let vq = lp.block_spectrum(&vs, q);
                        let dv: Vec<_> = (0..grid.dim()).map(|k| vq.derivative(k).to_function()).collect();
                        let mut a_q = crate::lp::GridFunction::zeros(grid);
                        for j in 0..grid.dim() {
                            let mut flux = crate::lp::GridFunction::zeros(grid);
                            for (k, dk) in dv.iter().enumerate() {
                                let s_a = lp.lowpass_spectrum(&a_specs[j * grid.dim() + k], q - 1).to_function();
                                flux = flux.try_add(&s_a.product(dk)?)?;
                            }
                            a_q = a_q.try_add(&flux.derivative(j))?;
                        }
                        f.aa[bi] = a_q.l2_norm_sq();
                        f.av[bi] = a_q.inner(&vq.to_function())?.re;
                    }
                }
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        let time_seminorm = if with_blocks {
            coeffs.measured_norms(&config.mu, &config.omega, usize::MAX)?.time_seminorm
        } else {
            0.0
        };
        Ok(Self {
            config,
            a0: coeffs.a0(),
            exploratory: coeffs.zero_order().is_some(),
            q_top,
            forms,
            with_blocks,
            time_seminorm,
        })
    }

    fn integrate(&self, f: impl Fn(usize, &FrameForms) -> f64) -> f64 {
        let samples: Vec<f64> = self.forms.iter().enumerate().map(|(i, x)| f(i, x)).collect();
        simpson(&samples, self.config.v.step())
    }

    fn phi_primes(&self, gamma: f64) -> Result<Vec<f64>> {
        let v = &self.config.v;
        (0..v.frames.len())
            .map(|i| self.config.weight.phi_prime((gamma * (v.horizon - v.time(i))).max(0.0)))
            .collect()
    }

    fn sweep_row(&self, gamma: f64) -> Result<SweepRow> {
        let s = self.config.s;
        let dphi = self.phi_primes(gamma)?;
        let weights: Vec<f64> = (-1..=self.q_top).map(|q| 2f64.powf(-2.0 * s * q as f64)).collect();
        let lhs = self.integrate(|i, f| {
            let p = dphi[i];
            (0..f.ee.len())
                .map(|b| weights[b] * (f.ee[b] + 2.0 * p * f.ev[b] + p * p * f.vv[b]).max(0.0))
                .sum()
        });
        let lhs_multiplier = self.integrate(|i, f| {
            let p = dphi[i];
            (f.m_ee + 2.0 * p * f.m_ev + p * p * f.m_vv).max(0.0)
        });
        let rhs_gradient = self.integrate(|_, f| f.grad_omega);
        let rhs_l2 = self.integrate(|_, f| f.l2);
        let den = gamma.powf(0.25) * (rhs_gradient + gamma.powf(0.75) * rhs_l2);
        Ok(SweepRow {
            gamma,
            lhs,
            rhs_gradient,
            rhs_l2,
            ratio: (den > 0.0).then(|| lhs / den),
            lhs_multiplier,
        })
    }

    pub fn report(&self, diagnostic_gammas: &[f64]) -> Result<CarlemanReport> {
        let rows = self
            .config
            .gammas
            .par_iter()
            .map(|&g| self.sweep_row(g))
            .collect::<Result<Vec<_>>>()?;
        let degenerate = rows.iter().any(|r| r.ratio.is_none());
        let floor = self.config.floor;
        let (gamma0, constant) = if degenerate {
            (None, None)
        } else {
            let ratios: Vec<f64> = rows.iter().map(|r| r.ratio.unwrap_or(0.0)).collect();
            match empirical_start(&ratios, floor) {
                Some(i0) => (
                    Some(rows[i0].gamma),
                    Some(ratios[i0..].iter().copied().fold(f64::INFINITY, f64::min)),
                ),
                None => (None, None),
            }
        };
        let start = gamma0.and_then(|g| rows.iter().position(|r| r.gamma == g));
        let exponent_scan = if degenerate {
            Vec::new()
        } else {
            EXPONENT_PAIRS
                .iter()
                .map(|&(bg, bl)| exponent_row(&rows, bg, bl, start, floor))
                .collect()
        };
        let diagnostics = if self.with_blocks {
            diagnostic_gammas
                .iter()
                .map(|&g| self.diagnostics(g))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        Ok(CarlemanReport {
            s: self.config.s,
            horizon: self.config.v.horizon,
            frames: self.config.v.frames.len(),
            a0: self.a0,
            rows,
            floor,
            gamma0,
            constant,
            degenerate,
            exploratory: self.exploratory,
            exponent_scan,
            diagnostics,
        })
    }

    /// Measured `C₄ = min_q Σ_t|⟨A_q, v_q⟩| / (2^{2q} Σ_t‖v_q‖²)` over blocks `q ≥ 0` carrying energy.
    fn c4(&self) -> Option<f64> {
        let total: f64 = self.forms.iter().flat_map(|f| f.vv.iter()).sum();
        (0..=self.q_top)
            .filter_map(|q| {
                let b = (q + 1) as usize;
                let vv: f64 = self.forms.iter().map(|f| f.vv[b]).sum();
                let av: f64 = self.forms.iter().map(|f| f.av[b].abs()).sum();
                (vv > 1e-12 * total).then(|| av / (4f64.powi(q) * vv))
            })
            .reduce(f64::min)
    }

    pub fn diagnostics(&self, gamma: f64) -> Result<BlockDiagnostics> {
        if !self.with_blocks {
            return Err(Error::Config("block diagnostics were not prepared".into()));
        }
        let s = self.config.s;
        let v = &self.config.v;
        let dphi = self.phi_primes(gamma)?;
        let ddphi = (0..v.frames.len())
            .map(|i| self.config.weight.phi_double_prime((gamma * (v.horizon - v.time(i))).max(0.0)))
            .collect::<Result<Vec<f64>>>()?;
        let c4 = self.c4();
        let mu = &self.config.mu;
        let mut rows = Vec::new();
        let mut dyadic_lhs = 0.0;
        for q in -1..=self.q_top {
            let b = (q + 1) as usize;
            let weight = 2f64.powf(-2.0 * s * q as f64);
            let mass = self.integrate(|_, f| f.vv[b]);
            let lhs_block = self.integrate(|i, f| (f.ee[b] + 2.0 * dphi[i] * f.ev[b] + dphi[i].powi(2) * f.vv[b]).max(0.0));
            dyadic_lhs += weight * lhs_block;
            let elliptic_term = self.integrate(|i, f| (f.aa[b] + 2.0 * dphi[i] * f.av[b] + dphi[i].powi(2) * f.vv[b]).max(0.0));
            let phi_term = gamma * self.integrate(|i, f| ddphi[i] * f.vv[b]);
            let qq = q.max(0);
            let eps = 2f64.powi(-2 * qq);
            let me = mu.value(eps);
            let penalty = self.time_seminorm * (me / eps * 4f64.powi(qq) + 16f64.powi(qq) * me) * mass;
            let big = self.config.omega.dyadic_weight(q);
            let lower_bound = (0.5 * gamma + gamma.powf(0.25) * big * big * 4f64.powi(qq)) * mass;
            let threshold = c4.map(|c| 0.5 * c * self.a0 * 4f64.powi(qq));
            let carrying: Vec<usize> = (0..self.forms.len()).filter(|&i| self.forms[i].vv[b] > 0.0).collect();
            let high = match threshold {
                Some(th) => carrying.iter().filter(|&&i| dphi[i] <= th).count(),
                None => 0,
            };
            rows.push(BlockRow {
                q,
                weight,
                lhs_block,
                elliptic_term,
                phi_term,
                penalty,
                mass,
                high_fraction: if carrying.is_empty() { 0.0 } else { high as f64 / carrying.len() as f64 },
                lower_bound,
                lower_ratio: (lower_bound > 0.0).then(|| lhs_block / lower_bound),
            });
        }
        Ok(BlockDiagnostics {
            gamma,
            c4,
            a0: self.a0,
            time_seminorm: self.time_seminorm,
            rows,
            dyadic_lhs,
        })
    }
}

/// First index from which every ratio is at least `floor` and the sequence does not decrease.
fn empirical_start(ratios: &[f64], floor: f64) -> Option<usize> {
    let n = ratios.len();
    let mut start = None;
    for i in (0..n).rev() {
        let ok = ratios[i] >= floor && (i + 1 == n || ratios[i + 1] >= ratios[i] * (1.0 - 1e-12));
        if ok {
            start = Some(i);
        } else {
            break;
        }
    }
    start
}

fn exponent_row(rows: &[SweepRow], bg: f64, bl: f64, start: Option<usize>, floor: f64) -> ExponentRow {
    let ratios: Vec<f64> = rows
        .iter()
        .map(|r| r.lhs / (r.gamma.powf(bg) * r.rhs_gradient + r.gamma.powf(bl) * r.rhs_l2))
        .collect();
    let min_ratio = start.map(|i| ratios[i..].iter().copied().fold(f64::INFINITY, f64::min));
    let tail_slope = (ratios.len() >= 4).then(|| {
        let n = ratios.len();
        let (g0, g1) = (rows[n - 4].gamma.ln(), rows[n - 1].gamma.ln());
        (ratios[n - 1].ln() - ratios[n - 4].ln()) / (g1 - g0)
    });
    ExponentRow {
        grad_exponent: bg,
        l2_exponent: bl,
        holds_on_sweep: min_ratio.is_some_and(|m| m >= floor) && tail_slope.is_none_or(|s| s >= 0.0),
        ratios,
        min_ratio,
        tail_slope,
    }
}

/// Runs the γ sweep and block diagnostics at the given γ values.
pub fn evaluate_carleman(
    config: &CarlemanConfig,
    coeffs: &CoefficientField,
    lp: &LittlewoodPaley,
    diagnostic_gammas: &[f64],
) -> Result<CarlemanReport> {
    CarlemanRun::prepare(config, coeffs, lp, !diagnostic_gammas.is_empty())?.report(diagnostic_gammas)
}

pub fn block_diagnostics(config: &CarlemanConfig, coeffs: &CoefficientField, lp: &LittlewoodPaley, gamma: f64) -> Result<BlockDiagnostics> {
    CarlemanRun::prepare(config, coeffs, lp, true)?.diagnostics(gamma)
}

#[cfg(test)]
mod tests {
    use super::super::operator::{apply_conjugated_operator, bump_mode};
    use super::*;
    use crate::lp::{dyadic_sobolev_norm_sq_spectrum, Grid, GridFunction};

    fn setup(m: usize) -> (Grid, CoefficientField, CarlemanConfig) {
        let g = Grid::line(128).unwrap();
        let c = CoefficientField::sinusoidal(g, 1.0, m, 0.5, |t| (5.0 * t).sin()).unwrap();
        let v = bump_mode(g, 1.0, m, [3, 0], 0.5);
        let cfg = CarlemanConfig::new(0.5, Modulus::power(1.0).unwrap(), vec![1.0, 2.0, 4.0], v).unwrap();
        (g, c, cfg)
    }

    #[test]
    fn quadratic_forms_match_direct_evaluation() {
        let (_, c, cfg) = setup(129);
        let lp = LittlewoodPaley::default();
        let report = evaluate_carleman(&cfg, &c, &lp, &[]).unwrap();
        let sob = SobolevSpec::plain(-0.5);
        for row in &report.rows {
            let samples: Vec<f64> = (0..129)
                .map(|i| {
                    let lv = apply_conjugated_operator(&c, &cfg.weight, &cfg.v, row.gamma, i).unwrap();
                    dyadic_sobolev_norm_sq_spectrum(&lp, &Spectrum::of(&lv), &sob)
                })
                .collect();
            let direct = simpson(&samples, cfg.v.step());
            assert!((direct - row.lhs).abs() < 1e-10 * direct, "{direct} vs {}", row.lhs);
        }
    }

    #[test]
    fn zero_test_function_is_degenerate() {
        let g = Grid::line(32).unwrap();
        let c = CoefficientField::identity(g, 1.0, 33).unwrap();
        let v = TimeSeries {
            horizon: 1.0,
            frames: vec![GridFunction::zeros(g); 33],
        };
        let cfg = CarlemanConfig::new(0.5, Modulus::power(1.0).unwrap(), vec![1.0, 2.0], v).unwrap();
        let r = evaluate_carleman(&cfg, &c, &LittlewoodPaley::default(), &[]).unwrap();
        assert!(r.degenerate);
        assert!(r.rows.iter().all(|x| x.lhs == 0.0 && x.rhs_l2 == 0.0 && x.ratio.is_none()));
        assert!(r.gamma0.is_none());
    }

    #[test]
    fn support_beyond_half_horizon_is_rejected() {
        let g = Grid::line(32).unwrap();
        let v = TimeSeries::sample(g, 1.0, 33, |t, _| t);
        let err = CarlemanConfig::new(0.5, Modulus::power(1.0).unwrap(), vec![1.0], v).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn dyadic_blocks_sum_to_lhs() {
        let (_, c, cfg) = setup(129);
        let lp = LittlewoodPaley::default();
        let r = evaluate_carleman(&cfg, &c, &lp, &[2.0]).unwrap();
        let d = &r.diagnostics[0];
        let lhs = r.rows.iter().find(|x| x.gamma == 2.0).unwrap().lhs;
        assert!((d.dyadic_lhs - lhs).abs() < 1e-12 * lhs);
        assert!(d.c4.unwrap() > 0.0);
    }

    #[test]
    fn constant_coefficients_have_no_penalty() {
        let g = Grid::line(128).unwrap();
        let c = CoefficientField::identity(g, 1.0, 129).unwrap();
        let v = bump_mode(g, 1.0, 129, [3, 0], 0.5);
        let cfg = CarlemanConfig::new(0.5, Modulus::power(1.0).unwrap(), vec![1.0, 2.0], v).unwrap();
        let d = block_diagnostics(&cfg, &c, &LittlewoodPaley::default(), 1.0).unwrap();
        assert!(d.rows.iter().all(|r| r.penalty == 0.0));
        // Single mode |k| = 3: C₄ is the exact symbol ratio 9/4 in block 1.
        assert!((d.c4.unwrap() - 9.0 / 4.0).abs() < 1e-10);
    }

    #[test]
    fn phi_term_grows_at_least_linearly_in_gamma() {
        let (_, c, cfg) = setup(129);
        let run = CarlemanRun::prepare(&cfg, &c, &LittlewoodPaley::default(), true).unwrap();
        let one = run.diagnostics(1.0).unwrap();
        let two = run.diagnostics(2.0).unwrap();
        for (a, b) in one.rows.iter().zip(&two.rows) {
            assert!(b.phi_term >= 2.0 * a.phi_term * (1.0 - 1e-12));
        }
    }

    #[test]
    fn empirical_start_rule() {
        assert_eq!(empirical_start(&[0.5, 0.1, 0.2, 0.3], 1e-3), Some(1));
        assert_eq!(empirical_start(&[1e-4, 1e-2, 0.5], 1e-3), Some(1));
        assert_eq!(empirical_start(&[0.5, 0.4], 1e-3), Some(1));
        assert_eq!(empirical_start(&[1e-5], 1e-3), None);
    }
}
