//! Acceptance suite: one PASS/FAIL line per criterion, desk-scale grids.

use std::time::Instant;

use lpcarleman::carleman::{
    bump, bump_mode, conjugation_check, evaluate_carleman, CarlemanConfig, CoefficientField,
};
use lpcarleman::lp::{CutoffPair, Grid, GridFunction, LittlewoodPaley, TimeSeries};
use lpcarleman::modulus::{check_osgood, Modulus, Verdict};
use lpcarleman::numerics::{integrate, QuadOptions};
use lpcarleman::paraproduct::{decompose_product, margin_q_max, verify_remainder_estimate};
use lpcarleman::sampling::{band_limited, band_limited_in, default_band, Profile};
use lpcarleman::verifiers::{mollifier_bounds, verify_bernstein, verify_commutator, LatticePoint};
use lpcarleman::weight::WeightTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<(bool, String), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn main() {
    let checks: [(u32, &str, Check, Option<f64>); 12] = [
        (1, "partition of unity", partition_of_unity, Some(1.0)),
        (2, "almost orthogonality and reconstruction", almost_orthogonality, None),
        (3, "weight ODE", weight_ode, Some(5.0)),
        (4, "Osgood classification", osgood_classification, None),
        (5, "Bernstein ratios", bernstein, None),
        (6, "commutator constant under refinement", commutator, None),
        (7, "product decomposition", product_decomposition, None),
        (8, "remainder estimate under refinement", remainder_estimate, None),
        (9, "mollifier bounds", mollifier, None),
        (10, "single-mode Carleman oracle", carleman_oracle, Some(30.0)),
        (11, "Carleman headline sweep", carleman_headline, Some(600.0)),
        (12, "conjugation identity", conjugation_identity, None),
    ];
    let mut failures = 0;
    for (id, name, check, budget) in checks {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = budget.is_none_or(|b| secs < b);
        let ok = ok && in_time;
        let budget_note = budget.map(|b| format!(", budget {b} s")).unwrap_or_default();
        println!(
            "[{}] {id:>2} {name}: {detail} ({secs:.2} s{budget_note})",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failures += 1;
        }
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

fn partition_of_unity() -> Result<(bool, String), String> {
    let cut = CutoffPair::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let q_top = 24;
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        // Log-uniform radii plus a share of small radii below the first annulus.
        let r = if i % 10 == 0 {
            rng.random::<f64>() * 2.0
        } else {
            2f64.powf(rng.random::<f64>() * 22.0 - 1.0)
        };
        let mut sum = cut.chi(r);
        for q in 0..=q_top {
            sum += cut.phi_cut(r / 2f64.powi(q));
        }
        worst = worst.max((sum - 1.0).abs());
    }
    Ok((worst <= 1e-12, format!("max |χ + Σφ − 1| = {worst:.1e} at 10⁴ radii")))
}

fn almost_orthogonality() -> Result<(bool, String), String> {
    let lp = LittlewoodPaley::default();
    let mut worst_product = 0.0f64;
    let mut worst_recon = 0.0f64;
    for grid in [Grid::line(1024).map_err(err)?, Grid::square(256).map_err(err)?] {
        let q_top = LittlewoodPaley::q_top(&grid);
        let mults: Vec<_> = (-1..=q_top).map(|q| lp.cutoffs().block_multiplier(&grid, q)).collect();
        for p in 0..mults.len() {
            for q in (p + 2)..mults.len() {
                let m = mults[p].iter().zip(mults[q].iter()).map(|(a, b)| (a * b).abs()).fold(0.0, f64::max);
                worst_product = worst_product.max(m);
            }
        }
        let samples = if grid.dim() == 1 { 50 } else { 5 };
        for seed in 0..samples {
            let u = band_limited(grid, 100 + seed, &Profile::Flat);
            let mut sum = GridFunction::zeros(grid);
            for q in -1..=q_top {
                sum = sum.try_add(&lp.block(&u, q)).map_err(err)?;
            }
            worst_recon = worst_recon.max((&sum - &u).l2_norm() / u.l2_norm());
        }
    }
    let ok = worst_product <= 1e-14 && worst_recon <= 1e-12;
    Ok((
        ok,
        format!("max |m_p m_q| (|p−q| ≥ 2) = {worst_product:.1e}; reconstruction {worst_recon:.1e} over 55 fields"),
    ))
}

fn weight_ode() -> Result<(bool, String), String> {
    let mut worst = 0.0f64;
    let mut worst_ode = 0.0f64;
    for mu in [Modulus::power(1.0), Modulus::log_lipschitz(1.0), Modulus::log_lipschitz(0.5)] {
        let mu = mu.map_err(err)?;
        let table = WeightTable::build(&mu, 4.0).map_err(err)?;
        for row in table.rows(400).map_err(err)? {
            worst = worst.max(row.residual.abs());
            let ode = row.phi_prime.powi(2) * mu.value(1.0 / row.phi_prime);
            worst_ode = worst_ode.max((ode - row.phi_double_prime).abs() / ode);
        }
    }
    let table = WeightTable::build(&Modulus::power(1.0).map_err(err)?, 4.0).map_err(err)?;
    let mut closed = 0.0f64;
    for i in 0..=400 {
        let tau = i as f64 * 0.01;
        let exact = tau.exp_m1();
        closed = closed.max((table.big_phi(tau).map_err(err)? - exact).abs() / exact.max(1e-300));
    }
    let ok = worst <= 1e-6 && worst_ode <= 1e-6 && closed <= 1e-9;
    Ok((
        ok,
        format!("max node residual {worst:.1e}, ODE mismatch {worst_ode:.1e}, |Φ − (e^τ − 1)|/Φ = {closed:.1e}"),
    ))
}

fn osgood_classification() -> Result<(bool, String), String> {
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let v = check_osgood(&Modulus::power(alpha).map_err(err)?, 60).verdict;
        let want = if alpha == 1.0 { Verdict::Pass } else { Verdict::Fail };
        ok &= v == want;
        parts.push(format!("power({alpha}) {v:?}"));
    }
    for (alpha, want) in [(0.5, Verdict::Pass), (1.0, Verdict::Pass), (2.0, Verdict::Fail)] {
        let v = check_osgood(&Modulus::log_lipschitz(alpha).map_err(err)?, 60).verdict;
        ok &= v == want;
        parts.push(format!("loglip({alpha}) {v:?}"));
    }
    Ok((ok, parts.join(", ")))
}

fn bernstein() -> Result<(bool, String), String> {
    let lp = LittlewoodPaley::default();
    let grid = Grid::line(1024).map_err(err)?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut ok = true;
    for seed in 0..50 {
        let u = band_limited(grid, 200 + seed, &Profile::Flat);
        for q in -1..=grid.q_max() {
            let r = verify_bernstein(&lp, &u, q).map_err(err)?;
            ok &= r.passed;
            if let Some(m) = r.min_bounded_ratio() {
                lo = lo.min(m);
            }
            for s in r.samples.iter().filter(|s| s.label.starts_with("block-l2")) {
                hi = hi.max(s.ratio);
            }
        }
    }
    Ok((ok, format!("block ratios in [{lo:.4}, {hi:.4}] ⊂ [3/4, 8/3] over 50 fields")))
}

fn commutator() -> Result<(bool, String), String> {
    let lp = LittlewoodPaley::default();
    let coarse = Grid::line(512).map_err(err)?;
    let band = default_band(&coarse);
    let mut constants = Vec::new();
    for n in [512, 1024] {
        let grid = Grid::line(n).map_err(err)?;
        let lattice = LatticePoint::cube(0, grid.q_max());
        let mut c = 0.0f64;
        for pair in 0..20 {
            let a = band_limited_in(grid, 300 + 2 * pair, &Profile::Flat, band);
            let u = band_limited_in(grid, 301 + 2 * pair, &Profile::Flat, band);
            c = c.max(verify_commutator(&lp, &a, &u, &lattice, None).map_err(err)?.max_ratio);
        }
        constants.push(c);
    }
    let variation = constants[0].max(constants[1]) / constants[0].min(constants[1]);
    Ok((
        variation < 2.0 && constants.iter().all(|c| c.is_finite() && *c > 0.0),
        format!("C(512) = {:.4}, C(1024) = {:.4}, variation {variation:.3}", constants[0], constants[1]),
    ))
}

fn product_decomposition() -> Result<(bool, String), String> {
    let lp = LittlewoodPaley::default();
    let grid = Grid::line(1024).map_err(err)?;
    let q_hi = margin_q_max(&grid);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut residual, mut outside) = (0.0f64, 0.0f64);
    for t in 0..50 {
        let a = band_limited(grid, 400 + 2 * t, &Profile::Flat);
        let b = band_limited(grid, 401 + 2 * t, &Profile::Flat);
        let q = rng.random_range(0..=q_hi);
        let d = decompose_product(&lp, &a, &b, q).map_err(err)?;
        residual = residual.max(d.residual);
        outside = outside.max(d.outside_mass);
    }
    let a = GridFunction::constant(grid, 1.7);
    let mut constant_case = 0.0f64;
    for seed in 0..5 {
        let b = band_limited(grid, 500 + seed, &Profile::Flat);
        for q in 3..=q_hi {
            let d = decompose_product(&lp, &a, &b, q).map_err(err)?;
            for r in [&d.r1, &d.r2, &d.r3] {
                constant_case = constant_case.max(r.linf_norm());
            }
        }
    }
    let ok = residual <= 1e-10 && outside <= 1e-12 && constant_case <= 1e-12;
    Ok((
        ok,
        format!("residual {residual:.1e}, out-of-ball mass {outside:.1e}, constant-a remainders {constant_case:.1e}"),
    ))
}

fn remainder_estimate() -> Result<(bool, String), String> {
    let lp = LittlewoodPaley::default();
    let band = default_band(&Grid::line(256).map_err(err)?);
    let configs = [
        (0.5, "power(1)", Modulus::power(1.0).map_err(err)?),
        (0.5, "ω of loglip(1)", Modulus::log_lipschitz(1.0).map_err(err)?.derive_omega()),
        (0.25, "power(3/4)", Modulus::power(0.75).map_err(err)?),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, label, omega) in configs {
        let mut per_n = Vec::new();
        for n in [256, 512, 1024] {
            let grid = Grid::line(n).map_err(err)?;
            let mut worst = [0.0f64; 3];
            for pair in 0..10 {
                let a = band_limited_in(grid, 600 + 2 * pair, &Profile::Holder(omega.clone()), band);
                let b = band_limited_in(grid, 601 + 2 * pair, &Profile::Flat, band);
                let r = verify_remainder_estimate(&lp, &a, &b, s, &omega, None).map_err(err)?;
                for i in 0..3 {
                    worst[i] = worst[i].max(r.ratios[i]);
                }
            }
            per_n.push(worst);
        }
        let mut variations = [0.0; 3];
        for i in 0..3 {
            let xs: Vec<f64> = per_n.iter().map(|w| w[i]).collect();
            let hi = xs.iter().copied().fold(0.0, f64::max);
            let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
            variations[i] = hi / lo;
            ok &= xs.iter().all(|x| x.is_finite() && *x > 0.0) && variations[i] < 2.0;
        }
        parts.push(format!(
            "(s={s}, {label}): C = [{:.3}, {:.3}, {:.3}] variation [{:.3}, {:.3}, {:.3}]",
            per_n[2][0], per_n[2][1], per_n[2][2], variations[0], variations[1], variations[2]
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn mollifier() -> Result<(bool, String), String> {
    let mu = Modulus::power(0.5).map_err(err)?;
    let grid = Grid::line(32).map_err(err)?;
    let a = TimeSeries::sample(grid, 1.0, 1025, |t, x| 1.0 + 0.5 * x[0].sin() * (t - 0.3).abs().sqrt());
    let eps: Vec<f64> = (2..=6).map(|k| 2f64.powi(-k)).collect();
    let r = mollifier_bounds(&a, &mu, &eps).map_err(err)?;
    let ok = r.approx_variation < 2.0 && r.derivative_variation < 2.0;
    let approx: Vec<String> = r.rows.iter().map(|x| format!("{:.3}", x.approx_ratio)).collect();
    let deriv: Vec<String> = r.rows.iter().map(|x| format!("{:.3}", x.derivative_ratio)).collect();
    Ok((
        ok,
        format!(
            "|a^ε − a|/μ(ε) = [{}] (×{:.3}), |∂_t a^ε|ε/μ(ε) = [{}] (×{:.3})",
            approx.join(", "),
            r.approx_variation,
            deriv.join(", "),
            r.derivative_variation
        ),
    ))
}

/// Independent smooth step: `1 − ∫₀^y b / ∫₀^1 b` with `b(x) = exp(−1/(x(1−x)))`.
fn oracle_chi(r: f64) -> f64 {
    let b = |x: f64| if x <= 0.0 || x >= 1.0 { 0.0 } else { (-1.0 / (x * (1.0 - x))).exp() };
    let y = (r - 0.75) / (4.0 / 3.0 - 0.75);
    if y <= 0.0 {
        return 1.0;
    }
    if y >= 1.0 {
        return 0.0;
    }
    let opts = QuadOptions::relative(1e-14);
    let part = integrate(b, 0.0, y, opts).unwrap().value;
    let total = integrate(b, 0.0, 1.0, opts).unwrap().value;
    1.0 - part / total
}

fn carleman_oracle() -> Result<(bool, String), String> {
    let (n, m, horizon, k, s, sharp) = (256usize, 1025usize, 1.0f64, 8i64, 0.5f64, 1.0f64);
    let grid = Grid::line(n).map_err(err)?;
    let mu = Modulus::power(1.0).map_err(err)?;
    let coeffs = CoefficientField::identity(grid, horizon, m).map_err(err)?;
    let v = bump_mode(grid, horizon, m, [k, 0], sharp);
    let gammas = vec![1.0, 4.0, 16.0];
    let cfg = CarlemanConfig::new(s, mu.clone(), gammas.clone(), v).map_err(err)?;
    let report = evaluate_carleman(&cfg, &coeffs, &LittlewoodPaley::default(), &[]).map_err(err)?;

    // Scalar oracle: Δ_q e^{ikx} = φ_q(k)e^{ikx}, ‖e^{ikx}‖² = 2π.
    let kk = k as f64;
    let omega = mu.derive_omega();
    let block = |q: i32| if q < 0 { oracle_chi(kk) } else { oracle_chi(kk / 2f64.powi(q + 1)) - oracle_chi(kk / 2f64.powi(q)) };
    let big_omega = |q: i32| {
        let q = q.max(0);
        2f64.powi(q) * omega.value(2f64.powi(-q))
    };
    let (mut hs, mut hs_omega) = (0.0, 0.0);
    for q in -1..=12 {
        let p2 = block(q).powi(2);
        hs += 2f64.powf(-2.0 * s * q as f64) * p2;
        hs_omega += 2f64.powf(-2.0 * s * q as f64) * big_omega(q).powi(2) * p2;
    }
    let period = 2.0 * std::f64::consts::PI;
    let g = |t: f64| bump(t, horizon, sharp);
    let dg = |t: f64| {
        let sigma = 2.0 * t / horizon;
        if sigma <= 0.0 || sigma >= 1.0 {
            0.0
        } else {
            g(t) * sharp * (1.0 - 2.0 * sigma) / (sigma * (1.0 - sigma)).powi(2) * 2.0 / horizon
        }
    };
    let opts = QuadOptions::relative(1e-13);
    let half = 0.5 * horizon;
    let mass = integrate(|t| g(t).powi(2), 0.0, half, opts).map_err(err)?.value;
    let rhs_l2 = period * mass;
    let rhs_grad = period * kk * kk * hs_omega * mass;
    let mut worst = 0.0f64;
    for (row, gamma) in report.rows.iter().zip(&gammas) {
        let integrand = |t: f64| (dg(t) - kk * kk * g(t) + (gamma * (horizon - t)).exp() * g(t)).powi(2);
        let lhs = period * hs * integrate(integrand, 0.0, half, opts).map_err(err)?.value;
        for (got, want) in [(row.lhs, lhs), (row.rhs_gradient, rhs_grad), (row.rhs_l2, rhs_l2)] {
            worst = worst.max((got - want).abs() / want);
        }
    }
    Ok((worst <= 1e-6, format!("max relative deviation {worst:.1e} on lhs and rhs for γ ∈ {{1, 4, 16}}")))
}

const HEADLINE_HORIZON: f64 = 1.0 / 256.0;

fn headline_setup(m: usize) -> Result<(CoefficientField, TimeSeries, Modulus), String> {
    let grid = Grid::line(1024).map_err(err)?;
    let horizon = HEADLINE_HORIZON;
    // w(t) = e·r·ln(1/|r|), r = (t − T/4)/T: log-Lipschitz cusp with |w| ≤ 1.
    let w = move |t: f64| {
        let r = (t - 0.25 * horizon) / horizon;
        if r == 0.0 {
            0.0
        } else {
            std::f64::consts::E * r * (1.0 / r.abs()).ln()
        }
    };
    let coeffs = CoefficientField::sinusoidal(grid, horizon, m, 0.5, w).map_err(err)?;
    let profile = band_limited(grid, 11, &Profile::Flat);
    let h = horizon / (m - 1) as f64;
    let frames = (0..m).map(|i| profile.scale(bump(i as f64 * h, horizon, 1.0))).collect();
    let v = TimeSeries { horizon, frames };
    Ok((coeffs, v, Modulus::log_lipschitz(1.0).map_err(err)?))
}

fn carleman_headline() -> Result<(bool, String), String> {
    let (coeffs, v, mu) = headline_setup(512)?;
    let gammas: Vec<f64> = (0..=10).map(|k| 2f64.powi(k)).collect();
    let cfg = CarlemanConfig::new(0.5, mu, gammas, v).map_err(err)?;
    let report = evaluate_carleman(&cfg, &coeffs, &LittlewoodPaley::default(), &[1.0, 1024.0]).map_err(err)?;
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("carleman_headline.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report).map_err(err)?).map_err(err)?;
    let ratios: Vec<String> = report.rows.iter().map(|r| format!("{:.2e}", r.ratio.unwrap_or(f64::NAN))).collect();
    let ok = report.gamma0.is_some() && report.constant.is_some_and(|c| c >= report.floor);
    Ok((
        ok,
        format!(
            "ratios [{}], γ₀ = {:?}, C = {:?}; report at {}",
            ratios.join(", "),
            report.gamma0,
            report.constant,
            path.display()
        ),
    ))
}

fn conjugation_identity() -> Result<(bool, String), String> {
    let (coeffs, v, mu) = headline_setup(512)?;
    let table = WeightTable::build(&mu, 256.0 * HEADLINE_HORIZON).map_err(err)?;
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for gamma in [1.0, 16.0, 256.0] {
        let c = conjugation_check(&coeffs, &table, &v, gamma).map_err(err)?;
        worst = worst.max(c.relative_residual);
        parts.push(format!("γ={gamma}: {:.1e}", c.relative_residual));
    }
    Ok((worst <= 1e-8, parts.join(", ")))
}
