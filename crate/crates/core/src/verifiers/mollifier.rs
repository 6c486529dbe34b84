use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{GridFunction, TimeSeries};
use crate::modulus::Modulus;
use crate::numerics::{integrate, QuadOptions};

/// Even bump `ρ(τ) = c·exp(−1/(1 − 4τ²))` on `|τ| < 1/2` with `∫ρ = 1`.
#[derive(Clone, Copy, Debug)]
pub struct Kernel {
    c: f64,
}

fn bump(tau: f64) -> f64 {
    let d = 1.0 - 4.0 * tau * tau;
    if d <= 0.0 {
        0.0
    } else {
        (-1.0 / d).exp()
    }
}

impl Kernel {
    pub fn new() -> Result<Self> {
        let mass = integrate(bump, -0.5, 0.5, QuadOptions::relative(1e-14))?;
        Ok(Self { c: 1.0 / mass.value })
    }

    pub fn rho(&self, tau: f64) -> f64 {
        self.c * bump(tau)
    }

    pub fn rho_prime(&self, tau: f64) -> f64 {
        let d = 1.0 - 4.0 * tau * tau;
        if d <= 0.0 {
            0.0
        } else {
            -8.0 * tau / (d * d) * self.rho(tau)
        }
    }
}

/// `a^ε` and its analytic time derivative on the input time grid.
#[derive(Clone, Debug)]
pub struct MollifiedSeries {
    pub eps: f64,
    pub smoothed: TimeSeries,
    pub derivative: TimeSeries,
}

/// Convolves in time with `ε^{−1}ρ(·/ε)`, extending `a` by its end values
/// outside `[0, T]`. The derivative uses `ε^{−2}∫a(s)ρ′((t−s)/ε)ds`.
///
/// Quadrature runs on the sample nodes. The discrete kernel weights are
/// divided by their sum and the derivative weights by their first moment, so
/// constants and linear functions are reproduced exactly.
pub fn mollify_time(a: &TimeSeries, eps: f64) -> Result<MollifiedSeries> {
    let m = a.frames.len();
    if m < 2 {
        return Err(Error::InvalidInput("time series needs at least two frames".into()));
    }
    if !(eps > 0.0 && eps < a.horizon / 2.0) {
        return Err(Error::Domain {
            value: eps,
            domain: "ε in (0, T/2)",
        });
    }
    let h = a.step();
    if h > eps / 8.0 * (1.0 + 1e-12) {
        return Err(Error::Resolution(format!("time step {h:e} exceeds ε/8 = {:e}", eps / 8.0)));
    }
    let kernel = Kernel::new()?;
    let reach = (eps / (2.0 * h)).floor() as i64;
    let offsets: Vec<i64> = (-reach..=reach).collect();
    let w: Vec<f64> = offsets.iter().map(|&j| h / eps * kernel.rho(j as f64 * h / eps)).collect();
    let dw: Vec<f64> = offsets
        .iter()
        .map(|&j| h / (eps * eps) * kernel.rho_prime(j as f64 * h / eps))
        .collect();
    let mass: f64 = w.iter().sum();
    // First moment of the derivative weights; exact value 1.
    let moment: f64 = -h * offsets.iter().zip(&dw).map(|(&j, d)| j as f64 * d).sum::<f64>();
    let grid = *a.frames[0].grid();
    let pairs = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut s = vec![Complex64::new(0.0, 0.0); grid.len()];
            let mut d = s.clone();
            for (k, &j) in offsets.iter().enumerate() {
                let idx = (i as i64 - j).clamp(0, m as i64 - 1) as usize;
                let (ws, wd) = (w[k] / mass, dw[k] / moment);
                for ((si, di), v) in s.iter_mut().zip(d.iter_mut()).zip(a.frames[idx].values()) {
                    *si += ws * v;
                    *di += wd * v;
                }
            }
            Ok((GridFunction::from_complex(grid, s)?, GridFunction::from_complex(grid, d)?))
        })
        .collect::<Result<Vec<(GridFunction, GridFunction)>>>()?;
    let (smoothed, derivative): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(MollifiedSeries {
        eps,
        smoothed: TimeSeries {
            horizon: a.horizon,
            frames: smoothed,
        },
        derivative: TimeSeries {
            horizon: a.horizon,
            frames: derivative,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MollifierRow {
    pub eps: f64,
    /// `sup|a^ε − a| / μ(ε)`.
    pub approx_ratio: f64,
    /// `sup|∂_t a^ε|·ε / μ(ε)`.
    pub derivative_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MollifierReport {
    pub rows: Vec<MollifierRow>,
    /// Measured `[a]_{C^μ}` in time.
    pub time_seminorm: f64,
    /// `max/min` of the approximation ratios over the sweep.
    pub approx_variation: f64,
    pub derivative_variation: f64,
}

fn variation(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let hi = xs.clone().fold(0.0, f64::max);
    let lo = xs.fold(f64::INFINITY, f64::min);
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Measures both mollifier bounds over a sweep of `ε`.
pub fn mollifier_bounds(a: &TimeSeries, mu: &Modulus, eps_values: &[f64]) -> Result<MollifierReport> {
    let real: Vec<Vec<f64>> = a.frames.iter().map(|f| f.real_parts()).collect();
    let time_seminorm = crate::modulus::time_seminorm(&real, a.step(), mu)?;
    let rows = eps_values
        .iter()
        .map(|&eps| {
            let out = mollify_time(a, eps)?;
            let mut dev = 0.0f64;
            let mut slope = 0.0f64;
            for ((s, d), f) in out.smoothed.frames.iter().zip(&out.derivative.frames).zip(&a.frames) {
                dev = dev.max((s - f).linf_norm());
                slope = slope.max(d.linf_norm());
            }
            let w = mu.eval(eps)?;
            Ok(MollifierRow {
                eps,
                approx_ratio: dev / w,
                derivative_ratio: slope * eps / w,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MollifierReport {
        approx_variation: variation(rows.iter().map(|r| r.approx_ratio)),
        derivative_variation: variation(rows.iter().map(|r| r.derivative_ratio)),
        rows,
        time_seminorm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Grid;
    use crate::numerics::diff;

    fn series(m: usize, f: impl Fn(f64, [f64; 2]) -> f64 + Sync) -> TimeSeries {
        TimeSeries::sample(Grid::line(16).unwrap(), 1.0, m, f)
    }

    #[test]
    fn kernel_has_unit_mass_and_is_even() {
        let k = Kernel::new().unwrap();
        let mass = integrate(|t| k.rho(t), -0.5, 0.5, QuadOptions::relative(1e-13)).unwrap();
        assert!((mass.value - 1.0).abs() < 1e-12);
        for t in [0.1, 0.3, 0.49] {
            assert_eq!(k.rho(t), k.rho(-t));
            let fd = (k.rho(t + 1e-6) - k.rho(t - 1e-6)) / 2e-6;
            assert!((fd - k.rho_prime(t)).abs() < 1e-6 * k.rho_prime(t).abs().max(1.0));
        }
        assert_eq!(k.rho(0.5), 0.0);
    }

    #[test]
    fn constants_are_fixed() {
        let a = series(257, |_, x| 2.0 + x[0].sin());
        let out = mollify_time(&a, 0.1).unwrap();
        for (s, f) in out.smoothed.frames.iter().zip(&a.frames) {
            assert!((s - f).linf_norm() < 1e-14);
        }
        assert!(out.derivative.frames.iter().all(|d| d.linf_norm() < 1e-12));
    }

    #[test]
    fn linear_functions_are_fixed_away_from_the_ends() {
        let a = series(513, |t, _| t);
        let eps = 0.125;
        let out = mollify_time(&a, eps).unwrap();
        for i in 0..a.frames.len() {
            let t = a.time(i);
            if t > eps && t < 1.0 - eps {
                assert!((out.smoothed.frames[i].values()[0].re - t).abs() < 1e-13);
                assert!((out.derivative.frames[i].values()[0].re - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn analytic_derivative_matches_differences() {
        let a = series(1025, |t, _| (7.0 * t).sin());
        let out = mollify_time(&a, 0.0625).unwrap();
        let s: Vec<f64> = out.smoothed.frames.iter().map(|f| f.values()[0].re).collect();
        let fd = diff::derivative(&s, a.step());
        for i in 100..900 {
            assert!((fd[i] - out.derivative.frames[i].values()[0].re).abs() < 1e-6);
        }
    }

    #[test]
    fn step_too_coarse_is_rejected() {
        let a = series(33, |t, _| t);
        assert!(matches!(mollify_time(&a, 0.1), Err(Error::Resolution(_))));
    }

    #[test]
    fn holder_cusp_gives_uniform_ratios() {
        let mu = Modulus::power(0.5).unwrap();
        let a = series(1025, |t, x| 1.0 + 0.5 * x[0].sin() * (t - 0.3).abs().sqrt());
        let eps: Vec<f64> = (2..=6).map(|k| 2f64.powi(-k)).collect();
        let r = mollifier_bounds(&a, &mu, &eps).unwrap();
        assert!(r.approx_variation < 2.0, "{r:?}");
        assert!(r.derivative_variation < 2.0, "{r:?}");
    }
}
