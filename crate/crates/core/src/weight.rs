//! The weight `Φ` built from an Osgood modulus `μ`:
//! `φ(t) = ∫_{1/t}^1 ds/μ(s)`, `Φ′ = φ^{-1}`, `Φ(0) = 0`, so that
//! `Φ″ = (Φ′)² μ(1/Φ′)`.
//!
//! Everything is computed in the variable `u = log2 t`, where
//! `φ(2^u) = ln2 ∫_0^u 2^{-v}/μ(2^{-v}) dv` and
//! `Φ(φ(2^u)) = ln2 ∫_0^u dv/μ(2^{-v})`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::numerics::quad::gk15;
use crate::numerics::{newton_bracketed, MonotoneCubic};

const LN2: f64 = std::f64::consts::LN_2;
/// Node spacing in `u = log2 t`.
const STEP: f64 = 1.0 / 16.0;
/// Largest `u` represented; `2^1000` is close to the top of the `f64` range.
const U_CAP: f64 = 1000.0;

/// Values of the weight and its derivatives at one argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightPoint {
    pub tau: f64,
    /// `log2 Φ′(τ)`.
    pub log2_phi_prime: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub phi_double_prime: f64,
}

/// One row of the exported table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightRow {
    pub tau: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub phi_double_prime: f64,
    /// Relative gap between `Φ″` and a fourth-order difference quotient of `Φ′`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct WeightTable {
    mu: Modulus,
    tau_max: f64,
    /// `φ(2^{u_i})` at `u_i = i·STEP`.
    phi_nodes: Vec<f64>,
    /// `Φ(φ(2^{u_i}))`.
    big_phi_nodes: Vec<f64>,
    /// Accumulated quadrature error estimates per node.
    quad_error: Vec<f64>,
}

impl WeightTable {
    /// Tabulates the weight on `[0, tau_max]`.
    ///
    /// Fails with [`Error::NonOsgoodRange`] when `φ` stays below `tau_max` up
    /// to `t = 2^1000`, which is what a modulus failing the Osgood condition
    /// (or one too close to failing it) looks like.
    pub fn build(mu: &Modulus, tau_max: f64) -> Result<Self> {
        if !(tau_max > 0.0 && tau_max.is_finite()) {
            return Err(Error::InvalidInput(format!("tau_max must be positive, got {tau_max}")));
        }
        let g = |u: f64| LN2 * (-u * LN2 - mu.log_value_dyadic(u)).exp();
        let h = |u: f64| LN2 * (-mu.log_value_dyadic(u)).exp();
        let target = tau_max * (1.0 + 1e-3) + 1e-2;
        let mut phi_nodes = vec![0.0];
        let mut big_phi_nodes = vec![0.0];
        let mut quad_error = vec![0.0];
        let mut u = 0.0;
        while *phi_nodes.last().unwrap() <= target {
            if u >= U_CAP {
                let sup = *phi_nodes.last().unwrap();
                if sup <= tau_max {
                    return Err(Error::NonOsgoodRange {
                        requested: tau_max,
                        sup_phi: sup,
                    });
                }
                break;
            }
            let (dphi, ephi) = gk15(&g, u, u + STEP);
            let (dbig, ebig) = gk15(&h, u, u + STEP);
            phi_nodes.push(phi_nodes.last().unwrap() + dphi);
            big_phi_nodes.push(big_phi_nodes.last().unwrap() + dbig);
            quad_error.push(quad_error.last().unwrap() + ephi + ebig);
            u += STEP;
        }
        Ok(Self {
            mu: mu.clone(),
            tau_max,
            phi_nodes,
            big_phi_nodes,
            quad_error,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.mu
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// Largest argument the table can evaluate (slightly above `tau_max`).
    pub fn tau_limit(&self) -> f64 {
        *self.phi_nodes.last().unwrap()
    }

    /// Largest `t` covered by the tabulated `φ`.
    pub fn t_max(&self) -> f64 {
        2f64.powf(self.u_max())
    }

    fn u_max(&self) -> f64 {
        (self.phi_nodes.len() - 1) as f64 * STEP
    }

    /// Accumulated quadrature error estimate of `φ` and `Φ` at the last node.
    pub fn quadrature_error(&self) -> f64 {
        *self.quad_error.last().unwrap()
    }

    fn integrand_phi(&self, u: f64) -> f64 {
        LN2 * (-u * LN2 - self.mu.log_value_dyadic(u)).exp()
    }

    fn integrand_big_phi(&self, u: f64) -> f64 {
        LN2 * (-self.mu.log_value_dyadic(u)).exp()
    }

    fn node(&self, u: f64) -> usize {
        ((u / STEP).floor() as usize).min(self.phi_nodes.len() - 2)
    }

    fn phi_of_u(&self, u: f64) -> f64 {
        let i = self.node(u);
        let a = i as f64 * STEP;
        let f = |v: f64| self.integrand_phi(v);
        self.phi_nodes[i] + if u > a { gk15(&f, a, u).0 } else { 0.0 }
    }

    fn big_phi_of_u(&self, u: f64) -> f64 {
        let i = self.node(u);
        let a = i as f64 * STEP;
        let f = |v: f64| self.integrand_big_phi(v);
        self.big_phi_nodes[i] + if u > a { gk15(&f, a, u).0 } else { 0.0 }
    }

    /// `φ(t)` for `1 ≤ t ≤ t_max`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::Domain {
                value: t,
                domain: "[1, t_max]",
            });
        }
        let u = t.log2();
        if u > self.u_max() {
            return Err(Error::WeightRange {
                requested: t,
                available: self.t_max(),
            });
        }
        Ok(self.phi_of_u(u))
    }

    /// `log2 φ^{-1}(τ)`, solved by safeguarded Newton in `u`.
    fn solve_u(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) {
            return Err(Error::Domain {
                value: tau,
                domain: "[0, tau_limit]",
            });
        }
        if tau > self.tau_limit() {
            return Err(Error::WeightRange {
                requested: tau,
                available: self.tau_limit(),
            });
        }
        if tau == 0.0 {
            return Ok(0.0);
        }
        let j = self.phi_nodes.partition_point(|v| *v < tau);
        let hi_node = j.min(self.phi_nodes.len() - 1);
        let lo = hi_node.saturating_sub(1) as f64 * STEP;
        let hi = hi_node as f64 * STEP;
        newton_bracketed(
            |u| Ok((self.phi_of_u(u) - tau, self.integrand_phi(u))),
            lo,
            hi,
            1e-15 * hi.max(1.0),
        )
    }

    /// `φ^{-1}(s) = Φ′(s)`.
    pub fn phi_inv(&self, s: f64) -> Result<f64> {
        Ok(2f64.powf(self.solve_u(s)?))
    }

    /// `Φ, Φ′, Φ″` at `τ`.
    pub fn evaluate(&self, tau: f64) -> Result<WeightPoint> {
        let u = self.solve_u(tau)?;
        Ok(WeightPoint {
            tau,
            log2_phi_prime: u,
            phi: self.big_phi_of_u(u),
            phi_prime: 2f64.powf(u),
            phi_double_prime: (2.0 * u * LN2 + self.mu.log_value_dyadic(u)).exp(),
        })
    }

    pub fn big_phi(&self, tau: f64) -> Result<f64> {
        Ok(self.evaluate(tau)?.phi)
    }

    pub fn phi_prime(&self, tau: f64) -> Result<f64> {
        self.phi_inv(tau)
    }

    pub fn phi_double_prime(&self, tau: f64) -> Result<f64> {
        Ok(self.evaluate(tau)?.phi_double_prime)
    }

    /// Fourth-order difference quotient of `Φ′` with step `h`; one-sided near 0.
    pub fn phi_double_prime_fd(&self, tau: f64, h: f64) -> Result<f64> {
        let f = |x: f64| self.phi_prime(x);
        if tau >= 2.0 * h {
            Ok((f(tau - 2.0 * h)? - 8.0 * f(tau - h)? + 8.0 * f(tau + h)? - f(tau + 2.0 * h)?) / (12.0 * h))
        } else {
            Ok((-25.0 * f(tau)? + 48.0 * f(tau + h)? - 36.0 * f(tau + 2.0 * h)? + 16.0 * f(tau + 3.0 * h)?
                - 3.0 * f(tau + 4.0 * h)?)
                / (12.0 * h))
        }
    }

    /// Rows at `nodes + 1` equally spaced arguments in `[0, tau_max]`.
    pub fn rows(&self, nodes: usize) -> Result<Vec<WeightRow>> {
        let nodes = nodes.max(1);
        let h = 1e-3;
        (0..=nodes)
            .map(|i| {
                let tau = self.tau_max * i as f64 / nodes as f64;
                let p = self.evaluate(tau)?;
                let fd = self.phi_double_prime_fd(tau, h)?;
                Ok(WeightRow {
                    tau,
                    phi: p.phi,
                    phi_prime: p.phi_prime,
                    phi_double_prime: p.phi_double_prime,
                    residual: (fd - p.phi_double_prime).abs() / p.phi_double_prime,
                })
            })
            .collect()
    }

    /// Monotone cubic interpolants of `Φ` and `Φ′` through `nodes + 1` rows.
    pub fn interpolants(&self, nodes: usize) -> Result<(MonotoneCubic, MonotoneCubic)> {
        let nodes = nodes.max(2);
        let mut taus = Vec::with_capacity(nodes + 1);
        let mut big = Vec::with_capacity(nodes + 1);
        let mut big_slopes = Vec::with_capacity(nodes + 1);
        let mut prime = Vec::with_capacity(nodes + 1);
        let mut prime_slopes = Vec::with_capacity(nodes + 1);
        for i in 0..=nodes {
            let tau = self.tau_max * i as f64 / nodes as f64;
            let p = self.evaluate(tau)?;
            taus.push(tau);
            big.push(p.phi);
            big_slopes.push(p.phi_prime);
            prime.push(p.phi_prime);
            prime_slopes.push(p.phi_double_prime);
        }
        Ok((
            MonotoneCubic::with_slopes(taus.clone(), big, big_slopes)?,
            MonotoneCubic::with_slopes(taus, prime, prime_slopes)?,
        ))
    }
}
