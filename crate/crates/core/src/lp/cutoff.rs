//! Smooth radial cutoffs `chi` (ball) and `phi_cut` (annulus) and their
//! discrete Fourier multipliers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::numerics::quad::gk15;

const TABLE_INTERVALS: usize = 256;

fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (-1.0 / (x * (1.0 - x))).exp()
    }
}

/// Cumulative integral of the normalized bump on `[0,1]`, tabulated on a
/// uniform grid and completed by a local Gauss–Kronrod rule.
#[derive(Debug)]
struct SmoothStep {
    cumulative: Vec<f64>,
    total: f64,
}

impl SmoothStep {
    fn new() -> Self {
        let h = 1.0 / TABLE_INTERVALS as f64;
        let mut cumulative = Vec::with_capacity(TABLE_INTERVALS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..TABLE_INTERVALS {
            let a = i as f64 * h;
            acc += gk15(&bump, a, a + h).0;
            cumulative.push(acc);
        }
        Self { cumulative, total: acc }
    }

    fn shared() -> &'static SmoothStep {
        static STEP: OnceLock<SmoothStep> = OnceLock::new();
        STEP.get_or_init(SmoothStep::new)
    }

    /// Rises from 0 at `x ≤ 0` to 1 at `x ≥ 1`.
    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let h = 1.0 / TABLE_INTERVALS as f64;
        let i = ((x / h).floor() as usize).min(TABLE_INTERVALS - 1);
        let a = i as f64 * h;
        let partial = if x > a { gk15(&bump, a, x).0 } else { 0.0 };
        ((self.cumulative[i] + partial) / self.total).clamp(0.0, 1.0)
    }
}

/// Radial cutoff pair with `chi = 1` on `r ≤ inner`, `chi = 0` on `r ≥ outer`
/// and `phi_cut(r) = chi(r/2) − chi(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffPair {
    inner: f64,
    outer: f64,
}

impl Default for CutoffPair {
    fn default() -> Self {
        Self {
            inner: 0.75,
            outer: 4.0 / 3.0,
        }
    }
}

impl CutoffPair {
    /// Transition between `inner` and `outer`, which must satisfy
    /// `3/4 ≤ inner < outer ≤ 4/3` so the annulus stays inside `[3/4, 8/3]`.
    pub fn with_transition(inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.75 && outer <= 4.0 / 3.0 && inner < outer) {
            return Err(Error::InvalidInput(format!(
                "cutoff transition [{inner}, {outer}] must lie inside [3/4, 4/3]"
            )));
        }
        Ok(Self { inner, outer })
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn chi(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            1.0 - SmoothStep::shared().eval((r - self.inner) / (self.outer - self.inner))
        }
    }

    pub fn phi_cut(&self, r: f64) -> f64 {
        self.chi(0.5 * r) - self.chi(r)
    }

    /// `chi(r) + Σ_{q=0}^{q_top} phi_cut(2^{-q} r)`.
    pub fn partition_sum(&self, r: f64, q_top: i32) -> f64 {
        let mut s = self.chi(r);
        for q in 0..=q_top {
            s += self.phi_cut(r * 2f64.powi(-q));
        }
        s
    }

    /// Multiplier of `Δ_q` at every spectral index of `grid`.
    pub fn block_multiplier(&self, grid: &Grid, q: i32) -> Arc<Vec<f64>> {
        self.cached(grid, Kind::Block, q)
    }

    /// Multiplier of `S_q` at every spectral index of `grid`.
    pub fn lowpass_multiplier(&self, grid: &Grid, q: i32) -> Arc<Vec<f64>> {
        self.cached(grid, Kind::Lowpass, q)
    }

    fn cached(&self, grid: &Grid, kind: Kind, q: i32) -> Arc<Vec<f64>> {
        type Key = (usize, usize, u64, u64, u64, Kind, i32);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<f64>>>>> = OnceLock::new();
        let key = (
            grid.dim(),
            grid.n(),
            grid.period().to_bits(),
            self.inner.to_bits(),
            self.outer.to_bits(),
            kind,
            q,
        );
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(m) = cache.lock().expect("multiplier cache poisoned").get(&key) {
            return m.clone();
        }
        let m = Arc::new(self.build(grid, kind, q));
        cache
            .lock()
            .expect("multiplier cache poisoned")
            .entry(key)
            .or_insert(m)
            .clone()
    }

    fn build(&self, grid: &Grid, kind: Kind, q: i32) -> Vec<f64> {
        let norms = grid.frequency_norms();
        let scale = 2f64.powi(-q);
        match kind {
            Kind::Block if q <= -2 => vec![0.0; norms.len()],
            Kind::Block if q == -1 => norms.iter().map(|r| self.chi(*r)).collect(),
            Kind::Block => norms.iter().map(|r| self.phi_cut(r * scale)).collect(),
            Kind::Lowpass if q <= -1 => vec![0.0; norms.len()],
            Kind::Lowpass => norms.iter().map(|r| self.chi(r * scale)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Block,
    Lowpass,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_endpoints() {
        let c = CutoffPair::default();
        assert_eq!(c.chi(0.0), 1.0);
        assert_eq!(c.chi(0.75), 1.0);
        assert_eq!(c.chi(4.0 / 3.0), 0.0);
        let mid = c.chi(0.5 * (0.75 + 4.0 / 3.0));
        assert!((mid - 0.5).abs() < 1e-13, "symmetric bump puts the midpoint at 1/2, got {mid}");
    }

    #[test]
    fn phi_cut_support() {
        let c = CutoffPair::default();
        assert_eq!(c.phi_cut(0.7), 0.0);
        assert_eq!(c.phi_cut(2.7), 0.0);
        assert_eq!(c.phi_cut(1.4), 1.0);
    }

    #[test]
    fn smooth_step_matches_adaptive_quadrature() {
        use crate::numerics::{integrate, QuadOptions};
        let total = integrate(bump, 0.0, 1.0, QuadOptions::relative(1e-14)).unwrap().value;
        for &x in &[0.1, 0.33, 0.5, 0.77, 0.95] {
            let direct = integrate(bump, 0.0, x, QuadOptions::relative(1e-14)).unwrap().value / total;
            assert!((SmoothStep::shared().eval(x) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn narrower_transition_rejected_outside_bounds() {
        assert!(CutoffPair::with_transition(0.7, 1.2).is_err());
        assert!(CutoffPair::with_transition(0.8, 1.2).is_ok());
    }
}
