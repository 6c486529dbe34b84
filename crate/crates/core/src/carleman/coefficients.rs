use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{Grid, GridFunction, TimeSeries};
use crate::modulus::{modulus_seminorm, time_seminorm, Modulus};

/// Symmetric elliptic matrix `(a_jk(t, x))` sampled on a uniform time grid.
#[derive(Clone, Debug)]
pub struct CoefficientField {
    dim: usize,
    /// Row-major `n × n` entries.
    entries: Vec<TimeSeries>,
    zero_order: Option<TimeSeries>,
    a0: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientNorms {
    /// `max_{jk} sup |a_jk|`.
    pub sup: f64,
    /// `max_{jk} [a_jk]_{C^μ}` in time, uniformly in `x`.
    pub time_seminorm: f64,
    /// `max_{jk,t} [a_jk(t)]_{C^ω}` in space.
    pub space_seminorm: f64,
}

fn same_axis(a: &TimeSeries, b: &TimeSeries) -> Result<()> {
    if a.frames.len() != b.frames.len() || a.horizon != b.horizon {
        return Err(Error::GridMismatch(format!(
            "time axes differ: {} frames on [0, {}] vs {} frames on [0, {}]",
            a.frames.len(),
            a.horizon,
            b.frames.len(),
            b.horizon
        )));
    }
    a.frames[0].grid().ensure_same(b.frames[0].grid())
}

fn smallest_eigenvalue(m: &[f64], dim: usize) -> f64 {
    if dim == 1 {
        m[0]
    } else {
        let (a, b, d) = (m[0], m[1], m[3]);
        0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt()
    }
}

impl CoefficientField {
    /// Validates realness, symmetry and ellipticity; `a₀` is the smallest
    /// sampled eigenvalue, capped at 1.
    pub fn new(entries: Vec<Vec<TimeSeries>>) -> Result<Self> {
        let dim = entries.len();
        if !(1..=2).contains(&dim) || entries.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidInput("coefficient matrix must be 1×1 or 2×2".into()));
        }
        let flat: Vec<TimeSeries> = entries.into_iter().flatten().collect();
        if flat[0].frames.len() < 5 {
            return Err(Error::InvalidInput("coefficients need at least five time samples".into()));
        }
        for e in &flat {
            same_axis(&flat[0], e)?;
        }
        let grid = *flat[0].frames[0].grid();
        if grid.dim() != dim {
            return Err(Error::GridMismatch(format!("{dim}×{dim} matrix on a {}-dimensional grid", grid.dim())));
        }
        for e in &flat {
            for f in &e.frames {
                let scale = f.linf_norm().max(1.0);
                if f.max_imag() > 1e-12 * scale {
                    return Err(Error::InvalidInput("coefficients must be real".into()));
                }
            }
        }
        if dim == 2 {
            for (x, y) in flat[1].frames.iter().zip(&flat[2].frames) {
                if (x - y).linf_norm() > 1e-14 * x.linf_norm().max(1.0) {
                    return Err(Error::InvalidInput("coefficient matrix is not symmetric".into()));
                }
            }
        }
        let m = flat[0].frames.len();
        let a0 = (0..m)
            .into_par_iter()
            .map(|i| {
                let cols: Vec<&[num_complex::Complex64]> = flat.iter().map(|e| e.frames[i].values()).collect();
                (0..grid.len())
                    .map(|p| {
                        let mat: Vec<f64> = cols.iter().map(|c| c[p].re).collect();
                        smallest_eigenvalue(&mat, dim)
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min);
        if !(a0 > 0.0) {
            return Err(Error::InvalidInput(format!("coefficients are not elliptic: smallest eigenvalue {a0:e}")));
        }
        Ok(Self {
            dim,
            entries: flat,
            zero_order: None,
            a0: a0.min(1.0),
        })
    }

    /// Time-independent constant matrix.
    pub fn constant(grid: Grid, horizon: f64, m: usize, matrix: [[f64; 2]; 2]) -> Result<Self> {
        let dim = grid.dim();
        let entries = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|k| TimeSeries {
                        horizon,
                        frames: vec![GridFunction::constant(grid, matrix[j][k]); m],
                    })
                    .collect()
            })
            .collect();
        Self::new(entries)
    }

    pub fn identity(grid: Grid, horizon: f64, m: usize) -> Result<Self> {
        Self::constant(grid, horizon, m, [[1.0, 0.0], [0.0, 1.0]])
    }

    /// `a_11 = 1 + amplitude·sin(x_1)·w(t)`, the other entries from the identity.
    pub fn sinusoidal(grid: Grid, horizon: f64, m: usize, amplitude: f64, w: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        let mut rows: Vec<Vec<TimeSeries>> = Self::identity(grid, horizon, m)?
            .entries
            .chunks(grid.dim())
            .map(|c| c.to_vec())
            .collect();
        rows[0][0] = TimeSeries::sample(grid, horizon, m, |t, x| 1.0 + amplitude * x[0].sin() * w(t));
        Self::new(rows)
    }

    /// Adds a zero-order term `c·v` to the operator. The Carleman inequality is
    /// stated without it; runs using it are reported as exploratory.
    pub fn with_zero_order(mut self, c: TimeSeries) -> Result<Self> {
        same_axis(&self.entries[0], &c)?;
        self.zero_order = Some(c);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn entry(&self, j: usize, k: usize) -> &TimeSeries {
        &self.entries[j * self.dim + k]
    }

    pub fn zero_order(&self) -> Option<&TimeSeries> {
        self.zero_order.as_ref()
    }

    pub fn grid(&self) -> &Grid {
        self.entries[0].frames[0].grid()
    }

    pub fn horizon(&self) -> f64 {
        self.entries[0].horizon
    }

    pub fn frame_count(&self) -> usize {
        self.entries[0].frames.len()
    }

    pub(crate) fn check_axis(&self, v: &TimeSeries) -> Result<()> {
        same_axis(&self.entries[0], v)
    }

    /// Measured norms; the spatial seminorm is taken on every `stride`-th frame.
    pub fn measured_norms(&self, mu: &Modulus, omega: &Modulus, stride: usize) -> Result<CoefficientNorms> {
        let mut out = CoefficientNorms {
            sup: 0.0,
            time_seminorm: 0.0,
            space_seminorm: 0.0,
        };
        for e in &self.entries {
            let real: Vec<Vec<f64>> = e.frames.iter().map(|f| f.real_parts()).collect();
            out.time_seminorm = out.time_seminorm.max(time_seminorm(&real, e.step(), mu)?);
            for f in e.frames.iter().step_by(stride.max(1)) {
                out.sup = out.sup.max(f.linf_norm());
                out.space_seminorm = out.space_seminorm.max(modulus_seminorm(f, omega)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_elliptic_with_unit_constant() {
        let c = CoefficientField::identity(Grid::square(8).unwrap(), 1.0, 6).unwrap();
        assert_eq!(c.a0(), 1.0);
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn sinusoidal_ellipticity_constant() {
        let g = Grid::line(64).unwrap();
        let c = CoefficientField::sinusoidal(g, 1.0, 9, 0.5, |t| t).unwrap();
        // min of 1 + ½ sin(x)·1 over the grid points.
        let expect = (0..64).map(|i| 1.0 + 0.5 * g.point(i)[0].sin()).fold(f64::INFINITY, f64::min);
        assert!((c.a0() - expect).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_elliptic_and_asymmetric() {
        let g = Grid::square(8).unwrap();
        assert!(CoefficientField::constant(g, 1.0, 6, [[1.0, 2.0], [2.0, 1.0]]).is_err());
        assert!(CoefficientField::constant(g, 1.0, 6, [[1.0, 0.1], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn constant_coefficients_have_zero_time_seminorm() {
        let g = Grid::line(32).unwrap();
        let c = CoefficientField::constant(g, 1.0, 9, [[2.0, 0.0], [0.0, 0.0]]).unwrap();
        let mu = Modulus::power(1.0).unwrap();
        let n = c.measured_norms(&mu, &mu.derive_omega(), 1).unwrap();
        assert_eq!(n.time_seminorm, 0.0);
        assert_eq!(n.space_seminorm, 0.0);
        assert_eq!(n.sup, 2.0);
    }
}
