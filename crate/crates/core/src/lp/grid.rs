//! Uniform periodic grids in one or two dimensions and functions sampled on them.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use crate::error::{Error, Result};

/// Periodic grid with `n` points per axis on `[0, period)^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    period: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, period: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!("dimension must be 1 or 2, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "points per axis must be a power of two >= 8, got {n}"
            )));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        Ok(Self { dim, n, period })
    }

    /// `n` points on `[0, 2π)`.
    pub fn line(n: usize) -> Result<Self> {
        Self::new(1, n, 2.0 * PI)
    }

    /// `n × n` points on `[0, 2π)²`.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(2, n, 2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    /// Volume element of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Largest resolved frequency magnitude along an axis, `π N / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.period
    }

    /// Largest `q` whose dyadic annulus `|ξ| ≤ 8/3·2^q` fits under the Nyquist frequency.
    pub fn q_max(&self) -> i32 {
        let ratio = self.nyquist() * 3.0 / 8.0;
        ratio.log2().floor() as i32
    }

    /// Signed integer wavenumber of DFT index `i`; the Nyquist index maps to `+n/2`.
    pub fn signed_index(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Frequency vector `ξ = 2π k / L` of flat spectral index `idx` (second entry 0 in 1-D).
    pub fn frequency(&self, idx: usize) -> [f64; 2] {
        let step = 2.0 * PI / self.period;
        match self.dim {
            1 => [step * self.signed_index(idx) as f64, 0.0],
            _ => [
                step * self.signed_index(idx / self.n) as f64,
                step * self.signed_index(idx % self.n) as f64,
            ],
        }
    }

    /// True when either axis sits at the Nyquist index, whose sign is ambiguous.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = self.n / 2;
        match self.dim {
            1 => idx == half,
            _ => idx / self.n == half || idx % self.n == half,
        }
    }

    /// `|ξ|` for every flat spectral index.
    pub fn frequency_norms(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let [a, b] = self.frequency(i);
                (a * a + b * b).sqrt()
            })
            .collect()
    }

    /// Physical coordinates of flat sample index `idx`.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let h = self.spacing();
        match self.dim {
            1 => [h * idx as f64, 0.0],
            _ => [h * (idx / self.n) as f64, h * (idx % self.n) as f64],
        }
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "{}-D N={} L={} vs {}-D N={} L={}",
                self.dim, self.n, self.period, other.dim, other.n, other.period
            )));
        }
        Ok(())
    }
}

/// Samples of a (possibly complex) function on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
    real: bool,
}

impl GridFunction {
    pub fn from_complex(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            real: false,
        })
    }

    pub fn from_real(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            real: true,
        })
    }

    pub fn from_fn_real(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| Complex64::new(f(grid.point(i)), 0.0)).collect();
        Self {
            grid,
            values,
            real: true,
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self {
            grid,
            values,
            real: false,
        }
    }

    /// The single Fourier mode `e^{i k·x}` with integer wavenumbers (period 2π/L scaled).
    pub fn mode(grid: Grid, k: [i64; 2]) -> Self {
        let step = 2.0 * PI / grid.period();
        Self::from_fn(grid, |x| {
            let phase = step * (k[0] as f64 * x[0] + k[1] as f64 * x[1]);
            Complex64::from_polar(1.0, phase)
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            real: true,
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(c, 0.0); grid.len()],
            real: true,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Whether the function was declared real-valued.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// Drops imaginary parts and marks the function as real.
    pub fn into_real(mut self) -> Self {
        for v in &mut self.values {
            v.im = 0.0;
        }
        self.real = true;
        self
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| f(*v)).collect(),
            real: false,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            real: self.real,
        }
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            real: self.real && c.im == 0.0,
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &GridFunction) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b * c).collect(),
            real: self.real && other.real,
        })
    }

    pub fn try_add(&self, other: &GridFunction) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn try_sub(&self, other: &GridFunction) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    /// Plain pointwise product on the grid (no de-aliasing).
    pub fn mul_pointwise(&self, other: &GridFunction) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            real: self.real && other.real,
        })
    }

    /// Product computed on a grid padded by a factor of two and projected back,
    /// which equals the exact product's resolved Fourier modes.
    pub fn product(&self, other: &GridFunction) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let a = Spectrum::of(self);
        let b = Spectrum::of(other);
        let padded_a = a.padded();
        let padded_b = b.padded();
        let prod = padded_a
            .iter()
            .zip(&padded_b)
            .map(|(x, y)| x * y)
            .collect::<Vec<_>>();
        let real = self.real && other.real;
        let spec = Spectrum::truncate_from_padded(self.grid, prod, real);
        Ok(spec.to_function())
    }

    /// `∫ |u|² dx` over one period.
    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `∫ u · conj(v) dx`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.grid.ensure_same(&other.grid)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.cell_volume())
    }

    /// Spectral partial derivative along `axis`.
    pub fn derivative(&self, axis: usize) -> GridFunction {
        Spectrum::of(self).derivative(axis).to_function()
    }

    /// Spectral gradient (one component per axis).
    pub fn gradient(&self) -> Vec<GridFunction> {
        let spec = Spectrum::of(self);
        (0..self.grid.dim()).map(|ax| spec.derivative(ax).to_function()).collect()
    }

    /// `sup_x |∇u(x)|` with the Euclidean norm of the gradient vector.
    pub fn gradient_linf(&self) -> f64 {
        let grads = self.gradient();
        (0..self.grid.len())
            .map(|i| grads.iter().map(|g| g.values[i].norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// `‖∇u‖_{L²}`.
    pub fn gradient_l2(&self) -> f64 {
        self.gradient().iter().map(|g| g.l2_norm_sq()).sum::<f64>().sqrt()
    }
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: &GridFunction) -> GridFunction {
        self.try_add(rhs).expect("grid mismatch in addition")
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: &GridFunction) -> GridFunction {
        self.try_sub(rhs).expect("grid mismatch in subtraction")
    }
}

impl Mul<f64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: f64) -> GridFunction {
        self.scale(rhs)
    }
}

impl Neg for &GridFunction {
    type Output = GridFunction;
    fn neg(self) -> GridFunction {
        self.scale(-1.0)
    }
}

/// Unnormalized DFT coefficients of a grid function.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl Spectrum {
    pub fn of(u: &GridFunction) -> Self {
        let mut coeffs = u.values.clone();
        fft::forward(&mut coeffs, u.grid.n(), u.grid.dim());
        Self {
            grid: u.grid,
            coeffs,
            real: u.real,
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>, real: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidInput("coefficient count does not match grid".into()));
        }
        Ok(Self { grid, coeffs, real })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn to_function(&self) -> GridFunction {
        let mut values = self.coeffs.clone();
        fft::inverse(&mut values, self.grid.n(), self.grid.dim());
        GridFunction {
            grid: self.grid,
            values,
            real: self.real,
        }
    }

    /// Multiplies by a real multiplier given per flat spectral index.
    pub fn apply(&self, multiplier: &[f64]) -> Spectrum {
        Spectrum {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(multiplier).map(|(c, m)| c * m).collect(),
            real: self.real,
        }
    }

    pub fn try_add(&self, other: &Spectrum) -> Result<Spectrum> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Spectrum {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            real: self.real && other.real,
        })
    }

    /// `self + c·other` for a real scalar `c`.
    pub fn axpy(&self, c: f64, other: &Spectrum) -> Result<Spectrum> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Spectrum {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b * c).collect(),
            real: self.real && other.real,
        })
    }

    pub fn scale(&self, c: f64) -> Spectrum {
        Spectrum {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            real: self.real,
        }
    }

    /// Multiplier `i ξ_axis`; the Nyquist line is zeroed.
    pub fn derivative(&self, axis: usize) -> Spectrum {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                if self.grid.is_nyquist(idx) {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, self.grid.frequency(idx)[axis])
                }
            })
            .collect();
        Spectrum {
            grid: self.grid,
            coeffs,
            real: self.real,
        }
    }

    /// Continuous `‖u‖²_{L²}` via Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        let n = self.grid.len() as f64;
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.cell_volume() / n
    }

    /// `‖u‖²_{L²}` after applying a real multiplier, without forming the product.
    pub fn weighted_l2_norm_sq(&self, multiplier: &[f64]) -> f64 {
        let n = self.grid.len() as f64;
        self.coeffs
            .iter()
            .zip(multiplier)
            .map(|(c, m)| c.norm_sqr() * m * m)
            .sum::<f64>()
            * self.grid.cell_volume()
            / n
    }

    /// `⟨m(D)u, m(D)v⟩_{L²}` for a real multiplier `m`.
    pub fn weighted_inner(&self, other: &Spectrum, multiplier: &[f64]) -> Complex64 {
        let n = self.grid.len() as f64;
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(multiplier)
            .map(|((a, b), m)| a * b.conj() * (m * m))
            .sum::<Complex64>()
            * (self.grid.cell_volume() / n)
    }

    /// Fraction of spectral energy at frequencies with `|ξ|` strictly outside `[r_lo, r_hi]`.
    pub fn mass_outside(&self, r_lo: f64, r_hi: f64) -> f64 {
        let norms = self.grid.frequency_norms();
        let mut total = 0.0;
        let mut outside = 0.0;
        for (c, r) in self.coeffs.iter().zip(&norms) {
            let e = c.norm_sqr();
            total += e;
            if *r > r_hi || *r < r_lo {
                outside += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            outside / total
        }
    }

    /// Largest `|ξ|` carrying a coefficient above `rel_tol · max|c|`.
    pub fn spectral_radius(&self, rel_tol: f64) -> f64 {
        let norms = self.grid.frequency_norms();
        let peak = self.coeffs.iter().fold(0.0, |m: f64, c| m.max(c.norm()));
        if peak == 0.0 {
            return 0.0;
        }
        self.coeffs
            .iter()
            .zip(&norms)
            .filter(|(c, _)| c.norm() > rel_tol * peak)
            .fold(0.0, |m: f64, (_, r)| m.max(*r))
    }

    /// Values of the function on the doubled grid (zero-padded spectrum).
    fn padded(&self) -> Vec<Complex64> {
        let n = self.grid.n();
        let m = 2 * n;
        let dim = self.grid.dim();
        let mut big = vec![Complex64::new(0.0, 0.0); m.pow(dim as u32)];
        let map = |i: usize| -> Option<usize> {
            let k = self.grid.signed_index(i);
            if k == (n / 2) as i64 {
                None
            } else if k >= 0 {
                Some(k as usize)
            } else {
                Some((m as i64 + k) as usize)
            }
        };
        match dim {
            1 => {
                for i in 0..n {
                    if let Some(j) = map(i) {
                        big[j] = self.coeffs[i];
                    }
                }
            }
            _ => {
                for i0 in 0..n {
                    let Some(j0) = map(i0) else { continue };
                    for i1 in 0..n {
                        if let Some(j1) = map(i1) {
                            big[j0 * m + j1] = self.coeffs[i0 * n + i1];
                        }
                    }
                }
            }
        }
        fft::inverse(&mut big, m, dim);
        // The padded inverse carries a 1/(2N)^d normalization instead of 1/N^d.
        let fix = 2f64.powi(dim as i32);
        for v in &mut big {
            *v *= fix;
        }
        big
    }

    fn truncate_from_padded(grid: Grid, mut values: Vec<Complex64>, real: bool) -> Spectrum {
        let n = grid.n();
        let m = 2 * n;
        let dim = grid.dim();
        fft::forward(&mut values, m, dim);
        let fix = 1.0 / 2f64.powi(dim as i32);
        let map = |i: usize| -> Option<usize> {
            let k = grid.signed_index(i);
            if k == (n / 2) as i64 {
                None
            } else if k >= 0 {
                Some(k as usize)
            } else {
                Some((m as i64 + k) as usize)
            }
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
        match dim {
            1 => {
                for (i, c) in coeffs.iter_mut().enumerate() {
                    if let Some(j) = map(i) {
                        *c = values[j] * fix;
                    }
                }
            }
            _ => {
                for i0 in 0..n {
                    let Some(j0) = map(i0) else { continue };
                    for i1 in 0..n {
                        if let Some(j1) = map(i1) {
                            coeffs[i0 * n + i1] = values[j0 * m + j1] * fix;
                        }
                    }
                }
            }
        }
        Spectrum { grid, coeffs, real }
    }
}
