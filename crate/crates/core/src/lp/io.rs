//! JSON container for grid functions, optionally with a time axis.
//!
//! ```json
//! {"n": 1, "N": 256, "L": 6.283185307179586, "T": 1.0, "M": 3,
//!  "dtype": "real", "encoding": "base64", "data": "..."}
//! ```
//! The payload holds `M` frames (one when `T`/`M` are absent) in row-major
//! order; complex samples interleave real and imaginary parts. `base64`
//! payloads are little-endian `f64`, `csv` payloads comma- or
//! whitespace-separated decimals.

use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridFunction};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dtype {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Base64,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub points: usize,
    #[serde(rename = "L", default = "default_period")]
    pub period: f64,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<usize>,
    pub dtype: Dtype,
    pub encoding: Encoding,
    pub data: String,
}

fn default_period() -> f64 {
    2.0 * std::f64::consts::PI
}

/// Frames of a grid function on a uniform time axis `t_i = i T/(M−1)`.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub horizon: f64,
    pub frames: Vec<GridFunction>,
}

impl TimeSeries {
    pub fn step(&self) -> f64 {
        self.horizon / (self.frames.len().max(2) - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    /// Samples `f(t, x)` at `m` equally spaced times on `[0, horizon]`.
    pub fn sample(grid: Grid, horizon: f64, m: usize, f: impl Fn(f64, [f64; 2]) -> f64 + Sync) -> Self {
        let h = horizon / (m.max(2) - 1) as f64;
        let frames = (0..m)
            .map(|i| GridFunction::from_fn_real(grid, |x| f(i as f64 * h, x)))
            .collect();
        Self { horizon, frames }
    }
}

impl GridFile {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.points, self.period)
    }

    fn numbers(&self) -> Result<Vec<f64>> {
        match self.encoding {
            Encoding::Base64 => {
                let bytes = STANDARD
                    .decode(self.data.trim())
                    .map_err(|e| Error::InvalidInput(format!("base64 payload: {e}")))?;
                if bytes.len() % 8 != 0 {
                    return Err(Error::InvalidInput("base64 payload is not a whole number of f64".into()));
                }
                Ok(bytes
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
                    .collect())
            }
            Encoding::Csv => self
                .data
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::InvalidInput(format!("csv payload: bad number {t:?}")))
                })
                .collect(),
        }
    }

    /// Decodes every frame.
    pub fn decode(&self) -> Result<Vec<GridFunction>> {
        let grid = self.grid()?;
        let frames = self.frames.unwrap_or(1);
        if frames == 0 {
            return Err(Error::InvalidInput("M must be positive".into()));
        }
        let per = match self.dtype {
            Dtype::Real => grid.len(),
            Dtype::Complex => 2 * grid.len(),
        };
        let nums = self.numbers()?;
        if nums.len() != per * frames {
            return Err(Error::InvalidInput(format!(
                "payload has {} numbers, expected {}",
                nums.len(),
                per * frames
            )));
        }
        nums.chunks_exact(per)
            .map(|chunk| match self.dtype {
                Dtype::Real => GridFunction::from_real(grid, chunk.to_vec()),
                Dtype::Complex => GridFunction::from_complex(
                    grid,
                    chunk.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect(),
                ),
            })
            .collect()
    }

    /// Decodes a single-frame file.
    pub fn decode_single(&self) -> Result<GridFunction> {
        let mut frames = self.decode()?;
        if frames.len() != 1 {
            return Err(Error::InvalidInput(format!("expected one frame, found {}", frames.len())));
        }
        Ok(frames.remove(0))
    }

    pub fn decode_series(&self) -> Result<TimeSeries> {
        let horizon = self
            .horizon
            .ok_or_else(|| Error::InvalidInput("time series needs T".into()))?;
        let frames = self.decode()?;
        if frames.len() < 2 {
            return Err(Error::InvalidInput("time series needs M >= 2".into()));
        }
        Ok(TimeSeries { horizon, frames })
    }

    /// Encodes frames sharing one grid; `horizon` is written when more than one frame is given.
    pub fn encode(frames: &[GridFunction], horizon: Option<f64>, encoding: Encoding) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::InvalidInput("nothing to encode".into()))?;
        let grid = *first.grid();
        let real = frames.iter().all(|f| f.is_real());
        let mut nums = Vec::new();
        for f in frames {
            grid.ensure_same(f.grid())?;
            for v in f.values() {
                nums.push(v.re);
                if !real {
                    nums.push(v.im);
                }
            }
        }
        let data = match encoding {
            Encoding::Base64 => {
                let bytes: Vec<u8> = nums.iter().flat_map(|x| x.to_le_bytes()).collect();
                STANDARD.encode(bytes)
            }
            Encoding::Csv => nums.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(","),
        };
        Ok(Self {
            n: grid.dim(),
            points: grid.n(),
            period: grid.period(),
            horizon: if frames.len() > 1 { horizon } else { None },
            frames: (frames.len() > 1).then_some(frames.len()),
            dtype: if real { Dtype::Real } else { Dtype::Complex },
            encoding,
            data,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }
}
