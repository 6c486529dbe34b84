use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Result};
use lpcarleman::carleman::{bump, bump_mode, conjugation_check, CarlemanConfig, CarlemanRun, CoefficientField};
use lpcarleman::lp::{Grid, GridFile, LittlewoodPaley, TimeSeries};
use lpcarleman::modulus::Modulus;
use lpcarleman::sampling::{band_limited, band_limited_in, Profile};
use serde::{Deserialize, Serialize};

use crate::report::{write_csv, write_svg, Outputs, ReportDocument};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "one")]
    pub dim: usize,
    pub points: usize,
    #[serde(default = "two_pi")]
    pub period: f64,
}

fn one() -> usize {
    1
}

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

/// Time dependence `w(t)` of the coefficient perturbation, with `r = t/T − center`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TimeProfile {
    /// `e·r·ln(1/|r|)`, log-Lipschitz at `r = 0`.
    LogCusp { center: f64 },
    /// `|r|^alpha`.
    HolderCusp { alpha: f64, center: f64 },
    /// `cos(2π·frequency·t/T)`.
    Cosine { frequency: f64 },
}

impl TimeProfile {
    fn eval(&self, t: f64, horizon: f64) -> f64 {
        match *self {
            TimeProfile::LogCusp { center } => {
                let r = t / horizon - center;
                if r == 0.0 {
                    0.0
                } else {
                    std::f64::consts::E * r * (1.0 / r.abs()).ln()
                }
            }
            TimeProfile::HolderCusp { alpha, center } => (t / horizon - center).abs().powf(alpha),
            TimeProfile::Cosine { frequency } => (2.0 * std::f64::consts::PI * frequency * t / horizon).cos(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoefficientSpec {
    Identity,
    Constant { matrix: [[f64; 2]; 2] },
    /// `a₁₁ = 1 + amplitude·sin(x₁)·w(t)`.
    Sinusoidal { amplitude: f64, time_profile: TimeProfile },
    /// Row-major grid-function files with a time axis matching the run.
    Files { entries: Vec<Vec<PathBuf>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TestFunctionSpec {
    /// `g(t)·e^{ik·x}`.
    BumpMode { k: [i64; 2], sharpness: f64 },
    /// `g(t)` times a seeded random field.
    BumpField { sharpness: f64, band: Option<f64> },
    File { path: PathBuf },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarlemanParams {
    pub grid: GridSpec,
    pub horizon: f64,
    pub frames: usize,
    pub s: f64,
    pub modulus: Modulus,
    pub gammas: Vec<f64>,
    pub coefficients: CoefficientSpec,
    #[serde(default)]
    pub zero_order: Option<f64>,
    pub test_function: TestFunctionSpec,
    #[serde(default)]
    pub floor: Option<f64>,
    #[serde(default)]
    pub diagnostic_gammas: Vec<f64>,
    #[serde(default)]
    pub conjugation_gammas: Vec<f64>,
}

fn read_series(path: &Path) -> Result<TimeSeries> {
    Ok(GridFile::read(path)?.decode_series()?)
}

fn coefficients(p: &CarlemanParams, grid: Grid) -> Result<CoefficientField> {
    let (t, m) = (p.horizon, p.frames);
    let field = match &p.coefficients {
        CoefficientSpec::Identity => CoefficientField::identity(grid, t, m)?,
        CoefficientSpec::Constant { matrix } => CoefficientField::constant(grid, t, m, *matrix)?,
        CoefficientSpec::Sinusoidal { amplitude, time_profile } => {
            CoefficientField::sinusoidal(grid, t, m, *amplitude, |s| time_profile.eval(s, t))?
        }
        CoefficientSpec::Files { entries } => {
            let rows = entries
                .iter()
                .map(|row| row.iter().map(|p| read_series(p)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            CoefficientField::new(rows)?
        }
    };
    Ok(match p.zero_order {
        Some(c) => field.with_zero_order(TimeSeries::sample(grid, t, m, |_, _| c))?,
        None => field,
    })
}

fn test_function(p: &CarlemanParams, grid: Grid, seed: u64) -> Result<TimeSeries> {
    let (t, m) = (p.horizon, p.frames);
    Ok(match &p.test_function {
        TestFunctionSpec::BumpMode { k, sharpness } => bump_mode(grid, t, m, *k, *sharpness),
        TestFunctionSpec::BumpField { sharpness, band } => {
            let profile = match band {
                Some(b) => band_limited_in(grid, seed, &Profile::Flat, *b),
                None => band_limited(grid, seed, &Profile::Flat),
            };
            let h = t / (m - 1) as f64;
            TimeSeries {
                horizon: t,
                frames: (0..m).map(|i| profile.scale(bump(i as f64 * h, t, *sharpness))).collect(),
            }
        }
        TestFunctionSpec::File { path } => read_series(path)?,
    })
}

#[derive(Serialize)]
struct SweepCsvRow {
    gamma: f64,
    lhs: f64,
    rhs_gradient: f64,
    rhs_l2: f64,
    ratio: Option<f64>,
    lhs_multiplier: f64,
}

pub fn run(p: CarlemanParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    if p.frames < 5 {
        bail!("frames must be at least 5");
    }
    let start = Instant::now();
    let grid = Grid::new(p.grid.dim, p.grid.points, p.grid.period)?;
    let coeffs = coefficients(&p, grid)?;
    let v = test_function(&p, grid, doc.seed)?;
    let mut config = CarlemanConfig::new(p.s, p.modulus.clone(), p.gammas.clone(), v)?;
    if let Some(f) = p.floor {
        config = config.with_floor(f);
    }
    let lp = LittlewoodPaley::default();
    doc.time("setup", start);

    let stage = Instant::now();
    let run = CarlemanRun::prepare(&config, &coeffs, &lp, !p.diagnostic_gammas.is_empty())?;
    let report = run.report(&p.diagnostic_gammas)?;
    doc.time("sweep", stage);
    let passed = !report.degenerate && report.gamma0.is_some();
    doc.push("carleman", passed, &report)?;

    if !p.conjugation_gammas.is_empty() {
        let stage = Instant::now();
        for &gamma in &p.conjugation_gammas {
            let check = conjugation_check(&coeffs, &config.weight, &config.v, gamma)?;
            doc.push("conjugation", check.relative_residual <= 1e-8, &check)?;
        }
        doc.time("conjugation", stage);
    }

    if let Some(path) = &out.csv {
        let rows = report.rows.iter().map(|r| SweepCsvRow {
            gamma: r.gamma,
            lhs: r.lhs,
            rhs_gradient: r.rhs_gradient,
            rhs_l2: r.rhs_l2,
            ratio: r.ratio,
            lhs_multiplier: r.lhs_multiplier,
        });
        write_csv(path, rows)?;
    }
    if let Some(path) = &out.svg {
        let ratio: Vec<(f64, f64)> = report.rows.iter().filter_map(|r| r.ratio.map(|x| (r.gamma, x))).collect();
        let floor: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.gamma, report.floor)).collect();
        write_svg(path, "Carleman ratio lhs / rhs", "γ", &[("ratio", ratio), ("floor", floor)])?;
    }
    Ok(())
}
