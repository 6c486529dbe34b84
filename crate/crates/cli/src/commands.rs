use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use lpcarleman::lp::{GridFile, LittlewoodPaley, TimeSeries};
use lpcarleman::modulus::{check_omega_conditions, check_osgood, check_shape, from_family, Verdict};
use lpcarleman::paraproduct::verify_remainder_estimate;
use lpcarleman::sampling::{band_limited, band_limited_in, Profile};
use lpcarleman::verifiers::{mollifier_bounds, verify_bernstein, verify_commutator, EstimateReport, LatticePoint};
use lpcarleman::weight::WeightTable;
use lpcarleman::lp::{Grid, GridFunction};
use serde::{Deserialize, Serialize};

use crate::report::{write_csv, Outputs, ReportDocument};

fn grid(dim: Option<usize>, points: Option<usize>, default_points: usize) -> Result<Grid> {
    Ok(Grid::new(dim.unwrap_or(1), points.unwrap_or(default_points), 2.0 * std::f64::consts::PI)?)
}

fn random_field(grid: Grid, seed: u64, profile: &Profile, band: Option<f64>) -> GridFunction {
    match band {
        Some(b) => band_limited_in(grid, seed, profile, b),
        None => band_limited(grid, seed, profile),
    }
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusParams {
    /// `power` or `log-lipschitz`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Dyadic depth of the Osgood and shape checks [default: 60].
    #[arg(long)]
    pub k_max: Option<u32>,
    /// Also check the derived ω for these Sobolev indices.
    #[arg(long, value_delimiter = ',')]
    pub omega_s: Option<Vec<f64>>,
    /// Depth of the ω checks [default: 40].
    #[arg(long)]
    pub q_max: Option<u32>,
}

pub fn modulus(p: ModulusParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    let start = Instant::now();
    let family = p.family.as_deref().context("--family is required")?;
    let alpha = p.alpha.context("--alpha is required")?;
    let mu = from_family(family, alpha)?;
    let k_max = p.k_max.unwrap_or(60);
    let mut reports = vec![check_osgood(&mu, k_max)];
    reports.extend(check_shape(&mu, k_max, doc.seed));
    if let Some(s) = &p.omega_s {
        reports.extend(check_omega_conditions(&mu.derive_omega(), s, p.q_max.unwrap_or(40)));
    }
    for r in &reports {
        doc.push("condition", r.verdict != Verdict::Fail, r)?;
    }
    doc.time("conditions", start);
    if let Some(path) = &out.csv {
        #[derive(Serialize)]
        struct Row {
            condition: String,
            verdict: String,
            constant: Option<f64>,
        }
        let rows = reports.iter().map(|r| Row {
            condition: format!("{:?}", r.condition).to_lowercase(),
            verdict: format!("{:?}", r.verdict).to_lowercase(),
            constant: r.constant,
        });
        write_csv(path, rows)?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightParams {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Largest argument τ [default: 1].
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Number of intervals in the table [default: 100].
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Bound on the relative ODE residual [default: 1e-6].
    #[arg(long)]
    pub tolerance: Option<f64>,
}

pub fn weight(p: WeightParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    let start = Instant::now();
    let family = p.family.as_deref().context("--family is required")?;
    let mu = from_family(family, p.alpha.context("--alpha is required")?)?;
    let table = WeightTable::build(&mu, p.tau_max.unwrap_or(1.0))?;
    let rows = table.rows(p.nodes.unwrap_or(100))?;
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let tol = p.tolerance.unwrap_or(1e-6);
    #[derive(Serialize)]
    struct Payload<'a> {
        tau_max: f64,
        tau_limit: f64,
        quadrature_error: f64,
        max_residual: f64,
        rows: &'a [lpcarleman::weight::WeightRow],
    }
    let payload = Payload {
        tau_max: table.tau_max(),
        tau_limit: table.tau_limit(),
        quadrature_error: table.quadrature_error(),
        max_residual: worst,
        rows: &rows,
    };
    doc.push("weight", worst <= tol, &payload)?;
    doc.time("weight", start);
    if let Some(path) = &out.csv {
        write_csv(path, rows.iter())?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpParams {
    /// Grid-function JSON file; a seeded random field is used when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis [default: 256].
    #[arg(long)]
    pub points: Option<usize>,
    /// Spectral radius of the random field.
    #[arg(long)]
    pub band: Option<f64>,
    /// Bound on the relative reconstruction error [default: 1e-12].
    #[arg(long)]
    pub tolerance: Option<f64>,
}

pub fn lp(p: LpParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    let start = Instant::now();
    let u = match &p.input {
        Some(path) => GridFile::read(path)?.decode_single()?,
        None => random_field(grid(p.dim, p.points, 256)?, doc.seed, &Profile::Flat, p.band),
    };
    let d = LittlewoodPaley::default().decompose(&u)?;
    let summary = d.summary();
    #[derive(Serialize)]
    struct Payload<'a> {
        points: usize,
        dim: usize,
        reconstruction_error: f64,
        blocks: &'a [lpcarleman::lp::BlockSummary],
    }
    let payload = Payload {
        points: d.grid.n(),
        dim: d.grid.dim(),
        reconstruction_error: d.reconstruction_error,
        blocks: &summary,
    };
    doc.push("decomposition", d.reconstruction_error <= p.tolerance.unwrap_or(1e-12), &payload)?;
    doc.time("decompose", start);
    if let Some(path) = &out.csv {
        write_csv(path, summary.iter())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SampleRow<'a> {
    sample: usize,
    label: &'a str,
    ratio: f64,
}

fn sample_rows(reports: &[(usize, EstimateReport)]) -> Vec<SampleRow<'_>> {
    reports
        .iter()
        .flat_map(|(i, r)| {
            r.samples.iter().map(move |s| SampleRow {
                sample: *i,
                label: &s.label,
                ratio: s.ratio,
            })
        })
        .collect()
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernsteinParams {
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis [default: 1024].
    #[arg(long)]
    pub points: Option<usize>,
    /// Number of random fields [default: 50].
    #[arg(long)]
    pub samples: Option<usize>,
}

pub fn bernstein(p: BernsteinParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    let start = Instant::now();
    let g = grid(p.dim, p.points, 1024)?;
    let lp = LittlewoodPaley::default();
    let mut per_sample = Vec::new();
    for i in 0..p.samples.unwrap_or(50) {
        let u = band_limited(g, doc.seed.wrapping_add(i as u64), &Profile::Flat);
        let mut all = EstimateReport::new("bernstein", None, None);
        for q in -1..=g.q_max() {
            all.merge(verify_bernstein(&lp, &u, q)?);
        }
        per_sample.push((i, all));
    }
    let mut total = EstimateReport::new("bernstein", None, None);
    for (_, r) in &per_sample {
        total.merge(r.clone());
    }
    doc.push("estimate", total.passed, &total)?;
    doc.time("bernstein", start);
    if let Some(path) = &out.csv {
        write_csv(path, sample_rows(&per_sample))?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorParams {
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis [default: 512].
    #[arg(long)]
    pub points: Option<usize>,
    /// Number of random (a, u) pairs [default: 20].
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Lowest lattice index [default: 0].
    #[arg(long)]
    pub lattice_lo: Option<i32>,
    /// Highest lattice index [default: the grid's largest resolved block].
    #[arg(long)]
    pub lattice_hi: Option<i32>,
    /// Spectral radius of the random fields.
    #[arg(long)]
    pub band: Option<f64>,
    /// Fail when a ratio exceeds this value.
    #[arg(long)]
    pub ceiling: Option<f64>,
}

pub fn commutator(p: CommutatorParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    let start = Instant::now();
    let g = grid(p.dim, p.points, 512)?;
    let lp = LittlewoodPaley::default();
    let lattice = LatticePoint::cube(p.lattice_lo.unwrap_or(0), p.lattice_hi.unwrap_or(g.q_max()));
    let mut per_pair = Vec::new();
    for i in 0..p.pairs.unwrap_or(20) {
        let seed = doc.seed.wrapping_add(2 * i as u64);
        let a = random_field(g, seed, &Profile::Flat, p.band);
        let u = random_field(g, seed.wrapping_add(1), &Profile::Flat, p.band);
        per_pair.push((i, verify_commutator(&lp, &a, &u, &lattice, p.ceiling)?));
    }
    let mut total = EstimateReport::new("commutator", None, p.ceiling);
    for (_, r) in &per_pair {
        total.merge(r.clone());
    }
    doc.push("estimate", total.passed, &total)?;
    doc.time("commutator", start);
    if let Some(path) = &out.csv {
        write_csv(path, sample_rows(&per_pair))?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemainderParams {
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis [default: 512].
    #[arg(long)]
    pub points: Option<usize>,
    /// Sobolev index s in (0, 1) [default: 0.5].
    #[arg(long)]
    pub s: Option<f64>,
    /// Family of ω [default: power].
    #[arg(long)]
    pub family: Option<String>,
    /// Parameter of ω [default: 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Treat the family as μ and use its derived ω.
    #[arg(long)]
    pub derived: Option<bool>,
    /// Number of random (a, b) pairs [default: 10].
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Spectral radius of the random fields.
    #[arg(long)]
    pub band: Option<f64>,
    /// Smallest block index in the sums.
    #[arg(long)]
    pub q_min: Option<i32>,
}

pub fn remainder(p: RemainderParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    let start = Instant::now();
    let g = grid(p.dim, p.points, 512)?;
    let s = p.s.unwrap_or(0.5);
    let base = from_family(p.family.as_deref().unwrap_or("power"), p.alpha.unwrap_or(1.0))?;
    let omega = if p.derived.unwrap_or(false) { base.derive_omega() } else { base };
    let lp = LittlewoodPaley::default();
    let mut rows = Vec::new();
    for i in 0..p.pairs.unwrap_or(10) {
        let seed = doc.seed.wrapping_add(2 * i as u64);
        let a = random_field(g, seed, &Profile::Holder(omega.clone()), p.band);
        let b = random_field(g, seed.wrapping_add(1), &Profile::Flat, p.band);
        rows.push(verify_remainder_estimate(&lp, &a, &b, s, &omega, p.q_min)?);
    }
    for r in &rows {
        doc.push("remainder", r.ratios.iter().all(|x| x.is_finite()), r)?;
    }
    doc.time("remainder", start);
    if let Some(path) = &out.csv {
        #[derive(Serialize)]
        struct Row {
            pair: usize,
            r1: f64,
            r2: f64,
            r3: f64,
        }
        let csv_rows = rows.iter().enumerate().map(|(pair, r)| Row {
            pair,
            r1: r.ratios[0],
            r2: r.ratios[1],
            r3: r.ratios[2],
        });
        write_csv(path, csv_rows)?;
    }
    Ok(())
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MollifierParams {
    /// Spatial points [default: 32].
    #[arg(long)]
    pub points: Option<usize>,
    /// Time samples [default: 1025].
    #[arg(long)]
    pub frames: Option<usize>,
    /// Time horizon T [default: 1].
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Family of μ [default: power].
    #[arg(long)]
    pub family: Option<String>,
    /// Parameter of μ [default: 0.5].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Exponent of the cusp `|t − t₀|^e` in the coefficient [default: 0.5].
    #[arg(long)]
    pub exponent: Option<f64>,
    /// Cusp location as a fraction of T [default: 0.3].
    #[arg(long)]
    pub center: Option<f64>,
    /// Mollifier widths as powers `ε = 2^{−k}` [default: 2,3,4,5,6].
    #[arg(long, value_delimiter = ',')]
    pub eps_exponents: Option<Vec<i32>>,
    /// Largest accepted max/min ratio across ε [default: 2].
    #[arg(long)]
    pub max_variation: Option<f64>,
}

pub fn mollifier(p: MollifierParams, doc: &mut ReportDocument, out: &Outputs) -> Result<()> {
    doc.echo(&p)?;
    let start = Instant::now();
    let g = grid(Some(1), p.points, 32)?;
    let horizon = p.horizon.unwrap_or(1.0);
    let exponent = p.exponent.unwrap_or(0.5);
    let t0 = p.center.unwrap_or(0.3) * horizon;
    let mu = from_family(p.family.as_deref().unwrap_or("power"), p.alpha.unwrap_or(0.5))?;
    let a = TimeSeries::sample(g, horizon, p.frames.unwrap_or(1025), |t, x| {
        1.0 + 0.5 * x[0].sin() * (t - t0).abs().powf(exponent)
    });
    let exps = p.eps_exponents.clone().unwrap_or_else(|| (2..=6).collect());
    if exps.is_empty() {
        bail!("eps_exponents must not be empty");
    }
    let eps: Vec<f64> = exps.iter().map(|k| 2f64.powi(-k)).collect();
    let r = mollifier_bounds(&a, &mu, &eps)?;
    let limit = p.max_variation.unwrap_or(2.0);
    doc.push("mollifier", r.approx_variation < limit && r.derivative_variation < limit, &r)?;
    doc.time("mollifier", start);
    if let Some(path) = &out.csv {
        write_csv(path, r.rows.iter())?;
    }
    Ok(())
}
