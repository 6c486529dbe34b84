use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Default)]
pub struct Outputs {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Payload {
    pub kind: String,
    pub passed: bool,
    pub data: Value,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub reports: Vec<Payload>,
    pub timings: Vec<Timing>,
    pub passed: bool,
}

impl ReportDocument {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config: Value::Null,
            reports: Vec::new(),
            timings: Vec::new(),
            passed: true,
        }
    }

    pub fn echo<T: Serialize>(&mut self, config: &T) -> Result<()> {
        self.config = serde_json::to_value(config)?;
        Ok(())
    }

    pub fn push<T: Serialize>(&mut self, kind: &str, passed: bool, data: &T) -> Result<()> {
        self.passed &= passed;
        self.reports.push(Payload {
            kind: kind.to_string(),
            passed,
            data: serde_json::to_value(data)?,
        });
        Ok(())
    }

    pub fn time(&mut self, stage: &str, since: Instant) {
        self.timings.push(Timing {
            stage: stage.to_string(),
            seconds: since.elapsed().as_secs_f64(),
        });
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn write(&self, outputs: &Outputs) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        match &outputs.json {
            Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
            None => println!("{text}"),
        }
        let failed = self.reports.iter().filter(|p| !p.passed).count();
        eprintln!(
            "{}: {} report(s), {} failed -> {}",
            self.command,
            self.reports.len(),
            failed,
            if self.passed { "pass" } else { "fail" }
        );
        Ok(())
    }
}

pub fn write_csv<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Log-log line plot of `(x, y)` series with labelled axes; non-positive
/// points are dropped.
pub fn write_svg(path: &Path, title: &str, x_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> Result<()> {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const PAD: f64 = 60.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let points: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, s)| {
            s.iter()
                .filter(|(x, y)| *x > 0.0 && *y > 0.0 && y.is_finite())
                .map(|(x, y)| (x.log10(), y.log10()))
                .collect()
        })
        .collect();
    let all: Vec<(f64, f64)> = points.iter().flatten().copied().collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let lo = all.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = all.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if all.is_empty() {
            (0.0, 1.0)
        } else if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#)?;
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, W / 2.0)?;
    writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    )?;
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">log10 {x_label}</text>"#, W / 2.0, H - 15.0)?;
    writeln!(svg, r#"<text x="{PAD}" y="{}" text-anchor="middle">{x0:.2}</text>"#, H - PAD + 16.0)?;
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{x1:.2}</text>"#, W - PAD, H - PAD + 16.0)?;
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{y0:.2}</text>"#, PAD - 4.0, H - PAD)?;
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{y1:.2}</text>"#, PAD - 4.0, PAD + 4.0)?;
    for (i, ((name, _), pts)) in series.iter().zip(&points).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
        writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, path.join(" "))?;
        for (x, y) in pts {
            writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(*x), sy(*y))?;
        }
        writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            W - PAD - 150.0,
            PAD + 18.0 * (i + 1) as f64
        )?;
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
