//! Measured constants for the auxiliary estimates: Bernstein inequalities,
//! the commutator bound and the time-mollifier bounds.

mod bernstein;
mod commutator;
mod mollifier;

pub use bernstein::{verify_bernstein, BERNSTEIN_CEILING, BERNSTEIN_FLOOR};
pub use commutator::{commutator_ratio, verify_commutator, LatticePoint};
pub use mollifier::{mollifier_bounds, mollify_time, Kernel, MollifiedSeries, MollifierReport, MollifierRow};

use serde::Serialize;

/// Which side of a sample ratio is checked against the report bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    None,
    Upper,
    Both,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub label: String,
    pub ratio: f64,
    pub bound: Bound,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub estimate: String,
    pub samples: Vec<Sample>,
    /// Largest sample ratio, the measured constant.
    pub max_ratio: f64,
    pub floor: Option<f64>,
    pub ceiling: Option<f64>,
    /// Samples that could not be formed, with the reason.
    pub skipped: Vec<String>,
    pub passed: bool,
}

impl EstimateReport {
    pub fn new(estimate: impl Into<String>, floor: Option<f64>, ceiling: Option<f64>) -> Self {
        Self {
            estimate: estimate.into(),
            samples: Vec::new(),
            max_ratio: 0.0,
            floor,
            ceiling,
            skipped: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, ratio: f64, bound: Bound) {
        self.max_ratio = self.max_ratio.max(ratio);
        let upper_ok = self.ceiling.is_none_or(|c| ratio <= c);
        let lower_ok = self.floor.is_none_or(|f| ratio >= f);
        let ok = ratio.is_finite()
            && match bound {
                Bound::None => true,
                Bound::Upper => upper_ok,
                Bound::Both => upper_ok && lower_ok,
            };
        self.passed &= ok;
        self.samples.push(Sample {
            label: label.into(),
            ratio,
            bound,
        });
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        self.skipped.push(reason.into());
    }

    /// Appends the samples of another report of the same estimate.
    pub fn merge(&mut self, other: EstimateReport) {
        for s in other.samples {
            self.push(s.label, s.ratio, s.bound);
        }
        self.skipped.extend(other.skipped);
    }

    /// Smallest ratio among the samples checked from below.
    pub fn min_bounded_ratio(&self) -> Option<f64> {
        self.samples
            .iter()
            .filter(|s| s.bound == Bound::Both)
            .map(|s| s.ratio)
            .reduce(f64::min)
    }
}
