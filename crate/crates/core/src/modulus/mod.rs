//! Moduli of continuity: closed-form families, derived moduli and tabulated data.

mod conditions;
mod seminorm;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::MonotoneCubic;

pub use conditions::{
    check_omega_conditions, check_osgood, check_shape, ConditionId, ConditionReport,
    ResolutionParams, Verdict, Witness,
};
pub use seminorm::{modulus_seminorm, time_seminorm};

const LN2: f64 = std::f64::consts::LN_2;

/// Serializable description of a modulus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModulusSpec {
    /// `s^alpha`, `0 < alpha <= 1`.
    Power { alpha: f64 },
    /// `s (1 + |log s|)^alpha`, `alpha > 0`.
    LogLipschitz { alpha: f64 },
    /// `sqrt(base(s^2))`.
    SqrtOfSquare { base: Box<ModulusSpec> },
    /// Monotone table on `[0, 1]`, rescaled so the value at 1 is 1.
    Tabulated { s: Vec<f64>, values: Vec<f64> },
}

#[derive(Clone, Debug)]
enum Kind {
    Power(f64),
    LogLipschitz(f64),
    SqrtOfSquare(Box<Modulus>),
    Tabulated(Arc<MonotoneCubic>),
}

/// An evaluable modulus of continuity on `[0, 1]`, normalized to `μ(1) = 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ModulusSpec", into = "ModulusSpec")]
pub struct Modulus {
    spec: ModulusSpec,
    kind: Kind,
    normalization: f64,
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl TryFrom<ModulusSpec> for Modulus {
    type Error = Error;
    fn try_from(spec: ModulusSpec) -> Result<Self> {
        Modulus::new(spec)
    }
}

impl From<Modulus> for ModulusSpec {
    fn from(m: Modulus) -> Self {
        m.spec
    }
}

impl Modulus {
    pub fn new(spec: ModulusSpec) -> Result<Self> {
        let (kind, normalization) = match &spec {
            ModulusSpec::Power { alpha } => {
                if !(*alpha > 0.0 && *alpha <= 1.0) {
                    return Err(Error::InvalidModulus(format!(
                        "power exponent must lie in (0, 1], got {alpha}"
                    )));
                }
                (Kind::Power(*alpha), 1.0)
            }
            ModulusSpec::LogLipschitz { alpha } => {
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidModulus(format!(
                        "log-Lipschitz exponent must be positive, got {alpha}"
                    )));
                }
                (Kind::LogLipschitz(*alpha), 1.0)
            }
            ModulusSpec::SqrtOfSquare { base } => {
                (Kind::SqrtOfSquare(Box::new(Modulus::new((**base).clone())?)), 1.0)
            }
            ModulusSpec::Tabulated { s, values } => {
                let (interp, norm) = build_table(s, values)?;
                (Kind::Tabulated(Arc::new(interp)), norm)
            }
        };
        Ok(Self {
            spec,
            kind,
            normalization,
        })
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(ModulusSpec::Power { alpha })
    }

    pub fn log_lipschitz(alpha: f64) -> Result<Self> {
        Self::new(ModulusSpec::LogLipschitz { alpha })
    }

    pub fn tabulated(s: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(ModulusSpec::Tabulated { s, values })
    }

    /// The modulus `ω(s) = sqrt(μ(s²))` attached to `μ = self`.
    pub fn derive_omega(&self) -> Modulus {
        Modulus {
            spec: ModulusSpec::SqrtOfSquare {
                base: Box::new(self.spec.clone()),
            },
            kind: Kind::SqrtOfSquare(Box::new(self.clone())),
            normalization: 1.0,
        }
    }

    pub fn spec(&self) -> &ModulusSpec {
        &self.spec
    }

    /// Factor applied to the raw family so that the value at 1 equals 1.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `μ(s)` for `s ∈ [0, 1]`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain {
                value: s,
                domain: "[0, 1]",
            });
        }
        Ok(self.value(s))
    }

    /// `μ(s)` without the domain check.
    pub fn value(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Power(a) => s.powf(*a),
            Kind::LogLipschitz(a) => s * (1.0 + s.ln().abs()).powf(*a),
            Kind::SqrtOfSquare(base) => base.value(s * s).sqrt(),
            Kind::Tabulated(t) => t.eval(s),
        }
    }

    /// `ln μ(2^{-u})` for `u ≥ 0`, accurate where `μ(2^{-u})` itself underflows.
    pub fn log_value_dyadic(&self, u: f64) -> f64 {
        match &self.kind {
            Kind::Power(a) => -a * u * LN2,
            Kind::LogLipschitz(a) => -u * LN2 + a * (1.0 + u * LN2).ln(),
            Kind::SqrtOfSquare(base) => 0.5 * base.log_value_dyadic(2.0 * u),
            Kind::Tabulated(t) => t.eval((-u * LN2).exp()).ln(),
        }
    }

    /// `Ω(q) = 2^q ω(2^{-q})` for `q ≥ 0`; negative `q` uses `Ω(0) = ω(1)`.
    pub fn dyadic_weight(&self, q: i32) -> f64 {
        let q = q.max(0) as f64;
        (q * LN2 + self.log_value_dyadic(q)).exp()
    }
}

fn build_table(s: &[f64], values: &[f64]) -> Result<(MonotoneCubic, f64)> {
    if s.len() != values.len() || s.len() < 3 {
        return Err(Error::InvalidModulus(
            "a tabulated modulus needs at least three (s, value) pairs of equal length".into(),
        ));
    }
    if s[0] != 0.0 || values[0] != 0.0 {
        return Err(Error::InvalidModulus("table must start at (0, 0)".into()));
    }
    if (s[s.len() - 1] - 1.0).abs() > 1e-14 {
        return Err(Error::InvalidModulus("table must end at s = 1".into()));
    }
    for w in s.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidModulus("table abscissae must be strictly increasing".into()));
        }
    }
    for w in values.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidModulus("table values must be strictly increasing".into()));
        }
    }
    let norm = 1.0 / values[values.len() - 1];
    let scaled = values.iter().map(|v| v * norm).collect();
    Ok((MonotoneCubic::new(s.to_vec(), scaled)?, norm))
}

impl fmt::Display for ModulusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusSpec::Power { alpha } => write!(f, "power:{alpha}"),
            ModulusSpec::LogLipschitz { alpha } => write!(f, "loglip:{alpha}"),
            ModulusSpec::SqrtOfSquare { base } => write!(f, "sqrt:{base}"),
            ModulusSpec::Tabulated { s, .. } => write!(f, "tabulated[{}]", s.len()),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

/// Parses `power:<a>`, `loglip:<a>` (or `log-lipschitz:<a>`) and `sqrt:<modulus>`.
impl FromStr for Modulus {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (head, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidModulus(format!("expected <family>:<parameter>, got {text:?}")))?;
        let number = |r: &str| {
            r.parse::<f64>()
                .map_err(|_| Error::InvalidModulus(format!("bad parameter {r:?} in {text:?}")))
        };
        match head {
            "power" => Modulus::power(number(rest)?),
            "loglip" | "log-lipschitz" => Modulus::log_lipschitz(number(rest)?),
            "sqrt" | "sqrt-of-square" => Ok(rest.parse::<Modulus>()?.derive_omega()),
            _ => Err(Error::InvalidModulus(format!("unknown family {head:?}"))),
        }
    }
}

/// Builds a modulus from a family name and parameter as used on the command line.
pub fn from_family(family: &str, alpha: f64) -> Result<Modulus> {
    match family {
        "power" => Modulus::power(alpha),
        "loglip" | "log-lipschitz" => Modulus::log_lipschitz(alpha),
        _ => Err(Error::InvalidModulus(format!("unknown family {family:?}"))),
    }
}
