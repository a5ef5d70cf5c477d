//! Shared value types: points, growth envelopes, separation parameters and
//! rate functions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the complex plane. Public operations reject non-finite parts.
pub type ComplexPoint = Complex64;

pub(crate) fn ensure_finite(z: ComplexPoint, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} is not finite: {z}")))
    }
}

pub(crate) fn ensure_closed_upper(z: ComplexPoint, what: &str) -> Result<()> {
    ensure_finite(z, what)?;
    if z.im < 0.0 {
        return Err(Error::invalid(format!(
            "{what} must lie in the closed upper half-plane, got {z}"
        )));
    }
    Ok(())
}

/// Envelope `|f(z)| <= c (1 + |z|)^m e^{alpha Im z}` on the closed upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthEnvelope {
    pub c: f64,
    pub m: u32,
    pub alpha: f64,
}

impl GrowthEnvelope {
    pub fn new(c: f64, m: u32, alpha: f64) -> Result<Self> {
        let env = GrowthEnvelope { c, m, alpha };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::invalid(format!("envelope c must be finite and > 0, got {}", self.c)));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid(format!(
                "envelope alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Logarithm of the envelope at `z`.
    pub fn log_bound(&self, z: ComplexPoint) -> f64 {
        self.c.ln() + f64::from(self.m) * (1.0 + z.norm()).ln() + self.alpha * z.im
    }
}

/// Envelope `|f(z)| <= c e^{|z|^beta}` with `1 < beta < 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaEnvelope {
    pub c: f64,
    pub beta: f64,
}

impl BetaEnvelope {
    pub fn new(c: f64, beta: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::invalid(format!("envelope c must be finite and > 0, got {c}")));
        }
        validate_beta(beta)?;
        Ok(BetaEnvelope { c, beta })
    }

    pub fn log_bound(&self, z: ComplexPoint) -> f64 {
        self.c.ln() + z.norm().powf(self.beta)
    }
}

pub(crate) fn validate_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 1.0 && beta < 2.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("beta must lie strictly inside (1, 2), got {beta}")))
    }
}

/// Sector separation law `|l - m| >= c_sep (|l| + |m|)^{-1/4}` for zeros with
/// `Im <= k |Re|`, plus an optional uniform gap `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationParams {
    pub k: f64,
    pub c_sep: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

impl SeparationParams {
    pub fn new(k: f64, c_sep: f64) -> Result<Self> {
        let p = SeparationParams { k, c_sep, d: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::invalid(format!("separation k must be finite and > 0, got {}", self.k)));
        }
        if !(self.c_sep.is_finite() && self.c_sep > 0.0) {
            return Err(Error::invalid(format!(
                "separation c must be finite and > 0, got {}",
                self.c_sep
            )));
        }
        if let Some(d) = self.d {
            if !(d.is_finite() && d >= 0.0) {
                return Err(Error::invalid(format!("separation d must be finite and >= 0, got {d}")));
            }
        }
        Ok(())
    }

    /// Whether `z` lies in the sector `Im z <= k |Re z|` where the law binds.
    pub fn in_sector(&self, z: ComplexPoint) -> bool {
        z.im <= self.k * z.re.abs()
    }

    pub fn threshold(&self, a: ComplexPoint, b: ComplexPoint) -> f64 {
        self.c_sep * (a.norm() + b.norm()).powf(-0.25)
    }
}

/// The closed-form laws a [`RateFunction`] may follow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum RateLaw {
    /// `rho(x) = value`.
    Constant { value: f64 },
    /// `rho(x) = 1 / (1 + x)^power`.
    ReciprocalPower { power: f64 },
    /// `rho(x) = 1 / (1 + log(1 + x))`.
    ReciprocalLog,
    /// Piecewise-linear interpolation through `(x, rho)` points, held constant
    /// outside the tabulated range.
    Table { points: Vec<(f64, f64)> },
}

/// A positive rate `x -> rho(x)` on `x >= 0` with a declared monotonicity flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFunction {
    #[serde(flatten)]
    pub law: RateLaw,
    pub monotone: bool,
}

impl RateFunction {
    pub fn new(law: RateLaw, monotone: bool) -> Result<Self> {
        let rho = RateFunction { law, monotone };
        rho.validate()?;
        Ok(rho)
    }

    pub fn reciprocal_power(power: f64) -> Result<Self> {
        Self::new(RateLaw::ReciprocalPower { power }, power >= 0.0)
    }

    pub fn reciprocal_log() -> Self {
        RateFunction { law: RateLaw::ReciprocalLog, monotone: true }
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(RateLaw::Constant { value }, true)
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        let monotone = points.windows(2).all(|w| w[1].1 <= w[0].1);
        Self::new(RateLaw::Table { points }, monotone)
    }

    fn validate(&self) -> Result<()> {
        match &self.law {
            RateLaw::Constant { value } => {
                if !(value.is_finite() && *value > 0.0) {
                    return Err(Error::invalid(format!("constant rate must be > 0, got {value}")));
                }
            }
            RateLaw::ReciprocalPower { power } => {
                if !power.is_finite() {
                    return Err(Error::invalid("rate power must be finite"));
                }
                if self.monotone && *power < 0.0 {
                    return Err(Error::invalid("increasing power law flagged as monotone"));
                }
            }
            RateLaw::ReciprocalLog => {}
            RateLaw::Table { points } => {
                if points.is_empty() {
                    return Err(Error::invalid("rate table is empty"));
                }
                if points.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::invalid("rate table abscissae must be strictly increasing"));
                }
                if points.iter().any(|&(x, y)| !x.is_finite() || !(y.is_finite() && y > 0.0)) {
                    return Err(Error::invalid("rate table values must be finite and positive"));
                }
                if self.monotone && points.windows(2).any(|w| w[1].1 > w[0].1) {
                    return Err(Error::invalid("rate table flagged monotone but increases"));
                }
            }
        }
        Ok(())
    }

    /// Evaluates `rho(x)` for `x >= 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::invalid(format!("rate function evaluated at x = {x}")));
        }
        let v = match &self.law {
            RateLaw::Constant { value } => *value,
            RateLaw::ReciprocalPower { power } => (1.0 + x).powf(-power),
            RateLaw::ReciprocalLog => 1.0 / (1.0 + x.ln_1p()),
            RateLaw::Table { points } => interpolate(points, x),
        };
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(Error::invalid(format!("rate function is not positive at x = {x}: {v}")))
        }
    }

    /// Checks positivity and, when flagged, monotonicity on the given samples.
    pub fn check_samples(&self, xs: &[f64]) -> Result<()> {
        let mut prev: Option<f64> = None;
        for &x in xs {
            let v = self.eval(x)?;
            if self.monotone {
                if let Some(p) = prev {
                    if v > p {
                        return Err(Error::invalid(format!(
                            "rate function flagged monotone increases at x = {x}"
                        )));
                    }
                }
            }
            prev = Some(v);
        }
        Ok(())
    }
}

fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    let first = points[0];
    let last = points[points.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let idx = points.partition_point(|p| p.0 <= x);
    let (x0, y0) = points[idx - 1];
    let (x1, y1) = points[idx];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

impl fmt::Display for RateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.law {
            RateLaw::Constant { value } => write!(f, "const:{value}"),
            RateLaw::ReciprocalPower { power } if *power == 1.0 => write!(f, "1/(1+x)"),
            RateLaw::ReciprocalPower { power } => write!(f, "1/(1+x)^{power}"),
            RateLaw::ReciprocalLog => write!(f, "1/(1+log(1+x))"),
            RateLaw::Table { points } => {
                write!(f, "table:")?;
                for (i, (x, y)) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}={y}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses the rate catalogue: `1/(1+x)`, `1/(1+x)^p`, `1/(1+log(1+x))`,
/// `const:c` and `table:x1=y1,x2=y2,...`.
impl FromStr for RateFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::invalid(format!("unknown rate expression '{s}'"));
        match compact.as_str() {
            "1/(1+x)" => return Self::reciprocal_power(1.0),
            "1/(1+log(1+x))" | "1/(1+ln(1+x))" => return Ok(Self::reciprocal_log()),
            _ => {}
        }
        if let Some(p) = compact.strip_prefix("1/(1+x)^") {
            let power = p.trim_matches(|c| c == '(' || c == ')').parse::<f64>().map_err(|_| unknown())?;
            return Self::reciprocal_power(power);
        }
        if let Some(v) = compact.strip_prefix("const:") {
            return Self::constant(v.parse::<f64>().map_err(|_| unknown())?);
        }
        if let Some(rest) = compact.strip_prefix("table:") {
            let points = rest
                .split(',')
                .map(|pair| {
                    let (x, y) = pair.split_once('=').ok_or_else(unknown)?;
                    Ok((x.parse::<f64>().map_err(|_| unknown())?, y.parse::<f64>().map_err(|_| unknown())?))
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::table(points);
        }
        if let Ok(v) = compact.parse::<f64>() {
            return Self::constant(v);
        }
        Err(unknown())
    }
}
