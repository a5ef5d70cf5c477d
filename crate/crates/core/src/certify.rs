//! Bound checks on the strip midline `Im z = 1/2`: growth normalization,
//! ratio profiles `log|f(x + i/2)| / x^p`, the dyadic estimator for separated
//! zero sets and the assembled lower bound for functions with a Nevanlinna
//! factorization.
//!
//! Asymptotic statements are checked as bounded ratios over finite grids; the
//! smallest constants realizing each estimate are measured and reported.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{ComplexPoint, GrowthEnvelope, SeparationParams};
use crate::error::{Error, Result};
use crate::factorization::NevanlinnaParts;
use crate::model::FunctionModel;
use crate::quadrature::{integrate, integrate_breaks, QuadResult, QuadratureSpec};
use crate::summation::CompensatedSum;
use crate::zeros::{check_separation, min_sector_gap, ZeroEntry, ZeroSet};

/// Sampled `|F|` may exceed 1 by this factor before a violation is recorded.
pub const ENVELOPE_SLACK: f64 = 1.1;

/// A sample where the normalized model exceeds the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeViolation {
    pub z: ComplexPoint,
    pub modulus: f64,
}

/// `F(z) = f(z) e^{i alpha z} / (c (z + i)^m)` together with the envelope used
/// and the sampled violations of `|F| <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedModel {
    pub model: FunctionModel,
    pub envelope: GrowthEnvelope,
    pub violations: Vec<EnvelopeViolation>,
}

impl NormalizedModel {
    /// Maps a bound on `log|F(z)|` back to one on `log|f(z)|`.
    pub fn to_original(&self, log_normalized: f64, z: ComplexPoint) -> f64 {
        let env = &self.envelope;
        log_normalized + env.c.ln() + f64::from(env.m) * (z + Complex64::i()).norm().ln() + env.alpha * z.im
    }
}

/// A grid over the closed upper half-plane for envelope spot checks.
pub fn default_growth_samples() -> Vec<ComplexPoint> {
    let mut xs = vec![0.0];
    let mut r = 0.25;
    while r <= 256.0 {
        xs.push(r);
        xs.push(-r);
        r *= 2.0;
    }
    let ys = [0.0, 0.25, 0.5, 1.0, 2.0, 8.0, 32.0];
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| Complex64::new(x, y))).collect()
}

pub fn normalize_growth(f: &FunctionModel, env: &GrowthEnvelope, samples: &[ComplexPoint]) -> Result<NormalizedModel> {
    env.validate()?;
    f.validate()?;
    let mut model = f.clone().times(FunctionModel::exp_iaz(env.alpha));
    if env.c != 1.0 {
        model = model.times(FunctionModel::Constant { value: Complex64::new(1.0 / env.c, 0.0) });
    }
    if env.m > 0 {
        let power = -i32::try_from(env.m).map_err(|_| Error::invalid("envelope power too large"))?;
        model = model.times(FunctionModel::ShiftPower { shift: Complex64::i(), power });
    }
    let limit = ENVELOPE_SLACK.ln();
    let mut violations = Vec::new();
    for &z in samples {
        if z.im < 0.0 {
            return Err(Error::invalid(format!("envelope sample {z} is below the real axis")));
        }
        let lm = model.log_abs(z)?;
        if lm > limit {
            violations.push(EnvelopeViolation { z, modulus: lm.exp() });
        }
    }
    Ok(NormalizedModel { model, envelope: *env, violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub x: f64,
    pub log_modulus: f64,
    pub ratio: f64,
}

/// Samples of `log|f(x + i/2)| / x^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioProfile {
    pub exponent: f64,
    pub samples: Vec<RatioSample>,
}

impl RatioProfile {
    /// `max |ratio|` over each trailing window of `window` samples.
    pub fn windowed_max_abs(&self, window: usize) -> Vec<f64> {
        let w = window.max(1);
        (0..self.samples.len())
            .map(|i| {
                let lo = (i + 1).saturating_sub(w);
                self.samples[lo..=i].iter().map(|s| s.ratio.abs()).fold(0.0, f64::max)
            })
            .collect()
    }

    /// `max |ratio|` over the samples from index `from` on.
    pub fn tail_max_abs(&self, from: usize) -> f64 {
        self.samples.iter().skip(from).map(|s| s.ratio.abs()).fold(0.0, f64::max)
    }

    pub fn min_ratio(&self) -> Option<f64> {
        self.samples.iter().map(|s| s.ratio).min_by(f64::total_cmp)
    }
}

fn check_abscissae(xs: &[f64]) -> Result<()> {
    if let Some(&x) = xs.iter().find(|&&x| !(x.is_finite() && x >= 1.0)) {
        return Err(Error::invalid(format!("abscissae must be finite and >= 1, got {x}")));
    }
    if let Some(w) = xs.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!("abscissae must increase strictly, got {} then {}", w[0], w[1])));
    }
    Ok(())
}

pub fn strip_ratio_profile(f: &FunctionModel, xs: &[f64], p: f64) -> Result<RatioProfile> {
    check_abscissae(xs)?;
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::invalid(format!("profile exponent must be positive, got {p}")));
    }
    let samples = xs
        .iter()
        .map(|&x| {
            let lm = f
                .log_abs(Complex64::new(x, 0.5))
                .map_err(|e| Error::EvaluationAt { x, reason: e.to_string() })?;
            if !lm.is_finite() {
                return Err(Error::EvaluationAt { x, reason: format!("log-modulus is {lm}") });
            }
            Ok(RatioSample { x, log_modulus: lm, ratio: lm / x.powf(p) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioProfile { exponent: p, samples })
}

/// Fails with a hypothesis violation naming the first zero of `f` in `0 < Im z < 1`.
pub fn check_strip_zero_free(f: &FunctionModel) -> Result<()> {
    match f.strip_zeros().first() {
        Some(e) => Err(Error::HypothesisViolated(format!(
            "zero at {} + {}i (multiplicity {}) lies in the strip 0 < Im z < 1",
            e.position.re, e.position.im, e.multiplicity
        ))),
        None => Ok(()),
    }
}

/// Near zeros with `2^{n-1} <= |x - l| < 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub n: u32,
    /// Number of distinct zeros.
    pub card: u64,
    /// `sum mult * Im l`.
    pub a_n: f64,
    /// `sum mult * Im l / |x - l|^2`.
    pub b_n: f64,
}

/// Smallest constants for which the annulus estimates hold at this `x`:
/// `card <= c1 4^n sqrt(x)`, `A_n <= c1 8^n sqrt(x)`, `sum A_n <= c2 (1 + x^2)`
/// and `total <= c3 x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicReport {
    pub x: f64,
    pub m: f64,
    pub annuli: Vec<Annulus>,
    pub far_count: u64,
    pub far_sum: f64,
    pub near_sum: f64,
    pub total: f64,
    pub bound_constants: BoundConstants,
    pub max_multiplicity: u128,
    pub min_sector_gap: Option<f64>,
}

/// Checks the preconditions of the dyadic estimator: `Im l >= 1` and the
/// sector separation law.
pub fn check_dyadic_hypotheses(zs: &ZeroSet, p: &SeparationParams) -> Result<()> {
    p.validate()?;
    if let Some(e) = zs.entries().iter().find(|e| e.position.im < 1.0) {
        return Err(Error::HypothesisViolated(format!(
            "zero at {} + {}i has Im < 1",
            e.position.re, e.position.im
        )));
    }
    if let Some(v) = check_separation(zs, p).first() {
        return Err(Error::HypothesisViolated(format!(
            "zeros {} and {} are {:e} apart, below the separation threshold {:e}",
            v.first, v.second, v.distance, v.threshold
        )));
    }
    Ok(())
}

fn annulus_index(d: f64) -> u32 {
    // d >= 1 so the index is at least 1
    let mut n = d.log2().floor() as i32 + 1;
    while n > 1 && 2f64.powi(n - 1) > d {
        n -= 1;
    }
    while d >= 2f64.powi(n) {
        n += 1;
    }
    n.max(1) as u32
}

/// `sum mult * Im l / |x - l|^2`, split into far zeros (`|x - l| >= x / m`,
/// `m = 1 + 1/k`) and dyadic annuli of near zeros.
pub fn dyadic_estimate(zs: &ZeroSet, x: f64, p: &SeparationParams) -> Result<DyadicReport> {
    if !(x.is_finite() && x >= 1.0) {
        return Err(Error::invalid(format!("dyadic estimate needs x >= 1, got {x}")));
    }
    check_dyadic_hypotheses(zs, p)?;
    let m = 1.0 + 1.0 / p.k;
    let cut = x / m;
    let mut far = CompensatedSum::default();
    let mut far_count = 0;
    let mut shells: std::collections::BTreeMap<u32, (u64, CompensatedSum, CompensatedSum)> =
        std::collections::BTreeMap::new();
    for &ZeroEntry { position: l, multiplicity } in zs.entries() {
        let d2 = (x - l.re).powi(2) + l.im * l.im;
        let weight = multiplicity as f64 * l.im;
        let d = d2.sqrt();
        if d >= cut {
            far.add(weight / d2);
            far_count += 1;
        } else {
            let shell = shells.entry(annulus_index(d)).or_default();
            shell.0 += 1;
            shell.1.add(weight);
            shell.2.add(weight / d2);
        }
    }
    let annuli: Vec<Annulus> = shells
        .into_iter()
        .map(|(n, (card, a, b))| Annulus { n, card, a_n: a.value(), b_n: b.value() })
        .collect();
    let near_sum = annuli.iter().map(|a| a.b_n).collect::<CompensatedSum>().value();
    let far_sum = far.value();
    let total = far_sum + near_sum;

    let sqrt_x = x.sqrt();
    let c1 = annuli
        .iter()
        .map(|a| {
            let scale = 2f64.powi(a.n as i32);
            (a.card as f64 / (scale * scale * sqrt_x)).max(a.a_n / (scale.powi(3) * sqrt_x))
        })
        .fold(0.0, f64::max);
    let c2 = annuli.iter().map(|a| a.a_n).sum::<f64>() / (1.0 + x * x);
    Ok(DyadicReport {
        x,
        m,
        annuli,
        far_count,
        far_sum,
        near_sum,
        total,
        bound_constants: BoundConstants { c1, c2, c3: total / x },
        max_multiplicity: zs.max_multiplicity(),
        min_sector_gap: min_sector_gap(zs, p),
    })
}

/// `log|b_l(x + i/2)| >= -BLASCHKE_TERM_FACTOR * Im l / |x - l|^2` for every
/// normalized factor with `Im l >= 1`: there `u = 1 - |b_l|^2 <= 8/9` and
/// `log(1 - u) >= -(9/8) log 9 * u` on that range.
pub fn blaschke_term_factor() -> f64 {
    9.0 / 8.0 * 9f64.ln()
}

/// Sup of `(t^2 + 1) / ((x - t)^2 + 1/4)` over `|t| >= 2x`, `x >= 1`.
const COMPLEMENT_KERNEL_RATIO: f64 = 4.0;

/// Lower bound on `log|f(x + i/2)|` with each contribution kept separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop26Bound {
    pub x: f64,
    pub bound: f64,
    /// `-a/2` from `e^{iaz}`.
    pub exponential_term: f64,
    /// Poisson integral of the boundary data over `|t| < 2x`.
    pub outer_inner: f64,
    /// Lower bound for the Poisson integral over `|t| >= 2x`.
    pub outer_complement: f64,
    /// `-(9/8) log 9` times the dyadic total.
    pub blaschke_term: f64,
    pub dyadic_total: f64,
    /// Quadrature error already subtracted from `bound`.
    pub error_estimate: f64,
    pub flags: Vec<String>,
}

fn complement_lower(parts: &NevanlinnaParts, x: f64, q: &QuadratureSpec) -> Result<QuadResult> {
    let bm = &parts.boundary;
    let neg = |th: f64| (-bm.eval(th.tan())).max(0.0);
    let r = q.tail_radius;
    let mut acc = QuadResult::exact(0.0);
    if r > 2.0 * x {
        let (a, b) = ((2.0 * x).atan(), r.atan());
        acc.add(&integrate(neg, a, b, 0.25 * q.tol, q.max_subdiv)?);
        acc.add(&integrate(neg, -b, -a, 0.25 * q.tol, q.max_subdiv)?);
    }
    let tail = bm.class.weighted_tail_bound(r.max(2.0 * x));
    if tail.is_finite() {
        acc.value += tail;
    } else {
        acc.flag("complement_truncated_at_tail_radius");
    }
    // (1/2 pi) * ratio * int bm^- / (1 + t^2)
    Ok(acc.scaled(-COMPLEMENT_KERNEL_RATIO / (2.0 * PI)))
}

/// Assembled lower bound on `log|f(x + i/2)|` for `f = e^{iaz} B F`: the
/// exponential term, the Poisson integral of the outer part split at
/// `|t| = 2x`, and the Blaschke part through the dyadic estimate.
pub fn certify_prop26(
    parts: &NevanlinnaParts,
    xs: &[f64],
    p: &SeparationParams,
    q: &QuadratureSpec,
) -> Result<Vec<Prop26Bound>> {
    q.validate()?;
    check_abscissae(xs)?;
    check_dyadic_hypotheses(&parts.zeros, p)?;
    let bm = &parts.boundary;
    xs.iter()
        .map(|&x| {
            let dyadic = dyadic_estimate(&parts.zeros, x, p)?;
            let kernel = |t: f64| bm.eval(t) / ((x - t).powi(2) + 0.25);
            let inner = integrate_breaks(kernel, &[-2.0 * x, 0.0, x, 2.0 * x], 0.25 * q.tol * 2.0 * PI, q.max_subdiv)?
                .scaled(1.0 / (2.0 * PI));
            let complement = complement_lower(parts, x, q)?;
            let exponential_term = -parts.a / 2.0;
            let blaschke_term = -blaschke_term_factor() * dyadic.total;
            let error_estimate = inner.error_estimate + complement.error_estimate;
            let mut flags = inner.flags.clone();
            flags.extend(complement.flags.iter().cloned());
            Ok(Prop26Bound {
                x,
                bound: exponential_term + inner.value + complement.value + blaschke_term - error_estimate,
                exponential_term,
                outer_inner: inner.value,
                outer_complement: complement.value,
                blaschke_term,
                dyadic_total: dyadic.total,
                error_estimate,
                flags,
            })
        })
        .collect()
}

/// `x0, x0 f, x0 f^2, ...` with `count` points.
pub fn geometric_grid(x0: f64, factor: f64, count: usize) -> Result<Vec<f64>> {
    if !(x0.is_finite() && x0 > 0.0 && factor.is_finite() && factor > 1.0) {
        return Err(Error::invalid(format!("grid needs x0 > 0 and factor > 1, got {x0}, {factor}")));
    }
    Ok((0..count).map(|j| x0 * factor.powi(j as i32)).collect())
}
