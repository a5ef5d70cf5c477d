//! Half-plane Blaschke factors, the convergence-corrected factor
//! `B(s, z) = (z - s - i)/(z - s + i) * (s - i)/(s + i) * exp(-2iz/(s^2 + 1))`,
//! truncated products with certified tails, and the constructors of the
//! extremal products.
//!
//! Products are accumulated in log space: the log-modulus is summed with
//! compensation, phases are summed modulo `2 pi`. Exponents reach `1e25` for
//! slowly decaying rates, so nothing here multiplies raw factor values.

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{ensure_closed_upper, ensure_finite, validate_beta, ComplexPoint, RateFunction};
use crate::error::{Error, Result};
use crate::summation::CompensatedSum;
use crate::zeros::{make_zero_set, ZeroSet};
use crate::SMALL_Z_CONSTANT;


/// Default abscissa cap for the node search of the constructors.
pub const DEFAULT_ABSCISSA_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// `(|w^2 + 1| / (w^2 + 1)) (z - w)/(z - conj w)` with `w = x + i`.
    Normalized,
    /// `B(t, z)` with real node `t`.
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductNode {
    pub x: f64,
    pub k: u128,
}

/// A finite product `prod_n factor_n(z)^{k_n}`.
///
/// `tail_exponent = Some(p)` declares that the idealized infinite product
/// continues past the stored nodes with abscissae increasing by at least one
/// and `k_n / x_n^p <= 2^{-n} + x_n^{-p}`; that law is what the tail bound of
/// [`product_eval`] certifies against. Without it the product is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductConfig {
    pub kind: FactorKind,
    pub nodes: Vec<ProductNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_exponent: Option<f64>,
}

impl ProductConfig {
    pub fn new(kind: FactorKind, nodes: Vec<ProductNode>) -> Result<Self> {
        let cfg = ProductConfig { kind, nodes, tail_exponent: None };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn empty(kind: FactorKind) -> Self {
        ProductConfig { kind, nodes: Vec::new(), tail_exponent: None }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, n) in self.nodes.iter().enumerate() {
            if !(n.x.is_finite() && n.x >= 1.0) {
                return Err(Error::invalid(format!("node {i}: abscissa must be finite and >= 1, got {}", n.x)));
            }
            if n.k == 0 {
                return Err(Error::invalid(format!("node {i}: exponent must be positive")));
            }
        }
        if self.nodes.windows(2).any(|w| w[1].x <= w[0].x) {
            return Err(Error::invalid("node abscissae must be strictly increasing"));
        }
        if let Some(p) = self.tail_exponent {
            if !(p.is_finite() && p > 1.0) {
                return Err(Error::invalid(format!("tail exponent must exceed 1, got {p}")));
            }
        }
        Ok(())
    }

    /// Zero of the factor attached to `node`.
    pub fn node_zero(&self, node: &ProductNode) -> ComplexPoint {
        Complex64::new(node.x, 1.0)
    }

    /// Zeros `x_n + i` with multiplicity `k_n`.
    pub fn zero_set(&self) -> ZeroSet {
        make_zero_set(self.nodes.iter().map(|n| (self.node_zero(n), n.k)))
            .expect("validated nodes lie in the upper half-plane")
    }

    /// Drops all but the first `n` nodes (the tail law is kept).
    pub fn truncated(&self, n: usize) -> ProductConfig {
        ProductConfig {
            kind: self.kind,
            nodes: self.nodes[..n.min(self.nodes.len())].to_vec(),
            tail_exponent: self.tail_exponent,
        }
    }
}

/// Log-modulus and argument of a single factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorLog {
    pub log_modulus: f64,
    pub arg: f64,
}

fn normalization(w: ComplexPoint) -> ComplexPoint {
    let q = w * w + 1.0;
    if q.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        q.conj() / q.norm()
    }
}

/// The normalized half-plane factor `(|w^2+1|/(w^2+1)) (z - w)/(z - conj w)`.
pub fn factor_normalized(w: ComplexPoint, z: ComplexPoint) -> Result<ComplexPoint> {
    let l = log_factor_normalized(w, z)?;
    Ok(from_log(l.log_modulus, l.arg))
}

/// Log form of [`factor_normalized`]; the modulus uses
/// `|z - w|^2 = |z - conj w|^2 - 4 Im z Im w`, which is exact on the real axis.
pub fn log_factor_normalized(w: ComplexPoint, z: ComplexPoint) -> Result<FactorLog> {
    ensure_finite(w, "factor zero")?;
    if w.im <= 0.0 {
        return Err(Error::NotInUpperHalfPlane { re: w.re, im: w.im });
    }
    ensure_closed_upper(z, "evaluation point")?;
    let denom = z - w.conj();
    if denom.norm_sqr() == 0.0 {
        return Err(Error::pole(z));
    }
    let u = 4.0 * z.im * w.im / denom.norm_sqr();
    let log_modulus = 0.5 * (-u).ln_1p();
    let arg = normalization(w).arg() + (z - w).arg() - denom.arg();
    Ok(FactorLog { log_modulus, arg })
}

/// `B(s, z)` for real `s`.
pub fn factor_modified(s: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    let l = log_factor_modified(s, z)?;
    Ok(from_log(l.log_modulus, l.arg))
}

pub fn log_factor_modified(s: f64, z: ComplexPoint) -> Result<FactorLog> {
    if !s.is_finite() {
        return Err(Error::invalid(format!("node s must be finite, got {s}")));
    }
    ensure_closed_upper(z, "evaluation point")?;
    let zero = Complex64::new(s, 1.0);
    let denom = z - zero.conj();
    if denom.norm_sqr() == 0.0 {
        return Err(Error::pole(z));
    }
    let q = s * s + 1.0;
    let u = 4.0 * z.im / denom.norm_sqr();
    let log_modulus = 0.5 * (-u).ln_1p() + 2.0 * z.im / q;
    let unit = Complex64::new(s, -1.0) / Complex64::new(s, 1.0);
    let arg = (z - zero).arg() - denom.arg() + unit.arg() - 2.0 * z.re / q;
    Ok(FactorLog { log_modulus, arg })
}

/// The branch of `log B(s, z)` given by the power series
/// `sum_{m>=2} (b^m - a^m)/m`, `a = z/(s+i)`, `b = z/(s-i)`, continuous from
/// `log B(s, 0) = 0`. Requires `|z| <= |s|/2`.
pub fn log_modified_series(s: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    ensure_finite(z, "evaluation point")?;
    if !(s.is_finite() && z.norm() <= s.abs() / 2.0) {
        return Err(Error::invalid(format!("series branch needs |z| <= |s|/2 (s = {s}, z = {z})")));
    }
    let a = z / Complex64::new(s, 1.0);
    let b = z / Complex64::new(s, -1.0);
    // a^m - b^m = (a - b) * sum_{j<m} a^j b^{m-1-j}; factoring out a - b avoids
    // cancellation when |a - b| << |a|.
    let diff = a - b;
    let mut sum = Complex64::new(0.0, 0.0);
    // h_{m-1} = sum_{j<m} a^j b^{m-1-j}, via h_m = a^m + b h_{m-1}
    let mut h = a + b;
    let mut a_pow = a;
    for m in 2..400 {
        let term = h / m as f64;
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        a_pow *= a;
        h = a_pow + b * h;
    }
    Ok(-(diff * sum))
}

/// Upper bounds on `log B(s, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFactorBounds {
    /// `C |z|^2 / |s|^3` bounding `|log B(s, z)|`, present when `|z| <= |s|/2`.
    pub small_z_bound: Option<f64>,
    /// `2 Im z / (s^2 + 1)` bounding `log |B(s, z)|`.
    pub vertical_bound: f64,
}

pub fn log_factor_bounds(s: f64, z: ComplexPoint) -> Result<LogFactorBounds> {
    if !(s.is_finite() && s.abs() > 1.0) {
        return Err(Error::invalid(format!("log factor bounds need |s| > 1, got {s}")));
    }
    ensure_closed_upper(z, "evaluation point")?;
    let small_z_bound =
        (z.norm() <= s.abs() / 2.0).then(|| SMALL_Z_CONSTANT * z.norm_sqr() / s.abs().powi(3));
    Ok(LogFactorBounds { small_z_bound, vertical_bound: 2.0 * z.im / (s * s + 1.0) })
}

fn from_log(log_modulus: f64, arg: f64) -> ComplexPoint {
    if log_modulus == f64::NEG_INFINITY {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(log_modulus.exp(), arg)
    }
}

/// Upper bound on the log-modulus of the omitted tail of a product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductValue {
    pub value: ComplexPoint,
    pub log_modulus: f64,
    /// Accumulated argument reduced to `[0, 2 pi)`.
    pub phase: f64,
    pub tail: TailBound,
    pub tail_certified: bool,
}

/// Evaluates the stored nodes of `cfg` at `z` and bounds the tail.
///
/// The tail is certified when `|log| of` the omitted factors' modulus is at
/// most `tail_tol`; otherwise `tail_certified` is false and the value is still
/// returned.
pub fn product_eval(cfg: &ProductConfig, z: ComplexPoint, tail_tol: f64) -> Result<ProductValue> {
    if tail_tol.is_nan() || tail_tol <= 0.0 {
        return Err(Error::invalid(format!("tail tolerance must be positive, got {tail_tol}")));
    }
    ensure_closed_upper(z, "evaluation point")?;
    let mut log_mod = CompensatedSum::default();
    let mut phase = 0.0;
    for node in &cfg.nodes {
        let l = node_log(cfg.kind, node.x, z)?;
        let k = node.k as f64;
        if l.log_modulus != 0.0 {
            log_mod.add(k * l.log_modulus);
        }
        phase = (phase + (k * l.arg).rem_euclid(TAU)).rem_euclid(TAU);
    }
    let log_modulus = log_mod.value();
    let tail = tail_bound(cfg, z);
    Ok(ProductValue {
        value: from_log(log_modulus, phase),
        log_modulus,
        phase,
        tail: TailBound { value: tail },
        tail_certified: tail.is_finite() && tail <= tail_tol,
    })
}

/// Log-modulus of the stored product only, skipping phases.
pub fn product_log_modulus(cfg: &ProductConfig, z: ComplexPoint) -> Result<f64> {
    ensure_closed_upper(z, "evaluation point")?;
    let mut acc = CompensatedSum::default();
    for node in &cfg.nodes {
        let l = node_log(cfg.kind, node.x, z)?;
        if l.log_modulus != 0.0 {
            acc.add(node.k as f64 * l.log_modulus);
        }
    }
    Ok(acc.value())
}

pub(crate) fn node_log(kind: FactorKind, x: f64, z: ComplexPoint) -> Result<FactorLog> {
    match kind {
        FactorKind::Normalized => log_factor_normalized(Complex64::new(x, 1.0), z),
        FactorKind::Modified => log_factor_modified(x, z),
    }
}

/// Tail majorant under the declared law; `INFINITY` when it cannot be certified.
fn tail_bound(cfg: &ProductConfig, z: ComplexPoint) -> f64 {
    let Some(p) = cfg.tail_exponent else {
        return 0.0;
    };
    let Some(last) = cfg.nodes.last() else {
        return f64::INFINITY;
    };
    let n = cfg.nodes.len() as i32;
    let next = last.x + 1.0;
    if next < 2.0 * z.norm() {
        return f64::INFINITY;
    }
    // per-node estimates valid for x_n >= 2|z|:
    //   NORMALIZED: -log|factor| <= 8 Im z / x_n^2
    //   MODIFIED:   |log B(x_n, z)| <= 8 |z|^2 / x_n^3
    let (coef, q) = match cfg.kind {
        FactorKind::Normalized => (8.0 * z.im, 2.0),
        FactorKind::Modified => (SMALL_Z_CONSTANT * z.norm_sqr(), 3.0),
    };
    if coef == 0.0 {
        return 0.0;
    }
    if p > q {
        return f64::INFINITY;
    }
    let geometric = (-(n as f64) * LN_2).exp();
    let power_tail = last.x.powf(1.0 - p) / (p - 1.0);
    coef * next.powf(p - q) * (geometric + power_tail)
}

/// `sum_n k_n / x_n^p` against its geometric majorant `sum_n (2^{-n} + x_n^{-p})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorantCertificate {
    pub exponent: f64,
    pub weighted_sum: f64,
    pub majorant: f64,
}

pub fn majorant_certificate(cfg: &ProductConfig, exponent: f64) -> MajorantCertificate {
    let mut sum = CompensatedSum::default();
    let mut maj = CompensatedSum::default();
    for (i, n) in cfg.nodes.iter().enumerate() {
        sum.add(n.k as f64 / n.x.powf(exponent));
        maj.add(0.5f64.powi(i as i32 + 1) + n.x.powf(-exponent));
    }
    MajorantCertificate { exponent, weighted_sum: sum.value(), majorant: maj.value() }
}

/// Nodes `x_n + i` with `k_n >= rho(x_n) x_n^2` and a summable `k_n / x_n^2`.
pub fn construct_prop23(rho: &RateFunction, n_terms: usize, cap: f64) -> Result<ProductConfig> {
    construct(rho, FactorKind::Normalized, 2.0, n_terms, cap)
}

/// Nodes `t_n` with `k_n >= rho(t_n) t_n^{beta+1}` and a summable `k_n / t_n^{beta+1}`.
pub fn construct_prop25(rho: &RateFunction, beta: f64, n_terms: usize, cap: f64) -> Result<ProductConfig> {
    validate_beta(beta)?;
    construct(rho, FactorKind::Modified, beta + 1.0, n_terms, cap)
}

fn construct(
    rho: &RateFunction,
    kind: FactorKind,
    exponent: f64,
    n_terms: usize,
    cap: f64,
) -> Result<ProductConfig> {
    if n_terms == 0 {
        return Err(Error::invalid("n_terms must be at least 1"));
    }
    if !(cap.is_finite() && cap >= 1.0) {
        return Err(Error::invalid(format!("abscissa cap must be finite and >= 1, got {cap}")));
    }
    let mut nodes = Vec::with_capacity(n_terms);
    let mut start = 1.0f64;
    for n in 1..=n_terms {
        let target = 0.5f64.powi(n as i32);
        let x = find_node(rho, start, target, cap)?.ok_or_else(|| {
            Error::Construction(format!(
                "rate function decays too slowly to locate node {n}: no x in [{start}, {cap}] with rho(x) <= {target}"
            ))
        })?;
        let scaled = rho.eval(x)? * x.powf(exponent);
        let k = (scaled.ceil() as u128).max(1);
        nodes.push(ProductNode { x, k });
        start = x + 1.0;
    }
    let cfg = ProductConfig { kind, nodes, tail_exponent: Some(exponent) };
    cfg.validate()?;
    Ok(cfg)
}

/// Smallest integer `x` in `[start, cap]` with `rho(x) <= target`.
fn find_node(rho: &RateFunction, start: f64, target: f64, cap: f64) -> Result<Option<f64>> {
    let start = start.ceil();
    let cap = cap.floor();
    if start > cap {
        return Ok(None);
    }
    let hits = |x: f64| -> Result<bool> { Ok(rho.eval(x)? <= target) };
    if !rho.monotone {
        let mut x = start;
        while x <= cap {
            if hits(x)? {
                return Ok(Some(x));
            }
            x += 1.0;
        }
        return Ok(None);
    }
    if hits(start)? {
        return Ok(Some(start));
    }
    // galloping then bisection; `lo` always misses, `hi` always hits
    let mut lo = start;
    let mut step = 1.0;
    let hi = loop {
        let probe = (lo + step).min(cap);
        if hits(probe)? {
            break probe;
        }
        if probe >= cap {
            return Ok(None);
        }
        lo = probe;
        step *= 2.0;
    };
    let mut hi = hi;
    while hi - lo > 1.0 {
        let mid = (lo + ((hi - lo) / 2.0).floor()).max(lo + 1.0);
        if hits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// `G(z) = exp(c (z + i)^beta)` with the logarithm of `z + i` taken on the
/// branch that is real on the imaginary semi-axis, i.e. `(z+i)^beta = (1 - iz)^beta`
/// with the principal power. `|G(x)| <= e^c` on the real line.
pub fn growth_multiplier(c_mult: f64, beta: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    let e = growth_multiplier_exponent(c_mult, beta, z)?;
    Ok(e.exp())
}

/// `log G(z) = c (1 - iz)^beta`.
pub fn growth_multiplier_exponent(c_mult: f64, beta: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    if !(c_mult.is_finite() && c_mult >= 0.0) {
        return Err(Error::invalid(format!("multiplier constant must be finite and >= 0, got {c_mult}")));
    }
    validate_beta(beta)?;
    ensure_closed_upper(z, "evaluation point")?;
    if c_mult == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let w = Complex64::new(1.0 + z.im, -z.re);
    Ok(c_mult * w.powf(beta))
}

/// Result of [`calibrate_multiplier`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierCalibration {
    pub c_mult: f64,
    /// `max_z [log |F G|(z) - c (1 + Im z)^beta]` over the samples.
    pub excess: f64,
}

/// Sampled excess of `log |F G_c|` over `c (1 + Im z)^beta`.
pub fn multiplier_excess(cfg: &ProductConfig, beta: f64, c_mult: f64, samples: &[ComplexPoint]) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for &z in samples {
        let log_g = growth_multiplier_exponent(c_mult, beta, z)?.re;
        let log_f = product_log_modulus(cfg, z)?;
        worst = worst.max(log_f + log_g - c_mult * (1.0 + z.im).powf(beta));
    }
    Ok(worst)
}

/// Smallest candidate `c` (in the given order) whose sampled excess is at most
/// `budget`. This is a desk-scale calibration, not the existential constant.
pub fn calibrate_multiplier(
    cfg: &ProductConfig,
    beta: f64,
    samples: &[ComplexPoint],
    candidates: &[f64],
    budget: f64,
) -> Result<Option<MultiplierCalibration>> {
    let mut sorted = candidates.to_vec();
    sorted.sort_by(f64::total_cmp);
    for c in sorted {
        let excess = multiplier_excess(cfg, beta, c, samples)?;
        if excess <= budget {
            return Ok(Some(MultiplierCalibration { c_mult: c, excess }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalized_factor_examples() {
        let w = c(1.0, 1.0);
        assert!((factor_normalized(w, c(1.0, 0.0)).unwrap().norm() - 1.0).abs() < 1e-12);
        assert_eq!(factor_normalized(w, w).unwrap().norm(), 0.0);
        for xn in [1.0, 7.0, 1234.5] {
            let v = factor_normalized(c(xn, 1.0), c(xn, 0.5)).unwrap();
            assert_relative_eq!(v.norm(), 1.0 / 3.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn normalized_factor_matches_direct_formula() {
        let w = c(2.5, 1.0);
        let z = c(-0.7, 0.3);
        let q = w * w + 1.0;
        let direct = (q.norm() / q) * (z - w) / (z - w.conj());
        let v = factor_normalized(w, z).unwrap();
        assert!((v - direct).norm() < 1e-14);
    }

    #[test]
    fn modified_factor_examples() {
        for x in [-50.0, 0.0, 3.3, 10.0, 1e4] {
            assert!((factor_modified(10.0, c(x, 0.0)).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        // (1/3) * 1 * e^{2 (1/2) / 101}
        let expected = (1.0 / 3.0) * (1.0f64 / 101.0).exp();
        let v = factor_modified(10.0, c(10.0, 0.5)).unwrap();
        assert_relative_eq!(v.norm(), expected, max_relative = 1e-14);
        assert!((v.norm() - 0.336650).abs() < 1e-6);
        assert_eq!(factor_modified(10.0, c(10.0, 1.0)).unwrap().norm(), 0.0);
    }

    #[test]
    fn modified_factor_matches_direct_formula() {
        let s = 4.0;
        let z = c(1.3, 0.6);
        let direct = (z - s - I) / (z - s + I) * (c(s, -1.0) / c(s, 1.0)) * (-2.0 * I * z / (s * s + 1.0)).exp();
        assert!((factor_modified(s, z).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn series_branch_agrees_with_principal_log() {
        let s = 100.0;
        let z = c(10.0, 10.0);
        let series = log_modified_series(s, z).unwrap();
        let direct = factor_modified(s, z).unwrap().ln();
        assert!((series - direct).norm() < 1e-13);
        assert!(series.norm() <= SMALL_Z_CONSTANT * z.norm_sqr() / s.powi(3));
    }

    #[test]
    fn bound_examples() {
        let b = log_factor_bounds(10.0, I).unwrap();
        assert_eq!(b.vertical_bound, 2.0 / 101.0);
        assert!(b.small_z_bound.is_some());
        let b = log_factor_bounds(10.0, c(0.0, 20.0)).unwrap();
        assert!(b.small_z_bound.is_none());
        assert!(log_factor_bounds(1.0, I).is_err());
    }

    #[test]
    fn empty_product_is_one() {
        let cfg = ProductConfig::empty(FactorKind::Normalized);
        let v = product_eval(&cfg, c(3.0, 0.7), 1e-6).unwrap();
        assert_eq!(v.value, c(1.0, 0.0));
        assert_eq!(v.tail.value, 0.0);
        assert!(v.tail_certified);
    }

    #[test]
    fn single_modified_node_is_factor_power() {
        let cfg = ProductConfig::new(FactorKind::Modified, vec![ProductNode { x: 10.0, k: 2 }]).unwrap();
        let z = c(0.0, 5.0);
        let v = product_eval(&cfg, z, 1.0).unwrap().value;
        let f = factor_modified(10.0, z).unwrap();
        assert!((v - f * f).norm() < 1e-12);
    }

    #[test]
    fn truncation_consistency() {
        let cfg = ProductConfig::new(
            FactorKind::Normalized,
            vec![ProductNode { x: 1.0, k: 1 }, ProductNode { x: 3.0, k: 2 }, ProductNode { x: 8.0, k: 3 }],
        )
        .unwrap();
        let z = c(2.2, 0.4);
        let full = product_eval(&cfg, z, 1.0).unwrap().value;
        let head = product_eval(&cfg.truncated(2), z, 1.0).unwrap().value;
        let last = factor_normalized(c(8.0, 1.0), z).unwrap();
        assert!((full - head * last.powu(3)).norm() < 1e-13);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ProductConfig::new(FactorKind::Normalized, vec![ProductNode { x: 0.5, k: 1 }]).is_err());
        assert!(ProductConfig::new(
            FactorKind::Normalized,
            vec![ProductNode { x: 2.0, k: 1 }, ProductNode { x: 2.0, k: 1 }]
        )
        .is_err());
        assert!(ProductConfig::new(FactorKind::Modified, vec![ProductNode { x: 2.0, k: 0 }]).is_err());
        let cfg = ProductConfig::empty(FactorKind::Normalized);
        assert!(product_eval(&cfg, c(0.0, -1.0), 1.0).is_err());
    }

    #[test]
    fn construct_prop23_reciprocal_linear() {
        let rho = RateFunction::reciprocal_power(1.0).unwrap();
        let cfg = construct_prop23(&rho, 3, DEFAULT_ABSCISSA_CAP).unwrap();
        let got: Vec<(f64, u128)> = cfg.nodes.iter().map(|n| (n.x, n.k)).collect();
        assert_eq!(got, vec![(1.0, 1), (3.0, 3), (7.0, 7)]);
        assert_eq!(cfg.kind, FactorKind::Normalized);
    }

    #[test]
    fn construct_prop23_constant_rate_fails() {
        let rho = RateFunction::constant(1.0).unwrap();
        let err = construct_prop23(&rho, 1, 1e6).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
        assert!(err.to_string().contains("decays too slowly"));
    }

    #[test]
    fn construct_prop25_reciprocal_linear() {
        let rho = RateFunction::reciprocal_power(1.0).unwrap();
        let cfg = construct_prop25(&rho, 1.5, 2, DEFAULT_ABSCISSA_CAP).unwrap();
        let got: Vec<(f64, u128)> = cfg.nodes.iter().map(|n| (n.x, n.k)).collect();
        assert_eq!(got, vec![(1.0, 1), (3.0, 4)]);
        assert!(construct_prop25(&rho, 2.0, 2, 1e6).is_err());
    }

    #[test]
    fn monotone_and_linear_search_agree() {
        let monotone = RateFunction::table(vec![(0.0, 1.0), (40.0, 0.01)]).unwrap();
        let mut flat = monotone.clone();
        flat.monotone = false;
        let a = construct_prop23(&monotone, 5, 1e4).unwrap();
        let b = construct_prop23(&flat, 5, 1e4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn multiplier_branch() {
        let beta = 1.5;
        // real and positive on the imaginary semi-axis: (1 - i*i)^beta = 2^beta
        let g = growth_multiplier(0.7, beta, I).unwrap();
        assert_relative_eq!(g.re, (0.7 * 2f64.powf(beta)).exp(), max_relative = 1e-14);
        assert!(g.im.abs() < 1e-12 * g.re);
        assert_eq!(growth_multiplier(0.0, beta, c(3.0, 2.0)).unwrap(), c(1.0, 0.0));
        for x in [-1e4, -10.0, 0.0, 10.0, 1e4] {
            let g = growth_multiplier(2.0, beta, c(x, 0.0)).unwrap();
            assert!(g.norm() <= 2f64.exp() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn tail_bound_is_finite_for_constructed_configs() {
        let rho = RateFunction::reciprocal_power(1.0).unwrap();
        let cfg = construct_prop23(&rho, 6, 1e6).unwrap();
        let v = product_eval(&cfg, c(0.5, 0.5), 1.0).unwrap();
        assert!(v.tail.value.is_finite());
        assert!(v.tail_certified);
        // far beyond the last node the law cannot be applied
        let v = product_eval(&cfg, c(1e6, 0.5), 1.0).unwrap();
        assert!(!v.tail_certified);
    }
}
