//! Adaptive Gauss-Kronrod (7/15) quadrature by bisection.
//!
//! The panel with the largest error estimate is bisected until the total
//! estimate meets the absolute tolerance. Ties are broken by position and the
//! panel values are combined in order with a pairwise sum, so results are
//! reproducible bit-for-bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::pairwise_sum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerance and limits shared by all integral routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Absolute tolerance for the whole integral.
    pub tol: f64,
    /// Maximum number of panel bisections.
    pub max_subdiv: usize,
    /// Radius beyond which infinite tails are handled separately.
    pub tail_radius: f64,
    /// Partial integrals above this value count as divergent.
    #[serde(default = "default_divergence")]
    pub divergence_threshold: f64,
    /// `|f|` values below this floor are clipped when taking logarithms.
    #[serde(default = "default_floor")]
    pub modulus_floor: f64,
}

fn default_divergence() -> f64 {
    1e8
}

fn default_floor() -> f64 {
    1e-300
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            tol: 1e-8,
            max_subdiv: 20_000,
            tail_radius: 1e6,
            divergence_threshold: default_divergence(),
            modulus_floor: default_floor(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(tol: f64) -> Self {
        QuadratureSpec { tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::invalid(format!("quadrature tolerance must be positive, got {}", self.tol)));
        }
        if self.max_subdiv == 0 {
            return Err(Error::invalid("max_subdiv must be positive"));
        }
        if !(self.tail_radius.is_finite() && self.tail_radius > 0.0) {
            return Err(Error::invalid("tail radius must be finite and positive"));
        }
        if !(self.modulus_floor > 0.0 && self.modulus_floor < 1.0) {
            return Err(Error::invalid("modulus floor must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Value, error estimate and diagnostic flags of an integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub flags: Vec<String>,
}

impl QuadResult {
    pub fn exact(value: f64) -> Self {
        QuadResult { value, error_estimate: 0.0, flags: Vec::new() }
    }

    pub fn flag(&mut self, f: impl Into<String>) {
        let f = f.into();
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
    }

    pub fn add(&mut self, other: &QuadResult) {
        self.value += other.value;
        self.error_estimate += other.error_estimate;
        for f in &other.flags {
            self.flag(f.clone());
        }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.value *= s;
        self.error_estimate *= s.abs();
        self
    }
}

struct Panel {
    value: f64,
    error: f64,
    abs_value: f64,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += w * (f1 + f2);
        abs_k += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Panel { value: kron * half, error: ((kron - gauss) * half).abs(), abs_value: abs_k * half.abs() }
}

#[derive(Clone, Copy)]
struct Live {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Live {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Live {}

impl PartialOrd for Live {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Live {
    // largest error first; ties broken by position so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn live(a: f64, b: f64, p: Panel) -> Live {
    Live { a, b, value: p.value, error: p.error, abs_value: p.abs_value }
}

/// Integrates `f` over the finite interval `[a, b]` to absolute tolerance `tol`.
///
/// Globally adaptive: the panel with the largest error estimate is bisected
/// until the summed estimate meets `tol`. Fails with [`Error::Quadrature`] when
/// the subdivision budget is exhausted or the integrand is not finite.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, max_subdiv: usize) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("integration bounds must be finite: [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult::exact(0.0));
    }
    if b < a {
        return integrate(f, b, a, tol, max_subdiv).map(|r| r.scaled(-1.0));
    }
    let nonfinite = || Error::Quadrature { a, b, error: f64::INFINITY };
    let first = kronrod(&mut f, a, b);
    if !first.value.is_finite() {
        return Err(nonfinite());
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Live> = Vec::new();
    let mut error = first.error;
    let mut roundoff_limited = false;
    heap.push(live(a, b, first));
    let mut used = 0;
    while error > tol {
        let Some(p) = heap.pop() else { break };
        let mid = 0.5 * (p.a + p.b);
        let unsplittable = mid <= p.a || mid >= p.b;
        if unsplittable || p.error <= 50.0 * f64::EPSILON * p.abs_value {
            roundoff_limited = true;
            done.push(p);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if used >= max_subdiv {
            heap.push(p);
            break;
        }
        used += 1;
        let left = kronrod(&mut f, p.a, mid);
        let right = kronrod(&mut f, mid, p.b);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(nonfinite());
        }
        error += left.error + right.error - p.error;
        heap.push(live(p.a, mid, left));
        heap.push(live(mid, p.b, right));
        if error <= tol || used % 256 == 0 {
            // refresh the running sum to avoid drift from cancellation
            error = heap.iter().chain(done.iter()).map(|p| p.error).sum();
        }
    }
    let mut panels: Vec<Live> = heap.into_vec();
    panels.extend(done);
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    let value = pairwise_sum(&values);
    let error: f64 = panels.iter().map(|p| p.error).sum();
    let roundoff: f64 = panels.iter().map(|p| 50.0 * f64::EPSILON * p.abs_value).sum();
    if !value.is_finite() {
        return Err(nonfinite());
    }
    if error > tol.max(roundoff) {
        return Err(Error::Quadrature { a, b, error });
    }
    let mut r = QuadResult { value, error_estimate: error, flags: Vec::new() };
    if roundoff_limited && error > tol {
        r.flag("roundoff_limited");
    }
    Ok(r)
}

/// Like [`integrate`] but returns the best estimate with a flag instead of
/// failing when the budget runs out.
pub fn integrate_lenient<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_subdiv: usize) -> Result<QuadResult> {
    let mut f = f;
    match integrate(&mut f, a, b, tol, max_subdiv) {
        Ok(r) => Ok(r),
        Err(Error::Quadrature { error, .. }) if error.is_finite() => {
            let mut r = integrate(&mut f, a, b, error.max(tol) * 4.0, max_subdiv)?;
            r.flag("tolerance_not_met");
            Ok(r)
        }
        Err(e) => Err(e),
    }
}

/// Integrates over a union of consecutive intervals `breaks[0]..breaks[n]`,
/// splitting `tol` in proportion to width.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: f64, max_subdiv: usize) -> Result<QuadResult> {
    let total = (breaks[breaks.len() - 1] - breaks[0]).abs();
    let mut acc = QuadResult::exact(0.0);
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let share = if total > 0.0 { tol * (w[1] - w[0]).abs() / total } else { tol };
        let r = integrate(&mut f, w[0], w[1], share, max_subdiv)?;
        acc.add(&r);
    }
    Ok(acc)
}
