//! Integral machinery: Poisson integrals of boundary log-moduli, the
//! uniqueness integral along the strip midline, the Harnack step and the
//! Carleman functional for the half-plane `Im z >= 1/2`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::ComplexPoint;
use crate::error::{Error, Result};
use crate::model::FunctionModel;
use crate::quadrature::{integrate, integrate_breaks, QuadResult, QuadratureSpec};
use crate::zeros::ZeroSet;
use crate::HARNACK_FACTOR;

/// Growth class of a boundary log-modulus `t -> log |f(t)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum DecayClass {
    /// `|log |f(t)|| <= bound`.
    Bounded { bound: f64 },
    /// `|log |f(t)|| <= bound (1 + |t|)^power`.
    Polynomial { bound: f64, power: f64 },
}

impl DecayClass {
    /// `O(|t|)` data.
    pub fn linear(bound: f64) -> Self {
        DecayClass::Polynomial { bound, power: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DecayClass::Bounded { bound } if bound.is_finite() && bound >= 0.0 => Ok(()),
            DecayClass::Polynomial { bound, power } if bound.is_finite() && bound >= 0.0 && power.is_finite() => {
                if power >= 2.0 {
                    Err(Error::NonIntegrable(format!(
                        "boundary data of order |t|^{power} is at least quadratic"
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Err(Error::invalid(format!("invalid decay class {self:?}"))),
        }
    }

    /// Analytic bound on the Poisson mass of `|t - x| >= radius` at height `y`.
    fn poisson_tail_bound(&self, x: f64, y: f64, radius: f64) -> f64 {
        match *self {
            DecayClass::Bounded { bound } => 2.0 * bound / PI * (y / radius).atan(),
            DecayClass::Polynomial { bound, power } if power < 1.0 => {
                let spread = (1.0 + (1.0 + x.abs()) / radius).powf(power.max(0.0));
                2.0 * bound * spread * y / PI * radius.powf(power - 1.0) / (1.0 - power)
            }
            DecayClass::Polynomial { .. } => f64::INFINITY,
        }
    }

    /// Bound on `int_{|t| >= radius} |log |f(t)|| / (1 + t^2) dt`.
    pub fn weighted_tail_bound(&self, radius: f64) -> f64 {
        match *self {
            DecayClass::Bounded { bound } => 2.0 * bound * (1.0 / radius).atan(),
            DecayClass::Polynomial { bound, power } if power < 1.0 && radius >= 1.0 => {
                2.0 * bound * 2f64.powf(power.max(0.0)) * radius.powf(power - 1.0) / (1.0 - power)
            }
            DecayClass::Polynomial { .. } => f64::INFINITY,
        }
    }
}

type LogModulusFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Boundary log-modulus `t -> log |f(t)|` together with its declared class.
#[derive(Clone)]
pub struct BoundaryModulus {
    log_modulus: Arc<LogModulusFn>,
    pub class: DecayClass,
}

impl fmt::Debug for BoundaryModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryModulus").field("class", &self.class).finish_non_exhaustive()
    }
}

impl BoundaryModulus {
    pub fn new<F>(class: DecayClass, log_modulus: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        BoundaryModulus { log_modulus: Arc::new(log_modulus), class }
    }

    /// `log |f(t)| == 0`.
    pub fn zero() -> Self {
        Self::new(DecayClass::Bounded { bound: 0.0 }, |_| 0.0)
    }

    /// Boundary values of a model on the real axis.
    pub fn from_model(model: FunctionModel, class: DecayClass) -> Self {
        Self::new(class, move |t| model.log_abs(Complex64::new(t, 0.0)).unwrap_or(f64::NAN))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.log_modulus)(t)
    }
}

/// Ingredients of `f(z) = e^{iaz} B(z) F(z)`: the exponential rate, the zeros
/// of the Blaschke part and the boundary modulus of the outer part.
#[derive(Debug, Clone)]
pub struct NevanlinnaParts {
    pub a: f64,
    pub zeros: ZeroSet,
    pub boundary: BoundaryModulus,
}

impl NevanlinnaParts {
    pub fn new(a: f64, zeros: ZeroSet, boundary: BoundaryModulus) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::invalid(format!("exponential rate a must be finite and >= 0, got {a}")));
        }
        Ok(NevanlinnaParts { a, zeros, boundary })
    }
}

/// Poisson integral `(y/pi) int log|f(t)| / ((x - t)^2 + y^2) dt`, the
/// log-modulus at `x + iy` of the outer function with boundary data `bm`.
///
/// Computed as `(1/pi) int_{-pi/2}^{pi/2} bm(x + y tan th) dth`. The part with
/// `|t - x|` beyond the tail radius is bounded analytically from the decay
/// class when that bound fits in half the tolerance, and integrated otherwise.
/// Growth of order `|t|^p` with `p >= 1` makes the kernel integral diverge
/// (logarithmically at `p = 1`), which is reported as non-integrable.
pub fn poisson_outer(bm: &BoundaryModulus, x: f64, y: f64, q: &QuadratureSpec) -> Result<QuadResult> {
    q.validate()?;
    bm.class.validate()?;
    if !x.is_finite() || !(y.is_finite() && y > 0.0) {
        return Err(Error::invalid(format!("Poisson integral needs finite x and y > 0, got ({x}, {y})")));
    }
    let integrand = |th: f64| bm.eval(x + y * th.tan());
    let theta_r = (q.tail_radius / y).atan();
    let tail = bm.class.poisson_tail_bound(x, y, q.tail_radius);

    if tail.is_infinite() {
        return Err(Error::NonIntegrable(format!(
            "boundary data of class {:?} has a divergent Poisson integral",
            bm.class
        )));
    }
    let mut result = integrate(integrand, -theta_r, theta_r, 0.5 * q.tol * PI, q.max_subdiv)?;
    if tail <= 0.5 * q.tol {
        result.error_estimate += tail * PI;
    } else {
        for (a, b) in [(theta_r, FRAC_PI_2), (-FRAC_PI_2, -theta_r)] {
            let piece = integrate(integrand, a, b, 0.25 * q.tol * PI, q.max_subdiv).map_err(|e| match e {
                Error::Quadrature { error, .. } => Error::NonIntegrable(format!(
                    "Poisson tail beyond |t - x| = {} does not converge (error estimate {error:e})",
                    q.tail_radius
                )),
                other => other,
            })?;
            result.add(&piece);
        }
    }
    Ok(result.scaled(1.0 / PI))
}

/// Outcome of [`uniqueness_integral`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UniquenessOutcome {
    Finite(QuadResult),
    Divergent { partial: f64, radius: f64 },
}

impl UniquenessOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            UniquenessOutcome::Finite(r) => Some(r.value),
            UniquenessOutcome::Divergent { .. } => None,
        }
    }
}

/// `int log(1/|f(y + i/2)|) dy / (1 + y^2)` over the real line, given the
/// integrand's numerator `line_log_inverse_modulus(y)`.
///
/// Partial integrals over `|y| <= 2^j` are accumulated shell by shell up to the
/// tail radius. The integral is declared divergent when a partial integral
/// passes the divergence threshold, when the last shells stop shrinking, or
/// when the remaining tail cannot be integrated.
pub fn uniqueness_integral<G>(line_log_inverse_modulus: G, q: &QuadratureSpec) -> Result<UniquenessOutcome>
where
    G: Fn(f64) -> f64,
{
    q.validate()?;
    let g = |th: f64| line_log_inverse_modulus(th.tan());
    let shells = (q.tail_radius.max(2.0).log2().ceil() as usize).max(1);
    let piece_tol = q.tol / (2.0 * shells as f64 + 4.0);

    let mut total = integrate(g, -FRAC_PI_2 / 2.0, FRAC_PI_2 / 2.0, piece_tol, q.max_subdiv)?;
    let mut increments = Vec::with_capacity(shells);
    let mut inner = 1.0f64;
    for _ in 0..shells {
        let outer = inner * 2.0;
        let (a, b) = (inner.atan(), outer.atan());
        let mut shell = integrate(g, a, b, piece_tol, q.max_subdiv)?;
        shell.add(&integrate(g, -b, -a, piece_tol, q.max_subdiv)?);
        increments.push(shell.value);
        total.add(&shell);
        inner = outer;
        if total.value > q.divergence_threshold {
            return Ok(UniquenessOutcome::Divergent { partial: total.value, radius: inner });
        }
    }
    if stalled(&increments) {
        return Ok(UniquenessOutcome::Divergent { partial: total.value, radius: inner });
    }
    let a = inner.atan();
    for (lo, hi) in [(a, FRAC_PI_2), (-FRAC_PI_2, -a)] {
        match integrate(g, lo, hi, piece_tol, q.max_subdiv) {
            Ok(piece) => total.add(&piece),
            Err(Error::Quadrature { .. }) => {
                return Ok(UniquenessOutcome::Divergent { partial: total.value, radius: inner });
            }
            Err(e) => return Err(e),
        }
    }
    if total.value > q.divergence_threshold {
        return Ok(UniquenessOutcome::Divergent { partial: total.value, radius: f64::INFINITY });
    }
    Ok(UniquenessOutcome::Finite(total))
}

/// The last shells of a convergent integral shrink roughly geometrically; a
/// run of non-shrinking positive shells signals at least logarithmic divergence.
fn stalled(increments: &[f64]) -> bool {
    const RUN: usize = 6;
    if increments.len() < RUN + 1 {
        return false;
    }
    let tail = &increments[increments.len() - RUN - 1..];
    tail.iter().all(|&v| v > 1e-12) && tail.windows(2).all(|w| w[1] >= 0.9 * w[0])
}

/// [`uniqueness_integral`] for `log(1/|f(y + i/2)|)` of a model.
pub fn uniqueness_integral_model(f: &FunctionModel, q: &QuadratureSpec) -> Result<UniquenessOutcome> {
    let floor = q.modulus_floor.ln();
    uniqueness_integral(|y| -f.log_abs(Complex64::new(y, 0.5)).unwrap_or(f64::NAN).max(floor), q)
}

/// Harnack lower bound `G(x + t + i/2) >= c_1 G(x + i/2)` for `|t| <= 1/4`
/// and positive harmonic `G` on the strip, with `c_1 = 1/3` from the disk of
/// radius 1/2.
pub fn harnack_lower(center_value: f64) -> Result<f64> {
    if !(center_value.is_finite() && center_value >= 0.0) {
        return Err(Error::invalid(format!("Harnack center value must be finite and >= 0, got {center_value}")));
    }
    Ok(HARNACK_FACTOR * center_value)
}

/// The three terms of the Carleman formula in `Im z >= 1/2` at radius `r`,
/// with coordinates `w = z - i/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlemanTerms {
    pub r: f64,
    /// `(1/(pi r)) int_0^pi log|f(r e^{ith} + i/2)| sin th dth`.
    pub arc_term: f64,
    /// `(1/(2 pi)) int_1^r (1/x^2 - 1/r^2) log|f(x + i/2) f(-x + i/2)| dx`.
    pub boundary_term: f64,
    /// `sum mult (1/|w| - |w|/r^2) sin(arg w)` over zeros with `1 < |w| < r`.
    pub zero_term: f64,
    /// `zero_term - arc_term - boundary_term`; bounded in `r`.
    pub residual: f64,
    pub error_estimate: f64,
    pub flags: Vec<String>,
}

fn clipped_log_abs(f: &FunctionModel, z: ComplexPoint, floor: f64, clipped: &mut bool) -> f64 {
    match f.log_abs(z) {
        Ok(v) if v.is_nan() => f64::NAN,
        Ok(v) if v < floor => {
            *clipped = true;
            floor
        }
        Ok(v) => v,
        Err(_) => f64::NAN,
    }
}

pub fn carleman_functional(f: &FunctionModel, r: f64, q: &QuadratureSpec) -> Result<CarlemanTerms> {
    q.validate()?;
    if !(r.is_finite() && r > 1.0) {
        return Err(Error::invalid(format!("Carleman radius must exceed 1, got {r}")));
    }
    let shift = Complex64::new(0.0, 0.5);
    let zeros: Vec<(Complex64, f64)> =
        f.zeros_in_closed_upper().iter().map(|e| (e.position - shift, e.multiplicity as f64)).collect();

    let contour_eps = 1e-9 * r;
    for &(w, _) in &zeros {
        let rho = w.norm();
        let on_arcs = w.im >= 0.0 && ((rho - r).abs() < contour_eps || (rho - 1.0).abs() < 1e-9);
        let on_segment = w.im.abs() < 1e-12 && (1.0..=r).contains(&w.re.abs());
        if on_arcs || on_segment {
            let z = w + shift;
            return Err(Error::ZeroOnContour { re: z.re, im: z.im });
        }
    }

    let floor = q.modulus_floor.ln();
    let mut clipped = false;

    let mut arc_breaks = vec![0.0, PI];
    for &(w, _) in &zeros {
        if w.im > 0.0 && (w.norm() - r).abs() < 0.25 * r {
            arc_breaks.push(w.arg());
        }
    }
    arc_breaks.sort_by(f64::total_cmp);
    let arc = integrate_breaks(
        |th: f64| {
            let z = Complex64::from_polar(r, th) + shift;
            clipped_log_abs(f, z, floor, &mut clipped) * th.sin()
        },
        &arc_breaks,
        0.5 * q.tol * PI * r,
        q.max_subdiv,
    )?
    .scaled(1.0 / (PI * r));

    let mut seg_breaks = vec![1.0, r];
    for &(w, _) in &zeros {
        if w.re.abs() > 1.0 && w.re.abs() < r && w.im < 1.0 {
            seg_breaks.push(w.re.abs());
        }
    }
    seg_breaks.sort_by(f64::total_cmp);
    seg_breaks.dedup();
    let inv_r2 = 1.0 / (r * r);
    let boundary = integrate_breaks(
        |x: f64| {
            let l = clipped_log_abs(f, Complex64::new(x, 0.5), floor, &mut clipped)
                + clipped_log_abs(f, Complex64::new(-x, 0.5), floor, &mut clipped);
            (1.0 / (x * x) - inv_r2) * l
        },
        &seg_breaks,
        0.5 * q.tol * 2.0 * PI,
        q.max_subdiv,
    )?
    .scaled(1.0 / (2.0 * PI));

    let zero_term: f64 = zeros
        .iter()
        .filter(|(w, _)| w.im > 0.0 && w.norm() > 1.0 && w.norm() < r)
        .map(|&(w, m)| {
            let rho = w.norm();
            m * (1.0 / rho - rho * inv_r2) * (w.im / rho)
        })
        .sum();

    let mut flags = arc.flags.clone();
    flags.extend(boundary.flags.iter().cloned());
    if clipped {
        flags.push("clipped_at_floor".to_string());
    }
    Ok(CarlemanTerms {
        r,
        arc_term: arc.value,
        boundary_term: boundary.value,
        zero_term,
        residual: zero_term - arc.value - boundary.value,
        error_estimate: arc.error_estimate + boundary.error_estimate,
        flags,
    })
}

/// Normalized deficiency `(1/r^2) int_{r/3}^{2r/3} log^-|f(x + i/2)| dx / r^{beta - 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deficiency {
    pub r: f64,
    pub beta: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub flags: Vec<String>,
}

pub fn carleman_deficiency(f: &FunctionModel, r: f64, beta: f64, q: &QuadratureSpec) -> Result<Deficiency> {
    q.validate()?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("deficiency radius must be positive, got {r}")));
    }
    if !beta.is_finite() {
        return Err(Error::invalid("beta must be finite"));
    }
    let scale = r * r * r.powf(beta - 1.0);
    let floor = q.modulus_floor.ln();
    let mut clipped = false;
    let (a, b) = (r / 3.0, 2.0 * r / 3.0);
    let mut breaks = vec![a, b];
    for e in f.zeros_in_closed_upper() {
        if e.position.re > a && e.position.re < b {
            breaks.push(e.position.re);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let raw = integrate_breaks(
        |x: f64| (-clipped_log_abs(f, Complex64::new(x, 0.5), floor, &mut clipped)).max(0.0),
        &breaks,
        q.tol * scale,
        q.max_subdiv,
    )?;
    let mut out = raw.scaled(1.0 / scale);
    if clipped {
        out.flag("clipped_at_floor");
    }
    Ok(Deficiency { r, beta, value: out.value, error_estimate: out.error_estimate, flags: out.flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn outer_example() -> FunctionModel {
        FunctionModel::rational(c(1.0, 0.0), &[c(0.0, -2.0)], &[c(0.0, -1.0)])
    }

    #[test]
    fn poisson_of_zero_data() {
        let r = poisson_outer(&BoundaryModulus::zero(), 3.0, 0.5, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn poisson_reproduces_outer_function() {
        let bm = BoundaryModulus::from_model(outer_example(), DecayClass::Bounded { bound: 2f64.ln() });
        let r = poisson_outer(&bm, 0.0, 0.5, &QuadratureSpec::with_tol(1e-10)).unwrap();
        assert!((r.value - (2.5f64 / 1.5).ln()).abs() < 1e-9, "{}", r.value);
        assert!((r.value - 0.5108).abs() < 1e-4);
    }

    #[test]
    fn exponential_factor_is_invisible_to_poisson() {
        // e^{iaz} has |f| = 1 on R, so its boundary data vanish although |f(x + iy)| = e^{-ay}
        let bm = BoundaryModulus::from_model(FunctionModel::exp_iaz(1.0), DecayClass::Bounded { bound: 0.0 });
        let r = poisson_outer(&bm, 2.0, 0.5, &QuadratureSpec::default()).unwrap();
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn poisson_rejects_quadratic_and_divergent_data() {
        let q = QuadratureSpec::default();
        let quad = BoundaryModulus::new(DecayClass::Polynomial { bound: 1.0, power: 2.0 }, |t| -t * t);
        assert!(matches!(poisson_outer(&quad, 0.0, 0.5, &q), Err(Error::NonIntegrable(_))));
        let linear = BoundaryModulus::new(DecayClass::linear(0.1), |t: f64| -t.abs() / 10.0);
        assert!(matches!(poisson_outer(&linear, 0.0, 0.5, &q), Err(Error::NonIntegrable(_))));
    }

    #[test]
    fn poisson_of_sublinear_data_with_analytic_tail() {
        // log|f(t)| = -(1 + t^2)^{1/4}; class |t|^{1/2}
        let bm = BoundaryModulus::new(DecayClass::Polynomial { bound: 1.0, power: 0.5 }, |t: f64| {
            -(1.0 + t * t).powf(0.25)
        });
        let q = QuadratureSpec { tol: 1e-6, tail_radius: 1e14, ..QuadratureSpec::default() };
        let r = poisson_outer(&bm, 1.0, 0.5, &q).unwrap();
        assert!(r.value < 0.0 && r.value.is_finite());
    }

    #[test]
    fn uniqueness_closed_forms() {
        let q = QuadratureSpec::with_tol(1e-10);
        let r = uniqueness_integral_model(&FunctionModel::exp_iaz(1.0), &q).unwrap();
        assert!((r.value().unwrap() - FRAC_PI_2).abs() < 1e-9);
        let r = uniqueness_integral_model(&FunctionModel::one(), &q).unwrap();
        assert_eq!(r.value().unwrap(), 0.0);
    }

    #[test]
    fn uniqueness_detects_divergence() {
        let q = QuadratureSpec::default();
        let r = uniqueness_integral(|y: f64| y.abs(), &q).unwrap();
        assert!(matches!(r, UniquenessOutcome::Divergent { .. }));
        let r = uniqueness_integral(|y: f64| y * y, &q).unwrap();
        assert!(matches!(r, UniquenessOutcome::Divergent { .. }));
    }

    #[test]
    fn harnack_examples() {
        assert_eq!(harnack_lower(0.0).unwrap(), 0.0);
        assert_relative_eq!(harnack_lower(9.0).unwrap(), 3.0);
        assert!(harnack_lower(-1.0).is_err());
        // G = Im z is 1/2 on the midline and everywhere on the interval
        assert!(harnack_lower(0.5).unwrap() <= 0.5);
        assert_relative_eq!(harnack_lower(0.5).unwrap(), 1.0 / 6.0);
    }

    #[test]
    fn carleman_of_constant_is_zero() {
        let t = carleman_functional(&FunctionModel::one(), 10.0, &QuadratureSpec::default()).unwrap();
        assert_eq!((t.arc_term, t.boundary_term, t.zero_term), (0.0, 0.0, 0.0));
    }

    #[test]
    fn carleman_of_exponential_closed_form() {
        let q = QuadratureSpec::with_tol(1e-11);
        for r in [10.0, 40.0] {
            let t = carleman_functional(&FunctionModel::exp_iaz(1.0), r, &q).unwrap();
            assert_eq!(t.zero_term, 0.0);
            let arc = -0.5 - 1.0 / (PI * r);
            let boundary = -(1.0 - 1.0 / r).powi(2) / (2.0 * PI);
            assert!((t.arc_term - arc).abs() < 1e-8, "{} vs {arc}", t.arc_term);
            assert!((t.boundary_term - boundary).abs() < 1e-8);
        }
    }

    #[test]
    fn carleman_rejects_zero_on_contour() {
        let f = FunctionModel::rational(c(1.0, 0.0), &[c(3.0, 0.5)], &[]);
        assert!(matches!(
            carleman_functional(&f, 10.0, &QuadratureSpec::default()),
            Err(Error::ZeroOnContour { .. })
        ));
    }

    #[test]
    fn deficiency_examples() {
        let q = QuadratureSpec::default();
        let d = carleman_deficiency(&FunctionModel::one(), 30.0, 1.5, &q).unwrap();
        assert_eq!(d.value, 0.0);
        for r in [10.0, 100.0] {
            let d = carleman_deficiency(&FunctionModel::exp_iaz(1.0), r, 1.5, &q).unwrap();
            assert_relative_eq!(d.value, 1.0 / (6.0 * r.powf(1.5)), max_relative = 1e-9);
        }
    }
}
