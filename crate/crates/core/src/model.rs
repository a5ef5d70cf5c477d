//! Evaluable holomorphic functions on the closed upper half-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{self, ProductConfig};
use crate::domain::{ensure_finite, ComplexPoint};
use crate::error::{Error, Result};
use crate::zeros::ZeroEntry;

/// A root of a rational factor. Unlike [`ZeroEntry`] positions, these may lie
/// anywhere in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

impl Root {
    pub fn new(z: ComplexPoint, mult: u32) -> Self {
        Root { re: z.re, im: z.im, mult }
    }

    pub fn point(&self) -> ComplexPoint {
        Complex64::new(self.re, self.im)
    }
}

/// JSON-serializable catalogue of functions. Evaluation is in log space so
/// products with astronomically large exponents stay representable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FunctionModel {
    /// A nonzero constant `[re, im]`.
    Constant { value: ComplexPoint },
    /// `exp(coef * z)`; `e^{iaz}` is `coef = [0, a]`.
    ExpLinear { coef: ComplexPoint },
    /// `scale * prod (z - zero)^mult / prod (z - pole)^mult`.
    Rational {
        #[serde(default = "unit")]
        scale: ComplexPoint,
        #[serde(default)]
        zeros: Vec<Root>,
        #[serde(default)]
        poles: Vec<Root>,
    },
    /// `(z + shift)^power` with an integer power.
    ShiftPower { shift: ComplexPoint, power: i32 },
    /// A Blaschke-type product over stored nodes.
    Product { config: ProductConfig },
    /// `exp(c (z + i)^beta)` on the branch real on the imaginary semi-axis.
    Multiplier { c_mult: f64, beta: f64 },
    /// Pointwise product.
    Mul { factors: Vec<FunctionModel> },
}

fn unit() -> ComplexPoint {
    Complex64::new(1.0, 0.0)
}

/// `log f(z)` split into log-modulus and an argument modulo `2 pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub log_modulus: f64,
    pub arg: f64,
}

impl LogValue {
    pub fn value(&self) -> ComplexPoint {
        if self.log_modulus == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_modulus.exp(), self.arg)
        }
    }
}

impl FunctionModel {
    pub fn one() -> Self {
        FunctionModel::Constant { value: unit() }
    }

    /// `e^{iaz}`.
    pub fn exp_iaz(a: f64) -> Self {
        FunctionModel::ExpLinear { coef: Complex64::new(0.0, a) }
    }

    pub fn rational(scale: ComplexPoint, zeros: &[ComplexPoint], poles: &[ComplexPoint]) -> Self {
        FunctionModel::Rational {
            scale,
            zeros: zeros.iter().map(|&z| Root::new(z, 1)).collect(),
            poles: poles.iter().map(|&z| Root::new(z, 1)).collect(),
        }
    }

    pub fn product(config: ProductConfig) -> Self {
        FunctionModel::Product { config }
    }

    pub fn times(self, other: FunctionModel) -> Self {
        match self {
            FunctionModel::Mul { mut factors } => {
                factors.push(other);
                FunctionModel::Mul { factors }
            }
            f => FunctionModel::Mul { factors: vec![f, other] },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionModel::Constant { value } => {
                ensure_finite(*value, "constant")?;
                if *value == Complex64::new(0.0, 0.0) {
                    return Err(Error::invalid("constant model must be nonzero"));
                }
            }
            FunctionModel::ExpLinear { coef } => ensure_finite(*coef, "exponential rate")?,
            FunctionModel::Rational { scale, zeros, poles } => {
                ensure_finite(*scale, "rational scale")?;
                if scale.norm() == 0.0 {
                    return Err(Error::invalid("rational scale must be nonzero"));
                }
                for r in zeros.iter().chain(poles) {
                    ensure_finite(r.point(), "rational root")?;
                }
            }
            FunctionModel::ShiftPower { shift, .. } => ensure_finite(*shift, "shift")?,
            FunctionModel::Product { config } => config.validate()?,
            FunctionModel::Multiplier { c_mult, beta } => {
                blaschke::growth_multiplier_exponent(*c_mult, *beta, Complex64::new(0.0, 0.0))?;
            }
            FunctionModel::Mul { factors } => {
                for f in factors {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// `log f(z)`. Zeros give `log_modulus = -inf`; poles are errors.
    pub fn log_eval(&self, z: ComplexPoint) -> Result<LogValue> {
        ensure_finite(z, "evaluation point")?;
        let lv = match self {
            FunctionModel::Constant { value } => LogValue { log_modulus: value.norm().ln(), arg: value.arg() },
            FunctionModel::ExpLinear { coef } => {
                let e = coef * z;
                LogValue { log_modulus: e.re, arg: e.im }
            }
            FunctionModel::Rational { scale, zeros, poles } => {
                let mut lm = scale.norm().ln();
                let mut arg = scale.arg();
                for r in zeros {
                    let d = z - r.point();
                    lm += f64::from(r.mult) * d.norm().ln();
                    arg += f64::from(r.mult) * d.arg();
                }
                for r in poles {
                    let d = z - r.point();
                    if d.norm() == 0.0 {
                        return Err(Error::pole(z));
                    }
                    lm -= f64::from(r.mult) * d.norm().ln();
                    arg -= f64::from(r.mult) * d.arg();
                }
                LogValue { log_modulus: lm, arg }
            }
            FunctionModel::ShiftPower { shift, power } => {
                let w = z + shift;
                if w.norm() == 0.0 && *power < 0 {
                    return Err(Error::pole(z));
                }
                let p = f64::from(*power);
                LogValue { log_modulus: p * w.norm().ln(), arg: p * w.arg() }
            }
            FunctionModel::Product { config } => {
                let v = blaschke::product_eval(config, z, f64::MAX)?;
                LogValue { log_modulus: v.log_modulus, arg: v.phase }
            }
            FunctionModel::Multiplier { c_mult, beta } => {
                let e = blaschke::growth_multiplier_exponent(*c_mult, *beta, z)?;
                LogValue { log_modulus: e.re, arg: e.im }
            }
            FunctionModel::Mul { factors } => {
                let mut lm = 0.0;
                let mut arg = 0.0;
                for f in factors {
                    let v = f.log_eval(z)?;
                    lm += v.log_modulus;
                    arg += v.arg;
                }
                LogValue { log_modulus: lm, arg }
            }
        };
        Ok(LogValue { log_modulus: lv.log_modulus, arg: lv.arg.rem_euclid(std::f64::consts::TAU) })
    }

    pub fn log_abs(&self, z: ComplexPoint) -> Result<f64> {
        match self {
            FunctionModel::Product { config } => blaschke::product_log_modulus(config, z),
            FunctionModel::Mul { factors } => {
                let mut lm = 0.0;
                for f in factors {
                    lm += f.log_abs(z)?;
                }
                Ok(lm)
            }
            _ => Ok(self.log_eval(z)?.log_modulus),
        }
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        Ok(self.log_eval(z)?.value())
    }

    /// Zeros of the model in the closed upper half-plane, with multiplicity.
    pub fn zeros_in_closed_upper(&self) -> Vec<ZeroEntry> {
        let mut out = Vec::new();
        self.collect_zeros(&mut out);
        out
    }

    fn collect_zeros(&self, out: &mut Vec<ZeroEntry>) {
        match self {
            FunctionModel::Rational { zeros, poles, .. } => {
                for r in zeros {
                    let z = r.point();
                    if z.im < 0.0 {
                        continue;
                    }
                    let cancelled: u32 = poles.iter().filter(|p| p.point() == z).map(|p| p.mult).sum();
                    if r.mult > cancelled {
                        out.push(ZeroEntry::new(z, u128::from(r.mult - cancelled)));
                    }
                }
            }
            FunctionModel::ShiftPower { shift, power } if *power > 0 => {
                let z = -shift;
                if z.im >= 0.0 {
                    out.push(ZeroEntry::new(z, *power as u128));
                }
            }
            FunctionModel::Product { config } => {
                out.extend(config.nodes.iter().map(|n| ZeroEntry::new(config.node_zero(n), n.k)));
            }
            FunctionModel::Mul { factors } => {
                for f in factors {
                    f.collect_zeros(out);
                }
            }
            _ => {}
        }
    }

    /// Zeros in the open strip `0 < Im z < 1`.
    pub fn strip_zeros(&self) -> Vec<ZeroEntry> {
        self.zeros_in_closed_upper()
            .into_iter()
            .filter(|e| e.position.im > 0.0 && e.position.im < 1.0)
            .collect()
    }
}
