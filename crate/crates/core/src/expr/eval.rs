use std::collections::BTreeMap;

use thiserror::Error;

use super::{BinOp, Expr, Func};
use crate::jet::{Jet1, Jet2, Scalar};

/// Parameter values by name.
pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error in '{expr}' at point {point:?}: {reason}")]
    Domain { expr: String, point: [f64; 4], reason: String },
    #[error("no value bound for parameter '{0}'")]
    Unbound(String),
}

/// Scalars an expression can be evaluated into.
pub trait Elementary: Scalar {
    /// The coordinate `x^mu` at value `v`.
    fn variable(v: f64, mu: usize) -> Self;
    fn all_finite(&self) -> bool;
}

impl Elementary for f64 {
    fn variable(v: f64, _mu: usize) -> Self {
        v
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl Elementary for Jet1 {
    fn variable(v: f64, mu: usize) -> Self {
        Jet1::variable(v, mu)
    }
    fn all_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }
}

impl Elementary for Jet2 {
    fn variable(v: f64, mu: usize) -> Self {
        Jet2::variable(v, mu)
    }
    fn all_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite()) && self.hessian().iter().flatten().all(|h| h.is_finite())
    }
}

/// Evaluate with exact first and second derivatives.
pub fn eval_jet(e: &Expr, point: &[f64; 4], params: &Params) -> Result<Jet2, EvalError> {
    Eval { point, params }.eval(e)
}

/// Plain value, no derivatives.
pub fn eval_f64(e: &Expr, point: &[f64; 4], params: &Params) -> Result<f64, EvalError> {
    Eval { point, params }.eval(e)
}

struct Eval<'a> {
    point: &'a [f64; 4],
    params: &'a Params,
}

/// |sin x| below this counts as a zero of sin.
fn near_zero_trig(s: f64, x: f64) -> bool {
    s.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0)
}

impl Eval<'_> {
    fn domain(&self, e: &Expr, reason: impl Into<String>) -> EvalError {
        EvalError::Domain { expr: e.to_string(), point: *self.point, reason: reason.into() }
    }

    fn eval<S: Elementary>(&self, e: &Expr) -> Result<S, EvalError> {
        let out: S = self.eval_node(e)?;
        if !out.all_finite() {
            return Err(self.domain(e, "non-finite result"));
        }
        Ok(out)
    }

    fn eval_node<S: Elementary>(&self, e: &Expr) -> Result<S, EvalError> {
        Ok(match e {
            Expr::Num(v) => S::constant(*v),
            Expr::Pi => S::constant(std::f64::consts::PI),
            Expr::Coord(i, _) => S::variable(self.point[*i], *i),
            Expr::Param(n) => S::constant(*self.params.get(n).ok_or_else(|| EvalError::Unbound(n.clone()))?),
            Expr::Neg(a) => -self.eval::<S>(a)?,
            Expr::Bin(op, a, b) => {
                let x: S = self.eval(a)?;
                match op {
                    BinOp::Add => x + self.eval::<S>(b)?,
                    BinOp::Sub => x - self.eval::<S>(b)?,
                    BinOp::Mul => x * self.eval::<S>(b)?,
                    BinOp::Div => {
                        let y: S = self.eval(b)?;
                        if y.value() == 0.0 {
                            return Err(self.domain(e, "division by zero"));
                        }
                        x / y
                    }
                    BinOp::Pow => self.pow(e, x, b)?,
                }
            }
            Expr::Call(f, a) => {
                let x: S = self.eval(a)?;
                self.call(e, *f, x)?
            }
        })
    }

    fn pow<S: Elementary>(&self, e: &Expr, x: S, b: &Expr) -> Result<S, EvalError> {
        let v = x.value();
        if b.is_coordinate_free() {
            let n: f64 = self.eval(b)?;
            if n.fract() == 0.0 && n.abs() < 1e9 {
                let k = n as i32;
                if v == 0.0 && k < 0 {
                    return Err(self.domain(e, "zero to a negative power"));
                }
                let f1 = if k == 0 { 0.0 } else { n * v.powi(k - 1) };
                let f2 = if k == 0 || k == 1 { 0.0 } else { n * (n - 1.0) * v.powi(k - 2) };
                return Ok(x.chain(v.powi(k), f1, f2));
            }
            if v < 0.0 {
                return Err(self.domain(e, "negative base with non-integer exponent"));
            }
            if v == 0.0 {
                if n > 0.0 && x.is_zero() {
                    return Ok(S::zero());
                }
                return Err(self.domain(e, "zero base with non-integer exponent"));
            }
            return Ok(x.chain(v.powf(n), n * v.powf(n - 1.0), n * (n - 1.0) * v.powf(n - 2.0)));
        }
        if v <= 0.0 {
            return Err(self.domain(e, "non-positive base with variable exponent"));
        }
        let y: S = self.eval(b)?;
        let l = x.chain(v.ln(), 1.0 / v, -1.0 / (v * v));
        let p = y * l;
        let ep = p.value().exp();
        Ok(p.chain(ep, ep, ep))
    }

    fn call<S: Elementary>(&self, e: &Expr, f: Func, x: S) -> Result<S, EvalError> {
        let v = x.value();
        Ok(match f {
            Func::Sin => x.chain(v.sin(), v.cos(), -v.sin()),
            Func::Cos => x.chain(v.cos(), -v.sin(), -v.cos()),
            Func::Tan => {
                let c = v.cos();
                if near_zero_trig(c, v) {
                    return Err(self.domain(e, "tan at a zero of cos"));
                }
                let t = v.tan();
                let s2 = 1.0 + t * t;
                x.chain(t, s2, 2.0 * t * s2)
            }
            Func::Cot => {
                let s = v.sin();
                if near_zero_trig(s, v) {
                    return Err(self.domain(e, "cot at a zero of sin"));
                }
                let c = v.cos() / s;
                let d1 = -(1.0 + c * c);
                x.chain(c, d1, -2.0 * c * d1)
            }
            Func::Sinh => x.chain(v.sinh(), v.cosh(), v.sinh()),
            Func::Cosh => x.chain(v.cosh(), v.sinh(), v.cosh()),
            Func::Tanh => {
                let t = v.tanh();
                let d1 = 1.0 - t * t;
                x.chain(t, d1, -2.0 * t * d1)
            }
            Func::Exp => {
                let ev = v.exp();
                x.chain(ev, ev, ev)
            }
            Func::Ln => {
                if v <= 0.0 {
                    return Err(self.domain(e, "logarithm of a non-positive value"));
                }
                x.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
            }
            Func::Sqrt => {
                if v < 0.0 {
                    return Err(self.domain(e, "square root of a negative value"));
                }
                if v == 0.0 {
                    if x.is_zero() {
                        return Ok(S::zero());
                    }
                    return Err(self.domain(e, "square root at zero has no derivative"));
                }
                let s = v.sqrt();
                x.chain(s, 0.5 / s, -0.25 / (s * v))
            }
            Func::Abs => {
                let sign = if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                x.chain(v.abs(), sign, 0.0)
            }
        })
    }
}
