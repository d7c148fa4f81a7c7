//! Forward-mode jets over the four chart coordinates.
//!
//! `Jet2` carries a value with its gradient and Hessian, `Jet1` a value with
//! its gradient. Taking a partial derivative of a `Jet2` yields a `Jet1`, and
//! of a `Jet1` a plain `f64`; geometric objects built from first derivatives
//! of the coframe therefore naturally drop one order.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Number of chart coordinates.
pub const DIM: usize = 4;

/// Scalar field values the multivector code is generic over.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    fn constant(v: f64) -> Self;
    fn value(&self) -> f64;
    /// Largest absolute entry over value and all stored derivatives.
    fn magnitude(&self) -> f64;
    /// Apply a scalar function given its value and first two derivatives at `self.value()`.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self;

    fn zero() -> Self {
        Self::constant(0.0)
    }
    fn one() -> Self {
        Self::constant(1.0)
    }
    fn is_zero(&self) -> bool {
        self.magnitude() == 0.0
    }
    fn recip(self) -> Self {
        let v = self.value();
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

/// Scalars that carry at least one order of derivatives.
pub trait Differentiable: FromJet2 {
    type Lower: Scalar + FromJet2;
    /// `∂/∂x^mu`, one order lower.
    fn partial(&self, mu: usize) -> Self::Lower;
    /// Drop the highest derivative order.
    fn lower(&self) -> Self::Lower;
}

/// Truncation of a second-order jet to a scalar type.
pub trait FromJet2: Scalar {
    fn from_jet2(j: &Jet2) -> Self;
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn chain(self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }
}

impl FromJet2 for f64 {
    fn from_jet2(j: &Jet2) -> Self {
        j.value
    }
}

/// Value and gradient.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet1 {
    pub value: f64,
    pub grad: [f64; DIM],
}

impl Jet1 {
    pub fn new(value: f64, grad: [f64; DIM]) -> Self {
        Jet1 { value, grad }
    }

    pub fn variable(value: f64, mu: usize) -> Self {
        let mut grad = [0.0; DIM];
        grad[mu] = 1.0;
        Jet1 { value, grad }
    }
}

impl Scalar for Jet1 {
    fn constant(v: f64) -> Self {
        Jet1 { value: v, grad: [0.0; DIM] }
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn magnitude(&self) -> f64 {
        self.grad.iter().fold(self.value.abs(), |m, g| m.max(g.abs()))
    }
    fn chain(self, f0: f64, f1: f64, _f2: f64) -> Self {
        Jet1 { value: f0, grad: self.grad.map(|g| f1 * g) }
    }
}

impl Differentiable for Jet1 {
    type Lower = f64;
    fn partial(&self, mu: usize) -> f64 {
        self.grad[mu]
    }
    fn lower(&self) -> f64 {
        self.value
    }
}

impl FromJet2 for Jet1 {
    fn from_jet2(j: &Jet2) -> Self {
        j.lower()
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, o: Jet1) -> Jet1 {
        let mut grad = self.grad;
        for (g, h) in grad.iter_mut().zip(o.grad) {
            *g += h;
        }
        Jet1 { value: self.value + o.value, grad }
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, o: Jet1) -> Jet1 {
        let mut grad = self.grad;
        for (g, h) in grad.iter_mut().zip(o.grad) {
            *g -= h;
        }
        Jet1 { value: self.value - o.value, grad }
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, o: Jet1) -> Jet1 {
        let mut grad = [0.0; DIM];
        for (mu, g) in grad.iter_mut().enumerate() {
            *g = self.grad[mu] * o.value + self.value * o.grad[mu];
        }
        Jet1 { value: self.value * o.value, grad }
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet1) -> Jet1 {
        self * o.recip()
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        Jet1 { value: -self.value, grad: self.grad.map(|g| -g) }
    }
}

impl Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(self, k: f64) -> Jet1 {
        Jet1 { value: self.value * k, grad: self.grad.map(|g| g * k) }
    }
}

impl AddAssign for Jet1 {
    fn add_assign(&mut self, o: Jet1) {
        *self = *self + o;
    }
}

impl SubAssign for Jet1 {
    fn sub_assign(&mut self, o: Jet1) {
        *self = *self - o;
    }
}

/// Packed upper-triangle index of the Hessian entry (i, j).
const fn hidx(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows of lengths 4, 3, 2, 1
    i * DIM - i * (i + 1) / 2 + j
}

/// Number of independent Hessian entries.
const NH: usize = DIM * (DIM + 1) / 2;

/// Value, gradient and Hessian. The Hessian is stored packed, so it is
/// symmetric by construction.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; DIM],
    hess: [f64; NH],
}

impl Jet2 {
    pub fn new(value: f64, grad: [f64; DIM], hess: [[f64; DIM]; DIM]) -> Self {
        let mut h = [0.0; NH];
        for i in 0..DIM {
            for j in i..DIM {
                h[hidx(i, j)] = hess[i][j];
            }
        }
        Jet2 { value, grad, hess: h }
    }

    /// The coordinate `x^mu` itself, evaluated at `value`.
    pub fn variable(value: f64, mu: usize) -> Self {
        let mut grad = [0.0; DIM];
        grad[mu] = 1.0;
        Jet2 { value, grad, hess: [0.0; NH] }
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[hidx(i, j)]
    }

    pub fn hessian(&self) -> [[f64; DIM]; DIM] {
        let mut out = [[0.0; DIM]; DIM];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.hess(i, j);
            }
        }
        out
    }
}

impl Scalar for Jet2 {
    fn constant(v: f64) -> Self {
        Jet2 { value: v, grad: [0.0; DIM], hess: [0.0; NH] }
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn magnitude(&self) -> f64 {
        let m = self.grad.iter().fold(self.value.abs(), |m, g| m.max(g.abs()));
        self.hess.iter().fold(m, |m, h| m.max(h.abs()))
    }
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut hess = [0.0; NH];
        for i in 0..DIM {
            for j in i..DIM {
                hess[hidx(i, j)] = f2 * (self.grad[i] * self.grad[j]) + f1 * self.hess[hidx(i, j)];
            }
        }
        Jet2 { value: f0, grad: self.grad.map(|g| f1 * g), hess }
    }
}

impl Differentiable for Jet2 {
    type Lower = Jet1;
    fn partial(&self, mu: usize) -> Jet1 {
        let mut grad = [0.0; DIM];
        for (nu, g) in grad.iter_mut().enumerate() {
            *g = self.hess(mu, nu);
        }
        Jet1 { value: self.grad[mu], grad }
    }
    fn lower(&self) -> Jet1 {
        Jet1 { value: self.value, grad: self.grad }
    }
}

impl FromJet2 for Jet2 {
    fn from_jet2(j: &Jet2) -> Self {
        *j
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        let mut out = self;
        out += o;
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        let mut out = self;
        out -= o;
        out
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let (u, v) = (&self, &o);
        let mut grad = [0.0; DIM];
        for (mu, g) in grad.iter_mut().enumerate() {
            *g = u.grad[mu] * v.value + u.value * v.grad[mu];
        }
        let mut hess = [0.0; NH];
        for i in 0..DIM {
            for j in i..DIM {
                let k = hidx(i, j);
                hess[k] = u.hess[k] * v.value
                    + u.value * v.hess[k]
                    + (u.grad[i] * v.grad[j] + u.grad[j] * v.grad[i]);
            }
        }
        Jet2 { value: u.value * v.value, grad, hess }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 { value: -self.value, grad: self.grad.map(|g| -g), hess: self.hess.map(|h| -h) }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        Jet2 { value: self.value * k, grad: self.grad.map(|g| g * k), hess: self.hess.map(|h| h * k) }
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, o: Jet2) {
        self.value += o.value;
        for (g, h) in self.grad.iter_mut().zip(o.grad) {
            *g += h;
        }
        for (g, h) in self.hess.iter_mut().zip(o.hess) {
            *g += h;
        }
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, o: Jet2) {
        self.value -= o.value;
        for (g, h) in self.grad.iter_mut().zip(o.grad) {
            *g -= h;
        }
        for (g, h) in self.hess.iter_mut().zip(o.hess) {
            *g -= h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(x: f64, y: f64) -> (Jet2, Jet2) {
        (Jet2::variable(x, 0), Jet2::variable(y, 1))
    }

    #[test]
    fn product_rule_second_order() {
        let (x, y) = xy(2.0, 3.0);
        let f = x * x * y;
        assert_eq!(f.value, 12.0);
        assert_eq!(f.grad[..2], [12.0, 4.0]);
        assert_eq!(f.hess(0, 0), 6.0);
        assert_eq!(f.hess(0, 1), 4.0);
        assert_eq!(f.hess(1, 0), 4.0);
        assert_eq!(f.hess(1, 1), 0.0);
    }

    #[test]
    fn quotient() {
        let (x, y) = xy(2.0, 4.0);
        let f = x / y;
        assert_eq!(f.value, 0.5);
        assert!((f.grad[0] - 0.25).abs() < 1e-15);
        assert!((f.grad[1] + 0.125).abs() < 1e-15);
        // d²/dy² (x/y) = 2x/y³
        assert!((f.hess(1, 1) - 4.0 / 64.0).abs() < 1e-15);
        // d²/dxdy = -1/y²
        assert!((f.hess(0, 1) + 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn partial_lowers_order() {
        let (x, y) = xy(1.5, -0.5);
        let f = x * x * x * y;
        let fx = f.partial(0);
        assert!((fx.value - 3.0 * 1.5 * 1.5 * -0.5).abs() < 1e-14);
        assert!((fx.grad[0] - 6.0 * 1.5 * -0.5).abs() < 1e-14);
        assert!((fx.grad[1] - 3.0 * 1.5 * 1.5).abs() < 1e-14);
        let fxx = fx.partial(0);
        assert!((fxx - 6.0 * 1.5 * -0.5).abs() < 1e-14);
    }

    #[test]
    fn hessian_symmetric_storage() {
        let j = Jet2::new(0.0, [0.0; 4], [[1.0, 2.0, 3.0, 4.0], [2.0, 5.0, 6.0, 7.0], [3.0, 6.0, 8.0, 9.0], [4.0, 7.0, 9.0, 10.0]]);
        let h = j.hessian();
        for i in 0..4 {
            for k in 0..4 {
                assert_eq!(h[i][k], h[k][i]);
            }
        }
        assert_eq!(h[3][3], 10.0);
    }
}
