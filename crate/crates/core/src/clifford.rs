//! The real Clifford algebra of signature (1,3).
//!
//! Basis blades are 4-bit masks over the labels {0,1,2,3}; the canonical
//! blade for a mask is the ascending product θ^{i1}···θ^{ik}. The metric is
//! η = diag(1,−1,−1,−1) and θ^aθ^b + θ^bθ^a = 2η^{ab}.
//!
//! Products of two basis blades are read from a 16×16 table computed at
//! compile time: the sign counts the transpositions needed to bring the
//! concatenated labels into ascending order, times η^{aa} for every label
//! the two blades share.
//!
//! Hodge star: ⋆A = Ãθ^5 with θ^5 = θ^0θ^1θ^2θ^3. On a k-blade this gives
//! ⋆⋆A_k = (−1)^{k+1} A_k, so ⋆ squares to −1 on even grades and to +1 on
//! odd grades, and ⋆^{-1}B = (−1)^{j+1} ⋆B for B of grade j.
//!
//! Contractions follow ⟨A_r⌟B_s⟩ = ⟨A_rB_s⟩_{s−r} (zero when r > s) and
//! A_r⌞B_s = ⟨A_rB_s⟩_{r−s} (zero when s > r). The scalar product is
//! A·B = ⟨ÃB⟩_0.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::jet::{FromJet2, Jet2, Scalar};

/// Diagonal of the metric.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Mask of the pseudoscalar θ^5 = θ^0θ^1θ^2θ^3.
pub const PSEUDO: u8 = 0b1111;

/// A basis blade, identified by its label mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(pub u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Blade from labels; labels need not be sorted but must be distinct.
    pub fn from_labels(labels: &[usize]) -> Option<(f64, Blade)> {
        let mut sign = 1.0;
        let mut mask = 0u8;
        for &l in labels {
            if l > 3 || mask & (1 << l) != 0 {
                return None;
            }
            // labels already present and greater than l must be hopped over
            if (mask >> (l + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= 1 << l;
        }
        Some((sign, Blade(mask)))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn labels(self) -> Vec<usize> {
        (0..4).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    /// (−1)^{k(k−1)/2}
    pub fn reverse_sign(self) -> f64 {
        let k = self.grade();
        if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Blades of a given grade, in ascending mask order.
    pub fn of_grade(k: usize) -> impl Iterator<Item = Blade> {
        (0u8..16).filter(move |m| m.count_ones() as usize == k).map(Blade)
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        if self.0 == PSEUDO {
            return write!(f, "θ^5");
        }
        write!(f, "θ^")?;
        for l in self.labels() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

const fn product_sign(a: u8, b: u8) -> i8 {
    let mut swaps = 0u32;
    let mut i = 0;
    while i < 4 {
        if b & (1 << i) != 0 {
            // labels of a above i must move past θ^i
            swaps += (a >> (i + 1)).count_ones();
        }
        i += 1;
    }
    let mut sign: i8 = if swaps.is_multiple_of(2) { 1 } else { -1 };
    let common = a & b;
    // θ^k θ^k = −1 for the spatial labels
    if (common & 0b1110).count_ones() % 2 == 1 {
        sign = -sign;
    }
    sign
}

const fn build_table() -> [[i8; 16]; 16] {
    let mut t = [[0i8; 16]; 16];
    let mut a = 0;
    while a < 16 {
        let mut b = 0;
        while b < 16 {
            t[a][b] = product_sign(a as u8, b as u8);
            b += 1;
        }
        a += 1;
    }
    t
}

/// SIGN[a][b]: θ^A θ^B = SIGN[a][b] θ^{A xor B}.
pub const SIGN: [[i8; 16]; 16] = build_table();

/// Geometric product of two basis blades.
pub fn blade_product(a: Blade, b: Blade) -> (f64, Blade) {
    (SIGN[a.0 as usize][b.0 as usize] as f64, Blade(a.0 ^ b.0))
}

/// A multivector with 16 coefficients indexed by blade mask.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Multivector<S: Scalar> {
    pub c: [S; 16],
}

impl<S: Scalar> Default for Multivector<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Multivector<S> {
    pub fn zero() -> Self {
        Multivector { c: [S::zero(); 16] }
    }

    pub fn scalar(s: S) -> Self {
        let mut m = Self::zero();
        m.c[0] = s;
        m
    }

    /// Unit basis blade.
    pub fn blade(b: Blade) -> Self {
        let mut m = Self::zero();
        m.c[b.0 as usize] = S::one();
        m
    }

    /// The basis 1-form θ^a.
    pub fn theta(a: usize) -> Self {
        Self::blade(Blade(1 << a))
    }

    /// The reciprocal 1-form θ_a = η_{aa} θ^a.
    pub fn theta_lower(a: usize) -> Self {
        Self::theta(a).scale(ETA[a])
    }

    /// Canonical blade from labels, with the reordering sign applied.
    pub fn from_labels(labels: &[usize]) -> Self {
        match Blade::from_labels(labels) {
            Some((sign, b)) => Self::blade(b).scale(sign),
            None => Self::zero(),
        }
    }

    /// Grade-1 element Σ v_a θ^a.
    pub fn vector(v: [S; 4]) -> Self {
        let mut m = Self::zero();
        for (a, x) in v.into_iter().enumerate() {
            m.c[1 << a] = x;
        }
        m
    }

    pub fn get(&self, b: Blade) -> S {
        self.c[b.0 as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        Multivector { c: std::array::from_fn(|i| f(&self.c[i])) }
    }

    pub fn scale(&self, k: f64) -> Self {
        Multivector { c: self.c.map(|x| x * k) }
    }

    pub fn scale_by(&self, s: S) -> Self {
        Multivector { c: self.c.map(|x| x * s) }
    }

    /// Values of all coefficients, derivatives dropped.
    pub fn values(&self) -> Multivector<f64> {
        self.map(|x| x.value())
    }

    fn bilinear(&self, other: &Self, keep: impl Fn(u8, u8) -> bool) -> Self {
        let mut out = Self::zero();
        for a in 0..16 {
            if self.c[a].is_zero() {
                continue;
            }
            for b in 0..16 {
                if !keep(a as u8, b as u8) || other.c[b].is_zero() {
                    continue;
                }
                let t = self.c[a] * other.c[b];
                if SIGN[a][b] > 0 {
                    out.c[a ^ b] += t;
                } else {
                    out.c[a ^ b] -= t;
                }
            }
        }
        out
    }

    /// Clifford product AB.
    pub fn geometric(&self, other: &Self) -> Self {
        self.bilinear(other, |_, _| true)
    }

    /// Exterior product A∧B.
    pub fn wedge(&self, other: &Self) -> Self {
        self.bilinear(other, |a, b| a & b == 0)
    }

    /// Left contraction A⌟B.
    pub fn left_contract(&self, other: &Self) -> Self {
        self.bilinear(other, |a, b| a & b == a)
    }

    /// Right contraction A⌞B.
    pub fn right_contract(&self, other: &Self) -> Self {
        self.bilinear(other, |a, b| a & b == b)
    }

    /// Scalar product ⟨ÃB⟩_0.
    pub fn scalar_product(&self, other: &Self) -> S {
        let mut s = S::zero();
        for a in 0..16 {
            let sign = SIGN[a][a] as f64 * Blade(a as u8).reverse_sign();
            s += self.c[a] * other.c[a] * sign;
        }
        s
    }

    /// Commutator AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        self.geometric(other) - other.geometric(self)
    }

    pub fn reverse(&self) -> Self {
        Multivector { c: std::array::from_fn(|i| self.c[i] * Blade(i as u8).reverse_sign()) }
    }

    /// Grade projection ⟨A⟩_k.
    pub fn grade(&self, k: usize) -> Self {
        assert!(k <= 4, "grade {k} out of range");
        Multivector {
            c: std::array::from_fn(|i| if (i as u8).count_ones() as usize == k { self.c[i] } else { S::zero() }),
        }
    }

    /// ⋆A = Ãθ^5.
    pub fn hodge(&self) -> Self {
        self.reverse().geometric(&Self::blade(Blade(PSEUDO)))
    }

    /// Inverse of `hodge`.
    pub fn hodge_inv(&self) -> Self {
        let star = self.hodge();
        // star of a grade-j part has grade 4−j, so sign (−1)^{j+1} = (−1)^{grade(star)+1}
        Multivector {
            c: std::array::from_fn(|i| {
                let g = (i as u8).count_ones();
                if g.is_multiple_of(2) {
                    -star.c[i]
                } else {
                    star.c[i]
                }
            }),
        }
    }

    /// Largest coefficient magnitude, including derivatives.
    pub fn magnitude(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.magnitude()))
    }

    /// Largest coefficient value magnitude.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.value().abs()))
    }
}

impl Multivector<f64> {
    /// Max-abs difference relative to the larger operand, absolute floor 1e−14.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        let diff = (*self - *other).max_abs();
        diff <= rel * self.max_abs().max(other.max_abs()) + 1e-14
    }

    pub fn from_jet2<S: FromJet2>(m: &Multivector<Jet2>) -> Multivector<S> {
        m.map(S::from_jet2)
    }
}

impl<S: Scalar> Index<Blade> for Multivector<S> {
    type Output = S;
    fn index(&self, b: Blade) -> &S {
        &self.c[b.0 as usize]
    }
}

impl<S: Scalar> IndexMut<Blade> for Multivector<S> {
    fn index_mut(&mut self, b: Blade) -> &mut S {
        &mut self.c[b.0 as usize]
    }
}

impl<S: Scalar> Add for Multivector<S> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

impl<S: Scalar> Sub for Multivector<S> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        self -= o;
        self
    }
}

impl<S: Scalar> AddAssign for Multivector<S> {
    fn add_assign(&mut self, o: Self) {
        for (x, y) in self.c.iter_mut().zip(o.c) {
            *x += y;
        }
    }
}

impl<S: Scalar> SubAssign for Multivector<S> {
    fn sub_assign(&mut self, o: Self) {
        for (x, y) in self.c.iter_mut().zip(o.c) {
            *x -= y;
        }
    }
}

impl<S: Scalar> Neg for Multivector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Multivector { c: self.c.map(|x| -x) }
    }
}

impl<S: Scalar> Mul for Multivector<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.geometric(&o)
    }
}

impl fmt::Display for Multivector<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..16 {
            let x = self.c[i];
            if x == 0.0 {
                continue;
            }
            let b = Blade(i as u8);
            if first {
                write!(f, "{x}")?;
            } else if x < 0.0 {
                write!(f, " - {}", -x)?;
            } else {
                write!(f, " + {x}")?;
            }
            if i != 0 {
                write!(f, "{b}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Mv = Multivector<f64>;

    fn t(a: usize) -> Mv {
        Mv::theta(a)
    }

    #[test]
    fn generator_relation() {
        for a in 0..4 {
            for b in 0..4 {
                let s = t(a) * t(b) + t(b) * t(a);
                let expect = if a == b { 2.0 * ETA[a] } else { 0.0 };
                assert_eq!(s, Mv::scalar(expect));
            }
        }
    }

    #[test]
    fn spot_products() {
        assert_eq!(t(0) * t(0), Mv::scalar(1.0));
        assert_eq!(t(1) * t(1), Mv::scalar(-1.0));
        assert_eq!(t(0) * t(1) * t(0), -t(1));
        assert!(t(0).wedge(&t(0)).is_zero());
        assert_eq!(t(0).wedge(&t(1)), Mv::blade(Blade(0b0011)));
        let e01 = t(0).wedge(&t(1));
        let e23 = t(2).wedge(&t(3));
        assert_eq!(e01.wedge(&e23), Mv::blade(Blade(PSEUDO)));
    }

    #[test]
    fn contractions() {
        let e01 = t(0).wedge(&t(1));
        assert_eq!(t(0).left_contract(&e01), t(1));
        assert_eq!(t(1).left_contract(&e01), t(0));
        let a = Mv::scalar(2.5);
        assert_eq!(a.left_contract(&e01), e01.scale(2.5));
        assert!(e01.left_contract(&t(0)).is_zero());
    }

    #[test]
    fn scalar_products() {
        let e01 = t(0).wedge(&t(1));
        assert_eq!(t(0).scalar_product(&t(0)), 1.0);
        assert_eq!(e01.scalar_product(&e01), -1.0);
        assert_eq!(t(0).scalar_product(&e01), 0.0);
    }

    #[test]
    fn reversion_and_grades() {
        let e01 = t(0).wedge(&t(1));
        assert_eq!(Mv::scalar(1.0).reverse(), Mv::scalar(1.0));
        assert_eq!(e01.reverse(), -e01);
        let p = Mv::blade(Blade(PSEUDO));
        assert_eq!(p.reverse(), p);
        assert_eq!((t(0) * t(1)).grade(2), e01);
        assert_eq!((t(0) * t(0)).grade(0), Mv::scalar(1.0));
        assert!((t(0) * t(0)).grade(2).is_zero());
    }

    #[test]
    fn hodge_examples() {
        let p = Mv::blade(Blade(PSEUDO));
        assert_eq!(Mv::scalar(1.0).hodge(), p);
        assert_eq!(p.hodge(), Mv::scalar(-1.0));
        assert_eq!(t(0).hodge(), Mv::blade(Blade(0b1110)));
    }

    #[test]
    fn hodge_squares() {
        for m in 0..16u8 {
            let b = Mv::blade(Blade(m));
            let k = m.count_ones() as i32;
            assert_eq!(b.hodge().hodge(), b.scale((-1f64).powi(k + 1)));
            assert_eq!(b.hodge().hodge_inv(), b);
            assert_eq!(b.hodge_inv().hodge(), b);
        }
    }

    #[test]
    fn labels_reordering() {
        assert_eq!(Mv::from_labels(&[1, 0]), -Mv::blade(Blade(0b11)));
        assert_eq!(Mv::from_labels(&[2, 0, 1]), Mv::blade(Blade(0b111)));
        assert!(Mv::from_labels(&[1, 1]).is_zero());
    }

    #[test]
    fn display() {
        let m = Mv::scalar(1.0) + t(0).wedge(&t(1)).scale(-2.0);
        assert_eq!(m.to_string(), "1 - 2θ^01");
    }
}
