//! Coframe evaluated at one point, with the conversions needed for `d`.

use crate::clifford::{Multivector, ETA, SIGN};
use crate::expr::{eval_jet, Expr, Params};
use crate::jet::{Differentiable, FromJet2, Jet2, Scalar, DIM};

use super::GeometryError;

/// |det h| at or below this is treated as singular.
pub const SINGULAR_DET: f64 = 1e-10;

/// θ^a = h^a_μ dx^μ, rows indexed by the frame label.
#[derive(Clone, Debug, PartialEq)]
pub struct Coframe {
    pub h: [[Expr; 4]; 4],
    pub params: Params,
}

impl Coframe {
    pub fn at(&self, x: [f64; 4]) -> Result<FramePoint, GeometryError> {
        let mut h = [[Jet2::zero(); 4]; 4];
        for a in 0..4 {
            for mu in 0..4 {
                h[a][mu] = eval_jet(&self.h[a][mu], &x, &self.params)?;
            }
        }
        FramePoint::new(x, h)
    }
}

/// Gauss-Jordan inverse with partial pivoting on |value|; also returns det.
pub fn invert<S: Scalar>(m: &[[S; 4]; 4]) -> Option<([[S; 4]; 4], f64)> {
    let mut a = *m;
    let mut inv = [[S::zero(); 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = S::one();
    }
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].value().abs().total_cmp(&a[j][col].value().abs()))?;
        if a[piv][col].value() == 0.0 {
            return None;
        }
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p.value();
        let pr = p.recip();
        for k in 0..4 {
            a[col][k] = a[col][k] * pr;
            inv[col][k] = inv[col][k] * pr;
        }
        for r in 0..4 {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f.is_zero() {
                continue;
            }
            for k in 0..4 {
                let (ak, ik) = (a[col][k], inv[col][k]);
                a[r][k] -= f * ak;
                inv[r][k] -= f * ik;
            }
        }
    }
    Some((inv, det))
}

/// Frame data at a point: h^a_μ, e_a^μ and blade conversion tables.
#[derive(Clone, Debug)]
pub struct FramePoint {
    pub x: [f64; 4],
    /// h[a][μ] = h^a_μ
    pub h: [[Jet2; 4]; 4],
    /// e[a][μ] = e_a^μ, so that e_a = e_a^μ ∂_μ and dx^μ = e_a^μ θ^a
    pub e: [[Jet2; 4]; 4],
    pub det: f64,
    to_coord: [Multivector<Jet2>; 16],
    to_frame: [Multivector<Jet2>; 16],
}

fn blade_table(one_forms: [Multivector<Jet2>; 4]) -> [Multivector<Jet2>; 16] {
    let mut t = [Multivector::zero(); 16];
    t[0] = Multivector::scalar(Jet2::one());
    for m in 1..16usize {
        let top = 7 - (m as u8).leading_zeros() as usize;
        t[m] = t[m & !(1 << top)].wedge(&one_forms[top]);
    }
    t
}

fn convert<S: FromJet2>(table: &[Multivector<Jet2>; 16], a: &Multivector<S>) -> Multivector<S> {
    let mut out = Multivector::zero();
    for (i, t) in table.iter().enumerate() {
        if a.c[i].is_zero() {
            continue;
        }
        for (k, x) in t.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            out.c[k] += a.c[i] * S::from_jet2(x);
        }
    }
    out
}

impl FramePoint {
    pub fn new(x: [f64; 4], h: [[Jet2; 4]; 4]) -> Result<Self, GeometryError> {
        let (inv, det) = invert(&h).ok_or(GeometryError::Singular { point: x, det: 0.0 })?;
        if det.abs() <= SINGULAR_DET {
            return Err(GeometryError::Singular { point: x, det: det.abs() });
        }
        let e = std::array::from_fn(|a| std::array::from_fn(|mu| inv[mu][a]));
        let theta = std::array::from_fn(|a| Multivector::vector(h[a]));
        let dx = std::array::from_fn(|mu| Multivector::vector(std::array::from_fn(|a: usize| inv[mu][a])));
        Ok(FramePoint { x, h, e, det, to_coord: blade_table(theta), to_frame: blade_table(dx) })
    }

    /// Frame-blade coefficients to coordinate-blade (dx) coefficients.
    pub fn to_coord<S: FromJet2>(&self, a: &Multivector<S>) -> Multivector<S> {
        convert(&self.to_coord, a)
    }

    /// Coordinate-blade coefficients to frame-blade coefficients.
    pub fn to_frame<S: FromJet2>(&self, a: &Multivector<S>) -> Multivector<S> {
        convert(&self.to_frame, a)
    }

    /// Exterior derivative of a form given by frame-blade coefficients.
    pub fn d<S: Differentiable>(&self, a: &Multivector<S>) -> Multivector<S::Lower> {
        let c = self.to_coord(a);
        let mut dc = Multivector::<S::Lower>::zero();
        for j in 0..16 {
            if c.c[j].is_zero() {
                continue;
            }
            for mu in 0..DIM {
                let m = 1 << mu;
                if j & m != 0 {
                    continue;
                }
                let p = c.c[j].partial(mu);
                if SIGN[m][j] > 0 {
                    dc.c[m | j] += p;
                } else {
                    dc.c[m | j] -= p;
                }
            }
        }
        self.to_frame(&dc)
    }

    /// Codifferential δA_p = (−1)^p ⋆^{-1} d ⋆ A_p, applied grade by grade.
    pub fn codifferential<S: Differentiable>(&self, a: &Multivector<S>) -> Multivector<S::Lower> {
        let mut out = Multivector::zero();
        for p in 1..=4 {
            let ap = a.grade(p);
            if ap.is_zero() {
                continue;
            }
            let t = self.d(&ap.hodge()).hodge_inv();
            out += if p % 2 == 0 { t } else { -t };
        }
        out
    }

    /// Pfaff derivative e_a(f) = e_a^μ ∂_μ f.
    pub fn pfaff<S: Differentiable>(&self, f: &S, a: usize) -> S::Lower {
        let mut out = S::Lower::zero();
        for mu in 0..DIM {
            out += S::Lower::from_jet2(&self.e[a][mu]) * f.partial(mu);
        }
        out
    }

    /// Pfaff derivative applied to every coefficient.
    pub fn pfaff_mv<S: Differentiable>(&self, m: &Multivector<S>, a: usize) -> Multivector<S::Lower> {
        let mut out = Multivector::zero();
        for i in 0..16 {
            if !m.c[i].is_zero() {
                out.c[i] = self.pfaff(&m.c[i], a);
            }
        }
        out
    }

    /// Metric components g_μν = η_ab h^a_μ h^b_ν.
    pub fn metric<S: FromJet2>(&self) -> [[S; 4]; 4] {
        let mut g = [[S::zero(); 4]; 4];
        for mu in 0..4 {
            for nu in mu..4 {
                let mut s = S::zero();
                for a in 0..4 {
                    s += S::from_jet2(&self.h[a][mu]) * S::from_jet2(&self.h[a][nu]) * ETA[a];
                }
                g[mu][nu] = s;
                g[nu][mu] = s;
            }
        }
        g
    }

    /// Inverse metric g^μν = η^ab e_a^μ e_b^ν.
    pub fn inverse_metric<S: FromJet2>(&self) -> [[S; 4]; 4] {
        let mut g = [[S::zero(); 4]; 4];
        for mu in 0..4 {
            for nu in mu..4 {
                let mut s = S::zero();
                for a in 0..4 {
                    s += S::from_jet2(&self.e[a][mu]) * S::from_jet2(&self.e[a][nu]) * ETA[a];
                }
                g[mu][nu] = s;
                g[nu][mu] = s;
            }
        }
        g
    }

    /// max |h^a_μ e_b^μ − δ^a_b|
    pub fn inverse_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let s: f64 = (0..4).map(|mu| self.h[a][mu].value * self.e[b][mu].value).sum();
                r = r.max((s - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        r
    }

    /// Frame components θ^a(v) of a coordinate vector v^μ.
    pub fn frame_components<S: FromJet2>(&self, v: &[S; 4]) -> [S; 4] {
        std::array::from_fn(|a| {
            let mut s = S::zero();
            for mu in 0..4 {
                s += S::from_jet2(&self.h[a][mu]) * v[mu];
            }
            s
        })
    }
}
