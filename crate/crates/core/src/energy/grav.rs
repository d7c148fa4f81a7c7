//! Superpotentials ⋆S^c, pseudo-tensor ⋆t^c and Einstein 3-forms ⋆G^d built
//! from the Levi-Civita connection of the coframe.
//!
//! ⋆G^a + ⋆t^a + d⋆S^a = 0 holds for every coframe. With a cosmological
//! term the vacuum field equation reads d⋆S^a + ⋆t^a + m²⋆θ^a = 0, which only
//! solutions satisfy.

use crate::clifford::{Multivector, ETA};
use crate::geometry::{
    coframe_differentials, curvature, levi_civita, ricci, values_matrix, FormMatrix, Forms, FramePoint, Residual,
};
use crate::jet::{Jet1, Jet2, Scalar};

fn star_triple<S: Scalar>(a: usize, b: usize, c: usize) -> Multivector<S> {
    Multivector::<S>::from_labels(&[a, b, c]).hodge()
}

/// ω_{ab} = η_{aa}ω^a_b.
fn lower_first<S: Scalar>(w: &FormMatrix<S>) -> FormMatrix<S> {
    std::array::from_fn(|a| std::array::from_fn(|b| w[a][b].scale(ETA[a])))
}

/// ⋆S^c = ½ω_{ab}∧⋆(θ^a∧θ^b∧θ^c).
pub fn superpotentials<S: Scalar>(omega: &FormMatrix<S>) -> Forms<S> {
    let wl = lower_first(omega);
    std::array::from_fn(|c| {
        let mut s = Multivector::zero();
        for a in 0..4 {
            for b in 0..4 {
                if a != b && a != c && b != c {
                    s += wl[a][b].wedge(&star_triple(a, b, c));
                }
            }
        }
        s.scale(0.5)
    })
}

/// ⋆t^c = −½ω_{ab}∧[ω^c_d∧⋆θ^{abd} + ω^b_d∧⋆θ^{adc}].
pub fn pseudotensor(omega: &FormMatrix<f64>) -> Forms<f64> {
    let wl = lower_first(omega);
    std::array::from_fn(|c| {
        let mut s = Multivector::zero();
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                let mut inner = Multivector::zero();
                for d in 0..4 {
                    inner += omega[c][d].wedge(&star_triple(a, b, d)) + omega[b][d].wedge(&star_triple(a, d, c));
                }
                s += wl[a][b].wedge(&inner);
            }
        }
        s.scale(-0.5)
    })
}

/// ⋆G^d = −½ℛ_{ab}∧⋆(θ^a∧θ^b∧θ^d).
pub fn einstein_forms(curv: &FormMatrix<f64>) -> Forms<f64> {
    let rl = lower_first(curv);
    std::array::from_fn(|d| {
        let mut s = Multivector::zero();
        for a in 0..4 {
            for b in 0..4 {
                s += rl[a][b].wedge(&star_triple(a, b, d));
            }
        }
        s.scale(-0.5)
    })
}

/// ⋆(ℛ^d − ½Rθ^d) from the Ricci tensor, with ℛ^d = η^{dd}R_{db}θ^b.
pub fn einstein_from_ricci(curv: &FormMatrix<f64>) -> Forms<f64> {
    let (ric, r) = ricci(curv);
    std::array::from_fn(|d| {
        let one: [f64; 4] = std::array::from_fn(|b| ETA[d] * ric[d][b] - if b == d { 0.5 * r } else { 0.0 });
        Multivector::vector(one).hodge()
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GravResiduals {
    /// ⋆G + ⋆t + d⋆S
    pub sparling: Residual,
    /// −½ℛ_{ab}∧⋆θ^{abd} against the Einstein 1-forms.
    pub einstein: Residual,
    /// d⋆S unchanged by adding a closed 2-form.
    pub gauge: Residual,
    /// d⋆S + ⋆t + m²⋆θ
    pub field_equation: Residual,
}

impl GravResiduals {
    pub fn merge(self, o: Self) -> Self {
        GravResiduals {
            sparling: self.sparling.merge(o.sparling),
            einstein: self.einstein.merge(o.einstein),
            gauge: self.gauge.merge(o.gauge),
            field_equation: self.field_equation.merge(o.field_equation),
        }
    }
}

/// Constant-coefficient coordinate 2-forms, one per frame label; closed in any chart.
fn closed_two_forms(fp: &FramePoint) -> Forms<Jet1> {
    std::array::from_fn(|c| {
        let mut coord = Multivector::<Jet2>::zero();
        for mu in 0..4 {
            for nu in (mu + 1)..4 {
                let k = (c + 1) as f64 * (1 + mu + 2 * nu) as f64 / 10.0;
                coord.c[(1 << mu) | (1 << nu)] = Jet2::constant(k);
            }
        }
        fp.to_frame(&coord).map(|x| Jet1::new(x.value, x.grad))
    })
}

pub fn grav_at(fp: &FramePoint, m2: f64) -> GravResiduals {
    let omega = levi_civita(&coframe_differentials(fp));
    let curv = curvature(fp, &omega);
    let w = values_matrix(&omega);
    let s = superpotentials(&omega);
    let t = pseudotensor(&w);
    let g = einstein_forms(&curv);
    let g_ricci = einstein_from_ricci(&curv);
    let alpha = closed_two_forms(fp);
    let mut out = GravResiduals::default();
    for c in 0..4 {
        let ds = fp.d(&s[c]);
        let sum = g[c] + t[c] + ds;
        let sc = g[c].max_abs().max(t[c].max_abs()).max(ds.max_abs());
        out.sparling = out.sparling.merge(Residual::new(sum.max_abs(), sc));

        let diff = g[c] - g_ricci[c];
        out.einstein = out.einstein.merge(Residual::new(diff.max_abs(), g[c].max_abs().max(g_ricci[c].max_abs())));

        let shifted = fp.d(&(s[c] + alpha[c]));
        out.gauge = out
            .gauge
            .merge(Residual::new((shifted - ds).max_abs(), ds.max_abs().max(alpha[c].magnitude())));

        let cosmo = Multivector::<f64>::theta(c).hodge().scale(m2);
        let fe = ds + t[c] + cosmo;
        out.field_equation = out
            .field_equation
            .merge(Residual::new(fe.max_abs(), ds.max_abs().max(t[c].max_abs()).max(cosmo.max_abs())));
    }
    out
}
