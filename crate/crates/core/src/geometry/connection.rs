//! Connection, torsion and curvature forms at a point.
//!
//! Index conventions: ω[a][b] is the 1-form ω^a_b, with ∇_X e_b = ω^a_b(X) e_a;
//! lowering uses η, so ω_{ab} = η_{aa} ω^a_b. Curvature is
//! ℛ^a_b = dω^a_b + ω^a_c∧ω^c_b = ½R^a_{bcd}θ^c∧θ^d, Ricci R_{bd} = R^a_{bad}
//! and the scalar R = η^{bd}R_{bd}. With these conventions the de Sitter
//! coframes give R = −12α.

use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector, ETA};
use crate::jet::{Differentiable, FromJet2, Jet1, Scalar};

use super::FramePoint;

/// Connection-dependent objects at one point.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub fp: FramePoint,
    pub mode: ConnectionMode,
    pub dtheta: Forms<Jet1>,
    pub omega: FormMatrix<Jet1>,
    /// Θ^a; identically zero for Levi-Civita, dθ^a for teleparallel.
    pub torsion: Forms<Jet1>,
    pub curvature: FormMatrix<f64>,
}

impl PointGeometry {
    pub fn new(fp: FramePoint, mode: ConnectionMode) -> Self {
        let dtheta = coframe_differentials(&fp);
        let (omega, torsion) = match mode {
            ConnectionMode::LeviCivita => (levi_civita(&dtheta), [Multivector::zero(); 4]),
            ConnectionMode::Teleparallel => (zero_matrix(), dtheta),
        };
        let curvature = curvature(&fp, &omega);
        PointGeometry { fp, mode, dtheta, omega, torsion, curvature }
    }
}

/// One form per frame label.
pub type Forms<S> = [Multivector<S>; 4];
/// Matrix of forms, [a][b] for the upper/lower index pair.
pub type FormMatrix<S> = [[Multivector<S>; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectionMode {
    LeviCivita,
    Teleparallel,
}

impl ConnectionMode {
    pub fn label(self) -> &'static str {
        match self {
            ConnectionMode::LeviCivita => "levi-civita",
            ConnectionMode::Teleparallel => "teleparallel",
        }
    }
}

pub fn zero_matrix<S: Scalar>() -> FormMatrix<S> {
    [[Multivector::zero(); 4]; 4]
}

/// dθ^a.
pub fn coframe_differentials(fp: &FramePoint) -> Forms<Jet1> {
    std::array::from_fn(|a| fp.d(&Multivector::<crate::jet::Jet2>::theta(a)))
}

/// Lower every coefficient by one derivative order.
pub fn lower_forms<S: Differentiable>(f: &Forms<S>) -> Forms<S::Lower> {
    f.each_ref().map(|m| m.map(|x| x.lower()))
}

pub fn lower_matrix<S: Differentiable>(f: &FormMatrix<S>) -> FormMatrix<S::Lower> {
    f.each_ref().map(|row| row.each_ref().map(|m| m.map(|x| x.lower())))
}

pub fn values_forms<S: Scalar>(f: &Forms<S>) -> Forms<f64> {
    f.each_ref().map(|m| m.values())
}

pub fn values_matrix<S: Scalar>(f: &FormMatrix<S>) -> FormMatrix<f64> {
    f.each_ref().map(|row| row.each_ref().map(|m| m.values()))
}

/// ½[θ^d⌟T^c − θ^c⌟T^d + (θ^c⌟(θ^d⌟T_a))θ^a], returned with the second index
/// lowered: out[c][d] is the 1-form with indices ^c_d.
///
/// With T = dθ this is the Levi-Civita connection; with T = Θ (teleparallel
/// torsion) its negative is the contorsion.
pub fn antisymmetric_solve<S: Scalar>(t: &Forms<S>) -> FormMatrix<S> {
    let theta: [Multivector<S>; 4] = std::array::from_fn(Multivector::theta);
    let mut upper = zero_matrix::<S>();
    for c in 0..4 {
        for d in (c + 1)..4 {
            let mut w = theta[d].left_contract(&t[c]) - theta[c].left_contract(&t[d]);
            for (a, th) in theta.iter().enumerate() {
                let s = theta[c].left_contract(&theta[d].left_contract(&t[a].scale(ETA[a])));
                w += th.scale_by(s.c[0]);
            }
            w = w.scale(0.5);
            upper[c][d] = w;
            upper[d][c] = -w;
        }
    }
    let mut out = zero_matrix::<S>();
    for c in 0..4 {
        for d in 0..4 {
            out[c][d] = upper[c][d].scale(ETA[d]);
        }
    }
    out
}

/// Levi-Civita connection 1-forms ω^a_b.
pub fn levi_civita(dtheta: &Forms<Jet1>) -> FormMatrix<Jet1> {
    antisymmetric_solve(dtheta)
}

/// Contorsion κ^a_b of the teleparallel connection, whose torsion is dθ.
pub fn contorsion<S: Scalar>(torsion: &Forms<S>) -> FormMatrix<S> {
    antisymmetric_solve(torsion).map(|row| row.map(|m| -m))
}

/// Θ^a = dθ^a + ω^a_b∧θ^b.
pub fn torsion<S: Scalar>(dtheta: &Forms<S>, omega: &FormMatrix<S>) -> Forms<S> {
    std::array::from_fn(|a| {
        let mut t = dtheta[a];
        for (b, w) in omega[a].iter().enumerate() {
            t += w.wedge(&Multivector::theta(b));
        }
        t
    })
}

/// ℛ^a_b = dω^a_b + ω^a_c∧ω^c_b.
pub fn curvature(fp: &FramePoint, omega: &FormMatrix<Jet1>) -> FormMatrix<f64> {
    let w = values_matrix(omega);
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut r = fp.d(&omega[a][b]);
            for c in 0..4 {
                r += w[a][c].wedge(&w[c][b]);
            }
            r
        })
    })
}

/// R^a_{bcd} from ℛ^a_b = ½R^a_{bcd}θ^c∧θ^d.
pub fn riemann(curv: &FormMatrix<f64>) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in (c + 1)..4 {
                    let v = curv[a][b].get(Blade((1 << c) | (1 << d)));
                    r[a][b][c][d] = v;
                    r[a][b][d][c] = -v;
                }
            }
        }
    }
    r
}

/// Ricci tensor R_{bd} = R^a_{bad} and scalar η^{bd}R_{bd}.
pub fn ricci(curv: &FormMatrix<f64>) -> ([[f64; 4]; 4], f64) {
    let r = riemann(curv);
    let mut ric = [[0.0; 4]; 4];
    for b in 0..4 {
        for d in 0..4 {
            ric[b][d] = (0..4).map(|a| r[a][b][a][d]).sum();
        }
    }
    let scalar = (0..4).map(|b| ETA[b] * ric[b][b]).sum();
    (ric, scalar)
}

/// c^a_{mn} from [e_m, e_n] = c^a_{mn} e_a, computed from derivatives of the
/// inverse frame. Indexed [a][m][n].
pub fn structure_coefficients(fp: &FramePoint) -> [[[Jet1; 4]; 4]; 4] {
    let e1: [[Jet1; 4]; 4] = fp.e.map(|row| row.map(|x| x.lower()));
    let h1: [[Jet1; 4]; 4] = fp.h.map(|row| row.map(|x| x.lower()));
    let mut c = [[[Jet1::zero(); 4]; 4]; 4];
    for m in 0..4 {
        for n in (m + 1)..4 {
            let bracket: [Jet1; 4] = std::array::from_fn(|mu| {
                let mut s = Jet1::zero();
                for nu in 0..4 {
                    s += e1[m][nu] * fp.e[n][mu].partial(nu) - e1[n][nu] * fp.e[m][mu].partial(nu);
                }
                s
            });
            for a in 0..4 {
                let mut s = Jet1::zero();
                for mu in 0..4 {
                    s += h1[a][mu] * bracket[mu];
                }
                c[a][m][n] = s;
                c[a][n][m] = -s;
            }
        }
    }
    c
}

/// Components T^a_{mn} of 2-forms Θ^a = ½T^a_{mn}θ^m∧θ^n, indexed [a][m][n].
pub fn two_form_components<S: Scalar>(f: &Forms<S>) -> [[[S; 4]; 4]; 4] {
    let mut t = [[[S::zero(); 4]; 4]; 4];
    for a in 0..4 {
        for m in 0..4 {
            for n in (m + 1)..4 {
                let v = f[a].get(Blade((1 << m) | (1 << n)));
                t[a][m][n] = v;
                t[a][n][m] = -v;
            }
        }
    }
    t
}

/// Irreducible pieces of dθ^a: (tractor, axitor, tentor), with
/// ⁽²⁾ = ⅓θ^a∧(θ^b⌟dθ_b), ⁽³⁾ = −⅓⋆(θ^a∧⋆(dθ^b∧θ_b)), ⁽¹⁾ the remainder.
pub fn torsion_decomposition<S: Scalar>(dtheta: &Forms<S>) -> [Forms<S>; 3] {
    let mut trace = Multivector::<S>::zero();
    let mut axial = Multivector::<S>::zero();
    for b in 0..4 {
        trace += Multivector::theta(b).left_contract(&dtheta[b].scale(ETA[b]));
        axial += dtheta[b].wedge(&Multivector::theta_lower(b));
    }
    let star_axial = axial.hodge();
    let vec_part: Forms<S> = std::array::from_fn(|a| Multivector::theta(a).wedge(&trace).scale(1.0 / 3.0));
    let ax_part: Forms<S> =
        std::array::from_fn(|a| Multivector::theta(a).wedge(&star_axial).hodge().scale(-1.0 / 3.0));
    let rest: Forms<S> = std::array::from_fn(|a| dtheta[a] - vec_part[a] - ax_part[a]);
    [rest, vec_part, ax_part]
}

/// Connection bivector ω_{e_a} = ½ω^{bc}(e_a)θ_b∧θ_c.
pub fn connection_bivector<S: Scalar>(omega: &FormMatrix<S>, a: usize) -> Multivector<S> {
    let mut out = Multivector::zero();
    for b in 0..4 {
        for c in 0..4 {
            if b == c {
                continue;
            }
            // ω^{bc} = ω^b_c η^{cc}; its value on e_a is the θ^a coefficient
            let w = omega[b][c].get(Blade(1 << a)) * ETA[c];
            let blade = Multivector::<S>::theta_lower(b).wedge(&Multivector::theta_lower(c));
            out += blade.scale_by(w).scale(0.5);
        }
    }
    out
}

/// Residuals of the Dirac split ∂A = θ^a∇_{e_a}A against d and δ:
/// returns (max|∂∧A − dA|, max|∂⌟A + δA|, scale).
pub fn dirac_split<S>(fp: &FramePoint, omega: &FormMatrix<S::Lower>, a: &Multivector<S>) -> (f64, f64, f64)
where
    S: Differentiable,
{
    let al = a.map(|x| x.lower());
    let mut wedge_part = Multivector::<S::Lower>::zero();
    let mut contr_part = Multivector::<S::Lower>::zero();
    for k in 0..4 {
        let nabla = fp.pfaff_mv(a, k) + connection_bivector(omega, k).commutator(&al).scale(0.5);
        let th = Multivector::<S::Lower>::theta(k);
        wedge_part += th.wedge(&nabla);
        contr_part += th.left_contract(&nabla);
    }
    let da = fp.d(a);
    let delta = fp.codifferential(a);
    let r1 = (wedge_part - da).values().max_abs();
    let r2 = (contr_part + delta).values().max_abs();
    let scale = da.values().max_abs().max(delta.values().max_abs()).max(wedge_part.values().max_abs());
    (r1, r2, scale)
}

/// Lift f64-valued frames of forms to any scalar type as constants.
pub fn constant_forms<S: FromJet2>(f: &Forms<f64>) -> Forms<S> {
    f.each_ref().map(|m| m.map(|x| S::constant(*x)))
}
