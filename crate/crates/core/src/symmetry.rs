//! Killing-field verification and the torsion symmetry conditions.
//!
//! Candidates are given by coordinate components ξ^μ; frame components are
//! ξ^a = θ^a(ξ). The Lie derivative of the coframe is written
//! £_ξθ^a = ϰ^a_b θ^b with
//!
//! ϰ^a_b = e_b(ξ^a) + ξ^m c^a_{bm},
//!
//! which follows from £_ξθ^a(e_b) = −θ^a([ξ, e_b]) and [e_m, e_n] = c^a_{mn}e_a.
//! ξ is Killing iff ϰ_{ab} + ϰ_{ba} = 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector, ETA};
use crate::expr::{eval_jet, Expr, Params};
use crate::geometry::{
    structure_coefficients, two_form_components, ConnectionMode, FramePoint, GeometryError, PointGeometry, Residual,
};
use crate::jet::{Differentiable, Jet1, Jet2, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct KillingCandidate {
    pub name: String,
    /// Coordinate components ξ^μ.
    pub xi: [Expr; 4],
}

impl KillingCandidate {
    pub fn coordinate_components(&self, x: &[f64; 4], params: &Params) -> Result<[Jet2; 4], GeometryError> {
        let mut out = [Jet2::zero(); 4];
        for (o, e) in out.iter_mut().zip(&self.xi) {
            *o = eval_jet(e, x, params)?;
        }
        Ok(out)
    }
}

/// ξ^a = θ^a(ξ) and the 1-form ξ* = η_{ab}ξ^b θ^a.
pub fn frame_components(fp: &FramePoint, xi_coord: &[Jet2; 4]) -> ([Jet2; 4], Multivector<Jet2>) {
    let xa = fp.frame_components(xi_coord);
    let star = Multivector::vector(std::array::from_fn(|a| xa[a] * ETA[a]));
    (xa, star)
}

/// ϰ^a_b, indexed [a][b].
pub fn kappa_matrix(fp: &FramePoint, xa: &[Jet2; 4], c: &[[[Jet1; 4]; 4]; 4]) -> [[Jet1; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut k = fp.pfaff(&xa[a], b);
            for m in 0..4 {
                k += xa[m].lower() * c[a][b][m];
            }
            k
        })
    })
}

/// Residuals of every check for one candidate, folded over sample points.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CandidateResiduals {
    pub killing: Residual,
    /// T^m_{db}e_m(ξ^a) + e_d(ξ^mT^a_{bm}) − e_b(ξ^mT^a_{dm})
    pub torsion_condition: Residual,
    /// Same with T^m_{bd} in the first term.
    pub torsion_condition_published_form: Residual,
    pub lie_torsion: Residual,
    pub frame_constraint: Residual,
    pub lemma2: Residual,
    pub corollary: Residual,
}

impl CandidateResiduals {
    pub fn merge(self, o: Self) -> Self {
        CandidateResiduals {
            killing: self.killing.merge(o.killing),
            torsion_condition: self.torsion_condition.merge(o.torsion_condition),
            torsion_condition_published_form: self.torsion_condition_published_form.merge(o.torsion_condition_published_form),
            lie_torsion: self.lie_torsion.merge(o.lie_torsion),
            frame_constraint: self.frame_constraint.merge(o.frame_constraint),
            lemma2: self.lemma2.merge(o.lemma2),
            corollary: self.corollary.merge(o.corollary),
        }
    }
}

fn max_abs<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Killing residual at a point, scaled by sup|e_b(ξ^a)| + sup|ξ^a|.
pub fn killing_at(fp: &FramePoint, xa: &[Jet2; 4], kappa: &[[Jet1; 4]; 4]) -> Residual {
    let mut abs: f64 = 0.0;
    for a in 0..4 {
        for b in a..4 {
            abs = abs.max((ETA[a] * kappa[a][b].value + ETA[b] * kappa[b][a].value).abs());
        }
    }
    let grad = max_abs((0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| fp.pfaff(&xa[a], b).value));
    Residual::new(abs, grad + max_abs(xa.iter().map(|x| x.value)))
}

/// Both forms of the frame torsion condition: (swapped-index form, printed form).
fn torsion_condition_at(fp: &FramePoint, xa: &[Jet2; 4], t: &[[[Jet1; 4]; 4]; 4]) -> (Residual, Residual) {
    let x1: [Jet1; 4] = xa.map(|x| x.lower());
    // ξ^m T^a_{bm} as Jet1, indexed [a][b]
    let xt: [[Jet1; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut s = Jet1::zero();
            for m in 0..4 {
                s += x1[m] * t[a][b][m];
            }
            s
        })
    });
    let exi: [[f64; 4]; 4] = std::array::from_fn(|m| std::array::from_fn(|a| fp.pfaff(&xa[a], m).value));
    let ext: [[[f64; 4]; 4]; 4] =
        std::array::from_fn(|d| std::array::from_fn(|a| std::array::from_fn(|b| fp.pfaff(&xt[a][b], d))));
    let (mut fixed, mut printed) = (Residual::default(), Residual::default());
    for a in 0..4 {
        for b in 0..4 {
            for d in 0..4 {
                let first_fixed: f64 = (0..4).map(|m| t[m][d][b].value * exi[m][a]).sum();
                let first_printed: f64 = (0..4).map(|m| t[m][b][d].value * exi[m][a]).sum();
                let rest = ext[d][a][b] - ext[b][a][d];
                let scale = ext[d][a][b].abs().max(ext[b][a][d].abs());
                fixed = fixed.merge(Residual::new((first_fixed + rest).abs(), scale.max(first_fixed.abs())));
                printed = printed.merge(Residual::new((first_printed + rest).abs(), scale.max(first_printed.abs())));
            }
        }
    }
    (fixed, printed)
}

/// |£_ξΘ| for the (1,2) torsion tensor, computed from coordinate components.
///
/// Θ^μ_{νλ} = e_a^μ Θ^a_{νλ}; for the teleparallel connection
/// Θ^a_{νλ} = ∂_νh^a_λ − ∂_λh^a_ν, for Levi-Civita it vanishes.
pub fn lie_torsion_oracle(fp: &FramePoint, mode: ConnectionMode, xi: &[Jet2; 4]) -> Residual {
    if mode == ConnectionMode::LeviCivita {
        return Residual::default();
    }
    let mut th = [[[Jet1::zero(); 4]; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            for la in (nu + 1)..4 {
                let mut s = Jet1::zero();
                for a in 0..4 {
                    s += fp.e[a][mu].lower() * (fp.h[a][la].partial(nu) - fp.h[a][nu].partial(la));
                }
                th[mu][nu][la] = s;
                th[mu][la][nu] = -s;
            }
        }
    }
    let dxi: [[f64; 4]; 4] = std::array::from_fn(|mu| std::array::from_fn(|s| xi[mu].grad[s]));
    let mut out = Residual::default();
    for mu in 0..4 {
        for nu in 0..4 {
            for la in (nu + 1)..4 {
                let transport: f64 = (0..4).map(|s| xi[s].value * th[mu][nu][la].grad[s]).sum();
                let up: f64 = (0..4).map(|s| th[s][nu][la].value * dxi[mu][s]).sum();
                let d1: f64 = (0..4).map(|s| th[mu][s][la].value * dxi[s][nu]).sum();
                let d2: f64 = (0..4).map(|s| th[mu][nu][s].value * dxi[s][la]).sum();
                let r = transport - up + d1 + d2;
                out = out.merge(Residual::new(r.abs(), max_abs([transport, up, d1, d2])));
            }
        }
    }
    out
}

/// ω^a_b(ξ) = ξ*⌟ω^a_b.
fn omega_on(omega: &[[Multivector<Jet1>; 4]; 4], x1: &[Jet1; 4]) -> [[Jet1; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut s = Jet1::zero();
            for (k, x) in x1.iter().enumerate() {
                s += omega[a][b].get(Blade(1 << k)) * *x;
            }
            s
        })
    })
}

/// All per-point residuals for one candidate.
pub fn candidate_at(pg: &PointGeometry, c: &[[[Jet1; 4]; 4]; 4], xi: &[Jet2; 4]) -> CandidateResiduals {
    let fp = &pg.fp;
    let (xa, star) = frame_components(fp, xi);
    let x1: [Jet1; 4] = xa.map(|x| x.lower());
    let kappa = kappa_matrix(fp, &xa, c);
    let killing = killing_at(fp, &xa, &kappa);

    let t = two_form_components(&pg.torsion);
    let (torsion_condition, torsion_condition_published_form) = torsion_condition_at(fp, &xa, &t);
    let lie_torsion = lie_torsion_oracle(fp, pg.mode, xi);

    // D(ξ^a) + ξ*⌟Θ^a
    let star1 = star.map(|x| x.lower());
    let w = crate::geometry::values_matrix(&pg.omega);
    let mut frame_constraint = Residual::default();
    for a in 0..4 {
        let dxa = fp.d(&Multivector::scalar(xa[a])).values();
        let mut wx = Multivector::<f64>::zero();
        for b in 0..4 {
            wx += w[a][b].scale(x1[b].value);
        }
        let ix = star1.left_contract(&pg.torsion[a]).values();
        let total = dxa + wx + ix;
        let scale = dxa.max_abs().max(wx.max_abs()).max(ix.max_abs());
        frame_constraint = frame_constraint.merge(Residual::new(total.max_abs(), scale));
    }

    // M^a_b = θ_b·L_ξθ^a = ϰ^a_b + ω^a_b(ξ)
    let wxi = omega_on(&pg.omega, &x1);
    let m: [[Jet1; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|b| kappa[a][b] + wxi[a][b]));
    let mut corollary = Residual::default();
    for a in 0..4 {
        for b in a..4 {
            let s = ETA[a] * m[a][b].value + ETA[b] * m[b][a].value;
            corollary = corollary.merge(Residual::new(s.abs(), m[a][b].value.abs().max(m[b][a].value.abs())));
        }
    }

    // DM^a_b + ξ*⌟ℛ^a_b with DM^a_b = dM^a_b + ω^a_c M^c_b − ω^c_b M^a_c
    let star0 = star.values();
    let mut lemma2 = Residual::default();
    for a in 0..4 {
        for b in 0..4 {
            let dm = fp.d(&Multivector::scalar(m[a][b]));
            let mut conn = Multivector::<f64>::zero();
            for k in 0..4 {
                conn += w[a][k].scale(m[k][b].value) - w[k][b].scale(m[a][k].value);
            }
            let curv = star0.left_contract(&pg.curvature[a][b]);
            let total = dm + conn + curv;
            let scale = dm.max_abs().max(conn.max_abs()).max(curv.max_abs());
            lemma2 = lemma2.merge(Residual::new(total.max_abs(), scale));
        }
    }

    CandidateResiduals {
        killing,
        torsion_condition,
        torsion_condition_published_form,
        lie_torsion,
        frame_constraint,
        lemma2,
        corollary,
    }
}

/// Pass/fail summary of one candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryVerdict {
    pub name: String,
    pub components: [String; 4],
    pub killing_residual: f64,
    /// Frame torsion condition with the index order that matches the oracle.
    pub torsion_condition_residual: f64,
    /// Frame torsion condition with the published index order.
    pub torsion_condition_published_form_residual: f64,
    pub lie_torsion_oracle_residual: f64,
    pub frame_constraint_residual: f64,
    /// None when the candidate fails the Killing or torsion-invariance precondition.
    pub lemma2_residual: Option<f64>,
    pub corollary_residual: f64,
    pub killing_pass: bool,
    /// Decided by the oracle.
    pub torsion_pass: bool,
    pub notes: Vec<String>,
}

impl SymmetryVerdict {
    pub fn from_residuals(c: &KillingCandidate, r: &CandidateResiduals, verdict_tol: f64) -> Self {
        let killing_pass = r.killing.normalized() < verdict_tol;
        let torsion_pass = r.lie_torsion.normalized() < verdict_tol;
        let fixed_pass = r.torsion_condition.normalized() < verdict_tol;
        let mut notes = Vec::new();
        if fixed_pass != torsion_pass {
            notes.push(format!(
                "frame torsion condition ({:.2e}) disagrees with the Lie-derivative oracle ({:.2e})",
                r.torsion_condition.normalized(),
                r.lie_torsion.normalized()
            ));
        }
        let lemma2 = (killing_pass && torsion_pass).then(|| r.lemma2.normalized());
        SymmetryVerdict {
            name: c.name.clone(),
            components: c.xi.each_ref().map(|e| e.to_string()),
            killing_residual: r.killing.normalized(),
            torsion_condition_residual: r.torsion_condition.normalized(),
            torsion_condition_published_form_residual: r.torsion_condition_published_form.normalized(),
            lie_torsion_oracle_residual: r.lie_torsion.normalized(),
            frame_constraint_residual: r.frame_constraint.normalized(),
            lemma2_residual: lemma2,
            corollary_residual: r.corollary.normalized(),
            killing_pass,
            torsion_pass,
            notes,
        }
    }
}

/// Fold the per-point residuals of every candidate over the sample points.
pub fn candidate_residuals(
    points: &[[f64; 4]],
    coframe: &crate::geometry::Coframe,
    mode: ConnectionMode,
    candidates: &[KillingCandidate],
) -> Result<Vec<CandidateResiduals>, GeometryError> {
    let per_point: Vec<Vec<CandidateResiduals>> = points
        .par_iter()
        .map(|x| {
            let pg = PointGeometry::new(coframe.at(*x)?, mode);
            let c = structure_coefficients(&pg.fp);
            candidates
                .iter()
                .map(|k| Ok(candidate_at(&pg, &c, &k.coordinate_components(x, &coframe.params)?)))
                .collect()
        })
        .collect::<Result<_, GeometryError>>()?;
    let mut out = vec![CandidateResiduals::default(); candidates.len()];
    for row in per_point {
        for (o, r) in out.iter_mut().zip(row) {
            *o = o.merge(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, SymbolTable};
    use crate::geometry::Coframe;

    fn cartesian() -> (Coframe, SymbolTable) {
        let st = SymbolTable::new(["t", "x", "y", "z"].map(String::from), Vec::<String>::new());
        let h = std::array::from_fn(|a| std::array::from_fn(|m| Expr::num(if a == m { 1.0 } else { 0.0 })));
        (Coframe { h, params: Params::new() }, st)
    }

    fn cand(st: &SymbolTable, xs: [&str; 4]) -> KillingCandidate {
        KillingCandidate { name: "c".into(), xi: xs.map(|s| parse(s, st).unwrap()) }
    }

    #[test]
    fn rotation_kappa_is_generator() {
        let (cf, st) = cartesian();
        let k = cand(&st, ["0", "-y", "x", "0"]);
        let fp = cf.at([0.1, 0.4, -0.3, 0.2]).unwrap();
        let xi = k.coordinate_components(&fp.x, &cf.params).unwrap();
        let (xa, _) = frame_components(&fp, &xi);
        let kappa = kappa_matrix(&fp, &xa, &structure_coefficients(&fp));
        assert_eq!(kappa[1][2].value, -1.0);
        assert_eq!(kappa[2][1].value, 1.0);
        assert_eq!(killing_at(&fp, &xa, &kappa).abs, 0.0);
    }

    #[test]
    fn dilation_is_not_killing() {
        let (cf, st) = cartesian();
        let k = cand(&st, ["t", "x", "y", "z"]);
        let pg = PointGeometry::new(cf.at([0.5, 0.1, 0.2, 0.3]).unwrap(), ConnectionMode::Teleparallel);
        let c = structure_coefficients(&pg.fp);
        let r = candidate_at(&pg, &c, &k.coordinate_components(&pg.fp.x, &cf.params).unwrap());
        assert!(r.killing.normalized() > 0.1);
        assert_eq!(r.lie_torsion.abs, 0.0);
    }
}
