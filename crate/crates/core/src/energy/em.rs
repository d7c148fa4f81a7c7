//! Maxwell field stress and the matter conservation identities.

use crate::clifford::{Multivector, ETA};
use crate::geometry::{values_matrix, PointGeometry, Residual};
use crate::jet::{Jet2, Scalar};
use crate::symmetry::frame_components;

/// 𝒯_a = −½⟨Fθ_aF̃⟩₁ (the product is already a vector for a 2-form F).
pub fn stress_sandwich<S: Scalar>(f: &Multivector<S>) -> [Multivector<S>; 4] {
    let rev = f.reverse();
    std::array::from_fn(|a| f.geometric(&Multivector::theta_lower(a)).geometric(&rev).grade(1).scale(-0.5))
}

/// ⋆𝒯_a.
pub fn stress_forms<S: Scalar>(f: &Multivector<S>) -> [Multivector<S>; 4] {
    stress_sandwich(f).map(|t| t.hodge())
}

/// 𝒯_{ab} = 𝒯_a·θ_b.
pub fn stress_matrix(t: &[Multivector<f64>; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| t[a].scalar_product(&Multivector::theta_lower(b))))
}

/// 𝒯_{ab} = η^{cl}F_{ac}F_{bl} − ¼F_{cd}F^{cd}η_{ab}, from the blade coefficients of F.
pub fn stress_components(f: &Multivector<f64>) -> [[f64; 4]; 4] {
    let mut fl = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in (a + 1)..4 {
            let v = f.c[(1 << a) | (1 << b)];
            fl[a][b] = v;
            fl[b][a] = -v;
        }
    }
    let mut ff = 0.0;
    for c in 0..4 {
        for d in 0..4 {
            ff += fl[c][d] * fl[c][d] * ETA[c] * ETA[d];
        }
    }
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let s: f64 = (0..4).map(|c| ETA[c] * fl[a][c] * fl[b][c]).sum();
            s - 0.25 * ff * if a == b { ETA[a] } else { 0.0 }
        })
    })
}

fn mat_max(m: &[[f64; 4]; 4]) -> f64 {
    m.iter().flatten().fold(0.0, |x, v| x.max(v.abs()))
}

/// Algebraic stress checks at one point: (symmetry, trace, sandwich vs components).
pub fn stress_algebra(f: &Multivector<f64>) -> (Residual, Residual, Residual) {
    let sand = stress_matrix(&stress_sandwich(f));
    let comp = stress_components(f);
    let scale = mat_max(&sand).max(mat_max(&comp));
    let mut sym: f64 = 0.0;
    let mut two: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            sym = sym.max((sand[a][b] - sand[b][a]).abs());
            two = two.max((sand[a][b] - comp[a][b]).abs());
        }
    }
    let trace: f64 = (0..4).map(|a| ETA[a] * sand[a][a]).sum();
    (Residual::new(sym, scale), Residual::new(trace.abs(), scale), Residual::new(two, scale))
}

/// Per-point EM residuals.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EmResiduals {
    pub d_f: Residual,
    pub delta_f_plus_j: Residual,
    pub symmetry: Residual,
    pub trace: Residual,
    pub two_path: Residual,
    pub conservation: Residual,
    pub angular: Residual,
}

impl EmResiduals {
    pub fn merge(self, o: Self) -> Self {
        EmResiduals {
            d_f: self.d_f.merge(o.d_f),
            delta_f_plus_j: self.delta_f_plus_j.merge(o.delta_f_plus_j),
            symmetry: self.symmetry.merge(o.symmetry),
            trace: self.trace.merge(o.trace),
            two_path: self.two_path.merge(o.two_path),
            conservation: self.conservation.merge(o.conservation),
            angular: self.angular.merge(o.angular),
        }
    }
}

/// D⋆𝒯_c + ⋆𝒯_a∧(θ_c⌟Θ^a) with D⋆𝒯_c = d⋆𝒯_c − ω^b_c∧⋆𝒯_b.
pub fn conservation_residual(pg: &PointGeometry, star_t: &[Multivector<Jet2>; 4]) -> Residual {
    let w = values_matrix(&pg.omega);
    let st: [Multivector<f64>; 4] = star_t.each_ref().map(|m| m.values());
    let mut out = Residual::default();
    for c in 0..4 {
        let d = pg.fp.d(&star_t[c]).values();
        let mut conn = Multivector::<f64>::zero();
        let mut tors = Multivector::<f64>::zero();
        let theta_c = Multivector::<f64>::theta_lower(c);
        for b in 0..4 {
            conn -= w[b][c].wedge(&st[b]);
            tors += st[b].wedge(&theta_c.left_contract(&pg.torsion[b].values()));
        }
        let total = d + conn + tors;
        out = out.merge(Residual::new(total.max_abs(), d.max_abs().max(conn.max_abs()).max(tors.max_abs())));
    }
    out
}

/// ½|⋆𝒯^b∧θ_a − ⋆𝒯_a∧θ^b| over all a, b.
pub fn angular_residual(star_t: &[Multivector<f64>; 4]) -> Residual {
    let mut out = Residual::default();
    for a in 0..4 {
        for b in 0..4 {
            let p = star_t[b].scale(ETA[b]).wedge(&Multivector::theta_lower(a));
            let q = star_t[a].wedge(&Multivector::theta(b));
            out = out.merge(Residual::new(0.5 * (p - q).max_abs(), 0.5 * p.max_abs().max(q.max_abs())));
        }
    }
    out
}

/// Maxwell, stress and conservation residuals at one point.
pub fn em_at(pg: &PointGeometry, f: &Multivector<Jet2>, j: Option<&Multivector<Jet2>>) -> EmResiduals {
    let fp = &pg.fp;
    let df = fp.d(f).values();
    let delta = fp.codifferential(f).values();
    let jv = j.map(|m| m.values()).unwrap_or_default();
    let fv = f.values();
    let d_scale = f.magnitude();
    let (symmetry, trace, two_path) = stress_algebra(&fv);
    let star_t = stress_forms(f);
    let star_v = star_t.each_ref().map(|m| m.values());
    EmResiduals {
        d_f: Residual::new(df.max_abs(), d_scale),
        delta_f_plus_j: Residual::new((delta + jv).max_abs(), delta.max_abs().max(jv.max_abs()).max(d_scale)),
        symmetry,
        trace,
        two_path,
        conservation: conservation_residual(pg, &star_t),
        angular: angular_residual(&star_v),
    }
}

/// Closure |d(Σ_a ξ^a⋆𝒯_a)| of the Killing current at one point.
pub fn current_closure(pg: &PointGeometry, f: &Multivector<Jet2>, xi: &[Jet2; 4]) -> Residual {
    let (xa, _) = frame_components(&pg.fp, xi);
    let star_t = stress_forms(f);
    let mut current = Multivector::<Jet2>::zero();
    for a in 0..4 {
        current += star_t[a].scale_by(xa[a]);
    }
    let d = pg.fp.d(&current).values();
    // scale: the terms dξ^a∧⋆𝒯_a and ξ^a d⋆𝒯_a
    let mut scale: f64 = 0.0;
    for a in 0..4 {
        let dx = pg.fp.d(&Multivector::scalar(xa[a])).values();
        scale = scale.max(dx.wedge(&star_t[a].values()).max_abs());
        scale = scale.max((pg.fp.d(&star_t[a]).values().scale(xa[a].value)).max_abs());
    }
    Residual::new(d.max_abs(), scale)
}
