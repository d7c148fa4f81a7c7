//! The check suites behind each command.

use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::clifford::{Blade, Multivector, ETA};
use crate::energy::{current_closure, em_at, grav_at, mass_integral, EmResiduals, GravResiduals, MassError, Quadrature};
use crate::expr::eval_f64;
use crate::geometry::{
    coframe_differentials, contorsion, curvature, dirac_split, levi_civita, ricci, sample_points, structure_coefficients,
    torsion, torsion_decomposition, values_forms, FramePoint, GeometryError, GeometrySample,
    PointGeometry, Residual, SampleError, Sampling,
};
use crate::jet::{Jet1, Jet2, Scalar};
use crate::report::{Check, CurrentClosure, GeometrySummary, Report, RicciStats, Settings, SpecEcho};
use crate::selftest::run_selftest;
use crate::spec::{EmFieldSpec, Spacetime, SpecError};
use crate::symmetry::{candidate_residuals, SymmetryVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Killing,
    Em,
    Grav,
    Mass,
}

impl Command {
    pub const ALL: [Command; 5] = [Command::Analyze, Command::Killing, Command::Em, Command::Grav, Command::Mass];

    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Killing => "killing",
            Command::Em => "em",
            Command::Grav => "grav",
            Command::Mass => "mass",
        }
    }
}

impl FromStr for Command {
    type Err = RunError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| RunError::Usage(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Mass(#[from] MassError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub sampling: Sampling,
    /// Identity tolerance.
    pub tol: f64,
    /// Verdict tolerance for Killing and torsion-invariance decisions.
    pub verdict_tol: f64,
    pub m2: Option<f64>,
    pub radii: Vec<f64>,
    pub field: Option<EmFieldSpec>,
    pub quadrature: Quadrature,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            sampling: Sampling::default(),
            tol: 1e-9,
            verdict_tol: 1e-6,
            m2: None,
            radii: Vec::new(),
            field: None,
            quadrature: Quadrature::default(),
        }
    }
}

impl RunOptions {
    fn settings(&self, cmd: Command) -> Settings {
        Settings {
            samples: self.sampling.count,
            seed: self.sampling.seed,
            tolerance: self.tol,
            verdict_tolerance: self.verdict_tol,
            m2: if cmd == Command::Grav { Some(self.m2.unwrap_or(0.0)) } else { None },
            radii: (cmd == Command::Mass).then(|| self.radii.clone()),
        }
    }
}

pub fn run(cmd: Command, st: &Spacetime, opts: &RunOptions) -> Result<Report, RunError> {
    let report = Report::new(cmd.name(), Some(SpecEcho::of(&st.spec)), opts.settings(cmd));
    let report = match cmd {
        Command::Analyze => analyze(st, opts, report)?,
        Command::Killing => killing(st, opts, report)?,
        Command::Em => em(st, opts, report)?,
        Command::Grav => grav(st, opts, report)?,
        Command::Mass => mass(st, opts, report)?,
    };
    Ok(report.finish())
}

pub fn selftest(seed: u64) -> Report {
    let settings = Settings { samples: 0, seed, tolerance: 1e-12, verdict_tolerance: 0.0, m2: None, radii: None };
    let mut r = Report::new("selftest", None, settings);
    r.checks = run_selftest(seed);
    r.finish()
}

fn points_where(
    st: &Spacetime,
    opts: &RunOptions,
    accept: impl Fn(&[f64; 4]) -> bool,
) -> Result<Vec<[f64; 4]>, RunError> {
    let params = st.params();
    let candidates_ok =
        |x: &[f64; 4]| st.candidates.iter().all(|c| c.xi.iter().all(|e| eval_f64(e, x, params).is_ok()));
    Ok(sample_points(&st.chart, &st.coframe, &opts.sampling, |x| candidates_ok(x) && accept(x))?)
}

// ---------------------------------------------------------------- analyze

#[derive(Clone, Debug)]
struct AnalyzePoint {
    inverse: Residual,
    metric: Residual,
    cartan: Residual,
    d2: Residual,
    structure: Residual,
    contorsion: Residual,
    flat: Residual,
    decomposition: Residual,
    dirac: Residual,
    ricci: f64,
    torsion_max: f64,
    curvature_max: f64,
    pieces: [f64; 3],
    sample: GeometrySample,
    /// Published value and the computed c^u_{mn} for every u, per published coefficient.
    reported: Vec<(f64, [f64; 4])>,
}

fn matrix_magnitude(m: &[[Multivector<Jet1>; 4]; 4]) -> f64 {
    m.iter().flatten().fold(0.0, |s, x| s.max(x.magnitude()))
}

/// Coordinate-dependent test forms for the Dirac split.
fn dirac_test_forms(x: &[f64; 4]) -> [Multivector<Jet2>; 2] {
    let v: [Jet2; 4] = std::array::from_fn(|mu| Jet2::variable(x[mu], mu));
    let one = Multivector::vector(std::array::from_fn(|a| v[a] * v[(a + 1) % 4] + Jet2::constant(1.0 + a as f64)));
    let mut two = Multivector::zero();
    for a in 0..4 {
        for b in (a + 1)..4 {
            two.c[(1 << a) | (1 << b)] = v[a] * v[b] * v[b] - v[(a + b) % 4];
        }
    }
    [one, two]
}

fn analyze_point(st: &Spacetime, fp: FramePoint, reported: &[(usize, [usize; 2], crate::expr::Expr)]) -> Result<AnalyzePoint, RunError> {
    let dtheta = coframe_differentials(&fp);
    let lc = levi_civita(&dtheta);
    let dmag = dtheta.iter().fold(0.0f64, |s, m| s.max(m.magnitude()));
    let wmag = matrix_magnitude(&lc);

    let mut metric = Residual::default();
    for a in 0..4 {
        for b in 0..4 {
            let s = lc[a][b].scale(ETA[a]) + lc[b][a].scale(ETA[b]);
            metric = metric.merge(Residual::new(s.magnitude(), wmag));
        }
    }

    let t = torsion(&dtheta, &lc);
    let cartan: Residual = t.iter().map(|m| Residual::new(m.magnitude(), dmag)).collect();

    let d2: Residual = dtheta.iter().map(|m| Residual::new(fp.d(m).max_abs(), dmag)).collect();

    let c = structure_coefficients(&fp);
    let cmag = c.iter().flatten().flatten().fold(0.0f64, |s, x| s.max(x.magnitude()));
    let mut structure = Residual::default();
    for a in 0..4 {
        for m in 0..4 {
            for n in (m + 1)..4 {
                let diff = dtheta[a].get(Blade((1 << m) | (1 << n))) + c[a][m][n];
                structure = structure.merge(Residual::new(diff.magnitude(), cmag));
            }
        }
    }

    let kappa = contorsion(&dtheta);
    let mut contorsion_res = Residual::default();
    let mut shifted = lc;
    for a in 0..4 {
        for b in 0..4 {
            shifted[a][b] = lc[a][b] + kappa[a][b];
            contorsion_res = contorsion_res.merge(Residual::new(shifted[a][b].magnitude(), wmag));
        }
    }
    let curv_lc = curvature(&fp, &lc);
    let curv_tele = curvature(&fp, &shifted);
    let rmag = curv_lc.iter().flatten().fold(0.0f64, |s, m| s.max(m.max_abs()));
    let flat: Residual = curv_tele.iter().flatten().map(|m| Residual::new(m.max_abs(), rmag.max(wmag * wmag))).collect();

    let dv = values_forms(&dtheta);
    let dvmag = dv.iter().fold(0.0f64, |s, m| s.max(m.max_abs()));
    let [rest, vec_part, ax_part] = torsion_decomposition(&dv);
    let mut decomposition = Residual::default();
    let mut trace = [Multivector::<f64>::zero(); 3];
    let mut axial = [Multivector::<f64>::zero(); 3];
    for a in 0..4 {
        let sum = rest[a] + vec_part[a] + ax_part[a] - dv[a];
        decomposition = decomposition.merge(Residual::new(sum.max_abs(), dvmag));
        for (k, piece) in [&rest, &vec_part, &ax_part].into_iter().enumerate() {
            trace[k] += Multivector::theta(a).left_contract(&piece[a].scale(ETA[a]));
            axial[k] += piece[a].wedge(&Multivector::theta_lower(a));
        }
    }
    // the tentor has neither trace nor axial part, the tractor no axial part, the axitor no trace
    for m in [trace[0], axial[0], axial[1], trace[2]] {
        decomposition = decomposition.merge(Residual::new(m.max_abs(), dvmag));
    }
    let pieces = [&rest, &vec_part, &ax_part].map(|p| p.iter().fold(0.0f64, |s, m| s.max(m.max_abs())));

    let mut dirac = Residual::default();
    for form in dirac_test_forms(&fp.x) {
        let (r1, r2, scale) = dirac_split::<Jet2>(&fp, &lc, &form);
        dirac = dirac.merge(Residual::new(r1.max(r2), scale));
    }

    let (_, ricci_scalar) = ricci(&curv_lc);
    let pg = PointGeometry::new(fp.clone(), st.mode);
    let torsion_max = values_forms(&pg.torsion).iter().fold(0.0f64, |s, m| s.max(m.max_abs()));
    let curvature_max = pg.curvature.iter().flatten().fold(0.0f64, |s, m| s.max(m.max_abs()));
    let sample = GeometrySample::compute(&fp, st.mode);

    let mut rep = Vec::with_capacity(reported.len());
    for (_, [l0, l1], e) in reported {
        let v = eval_f64(e, &fp.x, st.params()).map_err(GeometryError::from)?;
        rep.push((v, std::array::from_fn(|k| c[k][*l0][*l1].value)));
    }

    Ok(AnalyzePoint {
        inverse: Residual::new(fp.inverse_residual(), 1.0),
        metric,
        cartan,
        d2,
        structure,
        contorsion: contorsion_res,
        flat,
        decomposition,
        dirac,
        ricci: ricci_scalar,
        torsion_max,
        curvature_max,
        pieces,
        sample,
        reported: rep,
    })
}

fn analyze(st: &Spacetime, opts: &RunOptions, mut report: Report) -> Result<Report, RunError> {
    let meta = st.spec.metadata.clone().unwrap_or_default();
    let mut reported = Vec::new();
    for (i, rc) in meta.reported_structure.iter().enumerate() {
        if rc.upper > 3 || rc.lower.iter().any(|&l| l > 3) {
            return Err(SpecError::Invalid(format!("metadata.reported_structure[{i}]: labels must be 0-3")).into());
        }
        let e = st.parse_expr(&format!("metadata.reported_structure[{i}].expr"), &rc.expr)?;
        reported.push((rc.upper, rc.lower, e));
    }
    let points = points_where(st, opts, |x| reported.iter().all(|(_, _, e)| eval_f64(e, x, st.params()).is_ok()))?;
    let per_point: Vec<AnalyzePoint> = points
        .par_iter()
        .map(|x| analyze_point(st, st.coframe.at(*x)?, &reported))
        .collect::<Result<_, RunError>>()?;

    let fold = |f: fn(&AnalyzePoint) -> Residual| per_point.iter().map(f).collect::<Residual>().normalized();
    let tol = opts.tol;
    report.conventions.push(BRACKET_CONVENTION.into());
    report.conventions.push("R_bd = R^a_{bad}, R = η^{bd}R_bd".into());
    let checks = vec![
        Check::new("inverse_frame", "h^a_μ e_b^μ = δ^a_b", fold(|p| p.inverse), tol),
        Check::new("metric_compatibility", "ω_ab + ω_ba = 0", fold(|p| p.metric), tol),
        Check::new("cartan_first", "dθ^a + ω^a_b∧θ^b = 0 (Levi-Civita)", fold(|p| p.cartan), tol),
        Check::new("d_squared", "d(dθ^a) = 0", fold(|p| p.d2), tol),
        Check::new("structure_consistency", "dθ^a = −½c^a_{mn}θ^m∧θ^n", fold(|p| p.structure), tol),
        Check::new("contorsion", "κ^a_b = −ω^a_b (Levi-Civita)", fold(|p| p.contorsion), tol),
        Check::new("teleparallel_flatness", "ℛ(ω + κ) = 0", fold(|p| p.flat), tol),
        Check::new("torsion_decomposition", "dθ^a = ⁽¹⁾ + ⁽²⁾ + ⁽³⁾, pieces irreducible", fold(|p| p.decomposition), tol),
        Check::new("dirac_split", "θ^a∇_{e_a}A = dA − δA", fold(|p| p.dirac), tol),
    ];
    report.checks = checks;

    let n = per_point.len().max(1) as f64;
    let ricci_scalar = RicciStats {
        min: per_point.iter().map(|p| p.ricci).fold(f64::INFINITY, f64::min),
        max: per_point.iter().map(|p| p.ricci).fold(f64::NEG_INFINITY, f64::max),
        mean: per_point.iter().map(|p| p.ricci).sum::<f64>() / n,
    };
    let mut pieces = [0.0f64; 3];
    for p in &per_point {
        for k in 0..3 {
            pieces[k] = pieces[k].max(p.pieces[k]);
        }
    }
    for (i, (u, [l0, l1], _)) in reported.iter().enumerate() {
        if let Some(note) = structure_note(&meta.reported_structure[i].expr, *u, [*l0, *l1], &per_point, i, opts.verdict_tol) {
            report.discrepancies.push(note);
        }
    }
    if !reported.is_empty() {
        let worst = reported
            .iter()
            .enumerate()
            .map(|(i, (u, _, _))| per_point.iter().map(|p| mismatch(p.reported[i].0, p.reported[i].1[*u])).collect::<Residual>().normalized())
            .fold(0.0, f64::max);
        report.checks.push(
            Check::new("published_structure", "published c^a_{mn} = computed c^a_{mn}", worst, opts.verdict_tol)
                .informational(),
        );
    }
    report.geometry = Some(GeometrySummary {
        ricci_scalar,
        torsion_max: per_point.iter().map(|p| p.torsion_max).fold(0.0, f64::max),
        curvature_max: per_point.iter().map(|p| p.curvature_max).fold(0.0, f64::max),
        decomposition_max: pieces,
        samples: per_point.into_iter().map(|p| p.sample).collect(),
    });
    Ok(report)
}

fn mismatch(published: f64, computed: f64) -> Residual {
    Residual::new((published - computed).abs(), published.abs().max(computed.abs()))
}

/// Describe how a published structure coefficient differs from the computed one, if it does.
fn structure_note(
    text: &str,
    u: usize,
    lower: [usize; 2],
    pts: &[AnalyzePoint],
    i: usize,
    tol: f64,
) -> Option<String> {
    let label = |k: usize| format!("c^{k}_{{{}{}}}", lower[0], lower[1]);
    let off = |k: usize| pts.iter().map(|p| mismatch(p.reported[i].0, p.reported[i].1[k])).collect::<Residual>().normalized();
    let worst = off(u);
    if worst < tol {
        return None;
    }
    let mut what = format!("published {} = {text} differs from the computed value (relative mismatch {worst:.2e})", label(u));
    let ratios: Vec<f64> = pts
        .iter()
        .filter(|p| p.reported[i].0.abs() > 1e-12)
        .map(|p| p.reported[i].1[u] / p.reported[i].0)
        .collect();
    let all_zero = pts.iter().all(|p| p.reported[i].1[u].abs() < 1e-12);
    if all_zero {
        what.push_str(&format!("; computed {} vanishes", label(u)));
    } else if let Some(&k) = ratios.first() {
        if ratios.iter().all(|r| (r - k).abs() <= tol * k.abs().max(1.0)) {
            what.push_str(&format!("; computed = {k:.6} × published"));
        }
    }
    if let Some(other) = (0..4).find(|&k| k != u && off(k) < tol) {
        what.push_str(&format!("; it matches {} instead", label(other)));
    }
    Some(what)
}

// ---------------------------------------------------------------- killing

fn verdicts(st: &Spacetime, points: &[[f64; 4]], verdict_tol: f64) -> Result<Vec<SymmetryVerdict>, RunError> {
    let res = candidate_residuals(points, &st.coframe, st.mode, &st.candidates)?;
    Ok(st.candidates.iter().zip(&res).map(|(c, r)| SymmetryVerdict::from_residuals(c, r, verdict_tol)).collect())
}

const BRACKET_CONVENTION: &str = "[e_m, e_n] = c^a_{mn} e_a";

fn killing(st: &Spacetime, opts: &RunOptions, mut report: Report) -> Result<Report, RunError> {
    report.conventions.push(BRACKET_CONVENTION.into());
    report.conventions.push("frame torsion condition uses frame components ξ^a = θ^a(ξ); the oracle decides torsion invariance".into());
    let points = points_where(st, opts, |_| true)?;
    let vs = verdicts(st, &points, opts.verdict_tol)?;
    let tol = opts.verdict_tol;
    let meta = st.spec.metadata.as_ref();
    let published = meta.and_then(|m| m.reported_torsion_symmetric.clone());
    let mut typos = 0;
    for (i, v) in vs.iter().enumerate() {
        let row = i + 1;
        report.checks.push(Check::new(format!("killing.{}", v.name), "ϰ_ab + ϰ_ba = 0", v.killing_residual, tol));
        report.checks.push(
            Check::new(format!("torsion.{}", v.name), "£_ξΘ^a = ϰ^a_bΘ^b", v.lie_torsion_oracle_residual, tol)
                .informational(),
        );
        if v.killing_pass {
            report.checks.push(Check::new(format!("corollary.{}", v.name), "M_ab + M_ba = 0", v.corollary_residual, tol));
        }
        if let Some(l) = v.lemma2_residual {
            report.checks.push(Check::new(format!("lemma.{}", v.name), "DM^a_b + ξ⌟ℛ^a_b = 0", l, tol));
        }
        if meta.is_some() && !v.killing_pass {
            typos += 1;
            report.discrepancies.push(format!(
                "row {row} ({}) is not a Killing field here (residual {:.2e}); suspected typo in the published table",
                v.name, v.killing_residual
            ));
        }
        let published_pass = v.torsion_condition_published_form_residual < tol;
        if published_pass != v.torsion_pass {
            report.discrepancies.push(format!(
                "row {row} ({}): the frame torsion condition with the published index order gives {:.2e}, the Lie-derivative oracle {:.2e}",
                v.name, v.torsion_condition_published_form_residual, v.lie_torsion_oracle_residual
            ));
        }
        if let Some(rows) = &published {
            let claimed = rows.contains(&row);
            if claimed && !v.torsion_pass {
                report.discrepancies.push(format!(
                    "row {row} ({}) is published as leaving the torsion invariant, but the oracle gives {:.2e} (frame condition {:.2e})",
                    v.name, v.lie_torsion_oracle_residual, v.torsion_condition_residual
                ));
            } else if !claimed && v.torsion_pass {
                report.discrepancies.push(format!(
                    "row {row} ({}) also leaves the torsion invariant, beyond the published claim: oracle {:.2e}, frame condition {:.2e}",
                    v.name, v.lie_torsion_oracle_residual, v.torsion_condition_residual
                ));
            }
        }
    }
    if let Some(rows) = &published {
        let mut worst: f64 = 0.0;
        let mut notes = Vec::new();
        for &row in rows {
            match vs.get(row.wrapping_sub(1)) {
                Some(v) => worst = worst.max(v.lie_torsion_oracle_residual),
                None => notes.push(format!("published row {row} does not exist")),
            }
        }
        if !notes.is_empty() {
            worst = f64::INFINITY;
        }
        let mut c = Check::new(
            "published_torsion_rows",
            "published torsion-invariant rows pass the oracle",
            worst,
            tol,
        );
        c.notes.extend(notes);
        report.checks.push(c);
    }
    if meta.is_some() {
        report.suspected_typos = Some(typos);
    }
    report.candidates = vs;
    Ok(report)
}

// ---------------------------------------------------------------- em

fn em(st: &Spacetime, opts: &RunOptions, mut report: Report) -> Result<Report, RunError> {
    let spec = opts.field.as_ref().ok_or_else(|| RunError::Usage("em needs a field file (--field)".into()))?;
    let field = spec.compile(st)?;
    let field_ok = |x: &[f64; 4]| {
        st.coframe.at(*x).is_ok_and(|fp| {
            field.f.at(&fp, &field.params).is_ok()
                && field.j.as_ref().is_none_or(|j| j.at(&fp, &field.params).is_ok())
        })
    };
    let points = points_where(st, opts, field_ok)?;
    let vs = verdicts(st, &points, opts.verdict_tol)?;
    let per_point: Vec<(EmResiduals, Vec<Residual>)> = points
        .par_iter()
        .map(|x| {
            let pg = PointGeometry::new(st.coframe.at(*x)?, st.mode);
            let f = field.f.at(&pg.fp, &field.params)?;
            let j = field.j.as_ref().map(|j| j.at(&pg.fp, &field.params)).transpose()?;
            let r = em_at(&pg, &f, j.as_ref());
            let closures = st
                .candidates
                .iter()
                .map(|c| Ok(current_closure(&pg, &f, &c.coordinate_components(x, &field.params)?)))
                .collect::<Result<Vec<_>, GeometryError>>()?;
            Ok((r, closures))
        })
        .collect::<Result<_, RunError>>()?;
    let mut total = EmResiduals::default();
    let mut closure = vec![Residual::default(); st.candidates.len()];
    for (r, cl) in per_point {
        total = total.merge(r);
        for (acc, c) in closure.iter_mut().zip(cl) {
            *acc = acc.merge(c);
        }
    }
    let tol = opts.tol;
    report.checks = vec![
        Check::new("maxwell_closed", "dF = 0", total.d_f.normalized(), tol),
        Check::new("maxwell_source", "δF + J = 0", total.delta_f_plus_j.normalized(), tol),
        Check::new("stress_symmetry", "𝒯_ab = 𝒯_ba", total.symmetry.normalized(), tol),
        Check::new("stress_trace", "η^{ab}𝒯_ab = 0", total.trace.normalized(), tol),
        Check::new("stress_two_path", "−½⟨Fθ_aF̃⟩₁·θ_b = F_acF_b^c − ¼F_cdF^{cd}η_ab", total.two_path.normalized(), tol),
        Check::new("stress_conservation", "D⋆𝒯_c + ⋆𝒯_a∧(θ_c⌟Θ^a) = 0", total.conservation.normalized(), tol),
        Check::new("angular_momentum", "⋆𝒯^b∧θ_a = ⋆𝒯_a∧θ^b", total.angular.normalized(), tol),
    ];
    for ((c, v), r) in st.candidates.iter().zip(&vs).zip(&closure) {
        let mut check = Check::new(format!("current.{}", c.name), "d(ξ^a⋆𝒯_a) = 0", r.normalized(), tol);
        if !v.killing_pass {
            check = check.informational().note("candidate is not a Killing field");
        }
        report.checks.push(check);
        report.currents.push(CurrentClosure { candidate: c.name.clone(), killing_pass: v.killing_pass, residual: r.normalized() });
    }
    Ok(report)
}

// ---------------------------------------------------------------- grav

fn grav(st: &Spacetime, opts: &RunOptions, mut report: Report) -> Result<Report, RunError> {
    let points = points_where(st, opts, |_| true)?;
    let m2 = opts.m2.unwrap_or(0.0);
    let total = points
        .par_iter()
        .map(|x| Ok(grav_at(&st.coframe.at(*x)?, m2)))
        .collect::<Result<Vec<_>, RunError>>()?
        .into_iter()
        .fold(GravResiduals::default(), GravResiduals::merge);
    let tol = opts.tol;
    report.checks = vec![
        Check::new("sparling", "⋆G^a + ⋆t^a + d⋆S^a = 0", total.sparling.normalized(), tol),
        Check::new("einstein_forms", "−½ℛ_bc∧⋆θ^{bca} = ⋆(ℛ^a − ½Rθ^a)", total.einstein.normalized(), tol),
        Check::new("superpotential_gauge", "d(⋆S^a + closed) = d⋆S^a", total.gauge.normalized(), tol),
        Check::new("field_equation", format!("d⋆S^a + ⋆t^a + m²⋆θ^a = 0, m² = {m2}"), total.field_equation.normalized(), tol)
            .informational()
            .note("holds only on vacuum solutions with this m²"),
    ];
    Ok(report)
}

// ---------------------------------------------------------------- mass

fn mass(st: &Spacetime, opts: &RunOptions, mut report: Report) -> Result<Report, RunError> {
    if opts.radii.is_empty() {
        return Err(RunError::Usage("mass needs --radii r1,r2,...".into()));
    }
    let [lo, hi] = st.chart.domain[0];
    let time = 0.5 * (lo + hi);
    let table = mass_integral(&st.coframe, time, &opts.radii, &opts.quadrature)?;
    let mut order: Vec<usize> = (0..table.radii.len()).collect();
    order.sort_by(|&a, &b| table.radii[a].total_cmp(&table.radii[b]));
    let gaps: Vec<f64> = order.iter().map(|&i| (table.values[i] - table.extrapolated).abs()).collect();
    let stalls = gaps.windows(2).filter(|w| w[1] > w[0]).count();
    report.checks.push(
        Check::new("mass_monotone_convergence", "|m_I(r) − m_I(∞)| decreases with r", stalls as f64, 0.0)
            .informational()
            .note(format!("correction at the largest radius {:.3e}", gaps.last().copied().unwrap_or(0.0))),
    );
    report.mass = Some(table);
    Ok(report)
}

/// Run a command on a spacetime, or the selftest when `st` is None.
pub fn run_any(cmd: Option<Command>, st: Option<&Spacetime>, opts: &RunOptions) -> Result<Report, RunError> {
    match (cmd, st) {
        (None, _) => Ok(selftest(opts.sampling.seed)),
        (Some(c), Some(st)) => run(c, st, opts),
        (Some(c), None) => Err(RunError::Usage(format!("{} needs a spacetime", c.name()))),
    }
}
