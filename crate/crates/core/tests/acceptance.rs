//! Acceptance criteria A1 to A8, one PASS/FAIL line each.
//!
//! A criterion listed in `KNOWN_FAILURES` still prints FAIL; the run only
//! exits non-zero if it fails differently from the pinned expectation or if
//! any other criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clifgeo::catalog;
use clifgeo::report::Report;
use clifgeo::spec::{EmFieldSpec, SpacetimeSpec};
use clifgeo::suite::{run, selftest, Command, RunOptions};

const SEED: u64 = 42;

const ALGEBRA_TOL: f64 = 1e-12;
const SELFTEST_BUDGET: Duration = Duration::from_secs(5);

const CARTAN_TOL: f64 = 1e-9;
const D_SQUARED_TOL: f64 = 1e-10;
const STRUCTURE_TOL: f64 = 1e-10;
const CONTORSION_TOL: f64 = 1e-9;
const RICCI_TOL: f64 = 1e-7;
const FLATNESS_TOL: f64 = 1e-9;
const ANALYZE_BUDGET: Duration = Duration::from_secs(10);

const KILLING_TOL: f64 = 1e-8;
const KILLING_BUDGET: Duration = Duration::from_secs(10);

const MAXWELL_TOL: f64 = 1e-9;
const STRESS_TOL: f64 = 1e-10;
const CONSERVATION_TOL: f64 = 1e-8;
const CURRENT_TOL: f64 = 1e-8;

const SPARLING_TOL: f64 = 1e-8;
const PERTURBATIONS: usize = 20;
const PERTURBATION_SIZE: f64 = 0.05;

const MASS_REL_TOL: f64 = 0.01;
const MASS_ZERO_TOL: f64 = 1e-10;
const MASS_RADII: [f64; 3] = [100.0, 300.0, 1000.0];
const MASS_BUDGET: Duration = Duration::from_secs(30);

/// Spacetimes that carry a published Killing table.
const TABLED: [&str; 4] = ["desitter_inner", "desitter_outer", "friedmann", "schwarzschild"];

/// Table rows that are not Killing fields of their coframe. A3 cannot pass
/// while these exist; the flagged set is golden.
const KNOWN_FAILURES: [(&str, &[&str]); 1] = [(
    "A3",
    &[
        "desitter_inner/p2",
        "desitter_inner/p3",
        "desitter_outer/p1",
        "desitter_outer/p2",
        "desitter_outer/p3",
        "desitter_outer/p4",
        "desitter_outer/p5",
        "desitter_outer/p6",
        "friedmann/p5",
    ],
)];

struct Outcome {
    id: &'static str,
    title: &'static str,
    problems: Vec<String>,
    /// Stable description of a failure, compared against `KNOWN_FAILURES`.
    signature: Vec<String>,
    elapsed: Duration,
}

impl Outcome {
    fn new(id: &'static str, title: &'static str) -> Self {
        Outcome { id, title, problems: Vec::new(), signature: Vec::new(), elapsed: Duration::ZERO }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(what());
        }
    }

    fn below(&mut self, label: &str, value: Option<f64>, tol: f64) {
        match value {
            Some(v) if v < tol || (tol == 0.0 && v == 0.0) => {}
            Some(v) => self.problems.push(format!("{label} = {v:.3e}, needs < {tol:.0e}")),
            None => self.problems.push(format!("{label} missing or not finite")),
        }
    }

    fn within(&mut self, label: &str, elapsed: Duration, budget: Duration) {
        self.require(elapsed < budget, || format!("{label} took {elapsed:.2?}, budget {budget:?}"));
    }
}

fn opts() -> RunOptions {
    RunOptions::default()
}

fn run_named(cmd: Command, name: &str, o: &RunOptions) -> (Report, Duration) {
    let st = catalog::builtin(name).unwrap().compile().unwrap();
    let t = Instant::now();
    let r = run(cmd, &st, o).unwrap_or_else(|e| panic!("{} {name}: {e}", cmd.name()));
    (r, t.elapsed())
}

fn residual(r: &Report, id: &str) -> Option<f64> {
    r.check(id).and_then(|c| c.residual)
}

fn a1_a8() -> (Outcome, Outcome) {
    let mut a1 = Outcome::new("A1", "algebra suite");
    let mut a8 = Outcome::new("A8", "expression layer");
    let t = Instant::now();
    let r = selftest(SEED);
    let elapsed = t.elapsed();
    a1.elapsed = elapsed;
    a8.elapsed = elapsed;
    a1.below("generator_relation", residual(&r, "generator_relation"), 0.0);
    for id in ["associativity", "vector_product_split", "vector_sandwich", "hodge_defining"] {
        a1.below(id, residual(&r, id), ALGEBRA_TOL);
    }
    a1.within("selftest", elapsed, SELFTEST_BUDGET);
    for id in ["jet_gradient", "jet_hessian", "parse_round_trip"] {
        let c = r.check(id);
        a8.require(c.is_some_and(|c| c.pass), || format!("{id} failed: {:?}", c.map(|c| (c.residual, c.tolerance))));
    }
    (a1, a8)
}

fn a2() -> Outcome {
    let mut out = Outcome::new("A2", "geometry identities");
    for name in catalog::NAMES {
        let (r, dt) = run_named(Command::Analyze, name, &opts());
        out.elapsed += dt;
        out.below(&format!("{name} cartan_first"), residual(&r, "cartan_first"), CARTAN_TOL);
        out.below(&format!("{name} d_squared"), residual(&r, "d_squared"), D_SQUARED_TOL);
        out.below(&format!("{name} structure_consistency"), residual(&r, "structure_consistency"), STRUCTURE_TOL);
        out.below(&format!("{name} contorsion"), residual(&r, "contorsion"), CONTORSION_TOL);
        out.below(&format!("{name} teleparallel_flatness"), residual(&r, "teleparallel_flatness"), FLATNESS_TOL);
        if name.starts_with("schwarzschild") {
            let g = r.geometry.as_ref().expect("analyze reports geometry");
            let worst = g.ricci_scalar.min.abs().max(g.ricci_scalar.max.abs());
            out.below(&format!("{name} |R|"), Some(worst), RICCI_TOL);
        }
        out.within(&format!("analyze {name}"), dt, ANALYZE_BUDGET);
    }
    out
}

fn a3_a4() -> (Outcome, Outcome) {
    let mut a3 = Outcome::new("A3", "Killing verdicts");
    let mut a4 = Outcome::new("A4", "torsion-symmetry verdicts");
    let mut typos = 0;
    for name in TABLED {
        let (r, dt) = run_named(Command::Killing, name, &opts());
        a3.elapsed += dt;
        a4.elapsed += dt;
        a4.within(&format!("killing {name}"), dt, KILLING_BUDGET);

        for (row, v) in r.candidates.iter().enumerate() {
            if v.killing_residual >= KILLING_TOL {
                a3.problems.push(format!("{name} row {} ({}) killing residual {:.2e}", row + 1, v.name, v.killing_residual));
                a3.signature.push(format!("{name}/{}", v.name));
                let flagged = r.discrepancies.iter().any(|d| d.starts_with(&format!("row {} ({})", row + 1, v.name)) && d.contains("suspected typo"));
                a3.require(flagged, || format!("{name} {} fails Killing but is not flagged", v.name));
            }
        }
        typos += r.suspected_typos.unwrap_or(0);

        let claimed: Vec<&str> = match name {
            "friedmann" => r.candidates.iter().map(|v| v.name.as_str()).collect(),
            "desitter_inner" => vec!["p7"],
            "schwarzschild" => vec!["p4"],
            _ => continue,
        };
        for (row, v) in r.candidates.iter().enumerate() {
            let fixed_pass = v.torsion_condition_residual < r.settings.verdict_tolerance;
            if claimed.contains(&v.name.as_str()) {
                a4.require(v.torsion_pass, || format!("{name} {} fails the oracle ({:.2e})", v.name, v.lie_torsion_oracle_residual));
                a4.require(fixed_pass, || format!("{name} {} fails the frame condition ({:.2e})", v.name, v.torsion_condition_residual));
            } else if v.torsion_pass {
                let note = r.discrepancies.iter().find(|d| d.starts_with(&format!("row {} ({}) also leaves", row + 1, v.name)));
                let ok = note.is_some_and(|d| d.contains("oracle") && d.contains("frame condition"));
                a4.require(ok, || format!("{name} {} passes beyond the claim without a note", v.name));
            }
        }
    }
    let golden = KNOWN_FAILURES[0].1.len();
    a3.require(typos == golden, || format!("suspected typo count {typos}, golden {golden}"));
    (a3, a4)
}

fn coulomb() -> EmFieldSpec {
    EmFieldSpec::from_json(r#"{"F": {"10": "q/r^2"}, "parameters": {"q": 1}}"#).unwrap()
}

fn a5() -> Outcome {
    let mut out = Outcome::new("A5", "EM suite");
    let o = RunOptions { field: Some(coulomb()), ..opts() };
    let (r, dt) = run_named(Command::Em, "minkowski_spherical", &o);
    out.elapsed = dt;
    let st = catalog::builtin("minkowski_spherical").unwrap();
    out.require(st.domain.get("r") == Some(&[1.0, 10.0]), || format!("sampled r range {:?}", st.domain.get("r")));
    out.below("maxwell_closed", residual(&r, "maxwell_closed"), MAXWELL_TOL);
    out.below("maxwell_source", residual(&r, "maxwell_source"), MAXWELL_TOL);
    for id in ["stress_symmetry", "stress_trace", "stress_two_path"] {
        out.below(id, residual(&r, id), STRESS_TOL);
    }
    out.below("stress_conservation", residual(&r, "stress_conservation"), CONSERVATION_TOL);
    out.below("current.translation_t", residual(&r, "current.translation_t"), CURRENT_TOL);
    out
}

/// Minkowski coframe plus small smooth random terms in every entry.
fn perturbed_minkowski(rng: &mut ChaCha8Rng, i: usize) -> SpacetimeSpec {
    let mut spec = catalog::builtin("minkowski_cartesian").unwrap();
    spec.name = format!("minkowski_perturbed_{i}");
    spec.killing.clear();
    spec.metadata = None;
    for (a, row) in spec.coframe.iter_mut().enumerate() {
        for (mu, entry) in row.iter_mut().enumerate() {
            let amp = PERTURBATION_SIZE * rng.gen_range(-1.0..1.0);
            let k: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let base = if a == mu { "1" } else { "0" };
            *entry = format!("{base} + {amp}*sin({}*t + {}*x + {}*y + {}*z + {phase})", k[0], k[1], k[2], k[3]);
        }
    }
    spec
}

fn a6() -> Outcome {
    let mut out = Outcome::new("A6", "Sparling identity");
    for name in catalog::NAMES {
        let (r, dt) = run_named(Command::Grav, name, &opts());
        out.elapsed += dt;
        out.below(&format!("{name} sparling"), residual(&r, "sparling"), SPARLING_TOL);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..PERTURBATIONS {
        let spec = perturbed_minkowski(&mut rng, i);
        let st = spec.compile().unwrap();
        let t = Instant::now();
        let r = run(Command::Grav, &st, &opts()).unwrap();
        out.elapsed += t.elapsed();
        out.below(&spec.name, residual(&r, "sparling"), SPARLING_TOL);
    }
    out
}

fn a7() -> Outcome {
    let mut out = Outcome::new("A7", "mass integral");
    let o = RunOptions { radii: MASS_RADII.to_vec(), ..opts() };
    for m in [1.0, 2.0] {
        let st = catalog::builtin("schwarzschild_isotropic").unwrap().with_params(&[("m".into(), m)]).unwrap().compile().unwrap();
        let t = Instant::now();
        let r = run(Command::Mass, &st, &o).unwrap();
        let dt = t.elapsed();
        out.elapsed += dt;
        out.within(&format!("mass m = {m}"), dt, MASS_BUDGET);
        let got = r.mass.as_ref().map(|t| t.extrapolated);
        out.below(&format!("relative error, m = {m}"), got.map(|g| (g - m).abs() / m), MASS_REL_TOL);
    }
    let (r, dt) = run_named(Command::Mass, "minkowski_cartesian", &o);
    out.elapsed += dt;
    out.below("minkowski |m_I|", r.mass.as_ref().map(|t| t.extrapolated.abs()), MASS_ZERO_TOL);
    out
}

fn main() -> ExitCode {
    let (a1, a8) = a1_a8();
    let (a3, a4) = a3_a4();
    let outcomes = [a1, a2(), a3, a4, a5(), a6(), a7(), a8];

    let mut unexpected = 0;
    for o in &outcomes {
        let pass = o.problems.is_empty();
        println!("{} {} {} ({:.2?})", if pass { "PASS" } else { "FAIL" }, o.id, o.title, o.elapsed);
        for p in &o.problems {
            println!("     {p}");
        }
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == o.id);
        match (pass, known) {
            (true, None) => {}
            (true, Some(_)) => {
                println!("     expected to fail; the pinned failure list is stale");
                unexpected += 1;
            }
            (false, Some((_, rows))) if o.signature == *rows && o.problems.len() == rows.len() => {
                println!("     known failure: matches the {} pinned rows", rows.len());
            }
            (false, _) => unexpected += 1,
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected result(s)");
        ExitCode::FAILURE
    }
}
