use clifgeo::catalog;
use clifgeo::report::Report;
use clifgeo::spec::SpacetimeSpec;
use clifgeo::suite::{run, Command, RunOptions};

fn killing(name: &str) -> Report {
    let st = catalog::builtin(name).unwrap().compile().unwrap();
    run(Command::Killing, &st, &RunOptions::default()).unwrap()
}

#[test]
fn report_json_round_trips_exactly() {
    let r = killing("desitter_inner");
    let text = r.to_json();
    let back = Report::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    assert_eq!(back.candidates, r.candidates);
}

#[test]
fn runs_are_deterministic() {
    assert_eq!(killing("friedmann").to_json(), killing("friedmann").to_json());
}

#[test]
fn suspected_typo_counts() {
    let counts: Vec<(&str, usize)> = ["desitter_inner", "desitter_outer", "friedmann", "schwarzschild"]
        .into_iter()
        .map(|n| (n, killing(n).suspected_typos.unwrap()))
        .collect();
    assert_eq!(counts, [("desitter_inner", 2), ("desitter_outer", 6), ("friedmann", 1), ("schwarzschild", 0)]);
}

#[test]
fn torsion_invariant_candidates() {
    let passing = |name: &str| -> Vec<String> { killing(name).candidates.into_iter().filter(|v| v.torsion_pass).map(|v| v.name).collect() };
    assert_eq!(passing("friedmann"), ["p1", "p2", "p3", "p4", "p5", "p6"]);
    assert_eq!(passing("desitter_inner"), ["p7", "p10"]);
    assert_eq!(passing("desitter_outer"), ["p7", "p10"]);
    assert_eq!(passing("schwarzschild"), ["p1", "p4"]);
}

#[test]
fn every_builtin_spec_round_trips() {
    for spec in catalog::all() {
        let text = spec.to_json();
        let back = SpacetimeSpec::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text, "{}", spec.name);
        back.compile().unwrap();
    }
}

#[test]
fn json_errors_name_the_path() {
    let mut v: serde_json::Value = serde_json::from_str(&catalog::builtin("friedmann").unwrap().to_json()).unwrap();
    v["coframe"][3][3] = serde_json::json!(7);
    let err = SpacetimeSpec::from_json(&v.to_string()).unwrap_err().to_string();
    assert!(err.contains("coframe[3][3]"), "{err}");

    v["coframe"][3][3] = serde_json::json!("R(t) * (");
    let err = SpacetimeSpec::from_json(&v.to_string()).unwrap().compile().unwrap_err().to_string();
    assert!(err.contains("R(t) * ("), "{err}");
}

#[test]
fn mass_of_schwarzschild_converges() {
    let opts = RunOptions { radii: vec![100.0, 300.0, 1000.0], ..RunOptions::default() };
    for m in [0.5, 1.0, 2.0] {
        let st = catalog::builtin("schwarzschild_isotropic").unwrap().with_params(&[("m".into(), m)]).unwrap().compile().unwrap();
        let table = run(Command::Mass, &st, &opts).unwrap().mass.unwrap();
        assert!((table.extrapolated - m).abs() < 1e-3 * m, "m = {m}: {}", table.extrapolated);
        for w in table.values.windows(2) {
            assert!((w[1] - m).abs() <= (w[0] - m).abs());
        }
    }
}
