//! Built-in spacetimes with their Killing tables.
//!
//! Tabulated candidates are stored verbatim, including entries that turn out
//! not to be Killing; the `killing` command flags those.

use indexmap::IndexMap;

use crate::geometry::ConnectionMode;
use crate::spec::{CandidateSpec, Definition, Metadata, ReportedCoefficient, SpacetimeSpec, SpecError};

pub const NAMES: [&str; 7] = [
    "minkowski_cartesian",
    "minkowski_spherical",
    "schwarzschild",
    "schwarzschild_isotropic",
    "desitter_inner",
    "desitter_outer",
    "friedmann",
];

pub fn builtin(name: &str) -> Result<SpacetimeSpec, SpecError> {
    Ok(match name {
        "minkowski_cartesian" => minkowski_cartesian(),
        "minkowski_spherical" => minkowski_spherical(),
        "schwarzschild" => schwarzschild(),
        "schwarzschild_isotropic" => schwarzschild_isotropic(),
        "desitter_inner" => desitter(false),
        "desitter_outer" => desitter(true),
        "friedmann" => friedmann(),
        _ => {
            return Err(SpecError::UnknownSpacetime {
                name: name.to_string(),
                valid: NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    })
}

pub fn all() -> Vec<SpacetimeSpec> {
    NAMES.iter().map(|n| builtin(n).expect("builtin names are valid")).collect()
}

fn s4(v: [&str; 4]) -> [String; 4] {
    v.map(String::from)
}

fn diag(d: [&str; 4]) -> [[String; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|m| if a == m { d[a].to_string() } else { "0".to_string() }))
}

fn rows(rows: &[[&str; 4]]) -> Vec<CandidateSpec> {
    rows.iter().enumerate().map(|(i, r)| CandidateSpec { name: format!("p{}", i + 1), components: s4(*r) }).collect()
}

fn named(rows: &[(&str, [&str; 4])]) -> Vec<CandidateSpec> {
    rows.iter().map(|(n, r)| CandidateSpec { name: n.to_string(), components: s4(*r) }).collect()
}

fn domain(coords: [&str; 4], boxes: [[f64; 2]; 4]) -> IndexMap<String, [f64; 2]> {
    coords.iter().zip(boxes).map(|(c, b)| (c.to_string(), b)).collect()
}

fn defs(d: &[(&str, &str)]) -> Vec<Definition> {
    d.iter().map(|(n, e)| Definition { name: n.to_string(), expr: e.to_string() }).collect()
}

fn coeff(upper: usize, lower: [usize; 2], expr: &str) -> ReportedCoefficient {
    ReportedCoefficient { upper, lower, expr: expr.to_string() }
}

const SPHERICAL: [&str; 4] = ["t", "r", "theta", "phi"];
const CARTESIAN: [&str; 4] = ["t", "x", "y", "z"];
const POLAR: [f64; 2] = [0.3, std::f64::consts::PI - 0.3];
const AZIMUTH: [f64; 2] = [0.0, 2.0 * std::f64::consts::PI];

fn minkowski_cartesian() -> SpacetimeSpec {
    SpacetimeSpec {
        name: "minkowski_cartesian".into(),
        coordinates: s4(CARTESIAN),
        parameters: IndexMap::new(),
        definitions: vec![],
        coframe: diag(["1", "1", "1", "1"]),
        domain: domain(CARTESIAN, [[-1.0, 1.0]; 4]),
        excluded: vec![],
        connection: ConnectionMode::LeviCivita,
        killing: named(&[
            ("translation_t", ["1", "0", "0", "0"]),
            ("translation_x", ["0", "1", "0", "0"]),
            ("translation_y", ["0", "0", "1", "0"]),
            ("translation_z", ["0", "0", "0", "1"]),
            ("rotation_xy", ["0", "-y", "x", "0"]),
            ("rotation_yz", ["0", "0", "-z", "y"]),
            ("rotation_zx", ["0", "z", "0", "-x"]),
            ("boost_x", ["x", "t", "0", "0"]),
            ("boost_y", ["y", "0", "t", "0"]),
            ("boost_z", ["z", "0", "0", "t"]),
        ]),
        metadata: Some(Metadata {
            description: Some("Minkowski spacetime in Cartesian coordinates with the ten Poincare generators".into()),
            ..Metadata::default()
        }),
    }
}

fn minkowski_spherical() -> SpacetimeSpec {
    SpacetimeSpec {
        name: "minkowski_spherical".into(),
        coordinates: s4(SPHERICAL),
        parameters: IndexMap::new(),
        definitions: vec![],
        coframe: diag(["1", "1", "r", "r*sin(theta)"]),
        domain: domain(SPHERICAL, [[0.0, 1.0], [1.0, 10.0], POLAR, AZIMUTH]),
        excluded: vec!["sin(theta)".into(), "r".into()],
        connection: ConnectionMode::LeviCivita,
        killing: named(&[
            ("translation_t", ["1", "0", "0", "0"]),
            ("rotation_z", ["0", "0", "0", "1"]),
            ("rotation_x", ["0", "0", "-sin(phi)", "-cot(theta)*cos(phi)"]),
            ("rotation_y", ["0", "0", "cos(phi)", "-cot(theta)*sin(phi)"]),
            (
                "translation_x",
                ["0", "sin(theta)*cos(phi)", "cos(theta)*cos(phi)/r", "-sin(phi)/(r*sin(theta))"],
            ),
            (
                "translation_y",
                ["0", "sin(theta)*sin(phi)", "cos(theta)*sin(phi)/r", "cos(phi)/(r*sin(theta))"],
            ),
            ("translation_z", ["0", "cos(theta)", "-sin(theta)/r", "0"]),
        ]),
        metadata: Some(Metadata {
            description: Some("Minkowski spacetime in spherical coordinates".into()),
            ..Metadata::default()
        }),
    }
}

fn schwarzschild() -> SpacetimeSpec {
    SpacetimeSpec {
        name: "schwarzschild".into(),
        coordinates: s4(SPHERICAL),
        parameters: [("k".to_string(), 2.0)].into_iter().collect(),
        definitions: defs(&[("zeta", "sqrt(1 - k/r)")]),
        coframe: diag(["zeta", "1/zeta", "r", "r*sin(theta)"]),
        domain: domain(SPHERICAL, [[0.0, 1.0], [6.0, 20.0], POLAR, AZIMUTH]),
        excluded: vec!["sin(theta)".into(), "r".into(), "1 - k/r".into()],
        connection: ConnectionMode::Teleparallel,
        killing: rows(&[
            ["1", "0", "0", "0"],
            ["0", "0", "-sin(phi)", "-cot(theta)*cos(phi)"],
            ["0", "0", "cos(phi)", "-cot(theta)*sin(phi)"],
            ["0", "0", "0", "1"],
        ]),
        metadata: Some(Metadata {
            description: Some("Schwarzschild exterior, static coframe, teleparallel connection".into()),
            reported_structure: vec![
                coeff(0, [1, 0], "-k/(zeta*r^2)"),
                coeff(2, [1, 2], "zeta/r"),
                coeff(3, [1, 3], "zeta/r"),
                coeff(3, [2, 3], "cot(theta)/r"),
            ],
            reported_torsion_symmetric: Some(vec![4]),
            notes: vec![],
        }),
    }
}

fn schwarzschild_isotropic() -> SpacetimeSpec {
    SpacetimeSpec {
        name: "schwarzschild_isotropic".into(),
        coordinates: s4(CARTESIAN),
        parameters: [("m".to_string(), 1.0)].into_iter().collect(),
        definitions: defs(&[("rho", "sqrt(x^2 + y^2 + z^2)"), ("psi", "1 + m/(2*rho)")]),
        coframe: diag(["(1 - m/(2*rho))/psi", "psi^2", "psi^2", "psi^2"]),
        domain: domain(CARTESIAN, [[0.0, 1.0], [2.0, 6.0], [2.0, 6.0], [2.0, 6.0]]),
        excluded: vec!["rho".into()],
        connection: ConnectionMode::LeviCivita,
        killing: named(&[
            ("translation_t", ["1", "0", "0", "0"]),
            ("rotation_xy", ["0", "-y", "x", "0"]),
            ("rotation_yz", ["0", "0", "-z", "y"]),
            ("rotation_zx", ["0", "z", "0", "-x"]),
        ]),
        metadata: Some(Metadata {
            description: Some("Schwarzschild in isotropic coordinates, for the mass integral".into()),
            ..Metadata::default()
        }),
    }
}

/// Both static de Sitter branches. Outside the horizon r is the timelike
/// coordinate, so θ^0 is built from dr there.
fn desitter(outer: bool) -> SpacetimeSpec {
    let (w, cosh_first, name) = if outer { ("Omega", false, "desitter_outer") } else { ("omega", true, "desitter_inner") };
    // Tables 2 and 3 differ by c <-> s in rows 1-6.
    let (c1, c2) = if cosh_first { ("c", "s") } else { ("s", "c") };
    let sub = |t: &str| t.replace('W', w).replace("C1", c1).replace("C2", c2);
    let table: Vec<[String; 4]> = [
        ["r/W*sin(theta)*cos(phi)*C1", "sqrt(alpha)*W*sin(theta)*cos(phi)*C2", "sqrt(alpha)/r*W*cos(theta)*cos(phi)*C2", "-sqrt(alpha)/r*W*sin(phi)/sin(theta)*C2"],
        ["r/W*sin(theta)*sin(phi)*C1", "sqrt(alpha)*sin(theta)*sin(phi)*C2", "sqrt(alpha)/r*W*cos(theta)*sin(phi)*C2", "-sqrt(alpha)/r*W*cos(phi)/sin(theta)*C2"],
        ["r/W*cos(theta)*C1", "-sqrt(alpha)*W*cos(theta)*C2", "-sqrt(alpha)/r*W*sin(theta)*C2", "0"],
        ["-r/W*sin(theta)*cos(phi)*C2", "-sqrt(alpha)*W*sin(theta)*cos(phi)*C1", "-sqrt(alpha)/r*W*cos(theta)*cos(phi)*C1", "sqrt(alpha)/r*W*sin(phi)/sin(theta)*C1"],
        ["-r/W*sin(theta)*sin(phi)*C2", "-sqrt(alpha)*W*sin(theta)*sin(phi)*C1", "-sqrt(alpha)/r*W*cos(theta)*sin(phi)*C1", "-sqrt(alpha)/r*W*cos(phi)/sin(theta)*C1"],
        ["-r/W*cos(theta)*C2", "-sqrt(alpha)*W*cos(theta)*C1", "sqrt(alpha)/r*W*sin(theta)*C1", "0"],
        ["sqrt(alpha)", "0", "0", "0"],
        ["0", "0", "-cos(phi)", "cot(theta)*sin(phi)"],
        ["0", "0", "-sin(phi)", "-cot(theta)*cos(phi)"],
        ["0", "0", "0", "-1"],
    ]
    .iter()
    .map(|r| r.map(sub))
    .collect();
    let killing = table
        .into_iter()
        .enumerate()
        .map(|(i, components)| CandidateSpec { name: format!("p{}", i + 1), components })
        .collect();
    let (definition, coframe, r_box, edge) = if outer {
        (
            "sqrt(alpha*r^2 - 1)",
            [
                s4(["0", "1/Omega", "0", "0"]),
                s4(["Omega", "0", "0", "0"]),
                s4(["0", "0", "r", "0"]),
                s4(["0", "0", "0", "r*sin(theta)"]),
            ],
            [1.1, 3.0],
            "alpha*r^2 - 1",
        )
    } else {
        ("sqrt(1 - alpha*r^2)", diag(["omega", "1/omega", "r", "r*sin(theta)"]), [0.1, 0.9], "1 - alpha*r^2")
    };
    let description = if outer {
        "static de Sitter beyond the horizon (alpha*r^2 > 1), teleparallel connection"
    } else {
        "static de Sitter inside the horizon (alpha*r^2 < 1), teleparallel connection"
    };
    SpacetimeSpec {
        name: name.into(),
        coordinates: s4(SPHERICAL),
        parameters: [("alpha".to_string(), 1.0)].into_iter().collect(),
        definitions: defs(&[(w, definition), ("c", "cosh(sqrt(alpha)*t)"), ("s", "sinh(sqrt(alpha)*t)")]),
        coframe,
        domain: domain(SPHERICAL, [[0.0, 1.0], r_box, POLAR, AZIMUTH]),
        excluded: vec!["sin(theta)".into(), "r".into(), edge.into()],
        connection: ConnectionMode::Teleparallel,
        killing,
        metadata: Some(Metadata {
            description: Some(description.into()),
            reported_structure: vec![
                coeff(0, [1, 0], &format!("alpha*r/{w}")),
                coeff(2, [1, 2], &format!("{w}/r")),
                coeff(3, [1, 3], &format!("{w}/r")),
                coeff(3, [2, 3], "cot(theta)/r"),
            ],
            reported_torsion_symmetric: Some(vec![7]),
            notes: vec![],
        }),
    }
}

fn friedmann() -> SpacetimeSpec {
    SpacetimeSpec {
        name: "friedmann".into(),
        coordinates: s4(CARTESIAN),
        parameters: IndexMap::new(),
        // Rdot must be kept in step with R when R is overridden.
        definitions: defs(&[("R", "t^(2/3)"), ("Rdot", "2/3*t^(-1/3)")]),
        coframe: diag(["1", "R", "R", "R"]),
        domain: domain(CARTESIAN, [[1.0, 2.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]),
        excluded: vec![],
        connection: ConnectionMode::Teleparallel,
        killing: rows(&[
            ["0", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["0", "0", "0", "1"],
            ["0", "-y", "x", "0"],
            ["0", "0", "z", "y"],
            ["0", "z", "0", "-x"],
        ]),
        metadata: Some(Metadata {
            description: Some("spatially flat Friedmann, R(t) = t^(2/3), teleparallel connection".into()),
            reported_structure: vec![
                coeff(0, [1, 0], "Rdot/R"),
                coeff(2, [2, 0], "Rdot/R"),
                coeff(3, [3, 0], "Rdot/R"),
            ],
            reported_torsion_symmetric: Some(vec![1, 2, 3, 4, 5, 6]),
            notes: vec![],
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_compiles_and_round_trips() {
        for spec in all() {
            spec.compile().unwrap_or_else(|e| panic!("{}: {e}", spec.name));
            let back = SpacetimeSpec::from_json(&spec.to_json()).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.to_json(), spec.to_json());
        }
    }

    #[test]
    fn candidate_counts() {
        assert_eq!(builtin("schwarzschild").unwrap().killing.len(), 4);
        assert_eq!(builtin("desitter_inner").unwrap().killing.len(), 10);
        assert_eq!(builtin("desitter_outer").unwrap().killing.len(), 10);
        assert_eq!(builtin("friedmann").unwrap().killing.len(), 6);
        assert_eq!(builtin("schwarzschild").unwrap().killing[3].components, s4(["0", "0", "0", "1"]));
        assert_eq!(builtin("desitter_inner").unwrap().killing[6].components, s4(["sqrt(alpha)", "0", "0", "0"]));
    }

    #[test]
    fn unknown_name_lists_valid() {
        let err = builtin("kerr").unwrap_err().to_string();
        assert!(err.contains("kerr") && err.contains("friedmann"), "{err}");
    }
}
