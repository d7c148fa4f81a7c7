//! Machine-readable reports and their text rendering.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::energy::MassTable;
use crate::spec::{Definition, SpacetimeSpec};
use crate::symmetry::SymmetryVerdict;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

/// One residual compared against a tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The identity being tested, in the notation of the module docs.
    pub identity: String,
    /// None when the residual came out non-finite.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Informational checks are reported but do not affect the exit status.
    #[serde(default, skip_serializing_if = "is_false")]
    pub informational: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl Check {
    /// Pass iff residual < tolerance; a zero tolerance demands an exact zero.
    pub fn new(id: impl Into<String>, identity: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let finite = residual.is_finite();
        let pass = finite && (residual < tolerance || (tolerance == 0.0 && residual == 0.0));
        let notes = if finite { Vec::new() } else { vec![format!("non-finite residual ({residual})")] };
        Check {
            id: id.into(),
            identity: identity.into(),
            residual: finite.then_some(residual),
            tolerance,
            pass,
            informational: false,
            notes,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    /// Failing and counted.
    pub fn failed(&self) -> bool {
        !self.pass && !self.informational
    }
}

/// The spacetime as it was run, after parameter and definition overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub name: String,
    pub connection: String,
    pub coordinates: [String; 4],
    pub parameters: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub definitions: Vec<Definition>,
}

impl SpecEcho {
    pub fn of(spec: &SpacetimeSpec) -> Self {
        SpecEcho {
            name: spec.name.clone(),
            connection: spec.connection.label().to_string(),
            coordinates: spec.coordinates.clone(),
            parameters: spec.parameters.clone(),
            definitions: spec.definitions.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub verdict_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
}

/// Closure of the Noether current of one candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentClosure {
    pub candidate: String,
    pub killing_pass: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Connection-dependent summary over the sample points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub ricci_scalar: RicciStats,
    /// Largest torsion component of the chosen connection.
    pub torsion_max: f64,
    /// Largest curvature component of the chosen connection.
    pub curvature_max: f64,
    /// Largest component of each irreducible piece of dθ: [tentor, tractor, axitor].
    pub decomposition_max: [f64; 3],
    pub samples: Vec<crate::geometry::GeometrySample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacetime: Option<SpecEcho>,
    pub settings: Settings,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<SymmetryVerdict>,
    /// Candidate rows failing the Killing test on a spacetime that carries a published table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suspected_typos: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub currents: Vec<CurrentClosure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<MassTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<String>,
    /// Index and component conventions the numbers depend on.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conventions: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, spacetime: Option<SpecEcho>, settings: Settings) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            spacetime,
            settings,
            checks: Vec::new(),
            candidates: Vec::new(),
            suspected_typos: None,
            currents: Vec::new(),
            geometry: None,
            mass: None,
            discrepancies: Vec::new(),
            conventions: Vec::new(),
            pass: true,
        }
    }

    /// Recompute `pass` from the checks.
    pub fn finish(mut self) -> Self {
        self.pass = !self.checks.iter().any(Check::failed);
        self
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match &self.spacetime {
            Some(sp) => {
                let params: Vec<String> = sp.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(s, "{} {} ({}) [{}]", self.command, sp.name, sp.connection, params.join(", "));
            }
            None => {
                let _ = writeln!(s, "{}", self.command);
            }
        }
        let st = &self.settings;
        let _ = writeln!(
            s,
            "samples {}  seed {}  tol {:.2e}  verdict-tol {:.2e}",
            st.samples, st.seed, st.tolerance, st.verdict_tolerance
        );
        if !self.checks.is_empty() {
            let _ = writeln!(s);
            let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
            for c in &self.checks {
                let status = match (c.pass, c.informational) {
                    (true, _) => "PASS",
                    (false, true) => "info",
                    (false, false) => "FAIL",
                };
                let _ = writeln!(
                    s,
                    "{status}  {:<w$}  {}  < {:.2e}   {}",
                    c.id,
                    sci(c.residual),
                    c.tolerance,
                    c.identity
                );
                for n in &c.notes {
                    let _ = writeln!(s, "      {n}");
                }
            }
        }
        if let Some(g) = &self.geometry {
            let r = &g.ricci_scalar;
            let _ = writeln!(s);
            let _ = writeln!(s, "Ricci scalar  min {:.3e}  max {:.3e}  mean {:.3e}", r.min, r.max, r.mean);
            let _ = writeln!(s, "max |torsion| {:.3e}  max |curvature| {:.3e}", g.torsion_max, g.curvature_max);
            let [t, v, a] = g.decomposition_max;
            let _ = writeln!(s, "dθ pieces     tentor {t:.3e}  tractor {v:.3e}  axitor {a:.3e}");
        }
        if !self.candidates.is_empty() {
            let _ = writeln!(s);
            let w = self.candidates.iter().map(|c| c.name.len()).max().unwrap_or(0).max(9);
            let _ = writeln!(
                s,
                "{:<w$}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}  killing  torsion",
                "candidate", "killing", "frame", "published", "oracle", "lemma"
            );
            for v in &self.candidates {
                let _ = writeln!(
                    s,
                    "{:<w$}  {}  {}  {}  {}  {}  {:<7}  {}",
                    v.name,
                    sci(Some(v.killing_residual)),
                    sci(Some(v.torsion_condition_residual)),
                    sci(Some(v.torsion_condition_published_form_residual)),
                    sci(Some(v.lie_torsion_oracle_residual)),
                    v.lemma2_residual.map_or_else(|| format!("{:>9}", "-"), |x| sci(Some(x))),
                    yes_no(v.killing_pass),
                    yes_no(v.torsion_pass),
                );
            }
            let kp = self.candidates.iter().filter(|v| v.killing_pass).count();
            let tp = self.candidates.iter().filter(|v| v.torsion_pass).count();
            let n = self.candidates.len();
            let _ = writeln!(s, "{kp}/{n} pass Killing, {tp}/{n} pass torsion invariance");
            if let Some(t) = self.suspected_typos {
                let _ = writeln!(s, "suspected typos: {t}");
            }
        }
        if !self.currents.is_empty() {
            let _ = writeln!(s);
            for c in &self.currents {
                let tag = if c.killing_pass { "" } else { "  (not Killing)" };
                let _ = writeln!(s, "current {:<20} closure {}{tag}", c.candidate, sci(Some(c.residual)));
            }
        }
        if let Some(m) = &self.mass {
            let _ = writeln!(s);
            let _ = writeln!(s, "mass integral at t = {}", m.time);
            for (r, v) in m.radii.iter().zip(&m.values) {
                let _ = writeln!(s, "  r = {r:<10}  m_I = {v:.9}");
            }
            let _ = writeln!(s, "  r → ∞         m_I = {:.9}", m.extrapolated);
        }
        if !self.discrepancies.is_empty() {
            let _ = writeln!(s);
            let _ = writeln!(s, "discrepancies with the published tables:");
            for d in &self.discrepancies {
                let _ = writeln!(s, "  - {d}");
            }
        }
        if !self.conventions.is_empty() {
            let _ = writeln!(s);
            for c in &self.conventions {
                let _ = writeln!(s, "convention: {c}");
            }
        }
        let failed = self.checks.iter().filter(|c| c.failed()).count();
        let _ = writeln!(s);
        if failed == 0 {
            let _ = writeln!(s, "all checks pass");
        } else {
            let _ = writeln!(s, "{failed} check(s) failed");
        }
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Three significant digits, or "nan".
fn sci(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:>9.2e}"),
        None => format!("{:>9}", "nan"),
    }
}
