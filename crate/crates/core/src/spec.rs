//! JSON spacetime and field specifications.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::Blade;
use crate::expr::{parse, Expr, Func, ParseError, Params, SymbolTable};
use crate::geometry::{Chart, Coframe, ConnectionMode, FormField, GeometryError, DEFAULT_MARGIN};
use crate::symmetry::KillingCandidate;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("{origin}: malformed JSON at '{path}': {message}")]
    Json { origin: String, path: String, message: String },
    #[error("{field}: {source} in \"{text}\"")]
    Expr {
        field: String,
        text: String,
        #[source]
        source: ParseError,
    },
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error("unknown spacetime '{name}'; valid names: {}", valid.join(", "))]
    UnknownSpacetime { name: String, valid: Vec<String> },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A named sub-expression, expanded wherever the name appears.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Definition {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub name: String,
    /// Coordinate components ξ^μ.
    pub components: [String; 4],
}

/// A structure coefficient c^upper_{lower[0] lower[1]} as published with a metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportedCoefficient {
    pub upper: usize,
    pub lower: [usize; 2],
    pub expr: String,
}

/// Published claims the computed results are compared against.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reported_structure: Vec<ReportedCoefficient>,
    /// 1-based candidate rows claimed to satisfy the torsion symmetry condition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reported_torsion_symmetric: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeSpec {
    pub name: String,
    pub coordinates: [String; 4],
    #[serde(default)]
    pub parameters: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub definitions: Vec<Definition>,
    /// Rows θ^a, columns dx^μ.
    pub coframe: [[String; 4]; 4],
    pub domain: IndexMap<String, [f64; 2]>,
    #[serde(default)]
    pub excluded: Vec<String>,
    pub connection: ConnectionMode,
    #[serde(default)]
    pub killing: Vec<CandidateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A validated spec with every expression parsed.
#[derive(Clone, Debug)]
pub struct Spacetime {
    pub spec: SpacetimeSpec,
    pub chart: Chart,
    pub coframe: Coframe,
    pub mode: ConnectionMode,
    pub candidates: Vec<KillingCandidate>,
    pub symbols: SymbolTable,
}

impl Spacetime {
    pub fn params(&self) -> &Params {
        &self.coframe.params
    }

    /// Parse an expression against this spacetime's names.
    pub fn parse_expr(&self, field: &str, text: &str) -> Result<Expr, SpecError> {
        parse_field(field, text, &self.symbols)
    }
}

fn parse_field(field: &str, text: &str, table: &SymbolTable) -> Result<Expr, SpecError> {
    parse(text, table).map_err(|source| SpecError::Expr { field: field.to_string(), text: text.to_string(), source })
}

fn reserved(name: &str) -> bool {
    name == "pi" || Func::from_name(name).is_some()
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Read a JSON document from text, reporting the JSON path of any error.
pub fn from_json_str<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, SpecError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| SpecError::Json {
        origin: origin.to_string(),
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })
}

pub fn read_json_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError::Io { path: path.display().to_string(), message: e.to_string() })?;
    from_json_str(&text, &path.display().to_string())
}

impl SpacetimeSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        from_json_str(text, "spec")
    }

    /// Canonical pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    /// Override parameter values; every name must already be a parameter.
    pub fn with_params(mut self, overrides: &[(String, f64)]) -> Result<Self, SpecError> {
        for (k, v) in overrides {
            match self.parameters.get_mut(k) {
                Some(slot) => *slot = *v,
                None => return Err(SpecError::Invalid(format!("unknown parameter '{k}'"))),
            }
        }
        Ok(self)
    }

    /// Replace definition bodies; every name must already be defined.
    pub fn with_definitions(mut self, overrides: &[(String, String)]) -> Result<Self, SpecError> {
        for (k, v) in overrides {
            match self.definitions.iter_mut().find(|d| d.name == *k) {
                Some(d) => d.expr = v.clone(),
                None => return Err(SpecError::Invalid(format!("unknown definition '{k}'"))),
            }
        }
        Ok(self)
    }

    pub fn symbol_table(&self) -> Result<SymbolTable, SpecError> {
        let mut names: Vec<&str> = Vec::new();
        let all = self
            .coordinates
            .iter()
            .chain(self.parameters.keys())
            .chain(self.definitions.iter().map(|d| &d.name));
        for n in all {
            if !valid_ident(n) || reserved(n) {
                return Err(SpecError::Invalid(format!("'{n}' is not a usable symbol name")));
            }
            if names.contains(&n.as_str()) {
                return Err(SpecError::Invalid(format!("symbol '{n}' declared twice")));
            }
            names.push(n);
        }
        let mut table = SymbolTable::new(self.coordinates.iter().cloned(), self.parameters.keys().cloned());
        for d in &self.definitions {
            let e = parse_field(&format!("definitions.{}", d.name), &d.expr, &table)?;
            table.define(d.name.clone(), e);
        }
        Ok(table)
    }

    pub fn compile(&self) -> Result<Spacetime, SpecError> {
        let table = self.symbol_table()?;
        let mut h: [[Expr; 4]; 4] = Default::default();
        for a in 0..4 {
            for mu in 0..4 {
                h[a][mu] = parse_field(&format!("coframe[{a}][{mu}]"), &self.coframe[a][mu], &table)?;
            }
        }
        let mut domain = [[0.0; 2]; 4];
        for (i, c) in self.coordinates.iter().enumerate() {
            let Some(&[lo, hi]) = self.domain.get(c) else {
                return Err(SpecError::Invalid(format!("domain has no interval for coordinate '{c}'")));
            };
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(SpecError::Invalid(format!("domain interval for '{c}' must satisfy lo < hi")));
            }
            domain[i] = [lo, hi];
        }
        if let Some(k) = self.domain.keys().find(|k| !self.coordinates.contains(k)) {
            return Err(SpecError::Invalid(format!("domain names unknown coordinate '{k}'")));
        }
        let excluded = self
            .excluded
            .iter()
            .enumerate()
            .map(|(i, s)| parse_field(&format!("excluded[{i}]"), s, &table))
            .collect::<Result<Vec<_>, _>>()?;
        let candidates = self
            .killing
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut xi: [Expr; 4] = Default::default();
                for mu in 0..4 {
                    xi[mu] = parse_field(&format!("killing[{i}].components[{mu}]"), &c.components[mu], &table)?;
                }
                Ok(KillingCandidate { name: c.name.clone(), xi })
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        if let Some(md) = &self.metadata {
            for (i, rc) in md.reported_structure.iter().enumerate() {
                if rc.upper > 3 || rc.lower.iter().any(|&m| m > 3) {
                    return Err(SpecError::Invalid(format!("metadata.reported_structure[{i}] index out of range")));
                }
                parse_field(&format!("metadata.reported_structure[{i}]"), &rc.expr, &table)?;
            }
        }
        let params: Params = self.parameters.iter().map(|(k, v)| (k.clone(), *v)).collect();
        Ok(Spacetime {
            spec: self.clone(),
            chart: Chart {
                coords: self.coordinates.clone(),
                domain,
                excluded,
                margin: DEFAULT_MARGIN,
            },
            coframe: Coframe { h, params },
            mode: self.connection,
            candidates,
            symbols: table,
        })
    }
}

/// Electromagnetic field file: frame components F_{ab} and optional source J_a.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmFieldSpec {
    #[serde(rename = "F")]
    pub f: IndexMap<String, String>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<[String; 4]>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub parameters: IndexMap<String, f64>,
}

/// Parsed field: F = Σ_{a<b} F_{ab} θ^a∧θ^b and J = Σ J_a θ^a.
#[derive(Clone, Debug, PartialEq)]
pub struct EmField {
    pub f: FormField,
    pub j: Option<FormField>,
    pub params: Params,
}

impl EmFieldSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        from_json_str(text, "field")
    }

    /// Parse against a spacetime; field parameters extend or override the spacetime's.
    pub fn compile(&self, st: &Spacetime) -> Result<EmField, SpecError> {
        let mut params = st.params().clone();
        let mut table = st.symbols.clone();
        let extra: Vec<String> = self.parameters.keys().filter(|k| !params.contains_key(*k)).cloned().collect();
        if !extra.is_empty() {
            for k in &extra {
                if !valid_ident(k) || reserved(k) || st.spec.coordinates.contains(k) {
                    return Err(SpecError::Invalid(format!("'{k}' is not a usable parameter name")));
                }
            }
            let mut all: Vec<String> = st.symbols.params().to_vec();
            all.extend(extra);
            let mut spec = st.spec.clone();
            for k in &all {
                spec.parameters.entry(k.clone()).or_insert(0.0);
            }
            table = spec.symbol_table()?;
        }
        for (k, v) in &self.parameters {
            params.insert(k.clone(), *v);
        }
        let mut coeffs: Vec<(Blade, Expr)> = Vec::new();
        for (key, text) in &self.f {
            let idx: Vec<usize> = key.chars().filter_map(|c| c.to_digit(10).map(|d| d as usize)).collect();
            if key.len() != 2 || idx.len() != 2 || idx[0] == idx[1] || idx.iter().any(|&i| i > 3) {
                return Err(SpecError::Invalid(format!("F key '{key}' must be two distinct labels from 0-3")));
            }
            let e = parse_field(&format!("F.{key}"), text, &table)?;
            let (lo, hi) = (idx[0].min(idx[1]), idx[0].max(idx[1]));
            let blade = Blade((1 << lo) | (1 << hi));
            let e = if idx[0] < idx[1] { e } else { Expr::negate(e) };
            if let Some(slot) = coeffs.iter_mut().find(|(b, _)| *b == blade) {
                slot.1 = Expr::bin(crate::expr::BinOp::Add, slot.1.clone(), e);
            } else {
                coeffs.push((blade, e));
            }
        }
        let f = FormField::new(2, coeffs)?;
        let j = match &self.j {
            None => None,
            Some(js) => {
                let mut c = Vec::new();
                for (a, text) in js.iter().enumerate() {
                    c.push((Blade(1 << a), parse_field(&format!("J[{a}]"), text, &table)?));
                }
                Some(FormField::new(1, c)?)
            }
        };
        Ok(EmField { f, j, params })
    }
}
