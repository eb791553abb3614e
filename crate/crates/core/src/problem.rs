//! JSON problem files: a domain, named PL functions, and what to do with them.
//!
//! Rationals are written as strings such as `"-3/4"`; plain JSON integers are
//! accepted too. Floats are rejected so that inputs stay exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{make_graph, make_interval, Cell, Complex1D, DomainKind};
use crate::crochet::CrochetPattern;
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::poly::FactoredPoly;
use crate::quadratic::MonicQuadratic;
use crate::sets::ClosedSet;
use crate::Rational;

/// An exact rational as it appears in a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Int(i64),
    Text(String),
}

impl RatLit {
    fn parse(&self, location: &str) -> Result<Rational> {
        match self {
            RatLit::Int(n) => Ok(Rational::from_integer((*n).into())),
            RatLit::Text(s) => Rational::from_str(s.trim()).map_err(|_| Error::Parse {
                location: location.to_string(),
                message: format!("{s:?} is not an exact rational like \"3/4\""),
            }),
        }
    }
}

impl From<&Rational> for RatLit {
    fn from(r: &Rational) -> Self {
        RatLit::Text(r.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    Interval {
        breakpoints: Vec<RatLit>,
    },
    Graph {
        vertices: Vec<RatLit>,
        edges: Vec<[usize; 2]>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        disjoint_union: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub values: Vec<RatLit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySpec {
    pub roots: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonicSpec {
    pub f: String,
    pub g: String,
}

/// A stage pattern as lists of cell ids `v{i}` and `e{j}` of the declared domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    #[serde(rename = "Z")]
    pub z: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<RatLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_cap: Option<usize>,
}

/// The file format, field for field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub domain: DomainSpec,
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<PolySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monic: Option<MonicSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<PatternSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: OptionsSpec,
}

fn is_default(o: &OptionsSpec) -> bool {
    *o == OptionsSpec::default()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemOptions {
    pub tolerance: Option<Rational>,
    pub cell_cap: Option<usize>,
}

/// A validated problem: every name resolves and every function lives on the
/// declared domain.
#[derive(Clone, Debug)]
pub struct Problem {
    pub domain: Arc<Complex1D>,
    pub functions: BTreeMap<String, PLFunction>,
    pub roots: Vec<String>,
    pub u: Option<String>,
    pub v: Option<String>,
    pub monic: Option<(String, String)>,
    pub patterns: Vec<CrochetPattern>,
    pub options: ProblemOptions,
}

fn parse_err(location: impl Into<String>, message: impl fmt::Display) -> Error {
    Error::Parse { location: location.into(), message: message.to_string() }
}

pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e))?;
    Problem::from_file(&file)
}

pub fn read_problem(path: &std::path::Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path)?;
    parse_problem(&text).map_err(|e| match e {
        Error::Parse { location, message } => {
            Error::Parse { location: format!("{}: {location}", path.display()), message }
        }
        other => other,
    })
}

fn parse_cell(domain: &Complex1D, id: &str, location: &str) -> Result<Cell> {
    let bad = || parse_err(location, format!("{id:?} is not a cell id like \"v0\" or \"e1\""));
    let (kind, index) = id.split_at(id.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
    let index: usize = index.parse().map_err(|_| bad())?;
    let (cell, count) = match kind {
        "v" => (Cell::Vertex(index), domain.num_vertices()),
        "e" => (Cell::Edge(index), domain.num_edges()),
        _ => return Err(bad()),
    };
    if index >= count {
        return Err(parse_err(location, format!("{id:?} is out of range")));
    }
    Ok(cell)
}

fn cell_id(cell: Cell) -> String {
    match cell {
        Cell::Vertex(i) => format!("v{i}"),
        Cell::Edge(j) => format!("e{j}"),
    }
}

impl Problem {
    pub fn from_file(file: &ProblemFile) -> Result<Self> {
        let parse_all = |xs: &[RatLit], at: &str| -> Result<Vec<Rational>> {
            xs.iter().enumerate().map(|(i, x)| x.parse(&format!("{at}[{i}]"))).collect()
        };
        let domain = match &file.domain {
            DomainSpec::Interval { breakpoints } => make_interval(&parse_all(breakpoints, "domain.breakpoints")?)?,
            DomainSpec::Graph { vertices, edges, disjoint_union } => {
                let labels = parse_all(vertices, "domain.vertices")?;
                let edges: Vec<(usize, usize)> = edges.iter().map(|[a, b]| (*a, *b)).collect();
                make_graph(&labels, &edges, *disjoint_union)?
            }
        };
        let mut functions = BTreeMap::new();
        for (name, spec) in &file.functions {
            let at = format!("functions.{name}.values");
            if spec.values.len() != domain.num_vertices() {
                return Err(parse_err(
                    at,
                    format!("expected {} values, one per vertex, got {}", domain.num_vertices(), spec.values.len()),
                ));
            }
            functions.insert(name.clone(), PLFunction::new(domain.clone(), parse_all(&spec.values, &at)?)?);
        }
        let known = |name: &str, at: String| -> Result<String> {
            if functions.contains_key(name) {
                Ok(name.to_string())
            } else {
                Err(parse_err(at, format!("unknown function {name:?}")))
            }
        };
        let roots = match &file.poly {
            None => Vec::new(),
            Some(p) => {
                if p.roots.is_empty() {
                    return Err(parse_err("poly.roots", "a polynomial needs at least one root"));
                }
                p.roots.iter().enumerate().map(|(i, r)| known(r, format!("poly.roots[{i}]"))).collect::<Result<_>>()?
            }
        };
        let u = file.u.as_deref().map(|n| known(n, "u".into())).transpose()?;
        let v = file.v.as_deref().map(|n| known(n, "v".into())).transpose()?;
        let monic = match &file.monic {
            None => None,
            Some(m) => Some((known(&m.f, "monic.f".into())?, known(&m.g, "monic.g".into())?)),
        };
        let mut patterns = Vec::new();
        for (i, p) in file.patterns.iter().enumerate() {
            let set = |ids: &[String], key: &str| -> Result<ClosedSet> {
                let cells = ids
                    .iter()
                    .enumerate()
                    .map(|(j, id)| parse_cell(&domain, id, &format!("patterns[{i}].{key}[{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                let set = ClosedSet::from_cells(&domain, cells.iter().copied());
                if set.cell_count() != cells.iter().collect::<std::collections::BTreeSet<_>>().len() {
                    return Err(parse_err(
                        format!("patterns[{i}].{key}"),
                        "set is not closed; list both endpoints of every edge",
                    ));
                }
                Ok(set)
            };
            patterns.push(CrochetPattern { x0: set(&p.x, "X")?, x1: set(&p.y, "Y")?, x2: set(&p.z, "Z")? });
        }
        let options = ProblemOptions {
            tolerance: file.options.tolerance.as_ref().map(|t| t.parse("options.tolerance")).transpose()?,
            cell_cap: file.options.cell_cap,
        };
        Ok(Self { domain, functions, roots, u, v, monic, patterns, options })
    }

    /// The file describing this problem.
    pub fn to_file(&self) -> ProblemFile {
        let lits = |xs: &[Rational]| xs.iter().map(RatLit::from).collect::<Vec<_>>();
        let root = self.domain.root();
        let domain = match root.kind() {
            DomainKind::Interval => DomainSpec::Interval { breakpoints: lits(root.labels()) },
            DomainKind::Graph => DomainSpec::Graph {
                vertices: lits(root.labels()),
                edges: root.edges().iter().map(|&(a, b)| [a, b]).collect(),
                disjoint_union: self.domain.components().len() > 1,
            },
        };
        let ids = |s: &ClosedSet| s.cells().into_iter().map(cell_id).collect::<Vec<_>>();
        ProblemFile {
            domain,
            functions: self
                .functions
                .iter()
                .map(|(k, f)| (k.clone(), FunctionSpec { values: lits(f.values()) }))
                .collect(),
            poly: (!self.roots.is_empty()).then(|| PolySpec { roots: self.roots.clone() }),
            u: self.u.clone(),
            v: self.v.clone(),
            monic: self.monic.as_ref().map(|(f, g)| MonicSpec { f: f.clone(), g: g.clone() }),
            patterns: self
                .patterns
                .iter()
                .map(|p| PatternSpec { x: ids(&p.x0), y: ids(&p.x1), z: ids(&p.x2) })
                .collect(),
            options: OptionsSpec {
                tolerance: self.options.tolerance.as_ref().map(RatLit::from),
                cell_cap: self.options.cell_cap,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("problem files serialize") + "\n"
    }

    pub fn function(&self, name: &str) -> Result<&PLFunction> {
        self.functions.get(name).ok_or_else(|| parse_err("functions", format!("unknown function {name:?}")))
    }

    fn required(&self, field: &Option<String>, key: &str) -> Result<&PLFunction> {
        let name = field.as_deref().ok_or_else(|| parse_err(key, format!("the problem has no {key:?}")))?;
        self.function(name)
    }

    pub fn poly(&self) -> Result<FactoredPoly> {
        if self.roots.is_empty() {
            return Err(parse_err("poly", "the problem has no polynomial"));
        }
        FactoredPoly::new(self.roots.iter().map(|r| self.function(r).cloned()).collect::<Result<_>>()?)
    }

    pub fn lower(&self) -> Result<&PLFunction> {
        self.required(&self.u, "u")
    }

    pub fn upper(&self) -> Result<&PLFunction> {
        self.required(&self.v, "v")
    }

    pub fn monic_quadratic(&self) -> Result<MonicQuadratic> {
        let (f, g) = self.monic.as_ref().ok_or_else(|| parse_err("monic", "the problem has no monic quadratic"))?;
        MonicQuadratic::new(self.function(f)?, self.function(g)?)
    }

    /// A builder for problems set up in code.
    pub fn new(domain: &Arc<Complex1D>) -> Self {
        Self {
            domain: domain.clone(),
            functions: BTreeMap::new(),
            roots: Vec::new(),
            u: None,
            v: None,
            monic: None,
            patterns: Vec::new(),
            options: ProblemOptions::default(),
        }
    }

    /// Adds a function; it must live on the problem's domain.
    pub fn with_function(mut self, name: &str, f: &PLFunction) -> Result<Self> {
        if !f.domain().same_space(&self.domain) || f.domain().num_vertices() != self.domain.num_vertices() {
            return Err(Error::DomainMismatch(format!("function {name:?} is not on the declared domain")));
        }
        self.functions.insert(name.to_string(), PLFunction::new(self.domain.clone(), f.values().to_vec())?);
        Ok(self)
    }

    /// Declares `p = (t - roots[0])...` and the bounds `u`, `v`.
    pub fn with_poly(mut self, roots: &[&str], u: &str, v: &str) -> Result<Self> {
        for name in roots.iter().chain([&u, &v]) {
            self.function(name)?;
        }
        self.roots = roots.iter().map(|s| s.to_string()).collect();
        self.u = Some(u.to_string());
        self.v = Some(v.to_string());
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    const CUBIC: &str = r#"{
        "domain": {"kind": "interval", "breakpoints": ["0", "1/4", "3/4", 1]},
        "functions": {
            "a": {"values": ["-1/4", 0, 0, "1/4"]},
            "u": {"values": [0, 0, 0, 0]},
            "v": {"values": [1, 1, 1, 1]}
        },
        "poly": {"roots": ["a", "u"]},
        "u": "u",
        "v": "v",
        "patterns": [{"X": ["v0", "e0", "v1"], "Y": [], "Z": ["v3"]}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let p = parse_problem(CUBIC).unwrap();
        assert_eq!(p.domain.num_vertices(), 4);
        assert_eq!(p.function("a").unwrap().value(0), &rat(-1, 4));
        assert_eq!(p.poly().unwrap().degree(), 2);
        assert_eq!(p.patterns[0].x0.cell_count(), 3);
        let again = parse_problem(&p.to_json()).unwrap();
        assert_eq!(again.to_file(), p.to_file());
    }

    #[test]
    fn errors_carry_a_location() {
        let bad = CUBIC.replace("\"-1/4\"", "\"-1/x\"");
        match parse_problem(&bad).unwrap_err() {
            Error::Parse { location, .. } => assert_eq!(location, "functions.a.values[0]"),
            e => panic!("unexpected {e}"),
        }
        let bad = CUBIC.replace("\"roots\": [\"a\", \"u\"]", "\"roots\": [\"a\", \"b\"]");
        match parse_problem(&bad).unwrap_err() {
            Error::Parse { location, .. } => assert_eq!(location, "poly.roots[1]"),
            e => panic!("unexpected {e}"),
        }
        let bad = CUBIC.replace("\"v0\", \"e0\", \"v1\"", "\"e0\"");
        assert!(matches!(parse_problem(&bad), Err(Error::Parse { .. })));
        let bad = CUBIC.replace("\"-1/4\"", "-0.25");
        assert!(matches!(parse_problem(&bad), Err(Error::Parse { .. })));
    }
}
