//! Certificates of a pipeline run and their JSON, CSV and SVG renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, Complex1D, DomainKind, Site};
use crate::error::{Error, Result};
use crate::pipeline::{Provenance, Solved};
use crate::pl::{refine, PLFunction};
use crate::problem::Problem;
use crate::report::Report;
use crate::selection::{Obstruction, SelectionResult};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Found,
    NoSelection,
}

/// The complex every tabulated function is linear on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainTable {
    pub kind: DomainKind,
    /// Vertex names as they appear in witnesses.
    pub vertices: Vec<String>,
    /// Coordinate labels, exact.
    pub coordinates: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}

/// Self-contained result of a run, with every value exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: Status,
    pub provenance: Vec<Provenance>,
    pub domain: DomainTable,
    pub roots: Vec<String>,
    pub u: String,
    pub v: String,
    /// Vertex values of the roots, `u` and `v` by name.
    pub functions: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    pub report: Report,
}

fn exact(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn table(d: &Arc<Complex1D>) -> DomainTable {
    DomainTable {
        kind: d.kind(),
        vertices: (0..d.num_vertices())
            .map(|x| match d.site(Cell::Vertex(x)) {
                Site::Vertex(s) => s,
                Site::Edge(..) => unreachable!("vertex site"),
            })
            .collect(),
        coordinates: exact(&d.labels()),
        edges: d.edges().iter().map(|e| [e.a, e.b]).collect(),
    }
}

impl Certificate {
    pub fn new(problem: &Problem, solved: &Solved) -> Result<Self> {
        let mut names: Vec<String> = problem.roots.clone();
        for b in [&problem.u, &problem.v].into_iter().flatten() {
            if !names.contains(b) {
                names.push(b.clone());
            }
        }
        let mut fs: Vec<PLFunction> = names.iter().map(|n| problem.function(n).cloned()).collect::<Result<_>>()?;
        if let Some(w) = solved.result.selection() {
            fs.push(w.clone());
        }
        let (domain, fs) = refine(&problem.domain, &fs)?;
        let functions = names.iter().zip(&fs).map(|(n, f)| (n.clone(), exact(f.values()))).collect();
        let (status, w, obstruction) = match &solved.result {
            SelectionResult::Found(_) => (Status::Found, fs.last().map(|w| exact(w.values())), None),
            SelectionResult::Obstructed(o) => (Status::NoSelection, None, Some(o.clone())),
        };
        Ok(Self {
            status,
            provenance: solved.provenance.clone(),
            domain: table(&domain),
            roots: problem.roots.clone(),
            u: problem.u.clone().unwrap_or_default(),
            v: problem.v.clone().unwrap_or_default(),
            functions,
            w,
            obstruction,
            report: solved.report.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    fn coordinates(&self) -> Result<Vec<Rational>> {
        self.domain
            .coordinates
            .iter()
            .map(|s| s.parse().map_err(|_| Error::Parse { location: "domain.coordinates".into(), message: s.clone() }))
            .collect()
    }

    fn columns(&self) -> Vec<(String, &Vec<String>)> {
        match &self.w {
            Some(w) => vec![("w".to_string(), w)],
            None => self.functions.iter().map(|(k, v)| (k.clone(), v)).collect(),
        }
    }

    /// `vertex,x,w` rows, one per vertex, or the roots and bounds when there
    /// is no selection. `samples` adds that many evenly spaced interior rows
    /// per edge, interpolated exactly.
    pub fn to_csv(&self, samples: usize) -> Result<String> {
        let cols = self.columns();
        let xs = self.coordinates()?;
        let parse = |s: &String| -> Result<Rational> {
            s.parse().map_err(|_| Error::Parse { location: "certificate values".into(), message: s.clone() })
        };
        let vals: Vec<Vec<Rational>> =
            cols.iter().map(|(_, v)| v.iter().map(parse).collect::<Result<_>>()).collect::<Result<_>>()?;
        let mut out = String::from("vertex,x");
        for (name, _) in &cols {
            write!(out, ",{name}").unwrap();
        }
        out.push('\n');
        let row = |out: &mut String, name: &str, x: &Rational, ys: Vec<Rational>| {
            write!(out, "{name},{x}").unwrap();
            for y in ys {
                write!(out, ",{y}").unwrap();
            }
            out.push('\n');
        };
        for (i, name) in self.domain.vertices.iter().enumerate() {
            row(&mut out, name, &xs[i], vals.iter().map(|v| v[i].clone()).collect());
        }
        for (j, [a, b]) in self.domain.edges.iter().enumerate() {
            for k in 1..=samples {
                let s = Rational::new((k as i64).into(), (samples as i64 + 1).into());
                let lerp = |p: &Rational, q: &Rational| p + (q - p) * &s;
                let x = lerp(&xs[*a], &xs[*b]);
                row(&mut out, &format!("e{j}@{s}"), &x, vals.iter().map(|v| lerp(&v[*a], &v[*b])).collect());
            }
        }
        Ok(out)
    }

    /// A plot of the tabulated functions over vertex coordinates (or vertex
    /// indices for graphs), with a dashed marker at the cut vertex.
    pub fn to_svg(&self) -> Result<String> {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const M: f64 = 40.0;
        let q = |x: f64| format!("{x:.6}");
        let f64_of = |s: &String| -> Result<f64> {
            let r: Rational =
                s.parse().map_err(|_| Error::Parse { location: "certificate values".into(), message: s.clone() })?;
            Ok(r.to_f64().unwrap_or(0.0))
        };
        let xs: Vec<f64> = match self.domain.kind {
            DomainKind::Interval => self.domain.coordinates.iter().map(f64_of).collect::<Result<_>>()?,
            DomainKind::Graph => (0..self.domain.vertices.len()).map(|i| i as f64).collect(),
        };
        let mut series: Vec<(String, Vec<f64>)> = Vec::new();
        for (name, vals) in &self.functions {
            series.push((name.clone(), vals.iter().map(f64_of).collect::<Result<_>>()?));
        }
        if let Some(w) = &self.w {
            series.push(("w".into(), w.iter().map(f64_of).collect::<Result<_>>()?));
        }
        let span = |vs: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = vs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            if lo.is_finite() && hi > lo {
                (lo, hi)
            } else if lo.is_finite() {
                (lo - 1.0, lo + 1.0)
            } else {
                (0.0, 1.0)
            }
        };
        let (x0, x1) = span(&mut xs.iter().copied());
        let (y0, y1) = span(&mut series.iter().flat_map(|(_, v)| v.iter().copied()));
        let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
        let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

        let mut out = String::new();
        writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#)
            .unwrap();
        writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
        const PALETTE: [&str; 6] = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#7f7f7f", "#17becf"];
        for (k, (name, ys)) in series.iter().enumerate() {
            let (color, width) = if name == "w" { ("#d62728", 3) } else { (PALETTE[k % PALETTE.len()], 1) };
            writeln!(out, r#"<g class="{name}" stroke="{color}" stroke-width="{width}">"#).unwrap();
            for [a, b] in &self.domain.edges {
                writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    q(px(xs[*a])),
                    q(py(ys[*a])),
                    q(px(xs[*b])),
                    q(py(ys[*b]))
                )
                .unwrap();
            }
            writeln!(out, "</g>").unwrap();
        }
        if let Some(Site::Vertex(name)) = self.obstruction.as_ref().map(|o| &o.cut_vertex) {
            if let Some(i) = self.domain.vertices.iter().position(|v| v == name) {
                let x = q(px(xs[i]));
                writeln!(
                    out,
                    r#"<line class="cut" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-dasharray="4 4"/>"#,
                    q(M),
                    q(H - M)
                )
                .unwrap();
            }
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pipeline::{solve_problem, PipelineOptions};

    fn cert(p: Problem) -> Certificate {
        let s = solve_problem(&p, &PipelineOptions::default()).unwrap();
        Certificate::new(&p, &s).unwrap()
    }

    #[test]
    fn json_round_trips_and_is_deterministic() {
        let c = cert(fixtures::zigzag_cubic().unwrap());
        assert_eq!(c.status, Status::NoSelection);
        let again = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(again, c);
        assert_eq!(cert(fixtures::zigzag_cubic().unwrap()).to_json(), c.to_json());
    }

    #[test]
    fn csv_has_one_row_per_vertex() {
        let c = cert(fixtures::factored_quadratic().unwrap());
        let csv = c.to_csv(0).unwrap();
        assert_eq!(csv.lines().next(), Some("vertex,x,w"));
        assert_eq!(csv.lines().count(), 1 + c.domain.vertices.len());
        assert!(csv.contains("\n0,0,0\n"));
        let sampled = c.to_csv(1).unwrap();
        assert!(sampled.contains("e0@1/2,-1/2,-1/4"));
    }

    #[test]
    fn svg_marks_the_cut() {
        let svg = cert(fixtures::zigzag_cubic().unwrap()).to_svg().unwrap();
        assert!(svg.contains("class=\"cut\""));
        let svg = cert(fixtures::constant_cubic().unwrap()).to_svg().unwrap();
        assert!(!svg.contains("class=\"cut\""));
        assert!(svg.contains("class=\"w\""));
    }
}
