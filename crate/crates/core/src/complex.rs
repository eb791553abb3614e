//! Finite 1-D complexes.
//!
//! Every complex is anchored to a [`RootComplex`]: the complex the user declared.
//! Refinements and subcomplexes keep that anchor, and each vertex records its
//! position on the root as a [`Point`]. Two complexes with the same root can
//! therefore always be compared, merged into a common refinement, or relocated
//! onto one another without any floating point.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// Whether the root complex is a subdivided interval or a general graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Interval,
    Graph,
}

/// The complex as originally declared: labelled vertices and undirected edges.
#[derive(Debug, PartialEq, Eq)]
pub struct RootComplex {
    kind: DomainKind,
    labels: Vec<Rational>,
    edges: Vec<(usize, usize)>,
}

impl RootComplex {
    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn labels(&self) -> &[Rational] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// A position on the root complex: a root vertex, or a point strictly inside a
/// root edge at parameter `t` measured from the edge's first endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(usize),
    Inner { carrier: usize, t: Rational },
}

/// A cell of a particular complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
}

/// A complex-independent description of a cell, used in witnesses and reports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Site {
    Vertex(String),
    Edge(String, String),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Vertex(p) => write!(f, "vertex {p}"),
            Site::Edge(a, b) => write!(f, "edge [{a}, {b}]"),
        }
    }
}

/// One edge of a complex. `a` sits at parameter `t0` and `b` at `t1` on the
/// root edge `carrier`, with `t0 < t1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub carrier: usize,
    pub t0: Rational,
    pub t1: Rational,
}

/// A finite 1-D complex whose cells lie on a shared root complex.
#[derive(Debug)]
pub struct Complex1D {
    root: Arc<RootComplex>,
    points: Vec<Point>,
    edges: Vec<Edge>,
    index: HashMap<Point, usize>,
    incident: Vec<Vec<usize>>,
    by_carrier: Vec<Vec<usize>>,
}

impl PartialEq for Complex1D {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.root, &other.root) || self.root == other.root)
            && self.points == other.points
            && self.edges == other.edges
    }
}

impl Eq for Complex1D {}

/// Builds the interval complex with the given strictly increasing breakpoints.
pub fn make_interval(breakpoints: &[Rational]) -> Result<Arc<Complex1D>> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidDomain(format!(
            "an interval needs at least 2 breakpoints, got {}",
            breakpoints.len()
        )));
    }
    if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidDomain(format!(
            "breakpoints must be strictly increasing: {} is followed by {}",
            w[0], w[1]
        )));
    }
    let root = RootComplex {
        kind: DomainKind::Interval,
        labels: breakpoints.to_vec(),
        edges: (0..breakpoints.len() - 1).map(|i| (i, i + 1)).collect(),
    };
    Ok(Arc::new(Complex1D::from_root(Arc::new(root))))
}

/// Builds a graph complex. Disconnected graphs are rejected unless
/// `disjoint_union` is set.
pub fn make_graph(
    labels: &[Rational],
    edges: &[(usize, usize)],
    disjoint_union: bool,
) -> Result<Arc<Complex1D>> {
    if labels.is_empty() {
        return Err(Error::InvalidDomain("a graph needs at least one vertex".into()));
    }
    let mut seen = BTreeSet::new();
    for &(a, b) in edges {
        if a >= labels.len() || b >= labels.len() {
            return Err(Error::InvalidDomain(format!(
                "edge [{a}, {b}] references a missing vertex"
            )));
        }
        if a == b {
            return Err(Error::InvalidDomain(format!("edge [{a}, {a}] is a loop")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidDomain(format!("duplicate edge [{a}, {b}]")));
        }
    }
    let root = RootComplex { kind: DomainKind::Graph, labels: labels.to_vec(), edges: edges.to_vec() };
    let complex = Complex1D::from_root(Arc::new(root));
    if !disjoint_union && complex.components().len() > 1 {
        return Err(Error::InvalidDomain(
            "graph is disconnected; flag it as a disjoint union to allow this".into(),
        ));
    }
    Ok(Arc::new(complex))
}

impl Complex1D {
    fn from_root(root: Arc<RootComplex>) -> Self {
        let points = (0..root.labels.len()).map(Point::Vertex).collect();
        let segments = (0..root.edges.len())
            .map(|c| (c, Rational::zero(), Rational::one()))
            .collect();
        Self::assemble(root, points, segments)
    }

    /// Builds a complex from its vertex points and edge segments
    /// `(carrier, t0, t1)`; every segment endpoint must be among the points.
    fn assemble(
        root: Arc<RootComplex>,
        mut points: Vec<Point>,
        mut segments: Vec<(usize, Rational, Rational)>,
    ) -> Self {
        points.sort_by(|p, q| order_key(&root, p).cmp(&order_key(&root, q)));
        points.dedup();
        let index: HashMap<Point, usize> =
            points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        segments.sort();
        let mut edges = Vec::with_capacity(segments.len());
        let mut incident = vec![Vec::new(); points.len()];
        let mut by_carrier = vec![Vec::new(); root.edges.len()];
        for (carrier, t0, t1) in segments {
            let a = index[&point_on(&root, carrier, &t0)];
            let b = index[&point_on(&root, carrier, &t1)];
            let id = edges.len();
            incident[a].push(id);
            incident[b].push(id);
            by_carrier[carrier].push(id);
            edges.push(Edge { a, b, carrier, t0, t1 });
        }
        Self { root, points, edges, index, incident, by_carrier }
    }

    pub fn root(&self) -> &Arc<RootComplex> {
        &self.root
    }

    pub fn kind(&self) -> DomainKind {
        self.root.kind
    }

    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_cells(&self) -> usize {
        self.points.len() + self.edges.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> &Point {
        &self.points[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn vertex_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// The coordinate label of a vertex (the x-coordinate for intervals).
    pub fn label(&self, v: usize) -> Rational {
        point_label(&self.root, &self.points[v])
    }

    pub fn labels(&self) -> Vec<Rational> {
        (0..self.num_vertices()).map(|v| self.label(v)).collect()
    }

    /// All cells in canonical order: each vertex followed by the edges whose
    /// later endpoint it is.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.num_cells());
        for v in 0..self.num_vertices() {
            out.push(Cell::Vertex(v));
            for &e in &self.incident[v] {
                let edge = &self.edges[e];
                if edge.a.max(edge.b) == v {
                    out.push(Cell::Edge(e));
                }
            }
        }
        out
    }

    pub fn site(&self, cell: Cell) -> Site {
        match cell {
            Cell::Vertex(v) => Site::Vertex(self.describe(v)),
            Cell::Edge(e) => {
                let edge = &self.edges[e];
                Site::Edge(self.describe(edge.a), self.describe(edge.b))
            }
        }
    }

    fn describe(&self, v: usize) -> String {
        match (self.root.kind, &self.points[v]) {
            (DomainKind::Interval, _) => self.label(v).to_string(),
            (DomainKind::Graph, Point::Vertex(i)) => format!("v{i}"),
            (DomainKind::Graph, Point::Inner { carrier, t }) => format!("e{carrier}@{t}"),
        }
    }

    /// The cell of this complex containing `p`, if `p` lies in the complex.
    pub fn locate(&self, p: &Point) -> Option<Cell> {
        if let Some(&v) = self.index.get(p) {
            return Some(Cell::Vertex(v));
        }
        match p {
            Point::Vertex(_) => None,
            Point::Inner { carrier, t } => {
                let list = &self.by_carrier[*carrier];
                let pos = list.partition_point(|&e| self.edges[e].t1 <= *t);
                list.get(pos).copied().filter(|&e| self.edges[e].t0 < *t).map(Cell::Edge)
            }
        }
    }

    /// The midpoint of an edge as a root position.
    pub fn midpoint(&self, e: usize) -> Point {
        let edge = &self.edges[e];
        Point::Inner { carrier: edge.carrier, t: (&edge.t0 + &edge.t1) / Rational::from_integer(2.into()) }
    }

    /// The point at parameter `s ∈ [0,1]` along edge `e` (from `a` to `b`).
    pub fn point_along(&self, e: usize, s: &Rational) -> Point {
        let edge = &self.edges[e];
        let t = &edge.t0 + (&edge.t1 - &edge.t0) * s;
        point_on(&self.root, edge.carrier, &t)
    }

    /// Whether every point of `other` lies in this complex.
    pub fn covers(&self, other: &Complex1D) -> bool {
        if !self.same_root(other) {
            return false;
        }
        if other.points.iter().any(|p| self.locate(p).is_none()) {
            return false;
        }
        other.edges.iter().all(|edge| {
            let mut cuts: Vec<Rational> = self.by_carrier[edge.carrier]
                .iter()
                .flat_map(|&e| [self.edges[e].t0.clone(), self.edges[e].t1.clone()])
                .filter(|t| *t > edge.t0 && *t < edge.t1)
                .collect();
            cuts.push(edge.t0.clone());
            cuts.push(edge.t1.clone());
            cuts.sort();
            cuts.dedup();
            cuts.windows(2).all(|w| {
                let mid = (&w[0] + &w[1]) / Rational::from_integer(2.into());
                matches!(
                    self.locate(&Point::Inner { carrier: edge.carrier, t: mid }),
                    Some(Cell::Edge(_))
                )
            })
        })
    }

    pub fn same_root(&self, other: &Complex1D) -> bool {
        Arc::ptr_eq(&self.root, &other.root) || self.root == other.root
    }

    /// Whether both complexes describe the same subset of the root.
    pub fn same_space(&self, other: &Complex1D) -> bool {
        self.covers(other) && other.covers(self)
    }

    /// Whether no vertex of `coarse` lies strictly inside an edge of `self`,
    /// so that every function on `coarse` stays linear on the edges of `self`.
    pub fn refines_within(&self, coarse: &Complex1D) -> bool {
        self.edges.iter().all(|edge| {
            coarse.by_carrier[edge.carrier].iter().all(|&e| {
                let c = &coarse.edges[e];
                !(c.t0 > edge.t0 && c.t0 < edge.t1) && !(c.t1 > edge.t0 && c.t1 < edge.t1)
            })
        })
    }

    /// Splits edges at the given points. Points already present are ignored;
    /// points outside the complex are an error.
    pub fn with_points<'a, I>(&self, pts: I) -> Result<Complex1D>
    where
        I: IntoIterator<Item = &'a Point>,
    {
        let mut splits: HashMap<usize, Vec<Rational>> = HashMap::new();
        let mut added = Vec::new();
        for p in pts {
            match self.locate(p) {
                Some(Cell::Vertex(_)) => {}
                Some(Cell::Edge(e)) => {
                    if let Point::Inner { t, .. } = p {
                        splits.entry(e).or_default().push(t.clone());
                        added.push(p.clone());
                    }
                }
                None => {
                    return Err(Error::DomainMismatch(format!(
                        "point {} lies outside the complex",
                        point_label(&self.root, p)
                    )))
                }
            }
        }
        if added.is_empty() {
            return Ok(self.clone_shallow());
        }
        let mut points = self.points.clone();
        points.extend(added);
        let mut segments = Vec::with_capacity(self.edges.len() + points.len());
        for (e, edge) in self.edges.iter().enumerate() {
            let mut ts = vec![edge.t0.clone(), edge.t1.clone()];
            if let Some(extra) = splits.get(&e) {
                ts.extend(extra.iter().cloned());
            }
            ts.sort();
            ts.dedup();
            for w in ts.windows(2) {
                segments.push((edge.carrier, w[0].clone(), w[1].clone()));
            }
        }
        Ok(Self::assemble(self.root.clone(), points, segments))
    }

    fn clone_shallow(&self) -> Complex1D {
        Self::assemble(
            self.root.clone(),
            self.points.clone(),
            self.edges.iter().map(|e| (e.carrier, e.t0.clone(), e.t1.clone())).collect(),
        )
    }

    /// The subcomplex made of the given vertices and edges. Endpoints of the
    /// selected edges are added automatically.
    pub fn subcomplex(&self, vertices: &[bool], edges: &[bool]) -> Complex1D {
        let mut keep = vertices.to_vec();
        let mut segments = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if edges[e] {
                keep[edge.a] = true;
                keep[edge.b] = true;
                segments.push((edge.carrier, edge.t0.clone(), edge.t1.clone()));
            }
        }
        let points = self
            .points
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(p, _)| p.clone())
            .collect();
        Self::assemble(self.root.clone(), points, segments)
    }

    /// Connected components as lists of vertex ids (ascending).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.num_vertices()];
        let mut out = Vec::new();
        for s in 0..self.num_vertices() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &e in &self.incident[v] {
                    let w = self.other_end(e, v);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = &self.edges[e];
        if edge.a == v {
            edge.b
        } else {
            edge.a
        }
    }

    /// If `component` is a path, its vertices and edges in order from the
    /// lowest-id end vertex, else `None`.
    pub fn path_order(&self, component: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
        let edge_count: usize = component.iter().map(|&v| self.incident[v].len()).sum::<usize>() / 2;
        if edge_count + 1 != component.len() || component.iter().any(|&v| self.incident[v].len() > 2) {
            return None;
        }
        let start = *component.iter().find(|&&v| self.incident[v].len() <= 1)?;
        let mut order = vec![start];
        let mut edges = Vec::new();
        let mut prev_edge = None;
        let mut cur = start;
        loop {
            let next = self.incident[cur].iter().copied().find(|&e| Some(e) != prev_edge);
            match next {
                Some(e) => {
                    edges.push(e);
                    cur = self.other_end(e, cur);
                    order.push(cur);
                    prev_edge = Some(e);
                }
                None => break,
            }
        }
        Some((order, edges))
    }
}

/// The smallest complex refining every given complex. One of them must cover
/// all the others; the rest contribute their vertices as extra breakpoints.
pub fn common_refinement(domains: &[&Arc<Complex1D>]) -> Result<Arc<Complex1D>> {
    let first = domains
        .first()
        .ok_or_else(|| Error::DomainMismatch("no domains to align".into()))?;
    if domains.iter().all(|d| Arc::ptr_eq(d, first) || ***d == ***first) {
        return Ok(Arc::clone(first));
    }
    let base = domains
        .iter()
        .find(|d| domains.iter().all(|o| d.covers(o)))
        .ok_or_else(|| {
            Error::DomainMismatch("functions or sets live on unrelated spaces".into())
        })?;
    let extra: Vec<&Point> = domains
        .iter()
        .filter(|d| !Arc::ptr_eq(d, base))
        .flat_map(|d| d.points.iter())
        .collect();
    let merged = base.with_points(extra)?;
    if merged == ***base {
        return Ok(Arc::clone(base));
    }
    Ok(Arc::new(merged))
}

fn point_on(root: &RootComplex, carrier: usize, t: &Rational) -> Point {
    if t.is_zero() {
        Point::Vertex(root.edges[carrier].0)
    } else if t.is_one() {
        Point::Vertex(root.edges[carrier].1)
    } else {
        Point::Inner { carrier, t: t.clone() }
    }
}

fn point_label(root: &RootComplex, p: &Point) -> Rational {
    match p {
        Point::Vertex(i) => root.labels[*i].clone(),
        Point::Inner { carrier, t } => {
            let (a, b) = root.edges[*carrier];
            &root.labels[a] + (&root.labels[b] - &root.labels[a]) * t
        }
    }
}

fn order_key(root: &RootComplex, p: &Point) -> (u8, usize, Rational) {
    match (root.kind, p) {
        (DomainKind::Interval, Point::Vertex(i)) => (0, *i, Rational::zero()),
        (DomainKind::Interval, Point::Inner { carrier, t }) => (0, *carrier, t.clone()),
        (DomainKind::Graph, Point::Vertex(i)) => (0, *i, Rational::zero()),
        (DomainKind::Graph, Point::Inner { carrier, t }) => (1, *carrier, t.clone()),
    }
}
