//! Closed subcomplexes and combinatorial open sets.
//!
//! Closures, interiors and level sets are computed on a complex refined at the
//! zeros of the defining function, so on every open edge the sign is constant
//! and all set operations are exact cell-set operations.

use std::sync::Arc;

use num::{Signed, Zero};

use crate::complex::{common_refinement, Cell, Complex1D, Site};
use crate::error::Result;
use crate::pl::{refine_at_zeros, PLFunction};
use crate::Rational;

/// How a function compares to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    Greater,
    Equal,
}

/// Membership flags over the cells of a complex.
#[derive(Clone, Debug)]
struct Cells {
    domain: Arc<Complex1D>,
    vertices: Vec<bool>,
    edges: Vec<bool>,
}

impl Cells {
    fn empty(domain: &Arc<Complex1D>) -> Self {
        Self {
            domain: Arc::clone(domain),
            vertices: vec![false; domain.num_vertices()],
            edges: vec![false; domain.num_edges()],
        }
    }

    fn full(domain: &Arc<Complex1D>) -> Self {
        Self {
            domain: Arc::clone(domain),
            vertices: vec![true; domain.num_vertices()],
            edges: vec![true; domain.num_edges()],
        }
    }

    fn contains(&self, c: Cell) -> bool {
        match c {
            Cell::Vertex(v) => self.vertices[v],
            Cell::Edge(e) => self.edges[e],
        }
    }

    /// Membership transported to a complex that refines this one on the
    /// shared part. Cells of `target` outside this complex are excluded.
    fn relocate(&self, target: &Arc<Complex1D>) -> Self {
        if Arc::ptr_eq(target, &self.domain) || **target == *self.domain {
            return Self { domain: Arc::clone(target), ..self.clone() };
        }
        let vertices = target
            .points()
            .iter()
            .map(|p| self.domain.locate(p).is_some_and(|c| self.contains(c)))
            .collect();
        let edges = (0..target.num_edges())
            .map(|e| match self.domain.locate(&target.midpoint(e)) {
                Some(c @ Cell::Edge(_)) => self.contains(c),
                Some(Cell::Vertex(_)) => panic!("relocation target does not refine the set's domain"),
                None => false,
            })
            .collect();
        Self { domain: Arc::clone(target), vertices, edges }
    }

    fn combine(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let common = common_refinement(&[&self.domain, &other.domain])
            .expect("cell sets live on unrelated spaces");
        let a = self.relocate(&common);
        let b = other.relocate(&common);
        Self {
            vertices: a.vertices.iter().zip(&b.vertices).map(|(&x, &y)| f(x, y)).collect(),
            edges: a.edges.iter().zip(&b.edges).map(|(&x, &y)| f(x, y)).collect(),
            domain: common,
        }
    }

    /// First cell (in canonical order) that is in `self` but not in `other`.
    fn first_outside(&self, other: &Self) -> Option<Site> {
        let diff = self.combine(other, |x, y| x && !y);
        diff.first_cell().map(|c| diff.domain.site(c))
    }

    fn first_cell(&self) -> Option<Cell> {
        self.domain.cells().into_iter().find(|&c| self.contains(c))
    }

    fn count(&self) -> usize {
        self.vertices.iter().filter(|&&x| x).count() + self.edges.iter().filter(|&&x| x).count()
    }
}

/// A closed subcomplex: every included edge has both endpoints included.
#[derive(Clone, Debug)]
pub struct ClosedSet(Cells);

/// A combinatorially open set: every included vertex has all its incident
/// edges included.
#[derive(Clone, Debug)]
pub struct OpenSet(Cells);

macro_rules! cell_set_common {
    ($t:ty) => {
        impl $t {
            pub fn domain(&self) -> &Arc<Complex1D> {
                &self.0.domain
            }

            pub fn contains(&self, c: Cell) -> bool {
                self.0.contains(c)
            }

            pub fn vertex_flags(&self) -> &[bool] {
                &self.0.vertices
            }

            pub fn edge_flags(&self) -> &[bool] {
                &self.0.edges
            }

            pub fn is_empty(&self) -> bool {
                self.0.count() == 0
            }

            pub fn cell_count(&self) -> usize {
                self.0.count()
            }

            /// Member cells in canonical order.
            pub fn cells(&self) -> Vec<Cell> {
                self.0.domain.cells().into_iter().filter(|&c| self.0.contains(c)).collect()
            }

            pub fn sites(&self) -> Vec<Site> {
                self.cells().into_iter().map(|c| self.0.domain.site(c)).collect()
            }

            pub fn relocate(&self, target: &Arc<Complex1D>) -> Self {
                Self(self.0.relocate(target))
            }

            pub fn first_site(&self) -> Option<Site> {
                self.0.first_cell().map(|c| self.0.domain.site(c))
            }
        }

        impl PartialEq for $t {
            /// Equality as point sets, compared on a common refinement.
            fn eq(&self, other: &Self) -> bool {
                match common_refinement(&[&self.0.domain, &other.0.domain]) {
                    Ok(common) => {
                        let a = self.0.relocate(&common);
                        let b = other.0.relocate(&common);
                        a.vertices == b.vertices && a.edges == b.edges
                    }
                    Err(_) => false,
                }
            }
        }
    };
}

cell_set_common!(ClosedSet);
cell_set_common!(OpenSet);

impl ClosedSet {
    pub fn empty(domain: &Arc<Complex1D>) -> Self {
        Self(Cells::empty(domain))
    }

    pub fn whole(domain: &Arc<Complex1D>) -> Self {
        Self(Cells::full(domain))
    }

    /// Closed set from explicit cells; endpoints of edges are added.
    pub fn from_cells(domain: &Arc<Complex1D>, cells: impl IntoIterator<Item = Cell>) -> Self {
        let mut s = Cells::empty(domain);
        for c in cells {
            match c {
                Cell::Vertex(v) => s.vertices[v] = true,
                Cell::Edge(e) => {
                    let edge = domain.edge(e);
                    s.edges[e] = true;
                    s.vertices[edge.a] = true;
                    s.vertices[edge.b] = true;
                }
            }
        }
        Self(s)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.combine(&other.0, |x, y| x || y))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self(self.0.combine(&other.0, |x, y| x && y))
    }

    /// First cell of `self` not in `other`, or `None` when `self ⊆ other`.
    pub fn not_within(&self, other: &Self) -> Option<Site> {
        self.0.first_outside(&other.0)
    }

    pub fn not_within_open(&self, other: &OpenSet) -> Option<Site> {
        self.0.first_outside(&other.0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.not_within(other).is_none()
    }

    /// A common cell, or `None` when disjoint.
    pub fn meets(&self, other: &Self) -> Option<Site> {
        let both = self.intersection(other);
        both.first_site()
    }

    /// First cell of the domain not covered by the union of `sets`.
    pub fn uncovered(domain: &Arc<Complex1D>, sets: &[&ClosedSet]) -> Option<Site> {
        let mut acc = ClosedSet::empty(domain);
        for s in sets {
            acc = acc.union(s);
        }
        ClosedSet::whole(domain).not_within(&acc)
    }

    /// Combinatorial interior: included edges, and included vertices all of
    /// whose incident edges are included.
    pub fn interior(&self) -> OpenSet {
        let d = &self.0.domain;
        let vertices = (0..d.num_vertices())
            .map(|v| self.0.vertices[v] && d.incident(v).iter().all(|&e| self.0.edges[e]))
            .collect();
        OpenSet(Cells { domain: Arc::clone(d), vertices, edges: self.0.edges.clone() })
    }

    /// The set as a complex of its own, for working inside it as a space.
    pub fn subcomplex(&self) -> Arc<Complex1D> {
        Arc::new(self.0.domain.subcomplex(&self.0.vertices, &self.0.edges))
    }

    /// The closed set occupied by a subcomplex of `ambient`.
    pub fn of_subcomplex(ambient: &Arc<Complex1D>, sub: &Arc<Complex1D>) -> Self {
        ClosedSet::whole(sub).relocate(&common_refinement(&[ambient, sub]).expect("subcomplex of a different space"))
    }
}

impl OpenSet {
    pub fn empty(domain: &Arc<Complex1D>) -> Self {
        Self(Cells::empty(domain))
    }

    pub fn whole(domain: &Arc<Complex1D>) -> Self {
        Self(Cells::full(domain))
    }

    /// The strict sub- or superlevel set `{g < 0}` / `{g > 0}` as open cells.
    pub fn strict(g: &PLFunction, rel: Relation) -> Self {
        assert!(rel != Relation::Equal, "level sets are closed, not open");
        let (_, fs) = refine_at_zeros(std::slice::from_ref(g)).expect("single function");
        let g = &fs[0];
        let d = g.domain();
        let want = if rel == Relation::Less { -1 } else { 1 };
        let sign = |x: &Rational| if x.is_zero() { 0 } else if x.is_positive() { 1 } else { -1 };
        let vertices = g.values().iter().map(|x| sign(x) == want).collect();
        let edges = (0..d.num_edges()).map(|e| sign(&g.mid(e)) == want).collect();
        Self(Cells { domain: Arc::clone(d), vertices, edges })
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.combine(&other.0, |x, y| x || y))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self(self.0.combine(&other.0, |x, y| x && y))
    }

    pub fn meets(&self, other: &Self) -> Option<Site> {
        let both = self.intersection(other);
        both.first_site()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.first_outside(&other.0).is_none()
    }

    pub fn is_open(&self) -> bool {
        let d = &self.0.domain;
        (0..d.num_vertices()).all(|v| !self.0.vertices[v] || d.incident(v).iter().all(|&e| self.0.edges[e]))
    }
}

/// The closure of `{g < 0}` or `{g > 0}`, or the zero set `{g = 0}`, as a
/// closed subcomplex of the domain refined at the zeros of `g`.
pub fn closure_of_pred(g: &PLFunction, rel: Relation) -> ClosedSet {
    let (_, fs) = refine_at_zeros(std::slice::from_ref(g)).expect("single function");
    let g = &fs[0];
    let d = g.domain();
    let mut s = Cells::empty(d);
    match rel {
        Relation::Equal => {
            for (v, x) in g.values().iter().enumerate() {
                s.vertices[v] = x.is_zero();
            }
            for e in 0..d.num_edges() {
                let edge = d.edge(e);
                s.edges[e] = g.value(edge.a).is_zero() && g.value(edge.b).is_zero();
            }
        }
        Relation::Less | Relation::Greater => {
            let strict = |x: &Rational| if rel == Relation::Less { x.is_negative() } else { x.is_positive() };
            for (v, x) in g.values().iter().enumerate() {
                s.vertices[v] = strict(x);
            }
            for e in 0..d.num_edges() {
                if strict(&g.mid(e)) {
                    let edge = d.edge(e);
                    s.edges[e] = true;
                    s.vertices[edge.a] = true;
                    s.vertices[edge.b] = true;
                }
            }
        }
    }
    ClosedSet(s)
}

/// `{g ≤ 0}` (for `Less`) or `{g ≥ 0}` (for `Greater`), a closed set.
pub fn weak_level_set(g: &PLFunction, rel: Relation) -> ClosedSet {
    closure_of_pred(g, rel).union(&closure_of_pred(g, Relation::Equal))
}

/// `{x : f(x) ≤ g(x)}` as a closed set.
pub fn le_set(f: &PLFunction, g: &PLFunction) -> Result<ClosedSet> {
    Ok(weak_level_set(&f.sub(g)?, Relation::Less))
}

/// `cl{x : f(x) < g(x)}`.
pub fn lt_closure(f: &PLFunction, g: &PLFunction) -> Result<ClosedSet> {
    Ok(closure_of_pred(&f.sub(g)?, Relation::Less))
}

/// First vertex (in canonical order) of `region` at which `pred` fails for the
/// aligned function values. Because functions are linear on edges and regions
/// are closed, a vertex check decides the predicate on the whole region
/// whenever the predicate is a conjunction of non-strict linear inequalities
/// or equalities.
pub fn first_failure(
    region: &ClosedSet,
    functions: &[&PLFunction],
    pred: impl Fn(&[&Rational]) -> bool,
) -> Result<Option<Site>> {
    let mut domains: Vec<&Arc<Complex1D>> = functions.iter().map(|f| f.domain()).collect();
    domains.push(region.domain());
    let common = common_refinement(&domains)?;
    let r = region.relocate(&common);
    let fs: Vec<PLFunction> = functions.iter().map(|f| f.relocate(&common)).collect::<Result<_>>()?;
    for v in 0..common.num_vertices() {
        if !r.contains(Cell::Vertex(v)) {
            continue;
        }
        let vals: Vec<&Rational> = fs.iter().map(|f| f.value(v)).collect();
        if !pred(&vals) {
            return Ok(Some(common.site(Cell::Vertex(v))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{make_graph, make_interval, Point};
    use crate::rat;

    fn unit() -> Arc<Complex1D> {
        make_interval(&[rat(0, 1), rat(1, 1)]).unwrap()
    }

    #[test]
    fn closure_of_sublevel() {
        let k = unit();
        let g = PLFunction::from_labels(&k, |x| x - rat(1, 2));
        let s = closure_of_pred(&g, Relation::Less);
        let half = Arc::new(k.with_points([&Point::Inner { carrier: 0, t: rat(1, 2) }]).unwrap());
        let expected = ClosedSet::from_cells(&half, [Cell::Edge(0)]);
        assert_eq!(s, expected);
        assert_eq!(s.sites(), vec![Site::Vertex("0".into()), Site::Vertex("1/2".into()), Site::Edge("0".into(), "1/2".into())]);
    }

    #[test]
    fn zero_function_levels() {
        let k = unit();
        let g = PLFunction::constant(&k, rat(0, 1));
        assert!(closure_of_pred(&g, Relation::Less).is_empty());
        assert_eq!(closure_of_pred(&g, Relation::Equal), ClosedSet::whole(&k));
    }

    #[test]
    fn interior_conventions() {
        let k = unit();
        let g = PLFunction::from_labels(&k, |x| x - rat(1, 2));
        let s = closure_of_pred(&g, Relation::Less);
        let int = s.interior();
        let d = int.domain().clone();
        assert!(int.contains(Cell::Vertex(0)));
        assert!(!int.contains(Cell::Vertex(1)));
        assert!(int.contains(Cell::Edge(0)));
        assert!(!int.contains(Cell::Vertex(2)));
        assert!(int.is_open());
        assert_eq!(d.label(1), rat(1, 2));

        let whole = ClosedSet::whole(&k);
        assert_eq!(whole.interior(), OpenSet::whole(&k));

        let k3 = make_interval(&[rat(0, 1), rat(1, 1), rat(2, 1)]).unwrap();
        let point = ClosedSet::from_cells(&k3, [Cell::Vertex(1)]);
        assert!(point.interior().is_empty());
    }

    #[test]
    fn isolated_vertex_is_open() {
        let k = make_graph(&[rat(0, 1), rat(1, 1), rat(5, 1)], &[(0, 1)], true).unwrap();
        let s = ClosedSet::from_cells(&k, [Cell::Vertex(2)]);
        assert!(s.interior().contains(Cell::Vertex(2)));
    }

    #[test]
    fn cover_by_three_level_sets() {
        let k = make_interval(&[rat(0, 1), rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap();
        let g = PLFunction::new(k.clone(), vec![rat(1, 1), rat(-1, 1), rat(0, 1), rat(0, 1)]).unwrap();
        let lt = closure_of_pred(&g, Relation::Less);
        let eq = closure_of_pred(&g, Relation::Equal);
        let gt = closure_of_pred(&g, Relation::Greater);
        assert!(ClosedSet::uncovered(&k, &[&lt, &eq, &gt]).is_none());
        assert!(lt.intersection(&gt).is_subset(&eq));
        assert!(!lt.intersection(&gt).is_empty());
    }

    #[test]
    fn subset_witness_reported() {
        let k = make_interval(&[rat(0, 1), rat(1, 1), rat(2, 1)]).unwrap();
        let a = ClosedSet::from_cells(&k, [Cell::Edge(0)]);
        let b = ClosedSet::from_cells(&k, [Cell::Edge(1)]);
        assert_eq!(a.not_within(&b), Some(Site::Vertex("0".into())));
        assert_eq!(a.meets(&b), Some(Site::Vertex("1".into())));
        assert!(a.not_within_open(&a.interior()).is_some());
    }

    #[test]
    fn strict_open_sets() {
        let k = unit();
        let g = PLFunction::from_labels(&k, |x| x - rat(1, 2));
        let below = OpenSet::strict(&g, Relation::Less);
        assert!(below.is_open());
        assert_eq!(below.cell_count(), 2);
    }
}
