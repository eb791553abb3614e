//! Exhaustive decision of whether a continuous root selection exists.
//!
//! After refining at every crossing among the roots and the bounds, any two
//! branches are identical or disjoint on each open edge. A continuous `w`
//! with `w(x)` a root at every `x` therefore follows a single branch on each
//! open edge, and can only switch branches at vertices where branches meet.
//! Selections are thus exactly the consistent assignments of one admissible
//! branch per edge, which makes existence a finite reachability question.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, Complex1D, DomainKind, Site};
use crate::crochet::{check_pattern, CrochetPattern, PatternVerdict};
use crate::error::{Error, Result};
use crate::pl::{align, refine, PLFunction};
use crate::poly::{sign_profile, FactoredPoly, SignBound};
use crate::report::CheckLog;
use crate::sets::{closure_of_pred, ClosedSet, OpenSet, Relation};
use crate::{rat, Rational};

/// Default cap on the cells of a cyclic component searched by backtracking.
pub const DEFAULT_SELECTION_CAP: usize = 64;
/// Default cap on refined edges for [`oracle_bruteforce`].
pub const DEFAULT_ORACLE_CAP: usize = 12;

#[derive(Clone, Copy, Debug)]
pub struct SelectOptions {
    pub cell_cap: usize,
    /// Verify `p(u) <= 0 <= p(v)` before searching.
    pub check_signs: bool,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self { cell_cap: DEFAULT_SELECTION_CAP, check_signs: true }
    }
}

/// One way to follow a root along an edge: the lowest root index realizing
/// it and the value indices at the edge's endpoints `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeOption {
    pub branch: usize,
    pub at_a: usize,
    pub at_b: usize,
}

/// Admissible root values per vertex and admissible branches per edge.
#[derive(Clone, Debug)]
pub struct BranchGraph {
    pub domain: Arc<Complex1D>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
    /// Ascending distinct admissible values at each vertex.
    pub values: Vec<Vec<Rational>>,
    /// Lowest root index (1-based) attaining each admissible value.
    pub branch_of: Vec<Vec<usize>>,
    pub options: Vec<Vec<EdgeOption>>,
}

impl BranchGraph {
    pub fn build(p: &FactoredPoly, u: &PLFunction, v: &PLFunction) -> Result<Self> {
        let mut all = p.roots().to_vec();
        all.push(u.clone());
        all.push(v.clone());
        let (domain, fs) = refine(p.domain(), &align(&all)?)?;
        let n = p.degree();
        let (roots, bounds) = fs.split_at(n);
        let nv = domain.num_vertices();
        let lower: Vec<Rational> = (0..nv).map(|x| bounds[0].value(x).min(bounds[1].value(x)).clone()).collect();
        let upper: Vec<Rational> = (0..nv).map(|x| bounds[0].value(x).max(bounds[1].value(x)).clone()).collect();
        let ok = |x: usize, val: &Rational| lower[x] <= *val && *val <= upper[x];

        let mut values = Vec::with_capacity(nv);
        let mut branch_of = Vec::with_capacity(nv);
        for x in 0..nv {
            let mut pairs: Vec<(Rational, usize)> = Vec::new();
            for (i, f) in roots.iter().enumerate() {
                let val = f.value(x);
                if ok(x, val) && !pairs.iter().any(|(y, _)| y == val) {
                    pairs.push((val.clone(), i + 1));
                }
            }
            pairs.sort();
            branch_of.push(pairs.iter().map(|(_, b)| *b).collect());
            values.push(pairs.into_iter().map(|(y, _)| y).collect::<Vec<_>>());
        }
        let index = |x: usize, val: &Rational| values[x].iter().position(|y| y == val);
        let mut options = Vec::with_capacity(domain.num_edges());
        for e in 0..domain.num_edges() {
            let edge = domain.edge(e);
            let mut opts: Vec<EdgeOption> = Vec::new();
            for (i, f) in roots.iter().enumerate() {
                let (Some(at_a), Some(at_b)) = (index(edge.a, f.value(edge.a)), index(edge.b, f.value(edge.b))) else {
                    continue;
                };
                if !opts.iter().any(|o| o.at_a == at_a && o.at_b == at_b) {
                    opts.push(EdgeOption { branch: i + 1, at_a, at_b });
                }
            }
            options.push(opts);
        }
        Ok(Self { domain, lower, upper, values, branch_of, options })
    }

    fn site(&self, x: usize) -> Site {
        self.domain.site(Cell::Vertex(x))
    }

    /// Options of edge `e` oriented from vertex `from`: (branch, index at
    /// `from`, index at the other end).
    fn oriented(&self, e: usize, from: usize) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let forward = self.domain.edge(e).a == from;
        self.options[e]
            .iter()
            .map(move |o| if forward { (o.branch, o.at_a, o.at_b) } else { (o.branch, o.at_b, o.at_a) })
    }
}

/// The reachable admissible values at one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reachable {
    pub vertex: Site,
    pub values: Vec<String>,
}

/// Certificate that no continuous selection exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub cut_vertex: Site,
    pub reachable: Vec<Reachable>,
}

#[derive(Clone, Debug)]
pub enum SelectionResult {
    Found(PLFunction),
    Obstructed(Obstruction),
}

impl SelectionResult {
    pub fn selection(&self) -> Option<&PLFunction> {
        match self {
            SelectionResult::Found(w) => Some(w),
            SelectionResult::Obstructed(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            SelectionResult::Found(_) => None,
            SelectionResult::Obstructed(o) => Some(o),
        }
    }
}

/// Decides whether a continuous `w` with `p(w) = 0` and `u∧v <= w <= u∨v`
/// exists and returns the canonical one: lowest branch index first, with
/// choices made from the left.
pub fn find_selection(p: &FactoredPoly, u: &PLFunction, v: &PLFunction, opts: SelectOptions) -> Result<SelectionResult> {
    if opts.check_signs {
        let mut log = CheckLog::new("select");
        crate::region::require_signs(&mut log, p, u, v, "p", None)?;
    }
    let g = BranchGraph::build(p, u, v)?;
    let mut choice = vec![usize::MAX; g.domain.num_vertices()];
    for comp in g.domain.components() {
        let outcome = match g.domain.path_order(&comp) {
            Some((order, edges)) => solve_path(&g, &order, &edges),
            None => solve_general(&g, &comp, opts.cell_cap)?,
        };
        match outcome {
            Ok(vals) => {
                for (x, i) in vals {
                    choice[x] = i;
                }
            }
            Err(obstruction) => return Ok(SelectionResult::Obstructed(obstruction)),
        }
    }
    let values = choice.iter().enumerate().map(|(x, &i)| g.values[x][i].clone()).collect();
    let w = PLFunction::new(Arc::clone(&g.domain), values)?;
    if let Some((claim, site)) = verify_selection(p, u, v, &w)? {
        return Err(Error::hypothesis("select/postcondition", claim, site));
    }
    Ok(SelectionResult::Found(w))
}

type Assignment = std::result::Result<Vec<(usize, usize)>, Obstruction>;

fn solve_path(g: &BranchGraph, order: &[usize], edges: &[usize]) -> Assignment {
    let m = order.len();
    let mut reach: Vec<Vec<bool>> = vec![vec![true; g.values[order[0]].len()]];
    let trace = |reach: &[Vec<bool>]| -> Vec<Reachable> {
        reach
            .iter()
            .zip(order)
            .map(|(r, &x)| Reachable {
                vertex: g.site(x),
                values: r.iter().zip(&g.values[x]).filter(|(&b, _)| b).map(|(_, y)| y.to_string()).collect(),
            })
            .collect()
    };
    if reach[0].is_empty() {
        return Err(Obstruction { cut_vertex: g.site(order[0]), reachable: trace(&reach) });
    }
    for k in 0..m - 1 {
        let mut next = vec![false; g.values[order[k + 1]].len()];
        for (_, from, to) in g.oriented(edges[k], order[k]) {
            if reach[k][from] {
                next[to] = true;
            }
        }
        let empty = !next.iter().any(|&b| b);
        reach.push(next);
        if empty {
            return Err(Obstruction { cut_vertex: g.site(order[k + 1]), reachable: trace(&reach) });
        }
    }
    let mut back: Vec<Vec<bool>> = vec![Vec::new(); m];
    back[m - 1] = vec![true; g.values[order[m - 1]].len()];
    for k in (0..m - 1).rev() {
        let mut cur = vec![false; g.values[order[k]].len()];
        for (_, from, to) in g.oriented(edges[k], order[k]) {
            if back[k + 1][to] {
                cur[from] = true;
            }
        }
        back[k] = cur;
    }
    let x0 = order[0];
    let mut cur = (0..g.values[x0].len())
        .filter(|&i| back[0][i])
        .min_by_key(|&i| (g.branch_of[x0][i], i))
        .expect("forward reachability implies a feasible start");
    let mut out = vec![(x0, cur)];
    for k in 0..m - 1 {
        let (_, _, to) = g
            .oriented(edges[k], order[k])
            .filter(|&(_, from, to)| from == cur && back[k + 1][to])
            .min_by_key(|&(b, _, to)| (b, g.branch_of[order[k + 1]][to]))
            .expect("backward feasibility");
        cur = to;
        out.push((order[k + 1], cur));
    }
    Ok(out)
}

fn solve_general(g: &BranchGraph, comp: &[usize], cap: usize) -> Result<Assignment> {
    let d = &g.domain;
    let edges: BTreeSet<usize> = comp.iter().flat_map(|&x| d.incident(x).iter().copied()).collect();
    let cells = comp.len() + edges.len();
    if edges.len() >= comp.len() && cells > cap {
        return Err(Error::Size {
            what: "cyclic component cell count".into(),
            got: cells,
            cap,
            hint: "; raise --cell-cap".into(),
        });
    }
    let mut dom: Vec<Vec<bool>> = (0..d.num_vertices()).map(|x| vec![true; g.values[x].len()]).collect();
    // Arc consistency.
    let mut changed = true;
    while changed {
        changed = false;
        for &e in &edges {
            let edge = d.edge(e);
            for (from, to) in [(edge.a, edge.b), (edge.b, edge.a)] {
                for i in 0..dom[from].len() {
                    if dom[from][i] && !g.oriented(e, from).any(|(_, a, b)| a == i && dom[to][b]) {
                        dom[from][i] = false;
                        changed = true;
                    }
                }
            }
        }
    }
    let reachable = |dom: &[Vec<bool>]| -> Vec<Reachable> {
        comp.iter()
            .map(|&x| Reachable {
                vertex: g.site(x),
                values: dom[x].iter().zip(&g.values[x]).filter(|(&b, _)| b).map(|(_, y)| y.to_string()).collect(),
            })
            .collect()
    };
    if let Some(&x) = comp.iter().find(|&&x| !dom[x].iter().any(|&b| b)) {
        return Ok(Err(Obstruction { cut_vertex: g.site(x), reachable: reachable(&dom) }));
    }
    let mut assigned = vec![usize::MAX; d.num_vertices()];
    if backtrack(g, comp, 0, &dom, &mut assigned) {
        Ok(Ok(comp.iter().map(|&x| (x, assigned[x])).collect()))
    } else {
        Ok(Err(Obstruction { cut_vertex: g.site(comp[0]), reachable: reachable(&dom) }))
    }
}

fn backtrack(g: &BranchGraph, comp: &[usize], k: usize, dom: &[Vec<bool>], assigned: &mut [usize]) -> bool {
    let Some(&x) = comp.get(k) else {
        return true;
    };
    let mut cands: Vec<usize> = (0..g.values[x].len()).filter(|&i| dom[x][i]).collect();
    cands.sort_by_key(|&i| (g.branch_of[x][i], i));
    for i in cands {
        let consistent = g.domain.incident(x).iter().all(|&e| {
            let y = g.domain.other_end(e, x);
            assigned[y] == usize::MAX || g.oriented(e, x).any(|(_, a, b)| a == i && b == assigned[y])
        });
        if consistent {
            assigned[x] = i;
            if backtrack(g, comp, k + 1, dom, assigned) {
                return true;
            }
            assigned[x] = usize::MAX;
        }
    }
    false
}

/// Checks `p(w) = 0` and `u∧v <= w <= u∨v`; returns the first failed claim.
pub fn verify_selection(p: &FactoredPoly, u: &PLFunction, v: &PLFunction, w: &PLFunction) -> Result<Option<(String, Site)>> {
    if let Some(site) = sign_profile(p, w)?.first_violation(SignBound::Zero, None) {
        return Ok(Some(("p(w) = 0".into(), site)));
    }
    let (d, fs) = refine(u.domain(), &align(&[u.clone(), v.clone(), w.clone()])?)?;
    for x in 0..d.num_vertices() {
        let (a, b, y) = (fs[0].value(x), fs[1].value(x), fs[2].value(x));
        if y < a.min(b) || y > a.max(b) {
            return Ok(Some(("u∧v <= w <= u∨v".into(), d.site(Cell::Vertex(x)))));
        }
    }
    Ok(None)
}

/// Every selection, by enumerating one root index per refined edge.
pub fn oracle_bruteforce(p: &FactoredPoly, u: &PLFunction, v: &PLFunction, cap: usize) -> Result<Vec<PLFunction>> {
    let mut all = p.roots().to_vec();
    all.push(u.clone());
    all.push(v.clone());
    let (d, fs) = refine(p.domain(), &align(&all)?)?;
    if d.num_edges() > cap {
        return Err(Error::Size { what: "refined edge count".into(), got: d.num_edges(), cap, hint: String::new() });
    }
    let n = p.degree();
    let (roots, bounds) = fs.split_at(n);
    let inside = |i: usize, x: usize| {
        let y = roots[i].value(x);
        let (a, b) = (bounds[0].value(x), bounds[1].value(x));
        y >= a.min(b) && y <= a.max(b)
    };
    let mut found = BTreeSet::new();
    let mut vals: Vec<Option<Rational>> = vec![None; d.num_vertices()];
    enumerate_edges(&d, roots, &inside, 0, &mut vals, &mut found);
    found
        .into_iter()
        .map(|vals| PLFunction::new(Arc::clone(&d), vals))
        .collect()
}

fn enumerate_edges(
    d: &Complex1D,
    roots: &[PLFunction],
    inside: &dyn Fn(usize, usize) -> bool,
    e: usize,
    vals: &mut Vec<Option<Rational>>,
    found: &mut BTreeSet<Vec<Rational>>,
) {
    if e == d.num_edges() {
        enumerate_isolated(d, roots, inside, 0, vals, found);
        return;
    }
    let edge = d.edge(e);
    for i in 0..roots.len() {
        if !inside(i, edge.a) || !inside(i, edge.b) {
            continue;
        }
        let (ya, yb) = (roots[i].value(edge.a), roots[i].value(edge.b));
        if vals[edge.a].as_ref().is_some_and(|y| y != ya) || vals[edge.b].as_ref().is_some_and(|y| y != yb) {
            continue;
        }
        let saved = (vals[edge.a].clone(), vals[edge.b].clone());
        vals[edge.a] = Some(ya.clone());
        vals[edge.b] = Some(yb.clone());
        enumerate_edges(d, roots, inside, e + 1, vals, found);
        vals[edge.a] = saved.0;
        vals[edge.b] = saved.1;
    }
}

fn enumerate_isolated(
    d: &Complex1D,
    roots: &[PLFunction],
    inside: &dyn Fn(usize, usize) -> bool,
    x: usize,
    vals: &mut Vec<Option<Rational>>,
    found: &mut BTreeSet<Vec<Rational>>,
) {
    if x == d.num_vertices() {
        found.insert(vals.iter().map(|y| y.clone().expect("assigned")).collect());
        return;
    }
    if vals[x].is_some() {
        enumerate_isolated(d, roots, inside, x + 1, vals, found);
        return;
    }
    for i in 0..roots.len() {
        if inside(i, x) {
            vals[x] = Some(roots[i].value(x).clone());
            enumerate_isolated(d, roots, inside, x + 1, vals, found);
        }
    }
    vals[x] = None;
}

/// The three roots built from `f: X -> [0,1]` whose cubic has no
/// continuous root between 0 and 1 unless `X` splits accordingly.
#[derive(Clone, Debug)]
pub struct Zigzag {
    pub f: PLFunction,
    pub f1: PLFunction,
    pub f2: PLFunction,
    pub f3: PLFunction,
    pub p: FactoredPoly,
}

pub fn zigzag_witness(f: &PLFunction) -> Result<Zigzag> {
    let d = f.domain();
    if let Some(x) = (0..d.num_vertices()).find(|&x| f.value(x).is_negative() || *f.value(x) > rat(1, 1)) {
        return Err(Error::hypothesis("zigzag", "0 <= f <= 1", d.site(Cell::Vertex(x))));
    }
    let (quarter, three) = (rat(1, 4), rat(3, 4));
    let (_, fs) = refine(d, &[f.clone(), PLFunction::constant(d, quarter.clone()), PLFunction::constant(d, three.clone())])?;
    let f = fs[0].clone();
    let half = rat(1, 2);
    let f1 = f.map(|y| {
        if *y <= quarter {
            y - &quarter
        } else if *y <= three {
            Rational::zero()
        } else {
            y - &three
        }
    });
    let f2 = f.map(|y| {
        if *y <= quarter {
            (y - &quarter) * &half
        } else if *y <= three {
            (y - &quarter) * rat(2, 1)
        } else {
            (y + rat(5, 4)) * &half
        }
    });
    let f3 = f.map(|y| {
        if *y <= quarter {
            y + &three
        } else if *y <= three {
            rat(1, 1)
        } else {
            y + &quarter
        }
    });
    let p = FactoredPoly::new(vec![f1.clone(), f2.clone(), f3.clone()])?;
    Ok(Zigzag { f, f1, f2, f3, p })
}

/// The partition read off a root `w` of the zig-zag cubic, with the sets it
/// separates and its verdict.
#[derive(Clone, Debug)]
pub struct ZigzagPartition {
    pub pattern: CrochetPattern,
    /// `{f = 0}`.
    pub a: ClosedSet,
    /// `{f = 1}`.
    pub b: ClosedSet,
    /// `{f < 1/2}`.
    pub u: OpenSet,
    /// `{f > 1/2}`.
    pub v: OpenSet,
    pub verdict: PatternVerdict,
}

pub fn zigzag_partition(z: &Zigzag, w: &PLFunction) -> Result<ZigzagPartition> {
    if let Some(site) = sign_profile(&z.p, w)?.first_violation(SignBound::Zero, None) {
        return Err(Error::hypothesis("zigzag-partition", "p(w) = 0", site));
    }
    let level = |g: &PLFunction| -> Result<ClosedSet> { Ok(closure_of_pred(&w.sub(g)?, Relation::Equal)) };
    let pattern = CrochetPattern { x0: level(&z.f3)?, x1: level(&z.f2)?, x2: level(&z.f1)? };
    let shifted = |c: Rational| z.f.map(move |y| y - &c);
    let a = closure_of_pred(&z.f, Relation::Equal);
    let b = closure_of_pred(&shifted(rat(1, 1)), Relation::Equal);
    let u = OpenSet::strict(&shifted(rat(1, 2)), Relation::Less);
    let v = OpenSet::strict(&shifted(rat(1, 2)), Relation::Greater);
    let verdict = check_pattern(&pattern, &a, &b, &u, &v);
    Ok(ZigzagPartition { pattern, a, b, u, v, verdict })
}

#[derive(Clone, Debug)]
pub enum FSpaceProbe {
    /// `w` with `|w| <= 1` and `f = w|f|`.
    Found(PLFunction),
    /// A cell in both `cl{f > 0}` and `cl{f < 0}`.
    Obstructed(Site),
}

/// Solves `|f| w = f` with `|w| <= 1`. Possible exactly when the closures of
/// the positive and negative parts are disjoint.
pub fn f_space_probe(f: &PLFunction) -> Result<FSpaceProbe> {
    let pos = closure_of_pred(f, Relation::Greater);
    let neg = closure_of_pred(f, Relation::Less);
    if let Some(site) = pos.meets(&neg) {
        return Ok(FSpaceProbe::Obstructed(site));
    }
    let d = pos.domain().clone();
    let neg = neg.relocate(&d);
    let fixed: Vec<Option<Rational>> = (0..d.num_vertices())
        .map(|x| {
            if pos.contains(Cell::Vertex(x)) {
                Some(rat(1, 1))
            } else if neg.contains(Cell::Vertex(x)) {
                Some(rat(-1, 1))
            } else {
                None
            }
        })
        .collect();
    let values = match d.kind() {
        DomainKind::Interval => interpolate_runs(&d, &fixed),
        DomainKind::Graph => fixed.into_iter().map(|y| y.unwrap_or_else(Rational::zero)).collect(),
    };
    Ok(FSpaceProbe::Found(PLFunction::new(d, values)?))
}

/// Fills unset vertices of an interval by linear interpolation in `x`
/// between the nearest set neighbours, constant beyond the last one, and 0
/// where nothing is set.
fn interpolate_runs(d: &Complex1D, fixed: &[Option<Rational>]) -> Vec<Rational> {
    let xs = d.labels();
    let n = fixed.len();
    (0..n)
        .map(|i| {
            if let Some(y) = &fixed[i] {
                return y.clone();
            }
            let left = (0..i).rev().find(|&j| fixed[j].is_some());
            let right = (i + 1..n).find(|&j| fixed[j].is_some());
            match (left, right) {
                (Some(l), Some(r)) => {
                    let (yl, yr) = (fixed[l].clone().unwrap(), fixed[r].clone().unwrap());
                    &yl + (&yr - &yl) * (&xs[i] - &xs[l]) / (&xs[r] - &xs[l])
                }
                (Some(j), None) | (None, Some(j)) => fixed[j].clone().unwrap(),
                (None, None) => Rational::zero(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::make_interval;

    fn interval(xs: &[(i64, i64)]) -> Arc<Complex1D> {
        make_interval(&xs.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>()).unwrap()
    }

    fn unit() -> Arc<Complex1D> {
        interval(&[(0, 1), (1, 1)])
    }

    fn c(k: &Arc<Complex1D>, n: i64, d: i64) -> PLFunction {
        PLFunction::constant(k, rat(n, d))
    }

    #[test]
    fn zigzag_of_identity() {
        let k = interval(&[(0, 1), (1, 4), (3, 4), (1, 1)]);
        let z = zigzag_witness(&PLFunction::from_labels(&k, |x| x.clone())).unwrap();
        assert_eq!(z.f1.values(), &[rat(-1, 4), rat(0, 1), rat(0, 1), rat(1, 4)]);
        assert_eq!(z.f2.values(), &[rat(-1, 8), rat(0, 1), rat(1, 1), rat(9, 8)]);
        assert_eq!(z.f3.values(), &[rat(3, 4), rat(1, 1), rat(1, 1), rat(5, 4)]);
    }

    #[test]
    fn zigzag_of_zero_and_range_check() {
        let k = unit();
        let z = zigzag_witness(&c(&k, 0, 1)).unwrap();
        assert_eq!(z.f1.value(0), &rat(-1, 4));
        assert_eq!(z.f2.value(0), &rat(-1, 8));
        assert_eq!(z.f3.value(0), &rat(3, 4));
        assert!(matches!(zigzag_witness(&c(&k, 2, 1)), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn section_two_cubic_is_obstructed() {
        let k = unit();
        let z = zigzag_witness(&PLFunction::from_labels(&k, |x| x.clone())).unwrap();
        let (u, v) = (c(&k, 0, 1), c(&k, 1, 1));
        let res = find_selection(&z.p, &u, &v, SelectOptions::default()).unwrap();
        let obs = res.obstruction().expect("no selection on [0,1]");
        assert_eq!(obs.cut_vertex, Site::Vertex("1".into()));
        assert!(oracle_bruteforce(&z.p, &u, &v, DEFAULT_ORACLE_CAP).unwrap().is_empty());
    }

    #[test]
    fn single_branch() {
        let k = unit();
        let f = PLFunction::from_labels(&k, |x| x / rat(2, 1));
        let p = FactoredPoly::new(vec![f.clone()]).unwrap();
        let w = find_selection(&p, &c(&k, -1, 1), &c(&k, 1, 1), SelectOptions::default()).unwrap();
        assert!(w.selection().unwrap().same_function(&f));
    }

    #[test]
    fn oracle_counts() {
        let k = unit();
        let p = FactoredPoly::new(vec![c(&k, 0, 1), c(&k, 1, 1)]).unwrap();
        let all = oracle_bruteforce(&p, &c(&k, -1, 1), &c(&k, 2, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(all.len(), 2);
        let f = PLFunction::from_labels(&k, |x| x.clone());
        let dup = FactoredPoly::new(vec![f.clone(), f.clone()]).unwrap();
        let all = oracle_bruteforce(&dup, &c(&k, -1, 1), &c(&k, 2, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].same_function(&f));
    }

    #[test]
    fn canonical_prefers_lowest_branch() {
        let k = unit();
        let p = FactoredPoly::new(vec![c(&k, 0, 1), c(&k, 1, 1)]).unwrap();
        let res = find_selection(&p, &c(&k, -1, 1), &c(&k, 2, 1), SelectOptions { check_signs: false, ..Default::default() }).unwrap();
        assert_eq!(res.selection().unwrap().values(), &[rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn cycle_uses_backtracking() {
        let k = crate::complex::make_graph(&[rat(0, 1), rat(1, 1), rat(2, 1)], &[(0, 1), (1, 2), (2, 0)], false).unwrap();
        let p = FactoredPoly::new(vec![c(&k, 0, 1), c(&k, 1, 1)]).unwrap();
        let (u, v) = (c(&k, 1, 2), c(&k, 2, 1));
        let res = find_selection(&p, &u, &v, SelectOptions::default()).unwrap();
        assert_eq!(res.selection().unwrap().values(), &[rat(1, 1), rat(1, 1), rat(1, 1)]);
        let tiny = SelectOptions { cell_cap: 3, ..Default::default() };
        assert!(matches!(find_selection(&p, &u, &v, tiny), Err(Error::Size { .. })));
    }

    #[test]
    fn fspace_examples() {
        let k = unit();
        let f = PLFunction::from_labels(&k, |x| x - rat(1, 2));
        match f_space_probe(&f).unwrap() {
            FSpaceProbe::Obstructed(site) => assert_eq!(site, Site::Vertex("1/2".into())),
            FSpaceProbe::Found(_) => panic!("x - 1/2 changes sign"),
        }
        let f = PLFunction::from_labels(&k, |x| x.clone());
        match f_space_probe(&f).unwrap() {
            FSpaceProbe::Found(w) => assert!(w.same_function(&c(&k, 1, 1))),
            FSpaceProbe::Obstructed(_) => panic!(),
        }
        match f_space_probe(&c(&k, 0, 1)).unwrap() {
            FSpaceProbe::Found(w) => assert!(w.same_function(&c(&k, 0, 1))),
            FSpaceProbe::Obstructed(_) => panic!(),
        }
    }

    #[test]
    fn fspace_interpolates_through_zero_plateau() {
        let k = interval(&[(0, 1), (1, 1), (2, 1), (3, 1)]);
        let f = PLFunction::new(Arc::clone(&k), vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(-1, 1)]).unwrap();
        match f_space_probe(&f).unwrap() {
            FSpaceProbe::Found(w) => assert_eq!(w.values(), &[rat(1, 1), rat(1, 1), rat(-1, 1), rat(-1, 1)]),
            FSpaceProbe::Obstructed(_) => panic!("plateau separates the signs"),
        }
    }
}
