//! Crochet patterns: covers of a space by three closed sets that separate a
//! pair of closed sets while overlapping only inside prescribed open sets.
//!
//! Patterns are checked, searched for, and used stage by stage to assemble
//! a root selection for odd-degree completely factored polynomials.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{common_refinement, Cell, Complex1D, Site};
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::poly::{sign_profile, FactoredPoly, SignBound};
use crate::region::{glue, require_signs};
use crate::report::CheckLog;
use crate::sets::{first_failure, le_set, lt_closure, ClosedSet, OpenSet};

/// Default cap on the cells of non-path components in [`search_pattern`].
pub const DEFAULT_PATTERN_CAP: usize = 15;

#[derive(Clone, Debug, PartialEq)]
pub struct CrochetPattern {
    pub x0: ClosedSet,
    pub x1: ClosedSet,
    pub x2: ClosedSet,
}

impl CrochetPattern {
    pub fn sets(&self) -> [&ClosedSet; 3] {
        [&self.x0, &self.x1, &self.x2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternClause {
    Cover,
    AInX0,
    BInX2,
    X0X1InV,
    X0X2Disjoint,
    X1X2InU,
}

impl PatternClause {
    pub const ALL: [PatternClause; 6] = [
        PatternClause::Cover,
        PatternClause::AInX0,
        PatternClause::BInX2,
        PatternClause::X0X1InV,
        PatternClause::X0X2Disjoint,
        PatternClause::X1X2InU,
    ];

    /// The clause in the naming of stage `i` of the final case.
    pub fn at_stage(self, i: usize) -> String {
        match self {
            PatternClause::Cover => format!("X_{i} ∪ Y_{i} ∪ Z_{i} = X"),
            PatternClause::AInX0 => format!("A_{i} ⊆ X_{i}"),
            PatternClause::BInX2 => format!("B_{i} ⊆ Z_{i}"),
            PatternClause::X0X1InV => format!("X_{i} ∩ Y_{i} ⊆ Int D_{i}"),
            PatternClause::X0X2Disjoint => format!("X_{i} ∩ Z_{i} = ∅"),
            PatternClause::X1X2InU => format!("Y_{i} ∩ Z_{i} ⊆ Int C_{i}"),
        }
    }
}

impl fmt::Display for PatternClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternClause::Cover => "X0 ∪ X1 ∪ X2 = X",
            PatternClause::AInX0 => "A ⊆ X0",
            PatternClause::BInX2 => "B ⊆ X2",
            PatternClause::X0X1InV => "X0 ∩ X1 ⊆ V",
            PatternClause::X0X2Disjoint => "X0 ∩ X2 = ∅",
            PatternClause::X1X2InU => "X1 ∩ X2 ⊆ U",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation<C> {
    pub clause: C,
    pub witness: Site,
}

/// All violated clauses, in clause order; empty means the check passed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict<C> {
    pub violations: Vec<Violation<C>>,
}

impl<C> Verdict<C> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation<C>> {
        self.violations.first()
    }
}

pub type PatternVerdict = Verdict<PatternClause>;

/// Checks the six pattern clauses against `A`, `B` and the open sets `U`, `V`.
pub fn check_pattern(pat: &CrochetPattern, a: &ClosedSet, b: &ClosedSet, u: &OpenSet, v: &OpenSet) -> PatternVerdict {
    let space = common_refinement(&[pat.x0.domain(), pat.x1.domain(), pat.x2.domain()])
        .expect("pattern sets on unrelated spaces");
    let mut violations = Vec::new();
    let mut note = |clause, witness: Option<Site>| {
        if let Some(witness) = witness {
            violations.push(Violation { clause, witness });
        }
    };
    note(PatternClause::Cover, ClosedSet::uncovered(&space, &pat.sets()));
    note(PatternClause::AInX0, a.not_within(&pat.x0));
    note(PatternClause::BInX2, b.not_within(&pat.x2));
    note(PatternClause::X0X1InV, pat.x0.intersection(&pat.x1).not_within_open(v));
    note(PatternClause::X0X2Disjoint, pat.x0.meets(&pat.x2));
    note(PatternClause::X1X2InU, pat.x1.intersection(&pat.x2).not_within_open(u));
    Verdict { violations }
}

/// The closed sets of stage `i` of the final case.
#[derive(Clone, Debug)]
pub struct StageScaffold {
    pub i: usize,
    /// `cl{v < f_{2i+1}}`.
    pub a: ClosedSet,
    /// `cl{u > f_{2i-1}}`.
    pub b: ClosedSet,
    /// `{v <= f_{2i}}`.
    pub c: ClosedSet,
    /// `{u >= f_{2i}}`.
    pub d: ClosedSet,
}

#[derive(Clone, Debug)]
pub struct Scaffold {
    pub stages: Vec<StageScaffold>,
    pub log: CheckLog,
}

fn odd_degree(p: &FactoredPoly, stage: &str) -> Result<usize> {
    let n = p.degree();
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidParameter(format!("{stage}: degree {n} is not odd and at least 3")));
    }
    if !p.is_sorted() {
        return Err(Error::InvalidParameter(format!("{stage}: roots must be sorted")));
    }
    Ok(n / 2)
}

/// Builds `A_i, B_i, C_i, D_i` for every stage after checking that the space
/// is `cl{u < v}` and that `p(u) <= 0 <= p(v)`.
pub fn build_scaffold(p: &FactoredPoly, u: &PLFunction, v: &PLFunction) -> Result<Scaffold> {
    let stage = "scaffold";
    let k = odd_degree(p, stage)?;
    let mut log = CheckLog::new(stage);
    let closure = lt_closure(u, v)?;
    let whole = ClosedSet::whole(p.domain());
    log.require("X = cl{u < v}", "X", whole.not_within(&closure))?;
    require_signs(&mut log, p, u, v, "p", None)?;
    let mut stages = Vec::with_capacity(k);
    for i in 1..=k {
        let s = StageScaffold {
            i,
            a: lt_closure(v, p.root(2 * i + 1))?,
            b: lt_closure(p.root(2 * i - 1), u)?,
            c: le_set(v, p.root(2 * i))?,
            d: le_set(p.root(2 * i), u)?,
        };
        log.require(format!("A_{i} ⊆ C_{i}"), "X", s.a.not_within(&s.c))?;
        log.require(format!("B_{i} ⊆ D_{i}"), "X", s.b.not_within(&s.d))?;
        stages.push(s);
    }
    Ok(Scaffold { stages, log })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FSpaceClause {
    AInIntC,
    BInIntD,
    IntCDisjointIntD,
}

impl fmt::Display for FSpaceClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FSpaceClause::AInIntC => "A ⊆ Int C",
            FSpaceClause::BInIntD => "B ⊆ Int D",
            FSpaceClause::IntCDisjointIntD => "Int C ∩ Int D = ∅",
        })
    }
}

pub type FSpaceVerdict = Verdict<FSpaceClause>;

/// The separation a stage needs from the space: `A ⊆ Int C`, `B ⊆ Int D`
/// and disjoint interiors of `C` and `D`.
pub fn check_fspace_hypothesis(s: &StageScaffold) -> FSpaceVerdict {
    let (ic, id) = (s.c.interior(), s.d.interior());
    let mut violations = Vec::new();
    for (clause, witness) in [
        (FSpaceClause::AInIntC, s.a.not_within_open(&ic)),
        (FSpaceClause::BInIntD, s.b.not_within_open(&id)),
        (FSpaceClause::IntCDisjointIntD, ic.meets(&id)),
    ] {
        if let Some(witness) = witness {
            violations.push(Violation { clause, witness });
        }
    }
    Verdict { violations }
}

/// The selection built from per-stage patterns, with the pieces it was
/// glued from.
#[derive(Clone, Debug)]
pub struct FinalAssembly {
    pub w: PLFunction,
    pub pieces: Vec<(String, ClosedSet)>,
    pub log: CheckLog,
}

fn eq_all(x: &[&crate::Rational]) -> bool {
    x.windows(2).all(|w| w[0] == w[1])
}

fn ascending(x: &[&crate::Rational]) -> bool {
    x.windows(2).all(|w| w[0] <= w[1])
}

/// Assembles `w` from the stage patterns `(X_i, Y_i, Z_i)`, replaying every
/// step of the argument that makes it well defined, continuous, a root of
/// `p`, and bounded by `u` and `v`.
pub fn assemble_final(
    p: &FactoredPoly,
    u: &PLFunction,
    v: &PLFunction,
    scaffolds: &[StageScaffold],
    patterns: &[CrochetPattern],
) -> Result<FinalAssembly> {
    let stage = "final-case";
    let k = odd_degree(p, stage)?;
    if scaffolds.len() != k || patterns.len() != k {
        return Err(Error::InvalidParameter(format!(
            "{stage}: need {k} stages, got {} scaffolds and {} patterns",
            scaffolds.len(),
            patterns.len()
        )));
    }
    let n = p.degree();
    let f = |j: usize| p.root(j);
    let mut log = CheckLog::new(stage);

    for (s, pat) in scaffolds.iter().zip(patterns) {
        let i = s.i;
        let verdict = check_pattern(pat, &s.a, &s.b, &s.c.interior(), &s.d.interior());
        for clause in PatternClause::ALL {
            let witness = verdict.violations.iter().find(|x| x.clause == clause).map(|x| x.witness.clone());
            log.require(clause.at_stage(i), "X", witness)?;
        }
    }

    for (s, pat) in scaffolds.iter().zip(patterns) {
        let i = s.i;
        let (x, y, z) = (&pat.x0, &pat.x1, &pat.x2);
        let (lo, mid, hi) = (f(2 * i - 1), f(2 * i), f(2 * i + 1));
        let w = first_failure(&x.union(y), &[u, lo], |a| a[0] <= a[1])?;
        log.require(format!("({i}.1) u <= f_{}", 2 * i - 1), format!("X_{i} ∪ Y_{i}"), w)?;
        let w = first_failure(&y.union(z), &[v, hi], |a| a[0] >= a[1])?;
        log.require(format!("({i}.2) v >= f_{}", 2 * i + 1), format!("Y_{i} ∪ Z_{i}"), w)?;
        let w = first_failure(&x.intersection(y), &[u, lo, mid], eq_all)?;
        log.require(format!("({i}.3) u = f_{} = f_{}", 2 * i - 1, 2 * i), format!("X_{i} ∩ Y_{i}"), w)?;
        let w = first_failure(&y.intersection(z), &[v, hi, mid], eq_all)?;
        log.require(format!("({i}.4) v = f_{} = f_{}", 2 * i + 1, 2 * i), format!("Y_{i} ∩ Z_{i}"), w)?;
        let w = first_failure(y, &[u, lo, mid, hi, v], ascending)?;
        log.require(
            format!("({i}.5) u <= f_{} <= f_{} <= f_{} <= v", 2 * i - 1, 2 * i, 2 * i + 1),
            format!("Y_{i}"),
            w,
        )?;
    }

    // zc[i] is the intersection of Z_j for j < i (1-based), zc[1] = X.
    let whole = ClosedSet::whole(p.domain());
    let mut zc = vec![whole.clone(), whole];
    for pat in patterns {
        let next = zc.last().unwrap().intersection(&pat.x2);
        zc.push(next);
    }
    let zname = |i: usize| -> String {
        match i {
            1 => String::new(),
            2 => " ∩ Z_1".into(),
            _ => format!(" ∩ Z_1 ∩ … ∩ Z_{}", i - 1),
        }
    };
    let xs = |i: usize| patterns[i - 1].x0.intersection(&zc[i]);
    let ys = |i: usize| patterns[i - 1].x1.intersection(&zc[i]);
    let last = zc[k + 1].clone();

    for i in 1..=k {
        let w = first_failure(&patterns[i - 1].x0.intersection(&patterns[i - 1].x1), &[f(2 * i - 1), f(2 * i)], eq_all)?;
        log.require(format!("f_{} = f_{}", 2 * i - 1, 2 * i), format!("X_{i} ∩ Y_{i}"), w)?;
        for j in 1..i {
            let (xj, yj, zj) = (&patterns[j - 1].x0, &patterns[j - 1].x1, &patterns[j - 1].x2);
            let bound = yj.intersection(zj).intersection(&patterns[i - 2].x2);
            let region = format!("Y_{j} ∩ X_{i}{}", zname(i));
            log.require("empty", format!("X_{j} ∩ X_{i}{}", zname(i)), xj.meets(&xs(i)))?;
            log.require("empty", format!("X_{j} ∩ Y_{i}{}", zname(i)), xj.meets(&ys(i)))?;
            let yx = yj.intersection(&xs(i));
            log.require(format!("⊆ Y_{j} ∩ Z_{j} ∩ Z_{}", i - 1), region.clone(), yx.not_within(&bound))?;
            let w = first_failure(&yx, &[v, f(2 * j + 1), f(2 * j), f(2 * i - 1)], |a| {
                a[0] == a[1] && a[1] == a[2] && a[0] >= a[3] && a[3] == a[2]
            })?;
            log.require(format!("v = f_{} = f_{} and f_{} = f_{}", 2 * j + 1, 2 * j, 2 * i - 1, 2 * j), region, w)?;
            let yy = yj.intersection(&ys(i));
            let region = format!("Y_{j} ∩ Y_{i}{}", zname(i));
            log.require(format!("⊆ Y_{j} ∩ Z_{j} ∩ Z_{}", i - 1), region.clone(), yy.not_within(&bound))?;
            let w = first_failure(&yy, &[v, f(2 * j + 1), f(2 * j), f(2 * i + 1), f(2 * i)], |a| {
                a[0] == a[1] && a[1] == a[2] && a[0] >= a[3] && a[3] >= a[4] && a[2] == a[4]
            })?;
            log.require(format!("v = f_{} = f_{} and f_{} = f_{}", 2 * j + 1, 2 * j, 2 * j, 2 * i), region, w)?;
        }
    }
    for j in 1..=k {
        let (xj, yj, zj) = (&patterns[j - 1].x0, &patterns[j - 1].x1, &patterns[j - 1].x2);
        log.require("empty", format!("X_{j} ∩ Z_1 ∩ … ∩ Z_{k}"), xj.meets(&last))?;
        let yl = yj.intersection(&last);
        let region = format!("Y_{j} ∩ Z_1 ∩ … ∩ Z_{k}");
        log.require(format!("⊆ Y_{j} ∩ Z_{j}"), region.clone(), yl.not_within(&yj.intersection(zj)))?;
        let w = first_failure(&yl, &[v, f(n), f(2 * j)], |a| a[0] >= a[1] && a[0] == a[2] && a[1] == a[2])?;
        log.require(format!("v >= f_{n}, v = f_{} and f_{} = f_{n}", 2 * j, 2 * j), region, w)?;
    }

    let mut pieces: Vec<(String, ClosedSet, PLFunction)> = Vec::new();
    for i in 1..=k {
        pieces.push((format!("X_{i}{}", zname(i)), xs(i), f(2 * i - 1).clone()));
        pieces.push((format!("Y_{i}{}", zname(i)), ys(i), f(2 * i).clone()));
    }
    pieces.push((format!("Z_1 ∩ … ∩ Z_{k}"), last, f(n).clone()));
    for (name, set, g) in &pieces {
        let w = first_failure(set, &[u, g, v], ascending)?;
        log.require("u <= w <= v", name.clone(), w)?;
    }

    let glued: Vec<(ClosedSet, PLFunction)> = pieces.iter().map(|(_, s, g)| (s.clone(), g.clone())).collect();
    let w = glue(&glued).map_err(|e| e.in_stage(stage))?;
    let bad = first_failure(&ClosedSet::whole(w.domain()), &[u, &w, v], ascending)?;
    log.require("u <= w <= v", "X", bad)?;
    let bad = sign_profile(p, &w)?.first_violation(SignBound::Zero, None);
    log.require("p(w) = 0", "X", bad)?;
    Ok(FinalAssembly { w, pieces: pieces.into_iter().map(|(n, s, _)| (n, s)).collect(), log })
}

/// Membership of a cell: bit 0 for `X0`, bit 1 for `X1`, bit 2 for `X2`.
/// Listed in the order used for lexicographic tie-breaking.
const LABELS: [u8; 5] = [0b001, 0b011, 0b010, 0b110, 0b100];

struct PatternProblem {
    space: Arc<Complex1D>,
    a: ClosedSet,
    b: ClosedSet,
    u: OpenSet,
    v: OpenSet,
}

impl PatternProblem {
    fn allowed(&self, c: Cell, label: u8) -> bool {
        (!self.a.contains(c) || label & 0b001 != 0)
            && (!self.b.contains(c) || label & 0b100 != 0)
            && (label != 0b011 || self.v.contains(c))
            && (label != 0b110 || self.u.contains(c))
    }

    fn vertex_labels(&self, x: usize) -> Vec<usize> {
        (0..LABELS.len()).filter(|&l| self.allowed(Cell::Vertex(x), LABELS[l])).collect()
    }

    /// The first label an edge can take given its endpoint labels.
    fn edge_label(&self, e: usize, la: usize, lb: usize) -> Option<usize> {
        let common = LABELS[la] & LABELS[lb];
        (0..LABELS.len()).find(|&l| LABELS[l] & !common == 0 && self.allowed(Cell::Edge(e), LABELS[l]))
    }
}

/// Searches for a pattern with `A ⊆ X0`, `B ⊆ X2`, `X0 ∩ X1 ⊆ V`,
/// `X0 ∩ X2 = ∅`, `X1 ∩ X2 ⊆ U` covering `domain`. Returns the
/// lexicographically first pattern in canonical cell order, or `None` when no
/// pattern exists on this complex. Path components are decided by dynamic
/// programming; other components by backtracking, limited to `cap` cells.
pub fn search_pattern(
    a: &ClosedSet,
    b: &ClosedSet,
    u: &OpenSet,
    v: &OpenSet,
    domain: &Arc<Complex1D>,
    cap: usize,
) -> Result<Option<CrochetPattern>> {
    let space = common_refinement(&[domain, a.domain(), b.domain(), u.domain(), v.domain()])?;
    let pb = PatternProblem { a: a.relocate(&space), b: b.relocate(&space), u: u.relocate(&space), v: v.relocate(&space), space };
    let d = &pb.space;
    let mut label = vec![usize::MAX; d.num_vertices()];
    for comp in d.components() {
        let found = match d.path_order(&comp) {
            Some((order, edges)) => path_labels(&pb, &order, &edges),
            None => {
                let cells = comp.len() + comp.iter().map(|&x| d.incident(x).len()).sum::<usize>() / 2;
                if cells > cap {
                    return Err(Error::Size {
                        what: "pattern search cell count".into(),
                        got: cells,
                        cap,
                        hint: "; raise --cell-cap".into(),
                    });
                }
                let mut out = vec![usize::MAX; d.num_vertices()];
                backtrack_labels(&pb, &comp, 0, &mut out).then(|| comp.iter().map(|&x| (x, out[x])).collect())
            }
        };
        match found {
            Some(assign) => {
                for (x, l) in assign {
                    label[x] = l;
                }
            }
            None => return Ok(None),
        }
    }
    let mut members: [Vec<Cell>; 3] = Default::default();
    let mut add = |c: Cell, bits: u8| {
        for (k, m) in members.iter_mut().enumerate() {
            if bits & (1 << k) != 0 {
                m.push(c);
            }
        }
    };
    for (x, &l) in label.iter().enumerate() {
        add(Cell::Vertex(x), LABELS[l]);
    }
    for e in 0..d.num_edges() {
        let edge = d.edge(e);
        let l = pb.edge_label(e, label[edge.a], label[edge.b]).expect("feasible edge");
        add(Cell::Edge(e), LABELS[l]);
    }
    let [m0, m1, m2] = members;
    Ok(Some(CrochetPattern {
        x0: ClosedSet::from_cells(d, m0),
        x1: ClosedSet::from_cells(d, m1),
        x2: ClosedSet::from_cells(d, m2),
    }))
}

fn path_labels(pb: &PatternProblem, order: &[usize], edges: &[usize]) -> Option<Vec<(usize, usize)>> {
    let m = order.len();
    let d = &pb.space;
    let step_ok = |k: usize, from: usize, to: usize| {
        let e = edges[k];
        let (la, lb) = if d.edge(e).a == order[k] { (from, to) } else { (to, from) };
        pb.edge_label(e, la, lb).is_some()
    };
    let cands: Vec<Vec<usize>> = order.iter().map(|&x| pb.vertex_labels(x)).collect();
    let mut back: Vec<Vec<bool>> = vec![Vec::new(); m];
    back[m - 1] = vec![true; LABELS.len()];
    for k in (0..m - 1).rev() {
        back[k] = (0..LABELS.len())
            .map(|l| cands[k].contains(&l) && cands[k + 1].iter().any(|&t| back[k + 1][t] && step_ok(k, l, t)))
            .collect();
    }
    let mut cur = *cands[0].iter().find(|&&l| back[0][l])?;
    let mut out = vec![(order[0], cur)];
    for k in 0..m - 1 {
        cur = *cands[k + 1].iter().find(|&&t| back[k + 1][t] && step_ok(k, cur, t)).expect("backward feasibility");
        out.push((order[k + 1], cur));
    }
    Some(out)
}

fn backtrack_labels(pb: &PatternProblem, comp: &[usize], k: usize, out: &mut [usize]) -> bool {
    let Some(&x) = comp.get(k) else {
        return true;
    };
    let d = &pb.space;
    for l in pb.vertex_labels(x) {
        let ok = d.incident(x).iter().all(|&e| {
            let y = d.other_end(e, x);
            if out[y] == usize::MAX {
                return true;
            }
            let (la, lb) = if d.edge(e).a == x { (l, out[y]) } else { (out[y], l) };
            pb.edge_label(e, la, lb).is_some()
        });
        if ok {
            out[x] = l;
            if backtrack_labels(pb, comp, k + 1, out) {
                return true;
            }
            out[x] = usize::MAX;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::make_interval;
    use crate::rat;

    fn unit() -> Arc<Complex1D> {
        make_interval(&[rat(0, 1), rat(1, 1)]).unwrap()
    }

    fn c(k: &Arc<Complex1D>, n: i64, d: i64) -> PLFunction {
        PLFunction::constant(k, rat(n, d))
    }

    #[test]
    fn degenerate_pattern_passes() {
        let k = unit();
        let pat = CrochetPattern { x0: ClosedSet::whole(&k), x1: ClosedSet::empty(&k), x2: ClosedSet::empty(&k) };
        let v = check_pattern(&pat, &ClosedSet::whole(&k), &ClosedSet::empty(&k), &OpenSet::empty(&k), &OpenSet::empty(&k));
        assert!(v.passed());
    }

    #[test]
    fn shared_vertex_breaks_disjointness() {
        let k = unit();
        let pat = CrochetPattern {
            x0: ClosedSet::from_cells(&k, [Cell::Vertex(0)]),
            x1: ClosedSet::from_cells(&k, [Cell::Edge(0)]),
            x2: ClosedSet::from_cells(&k, [Cell::Vertex(0)]),
        };
        let all = OpenSet::whole(&k);
        let v = check_pattern(&pat, &ClosedSet::empty(&k), &ClosedSet::empty(&k), &all, &all);
        assert_eq!(v.violations, vec![Violation { clause: PatternClause::X0X2Disjoint, witness: Site::Vertex("0".into()) }]);
    }

    #[test]
    fn constant_fixture_scaffold_and_assembly() {
        let k = unit();
        let p = FactoredPoly::new(vec![c(&k, 0, 1), c(&k, 1, 2), c(&k, 1, 1)]).unwrap();
        let (u, v) = (c(&k, 0, 1), c(&k, 1, 1));
        let sc = build_scaffold(&p, &u, &v).unwrap();
        assert_eq!(sc.stages.len(), 1);
        assert!(sc.stages[0].a.is_empty() && sc.stages[0].b.is_empty());
        assert!(check_fspace_hypothesis(&sc.stages[0]).passed());
        let pat = CrochetPattern { x0: ClosedSet::whole(&k), x1: ClosedSet::empty(&k), x2: ClosedSet::empty(&k) };
        let fin = assemble_final(&p, &u, &v, &sc.stages, &[pat]).unwrap();
        assert!(fin.w.same_function(&c(&k, 0, 1)));
        assert!(fin.log.checks.iter().all(|c| c.passed));
    }

    #[test]
    fn scaffold_needs_strict_order() {
        let k = unit();
        let p = FactoredPoly::new(vec![c(&k, 0, 1), c(&k, 1, 2), c(&k, 1, 1)]).unwrap();
        let u = c(&k, 0, 1);
        let err = build_scaffold(&p, &u, &u).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref clause, .. } if clause.starts_with("X = cl{u < v}")));
    }

    #[test]
    fn intersecting_x_and_z_rejected() {
        let k = unit();
        let p = FactoredPoly::new(vec![c(&k, 0, 1), c(&k, 1, 2), c(&k, 1, 1)]).unwrap();
        let (u, v) = (c(&k, 0, 1), c(&k, 1, 1));
        let sc = build_scaffold(&p, &u, &v).unwrap();
        let pat = CrochetPattern { x0: ClosedSet::whole(&k), x1: ClosedSet::empty(&k), x2: ClosedSet::whole(&k) };
        let err = assemble_final(&p, &u, &v, &sc.stages, &[pat]).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref clause, .. } if clause.starts_with("X_1 ∩ Z_1 = ∅")));
    }

    #[test]
    fn search_trivial_and_impossible() {
        let k = unit();
        let e = ClosedSet::empty(&k);
        let none = OpenSet::empty(&k);
        let pat = search_pattern(&e, &e, &none, &none, &k, DEFAULT_PATTERN_CAP).unwrap().unwrap();
        assert_eq!(pat.x0, ClosedSet::whole(&k));
        assert!(pat.x1.is_empty() && pat.x2.is_empty());

        let a = ClosedSet::from_cells(&k, [Cell::Vertex(0)]);
        let b = ClosedSet::from_cells(&k, [Cell::Vertex(1)]);
        assert!(search_pattern(&a, &b, &none, &none, &k, DEFAULT_PATTERN_CAP).unwrap().is_none());
    }
}
