//! Completely factored polynomials `p(t) = (t - f_1)...(t - f_n)` with
//! piecewise-linear roots, their sign profiles, and root sorting.

use std::ops::Mul;
use std::sync::Arc;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, Complex1D, Site};
use crate::error::{Error, Result};
use crate::pl::{align, lattice, refine, refine_at_zeros, LatticeOp, PLFunction};
use crate::sets::ClosedSet;
use crate::Rational;

/// Largest root count accepted by [`sort_roots_lattice`] by default.
pub const DEFAULT_LATTICE_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct FactoredPoly {
    roots: Vec<PLFunction>,
    sorted: bool,
}

impl FactoredPoly {
    /// Roots are moved onto a common refinement.
    pub fn new(roots: Vec<PLFunction>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidParameter("a factored polynomial needs at least one root".into()));
        }
        let roots = align(&roots)?;
        let sorted = is_sorted(&roots);
        Ok(Self { roots, sorted })
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[PLFunction] {
        &self.roots
    }

    /// Root `f_i` with 1-based `i`.
    pub fn root(&self, i: usize) -> &PLFunction {
        &self.roots[i - 1]
    }

    pub fn domain(&self) -> &Arc<Complex1D> {
        self.roots[0].domain()
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    /// The polynomial whose roots are `f_lo..=f_hi` (1-based, inclusive).
    pub fn factor_range(&self, lo: usize, hi: usize) -> Result<Self> {
        if lo < 1 || hi > self.degree() || lo > hi {
            return Err(Error::InvalidParameter(format!(
                "root range {lo}..={hi} outside 1..={}",
                self.degree()
            )));
        }
        Ok(Self { roots: self.roots[lo - 1..hi].to_vec(), sorted: self.sorted })
    }

    /// Restricts every root to a closed subspace.
    pub fn restrict(&self, space: &Arc<Complex1D>) -> Result<Self> {
        let roots = self.roots.iter().map(|f| f.relocate(space)).collect::<Result<Vec<_>>>()?;
        Ok(Self { sorted: self.sorted || is_sorted(&roots), roots })
    }

    /// `p(t)` for a rational `t` at vertex `v`.
    pub fn eval_at_vertex(&self, v: usize, t: &Rational) -> Rational {
        self.roots.iter().fold(Rational::from_integer(1.into()), |acc, f| acc * (t - f.value(v)))
    }
}

fn is_sorted(roots: &[PLFunction]) -> bool {
    let n = roots[0].domain().num_vertices();
    (0..n).all(|v| roots.windows(2).all(|w| w[0].value(v) <= w[1].value(v)))
}

/// Sorts the roots with the lattice formula `g_i = min over |F| = i of max over j in F of f_j`.
pub fn sort_roots_lattice(p: &FactoredPoly) -> Result<FactoredPoly> {
    sort_roots_lattice_capped(p, DEFAULT_LATTICE_CAP)
}

pub fn sort_roots_lattice_capped(p: &FactoredPoly, cap: usize) -> Result<FactoredPoly> {
    let n = p.degree();
    if n > cap {
        return Err(Error::Size {
            what: "lattice sort root count".into(),
            got: n,
            cap,
            hint: "; use sort_roots_pointwise instead".into(),
        });
    }
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut meet: Option<PLFunction> = None;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != i {
                continue;
            }
            let mut join: Option<PLFunction> = None;
            for j in (0..n).filter(|j| mask & (1 << j) != 0) {
                join = Some(match join {
                    None => p.roots[j].clone(),
                    Some(acc) => lattice(LatticeOp::Max, &acc, &p.roots[j])?,
                });
            }
            let join = join.expect("non-empty subset");
            meet = Some(match meet {
                None => join,
                Some(acc) => lattice(LatticeOp::Min, &acc, &join)?,
            });
        }
        out.push(meet.expect("at least one subset"));
    }
    let roots = align(&out)?;
    Ok(FactoredPoly { roots, sorted: true })
}

/// Sorts the roots vertex by vertex on the refinement at all pairwise
/// crossings, where the order of the roots is constant on each open edge.
pub fn sort_roots_pointwise(p: &FactoredPoly) -> Result<FactoredPoly> {
    let (domain, roots) = refine(p.domain(), &p.roots)?;
    let n = roots.len();
    let mut columns: Vec<Vec<Rational>> = vec![Vec::with_capacity(domain.num_vertices()); n];
    for v in 0..domain.num_vertices() {
        let mut vals: Vec<Rational> = roots.iter().map(|f| f.value(v).clone()).collect();
        vals.sort();
        for (col, x) in columns.iter_mut().zip(vals) {
            col.push(x);
        }
    }
    let roots = columns
        .into_iter()
        .map(|vals| PLFunction::new(Arc::clone(&domain), vals))
        .collect::<Result<_>>()?;
    Ok(FactoredPoly { roots, sorted: true })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: &Rational) -> Self {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }
}

/// Which sign a profile is required to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignBound {
    NonPositive,
    NonNegative,
    Zero,
}

impl SignBound {
    fn admits(self, s: Sign) -> bool {
        match self {
            SignBound::NonPositive => s != Sign::Pos,
            SignBound::NonNegative => s != Sign::Neg,
            SignBound::Zero => s == Sign::Zero,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            SignBound::NonPositive => "<= 0",
            SignBound::NonNegative => ">= 0",
            SignBound::Zero => "= 0",
        }
    }
}

/// The sign of `p(u)` on every vertex and open edge of a refinement on which
/// each factor `u - f_i` has constant sign per open edge.
#[derive(Clone, Debug)]
pub struct SignProfile {
    pub domain: Arc<Complex1D>,
    pub vertex: Vec<Sign>,
    pub edge: Vec<Sign>,
}

impl SignProfile {
    /// First cell (of `region`, or of the whole domain) whose sign violates
    /// `bound`.
    pub fn first_violation(&self, bound: SignBound, region: Option<&ClosedSet>) -> Option<Site> {
        let region = region.map(|r| {
            let common = crate::complex::common_refinement(&[&self.domain, r.domain()])
                .expect("region and profile on unrelated spaces");
            (common, r)
        });
        match region {
            None => self
                .domain
                .cells()
                .into_iter()
                .find(|&c| !bound.admits(self.sign(c)))
                .map(|c| self.domain.site(c)),
            Some((common, r)) => {
                // Each cell of the common refinement sits inside one cell of
                // the profile's domain, whose sign it inherits.
                let r = r.relocate(&common);
                common
                    .cells()
                    .into_iter()
                    .filter(|&c| r.contains(c))
                    .find(|&c| {
                        let p = match c {
                            Cell::Vertex(v) => common.point(v).clone(),
                            Cell::Edge(e) => common.midpoint(e),
                        };
                        let own = self.domain.locate(&p).expect("region inside profile domain");
                        !bound.admits(self.sign(own))
                    })
                    .map(|c| common.site(c))
            }
        }
    }

    pub fn sign(&self, c: Cell) -> Sign {
        match c {
            Cell::Vertex(v) => self.vertex[v],
            Cell::Edge(e) => self.edge[e],
        }
    }
}

/// Sign profile of `p(u)`, built from the signs of the factors `u - f_i`
/// without ever forming the piecewise polynomial `p(u)`.
pub fn sign_profile(p: &FactoredPoly, u: &PLFunction) -> Result<SignProfile> {
    let diffs = p.roots.iter().map(|f| u.sub(f)).collect::<Result<Vec<_>>>()?;
    let (domain, diffs) = refine_at_zeros(&diffs)?;
    let vertex = (0..domain.num_vertices())
        .map(|v| diffs.iter().fold(Sign::Pos, |acc, d| acc * Sign::of(d.value(v))))
        .collect();
    let edge = (0..domain.num_edges())
        .map(|e| diffs.iter().fold(Sign::Pos, |acc, d| acc * Sign::of(&d.mid(e))))
        .collect();
    Ok(SignProfile { domain, vertex, edge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::make_interval;
    use crate::rat;

    fn unit() -> Arc<Complex1D> {
        make_interval(&[rat(0, 1), rat(1, 1)]).unwrap()
    }

    fn consts(k: &Arc<Complex1D>, cs: &[(i64, i64)]) -> FactoredPoly {
        FactoredPoly::new(cs.iter().map(|&(n, d)| PLFunction::constant(k, rat(n, d))).collect()).unwrap()
    }

    #[test]
    fn lattice_sort_constants() {
        let k = unit();
        let p = consts(&k, &[(3, 1), (1, 1), (2, 1)]);
        assert!(!p.is_sorted());
        let g = sort_roots_lattice(&p).unwrap();
        let got: Vec<_> = g.roots().iter().map(|f| f.value(0).clone()).collect();
        assert_eq!(got, vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
        assert!(g.is_sorted());
    }

    #[test]
    fn lattice_sort_crossing_pair() {
        let k = unit();
        let f = PLFunction::from_labels(&k, |x| x.clone());
        let g = PLFunction::from_labels(&k, |x| rat(1, 1) - x);
        let s = sort_roots_lattice(&FactoredPoly::new(vec![f, g]).unwrap()).unwrap();
        assert_eq!(s.domain().labels(), vec![rat(0, 1), rat(1, 2), rat(1, 1)]);
        assert_eq!(s.root(1).values(), &[rat(0, 1), rat(1, 2), rat(0, 1)]);
        assert_eq!(s.root(2).values(), &[rat(1, 1), rat(1, 2), rat(1, 1)]);
        let pw = sort_roots_pointwise(&FactoredPoly::new(s.roots().to_vec()).unwrap()).unwrap();
        assert!(pw.root(1).same_function(s.root(1)));
    }

    #[test]
    fn single_root_and_duplicates() {
        let k = unit();
        let f = PLFunction::from_labels(&k, |x| x.clone());
        let one = FactoredPoly::new(vec![f.clone()]).unwrap();
        assert!(sort_roots_lattice(&one).unwrap().root(1).same_function(&f));
        let dup = sort_roots_pointwise(&FactoredPoly::new(vec![f.clone(), f.clone()]).unwrap()).unwrap();
        assert!(dup.root(1).same_function(&f) && dup.root(2).same_function(&f));
    }

    #[test]
    fn lattice_cap() {
        let k = unit();
        let p = consts(&k, &[(1, 1), (2, 1), (3, 1)]);
        assert!(matches!(sort_roots_lattice_capped(&p, 2), Err(Error::Size { .. })));
    }

    #[test]
    fn profile_of_midpoint() {
        let k = unit();
        let p = consts(&k, &[(0, 1), (1, 1)]);
        let u = PLFunction::constant(&k, rat(1, 2));
        let prof = sign_profile(&p, &u).unwrap();
        assert!(prof.vertex.iter().chain(&prof.edge).all(|&s| s == Sign::Neg));
        let at_root = sign_profile(&p, p.root(1)).unwrap();
        assert!(at_root.first_violation(SignBound::Zero, None).is_none());
    }

    #[test]
    fn profile_refines_at_factor_zeros() {
        let k = unit();
        let p = consts(&k, &[(1, 2)]);
        let u = PLFunction::from_labels(&k, |x| x.clone());
        let prof = sign_profile(&p, &u).unwrap();
        assert_eq!(prof.domain.num_vertices(), 3);
        assert_eq!(prof.edge, vec![Sign::Neg, Sign::Pos]);
        assert_eq!(prof.first_violation(SignBound::NonPositive, None), Some(Site::Vertex("1".into())));
    }
}
