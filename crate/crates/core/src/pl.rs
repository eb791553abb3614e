//! Continuous functions that are linear on every edge of a complex.

use std::cmp::Ordering;
use std::sync::Arc;

use num::{Signed, Zero};

use crate::complex::{common_refinement, Cell, Complex1D, Point};
use crate::error::{Error, Result};
use crate::Rational;

/// A piecewise-linear function, stored as one exact value per vertex.
#[derive(Clone, Debug)]
pub struct PLFunction {
    domain: Arc<Complex1D>,
    values: Vec<Rational>,
}

impl PartialEq for PLFunction {
    /// Structural equality: same complex and same vertex values.
    /// Use [`PLFunction::same_function`] to compare across refinements.
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
            && self.values == other.values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Min,
    Max,
}

impl PLFunction {
    pub fn new(domain: Arc<Complex1D>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != domain.num_vertices() {
            return Err(Error::InvalidParameter(format!(
                "expected {} vertex values, got {}",
                domain.num_vertices(),
                values.len()
            )));
        }
        Ok(Self { domain, values })
    }

    pub fn constant(domain: &Arc<Complex1D>, c: Rational) -> Self {
        Self { domain: Arc::clone(domain), values: vec![c; domain.num_vertices()] }
    }

    /// Samples `f` at each vertex coordinate label.
    pub fn from_labels(domain: &Arc<Complex1D>, f: impl Fn(&Rational) -> Rational) -> Self {
        let values = (0..domain.num_vertices()).map(|v| f(&domain.label(v))).collect();
        Self { domain: Arc::clone(domain), values }
    }

    pub fn domain(&self) -> &Arc<Complex1D> {
        &self.domain
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    /// Value at a root position, or `None` outside the domain.
    pub fn eval(&self, p: &Point) -> Option<Rational> {
        match self.domain.locate(p)? {
            Cell::Vertex(v) => Some(self.values[v].clone()),
            Cell::Edge(e) => {
                let edge = self.domain.edge(e);
                let t = match p {
                    Point::Inner { t, .. } => t,
                    Point::Vertex(_) => unreachable!("root vertices are never inside an edge"),
                };
                let s = (t - &edge.t0) / (&edge.t1 - &edge.t0);
                let (fa, fb) = (&self.values[edge.a], &self.values[edge.b]);
                Some(fa + (fb - fa) * s)
            }
        }
    }

    /// Re-expresses the function on `target`, which must lie inside the
    /// domain and refine it there.
    pub fn relocate(&self, target: &Arc<Complex1D>) -> Result<Self> {
        if Arc::ptr_eq(target, &self.domain) {
            return Ok(self.clone());
        }
        if !target.refines_within(&self.domain) {
            return Err(Error::DomainMismatch(
                "target complex is coarser than the function's domain".into(),
            ));
        }
        let values = target
            .points()
            .iter()
            .map(|p| {
                self.eval(p).ok_or_else(|| {
                    Error::DomainMismatch("target complex leaves the function's domain".into())
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { domain: Arc::clone(target), values })
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self { domain: Arc::clone(&self.domain), values: self.values.iter().map(f).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        let [a, b] = align_pair(self, other)?;
        let values = a.values.iter().zip(&b.values).map(|(x, y)| f(x, y)).collect();
        Ok(Self { domain: a.domain, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    /// Equality as functions, compared on a common refinement.
    pub fn same_function(&self, other: &Self) -> bool {
        if !self.domain.same_space(&other.domain) {
            return false;
        }
        match align_pair(self, other) {
            Ok([a, b]) => a.values == b.values,
            Err(_) => false,
        }
    }

    /// Value at the midpoint of edge `e`.
    pub fn mid(&self, e: usize) -> Rational {
        let edge = self.domain.edge(e);
        (&self.values[edge.a] + &self.values[edge.b]) / Rational::from_integer(2.into())
    }
}

fn align_pair(a: &PLFunction, b: &PLFunction) -> Result<[PLFunction; 2]> {
    let v = align(&[a.clone(), b.clone()])?;
    let mut it = v.into_iter();
    Ok([it.next().unwrap(), it.next().unwrap()])
}

/// Relocates all functions onto their common refinement.
pub fn align(functions: &[PLFunction]) -> Result<Vec<PLFunction>> {
    if functions.is_empty() {
        return Ok(Vec::new());
    }
    let domains: Vec<&Arc<Complex1D>> = functions.iter().map(|f| &f.domain).collect();
    let common = common_refinement(&domains)?;
    functions.iter().map(|f| f.relocate(&common)).collect()
}

/// Refines `domain` at every crossing point of every pair of functions and
/// returns the functions re-expressed there. On each open edge of the result
/// any two inputs are either identical or nowhere equal.
pub fn refine(domain: &Arc<Complex1D>, functions: &[PLFunction]) -> Result<(Arc<Complex1D>, Vec<PLFunction>)> {
    let mut all = vec![PLFunction::constant(domain, Rational::zero())];
    all.extend(functions.iter().cloned());
    let aligned = align(&all)?;
    let base = Arc::clone(aligned[0].domain());
    let fns = &aligned[1..];
    let mut cuts = Vec::new();
    for e in 0..base.num_edges() {
        let edge = base.edge(e);
        for i in 0..fns.len() {
            for j in i + 1..fns.len() {
                if let Some(s) = crossing(fns[i].value(edge.a), fns[i].value(edge.b), fns[j].value(edge.a), fns[j].value(edge.b)) {
                    cuts.push(base.point_along(e, &s));
                }
            }
        }
    }
    if cuts.is_empty() {
        return Ok((base, fns.to_vec()));
    }
    let refined = Arc::new(base.with_points(cuts.iter())?);
    let out = fns.iter().map(|f| f.relocate(&refined)).collect::<Result<_>>()?;
    Ok((refined, out))
}

/// Refines so that each listed function has constant sign on every open edge.
pub fn refine_at_zeros(functions: &[PLFunction]) -> Result<(Arc<Complex1D>, Vec<PLFunction>)> {
    let aligned = align(functions)?;
    let domain = Arc::clone(aligned[0].domain());
    let mut cuts = Vec::new();
    for e in 0..domain.num_edges() {
        let edge = domain.edge(e);
        let zero = Rational::zero();
        for f in &aligned {
            if let Some(s) = crossing(f.value(edge.a), f.value(edge.b), &zero, &zero) {
                cuts.push(domain.point_along(e, &s));
            }
        }
    }
    if cuts.is_empty() {
        return Ok((domain, aligned));
    }
    let refined = Arc::new(domain.with_points(cuts.iter())?);
    let out = aligned.iter().map(|f| f.relocate(&refined)).collect::<Result<_>>()?;
    Ok((refined, out))
}

/// Edge parameter in (0,1) where two linear functions strictly cross.
fn crossing(fa: &Rational, fb: &Rational, ga: &Rational, gb: &Rational) -> Option<Rational> {
    let d0 = fa - ga;
    let d1 = fb - gb;
    if d0.is_zero() || d1.is_zero() || d0.signum() == d1.signum() {
        return None;
    }
    Some(&d0 / (&d0 - &d1))
}

/// Pointwise minimum or maximum, on the refinement at the crossings of `f` and `g`.
pub fn lattice(op: LatticeOp, f: &PLFunction, g: &PLFunction) -> Result<PLFunction> {
    let (_, fs) = refine(f.domain(), &[f.clone(), g.clone()])?;
    fs[0].zip_with(&fs[1], |x, y| match (op, x.cmp(y)) {
        (LatticeOp::Min, Ordering::Greater) | (LatticeOp::Max, Ordering::Less) => y.clone(),
        _ => x.clone(),
    })
}

pub fn min(f: &PLFunction, g: &PLFunction) -> Result<PLFunction> {
    lattice(LatticeOp::Min, f, g)
}

pub fn max(f: &PLFunction, g: &PLFunction) -> Result<PLFunction> {
    lattice(LatticeOp::Max, f, g)
}
