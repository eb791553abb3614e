//! Closed covers by the position of `u` against `v`, gluing of partial
//! solutions, and the two degree reductions.

use std::sync::Arc;

use crate::complex::{common_refinement, Cell, Complex1D};
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::poly::{sign_profile, FactoredPoly, SignBound};
use crate::report::CheckLog;
use crate::sets::{closure_of_pred, first_failure, ClosedSet, Relation};

/// `P = cl{u < v}`, `Q = {u = v}`, `R = cl{u > v}`.
#[derive(Clone, Debug)]
pub struct PqrCover {
    pub p: ClosedSet,
    pub q: ClosedSet,
    pub r: ClosedSet,
}

pub fn split_pqr(u: &PLFunction, v: &PLFunction) -> Result<PqrCover> {
    let g = v.sub(u)?;
    Ok(PqrCover {
        p: closure_of_pred(&g, Relation::Greater),
        q: closure_of_pred(&g, Relation::Equal),
        r: closure_of_pred(&g, Relation::Less),
    })
}

/// Combines functions defined on closed pieces. Each function must be defined
/// on its whole piece; pieces must cover the space and agree on overlaps.
pub fn glue(pieces: &[(ClosedSet, PLFunction)]) -> Result<PLFunction> {
    if pieces.is_empty() {
        return Err(Error::InvalidParameter("nothing to glue".into()));
    }
    let set_domains: Vec<&Arc<Complex1D>> = pieces.iter().map(|(s, _)| s.domain()).collect();
    let base = common_refinement(&set_domains)?;
    let extra: Vec<_> = pieces
        .iter()
        .flat_map(|(_, f)| f.domain().points().iter())
        .filter(|p| base.vertex_of(p).is_none())
        .cloned()
        .collect();
    let ambient = if extra.is_empty() { base } else { Arc::new(base.with_points(extra.iter())?) };
    let sets: Vec<ClosedSet> = pieces.iter().map(|(s, _)| s.relocate(&ambient)).collect();

    let mut values = vec![None; ambient.num_vertices()];
    for (k, (set, (_, f))) in sets.iter().zip(pieces).enumerate() {
        for cell in ambient.cells() {
            if !set.contains(cell) {
                continue;
            }
            let at = match cell {
                Cell::Vertex(v) => ambient.point(v).clone(),
                Cell::Edge(e) => ambient.midpoint(e),
            };
            let val = f.eval(&at).ok_or_else(|| {
                Error::DomainMismatch(format!("piece {k} is not defined at {}", ambient.site(cell)))
            })?;
            if let Cell::Vertex(v) = cell {
                match &values[v] {
                    None => values[v] = Some(val),
                    Some(prev) if *prev == val => {}
                    Some(prev) => {
                        return Err(Error::Conflict {
                            witness: ambient.site(cell),
                            detail: format!("piece {k} gives {val}, an earlier piece gives {prev}"),
                        })
                    }
                }
            }
        }
    }
    let refs: Vec<&ClosedSet> = sets.iter().collect();
    if let Some(site) = ClosedSet::uncovered(&ambient, &refs) {
        return Err(Error::hypothesis("glue", "pieces cover the space", site));
    }
    let values = values.into_iter().map(|x| x.expect("covered vertex")).collect();
    PLFunction::new(ambient, values)
}

/// Restricts functions to a closed set, viewed as a space of its own.
pub fn restrict_to(region: &ClosedSet, functions: &[PLFunction]) -> Result<(Arc<Complex1D>, Vec<PLFunction>)> {
    let mut domains: Vec<&Arc<Complex1D>> = functions.iter().map(|f| f.domain()).collect();
    domains.push(region.domain());
    let common = common_refinement(&domains)?;
    let space = region.relocate(&common).subcomplex();
    let fs = functions.iter().map(|f| f.relocate(&common)?.relocate(&space)).collect::<Result<_>>()?;
    Ok((space, fs))
}

/// A subproblem `q(lower) <= 0 <= q(upper)` posed on a closed region.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub region: ClosedSet,
    pub poly: FactoredPoly,
    pub lower: PLFunction,
    pub upper: PLFunction,
}

impl Reduced {
    /// The subproblem on the region as a space, or `None` for an empty region.
    pub fn restricted(&self) -> Result<Option<(FactoredPoly, PLFunction, PLFunction)>> {
        if self.region.is_empty() {
            return Ok(None);
        }
        let mut fs = self.poly.roots().to_vec();
        fs.push(self.lower.clone());
        fs.push(self.upper.clone());
        let (_, mut fs) = restrict_to(&self.region, &fs)?;
        let upper = fs.pop().expect("upper");
        let lower = fs.pop().expect("lower");
        Ok(Some((FactoredPoly::new(fs)?, lower, upper)))
    }
}

#[derive(Clone, Debug)]
pub struct EvenReduction {
    /// `q = (t - f_2)...(t - f_n)` on `P`.
    pub on_p: Reduced,
    /// `r = (t - f_1)...(t - f_{n-1})` on `R`, with `u` and `v` swapped.
    pub on_r: Reduced,
    pub log: CheckLog,
}

#[derive(Clone, Debug)]
pub struct LeReduction {
    /// `q = (t - f_2)...(t - f_{n-1})` on `R`, with `u` and `v` swapped.
    /// `None` when the region is empty.
    pub on_r: Option<Reduced>,
    pub log: CheckLog,
}

fn require_sorted(p: &FactoredPoly, stage: &str) -> Result<()> {
    if !p.is_sorted() {
        return Err(Error::InvalidParameter(format!("{stage}: roots must be sorted")));
    }
    Ok(())
}

pub(crate) fn require_signs(log: &mut CheckLog, p: &FactoredPoly, u: &PLFunction, v: &PLFunction, name: &str, region: Option<(&ClosedSet, &str)>) -> Result<()> {
    let (set, label) = match region {
        Some((s, l)) => (Some(s), l),
        None => (None, "X"),
    };
    let w = sign_profile(p, u)?.first_violation(SignBound::NonPositive, set);
    log.require(format!("{name}(u) <= 0"), label, w)?;
    let w = sign_profile(p, v)?.first_violation(SignBound::NonNegative, set);
    log.require(format!("{name}(v) >= 0"), label, w)
}

/// Degree reduction for even `n`: `q(u) <= 0 <= q(v)` on `P` and
/// `r(u) >= 0 >= r(v)` on `R`, each re-verified.
pub fn reduce_even(p: &FactoredPoly, u: &PLFunction, v: &PLFunction, cover: &PqrCover) -> Result<EvenReduction> {
    let stage = "reduce-even";
    let n = p.degree();
    if n % 2 != 0 || n < 2 {
        return Err(Error::InvalidParameter(format!("{stage}: degree {n} is not even")));
    }
    require_sorted(p, stage)?;
    let mut log = CheckLog::new(stage);
    require_signs(&mut log, p, u, v, "p", None)?;

    let f2 = p.root(2);
    let w = first_failure(&cover.p, &[v, f2], |x| x[0] >= x[1])?;
    log.require("v >= f_2", "P", w)?;
    let q = p.factor_range(2, n)?;
    let w = sign_profile(&q, u)?.first_violation(SignBound::NonPositive, Some(&cover.p));
    log.require("q(u) <= 0", "P", w)?;
    let w = sign_profile(&q, v)?.first_violation(SignBound::NonNegative, Some(&cover.p));
    log.require("q(v) >= 0", "P", w)?;

    let fm = p.root(n - 1);
    let w = first_failure(&cover.r, &[v, fm], |x| x[0] <= x[1])?;
    log.require("v <= f_{n-1}", "R", w)?;
    let r = p.factor_range(1, n - 1)?;
    let w = sign_profile(&r, u)?.first_violation(SignBound::NonNegative, Some(&cover.r));
    log.require("r(u) >= 0", "R", w)?;
    let w = sign_profile(&r, v)?.first_violation(SignBound::NonPositive, Some(&cover.r));
    log.require("r(v) <= 0", "R", w)?;

    Ok(EvenReduction {
        on_p: Reduced { region: cover.p.clone(), poly: q, lower: u.clone(), upper: v.clone() },
        on_r: Reduced { region: cover.r.clone(), poly: r, lower: v.clone(), upper: u.clone() },
        log,
    })
}

/// Reduction of the region `R` for odd `n >= 3` to `q(u) >= 0 >= q(v)`.
pub fn reduce_to_le(p: &FactoredPoly, u: &PLFunction, v: &PLFunction, cover: &PqrCover) -> Result<LeReduction> {
    let stage = "reduce-to-le";
    let n = p.degree();
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidParameter(format!("{stage}: degree {n} is not odd and at least 3")));
    }
    require_sorted(p, stage)?;
    let mut log = CheckLog::new(stage);
    require_signs(&mut log, p, u, v, "p", None)?;
    if cover.r.is_empty() {
        log.record("R is empty", "R", None);
        return Ok(LeReduction { on_r: None, log });
    }
    let w = first_failure(&cover.r, &[v, p.root(n - 1)], |x| x[0] <= x[1])?;
    log.require("v <= f_{n-1}", "R", w)?;
    let w = first_failure(&cover.r, &[u, p.root(2)], |x| x[0] >= x[1])?;
    log.require("u >= f_2", "R", w)?;
    let q = p.factor_range(2, n - 1)?;
    let w = sign_profile(&q, u)?.first_violation(SignBound::NonNegative, Some(&cover.r));
    log.require("q(u) >= 0", "R", w)?;
    let w = sign_profile(&q, v)?.first_violation(SignBound::NonPositive, Some(&cover.r));
    log.require("q(v) <= 0", "R", w)?;
    Ok(LeReduction {
        on_r: Some(Reduced { region: cover.r.clone(), poly: q, lower: v.clone(), upper: u.clone() }),
        log,
    })
}
