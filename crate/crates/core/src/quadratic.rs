//! Monic quadratics `t² + 2ft + g`: exact solving when factored, certified
//! approximate factoring by completing the square otherwise.

use std::sync::Arc;

use num::{BigInt, Signed, Zero};

use crate::complex::{Cell, Complex1D, Point};
use crate::error::{Error, Result};
use crate::pl::{align, PLFunction};
use crate::poly::{sign_profile, FactoredPoly, SignBound};
use crate::region::{glue, require_signs, split_pqr, PqrCover};
use crate::report::CheckLog;
use crate::selection::verify_selection;
use crate::sets::{first_failure, ClosedSet};
use crate::{rat, Rational};

/// Default tolerance of [`complete_square`].
pub fn default_tolerance() -> Rational {
    rat(1, 1000)
}

/// Most sub-edges [`complete_square`] will create.
pub const MAX_SQRT_SEGMENTS: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct QuadSolution {
    pub w: PLFunction,
    pub cover: PqrCover,
    pub log: CheckLog,
}

/// Root of `(t - f1)(t - f2)` between `u` and `v`: `f2` on `P`, `u` on `Q`,
/// `f1` on `R`.
pub fn solve_factored_quadratic(f1: &PLFunction, f2: &PLFunction, u: &PLFunction, v: &PLFunction) -> Result<QuadSolution> {
    let fs = align(&[f1.clone(), f2.clone(), u.clone(), v.clone()])?;
    let [f1, f2, u, v] = [&fs[0], &fs[1], &fs[2], &fs[3]];
    let mut log = CheckLog::new("quadratic");
    let whole = ClosedSet::whole(f1.domain());
    log.require("f_1 <= f_2", "X", first_failure(&whole, &[f1, f2], |a| a[0] <= a[1])?)?;
    let p = FactoredPoly::new(vec![f1.clone(), f2.clone()])?;
    require_signs(&mut log, &p, u, v, "p", None)?;
    let cover = split_pqr(u, v)?;
    let asc = |a: &[&Rational]| a.windows(2).all(|w| w[0] <= w[1]);
    log.require("u <= f_2 <= v", "P", first_failure(&cover.p, &[u, f2, v], asc)?)?;
    log.require("v <= f_1 <= u", "R", first_failure(&cover.r, &[v, f1, u], asc)?)?;
    log.require("p(u) = 0", "Q", sign_profile(&p, u)?.first_violation(SignBound::Zero, Some(&cover.q)))?;
    let eq = |a: &[&Rational]| a.windows(2).all(|w| w[0] == w[1]);
    log.require("u = v = f_2", "P ∩ Q", first_failure(&cover.p.intersection(&cover.q), &[u, v, f2], eq)?)?;
    log.require("u = v = f_1", "Q ∩ R", first_failure(&cover.q.intersection(&cover.r), &[u, v, f1], eq)?)?;
    let w = glue(&[(cover.p.clone(), f2.clone()), (cover.q.clone(), u.clone()), (cover.r.clone(), f1.clone())])
        .map_err(|e| e.in_stage("quadratic"))?;
    let post = verify_selection(&p, u, v, &w)?;
    log.require("p(w) = 0 and u∧v <= w <= u∨v", "X", post.map(|(_, s)| s))?;
    Ok(QuadSolution { w, cover, log })
}

/// `t² + 2ft + g`.
#[derive(Clone, Debug)]
pub struct MonicQuadratic {
    pub f: PLFunction,
    pub g: PLFunction,
}

impl MonicQuadratic {
    pub fn new(f: &PLFunction, g: &PLFunction) -> Result<Self> {
        let fs = align(&[f.clone(), g.clone()])?;
        Ok(Self { f: fs[0].clone(), g: fs[1].clone() })
    }

    pub fn domain(&self) -> &Arc<Complex1D> {
        self.f.domain()
    }
}

/// Approximate roots `-f ∓ h` with `h ≈ sqrt(f² - g)` and a certified
/// uniform bound on `|h - sqrt(f² - g)|`.
#[derive(Clone, Debug)]
pub struct SquareRoots {
    pub f: PLFunction,
    pub g: PLFunction,
    pub h: PLFunction,
    pub f1: PLFunction,
    pub f2: PLFunction,
    pub bound: Rational,
}

/// `d(s) = (fa + s·df)² - (ga + s·dg)` on one edge, `s ∈ [0,1]`.
struct Discriminant {
    c2: Rational,
    c1: Rational,
    c0: Rational,
}

impl Discriminant {
    fn on_edge(q: &MonicQuadratic, e: usize) -> Self {
        let edge = q.domain().edge(e);
        let (fa, fb) = (q.f.value(edge.a), q.f.value(edge.b));
        let (ga, gb) = (q.g.value(edge.a), q.g.value(edge.b));
        let df = fb - fa;
        let dg = gb - ga;
        Self { c2: &df * &df, c1: rat(2, 1) * fa * &df - dg, c0: fa * fa - ga }
    }

    fn at(&self, s: &Rational) -> Rational {
        (&self.c2 * s + &self.c1) * s + &self.c0
    }

    /// Minimum and maximum over `[s0, s1]`; the function is convex.
    fn range(&self, s0: &Rational, s1: &Rational) -> (Rational, Rational) {
        let (d0, d1) = (self.at(s0), self.at(s1));
        let mut lo = d0.clone().min(d1.clone());
        if !self.c2.is_zero() {
            let crit = -&self.c1 / (rat(2, 1) * &self.c2);
            if crit > *s0 && crit < *s1 {
                lo = lo.min(self.at(&crit));
            }
        }
        (lo, d0.max(d1))
    }

    /// Bound on `|sqrt(D) - chord|` over `[s0, s1]` for the chord through the
    /// lower brackets at the ends. `sqrt(D)` is convex or concave on any
    /// segment where `D >= 0`, so the deviation is at most a quarter of the
    /// length times the change in slope. `None` when `D` vanishes at an end.
    fn chord_error(&self, s0: &Rational, s1: &Rational, scale: &BigInt) -> Option<Rational> {
        let two = rat(2, 1);
        let slope = |s: &Rational| -> Option<(Rational, Rational, Rational)> {
            let (lo, hi) = sqrt_bracket(&self.at(s), scale);
            if !lo.is_positive() {
                return None;
            }
            let dd = &two * &self.c2 * s + &self.c1;
            let (a, b) = (&dd / (&two * &hi), &dd / (&two * &lo));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            Some((a, b, hi - lo))
        };
        let (a0, b0, w0) = slope(s0)?;
        let (a1, b1, w1) = slope(s1)?;
        let turn = (&b1 - &a0).max(&b0 - &a1);
        Some((s1 - s0) * turn / rat(4, 1) + w0.max(w1))
    }
}

/// Rational bracket `lo <= sqrt(x) <= hi` with `hi - lo <= 2/scale`, exact
/// for squares of rationals.
fn sqrt_bracket(x: &Rational, scale: &BigInt) -> (Rational, Rational) {
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn == *n && &rd * &rd == *d {
        let r = Rational::new(rn, rd);
        return (r.clone(), r);
    }
    let y = x * Rational::from_integer(scale * scale);
    let lo = y.floor().to_integer().sqrt();
    let hi = y.ceil().to_integer().sqrt() + BigInt::from(1);
    (Rational::new(lo, scale.clone()), Rational::new(hi, scale.clone()))
}

pub fn complete_square(q: &MonicQuadratic, tolerance: &Rational) -> Result<SquareRoots> {
    if !tolerance.is_positive() {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tolerance}")));
    }
    let d = q.domain();
    for x in 0..d.num_vertices() {
        let disc = q.f.value(x) * q.f.value(x) - q.g.value(x);
        if disc.is_negative() {
            return Err(Error::NoRealRoots { witness: d.site(Cell::Vertex(x)) });
        }
    }
    let discs: Vec<Discriminant> = (0..d.num_edges()).map(|e| Discriminant::on_edge(q, e)).collect();
    let (zero, one) = (Rational::zero(), rat(1, 1));
    for (e, disc) in discs.iter().enumerate() {
        if disc.range(&zero, &one).0.is_negative() {
            return Err(Error::NoRealRoots { witness: d.site(Cell::Edge(e)) });
        }
    }

    let mut scale = BigInt::from(1);
    while Rational::new(BigInt::from(8), scale.clone()) > *tolerance {
        scale *= 2;
    }
    let approx = |v: &Rational| sqrt_bracket(v, &scale).0;
    let mut cuts: Vec<Point> = Vec::new();
    let mut bound = Rational::zero();
    let mut segments = 0usize;
    for (e, disc) in discs.iter().enumerate() {
        let mut stack = vec![(zero.clone(), one.clone())];
        while let Some((s0, s1)) = stack.pop() {
            let (dmin, dmax) = disc.range(&s0, &s1);
            let (h0, h1) = (approx(&disc.at(&s0)), approx(&disc.at(&s1)));
            let (hmin, hmax) = (h0.clone().min(h1.clone()), h0.max(h1));
            let mut err = (sqrt_bracket(&dmax, &scale).1 - hmin).max(hmax - sqrt_bracket(&dmin, &scale).0);
            if let Some(tight) = disc.chord_error(&s0, &s1, &scale) {
                err = err.min(tight);
            }
            if err <= *tolerance {
                bound = bound.max(err);
                segments += 1;
                if s0 != zero {
                    cuts.push(d.point_along(e, &s0));
                }
                continue;
            }
            if segments + stack.len() > MAX_SQRT_SEGMENTS {
                return Err(Error::Size {
                    what: "square-root refinement".into(),
                    got: segments + stack.len(),
                    cap: MAX_SQRT_SEGMENTS,
                    hint: "; use a larger tolerance".into(),
                });
            }
            let mid = (&s0 + &s1) / rat(2, 1);
            stack.push((mid.clone(), s1));
            stack.push((s0, mid));
        }
    }
    let fine = Arc::new(d.with_points(cuts.iter())?);
    let f = q.f.relocate(&fine)?;
    let g = q.g.relocate(&fine)?;
    let h = f.zip_with(&g, |a, b| approx(&(a * a - b)))?;
    let f1 = f.neg().sub(&h)?;
    let f2 = f.neg().add(&h)?;
    Ok(SquareRoots { f, g, h, f1, f2, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::make_interval;

    fn unit() -> Arc<Complex1D> {
        make_interval(&[rat(0, 1), rat(1, 1)]).unwrap()
    }

    fn c(k: &Arc<Complex1D>, n: i64, d: i64) -> PLFunction {
        PLFunction::constant(k, rat(n, d))
    }

    #[test]
    fn factored_example() {
        let k = unit();
        let f1 = PLFunction::from_labels(&k, |x| x - rat(1, 1));
        let f2 = PLFunction::from_labels(&k, |x| x.clone());
        let u = PLFunction::from_labels(&k, |x| x - rat(1, 2));
        let sol = solve_factored_quadratic(&f1, &f2, &u, &c(&k, 1, 1)).unwrap();
        assert_eq!(sol.cover.p, ClosedSet::whole(&k));
        assert!(sol.w.same_function(&f2));
    }

    #[test]
    fn forced_on_q() {
        let k = unit();
        let (f1, f2) = (c(&k, 0, 1), c(&k, 1, 1));
        let sol = solve_factored_quadratic(&f1, &f2, &f2, &f2).unwrap();
        assert!(sol.w.same_function(&f2));
        let sol = solve_factored_quadratic(&f1, &f2, &f1, &f1).unwrap();
        assert!(sol.w.same_function(&f1));
    }

    #[test]
    fn sign_failure_is_reported() {
        let k = unit();
        let err = solve_factored_quadratic(&c(&k, 0, 1), &c(&k, 1, 1), &c(&k, 2, 1), &c(&k, 3, 1)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { ref clause, .. } if clause.starts_with("p(u) <= 0")));
    }

    #[test]
    fn perfect_square_is_exact() {
        let k = unit();
        let q = MonicQuadratic::new(&c(&k, 0, 1), &c(&k, -1, 1)).unwrap();
        let r = complete_square(&q, &default_tolerance()).unwrap();
        assert!(r.h.same_function(&c(&k, 1, 1)));
        assert!(r.f1.same_function(&c(&k, -1, 1)) && r.f2.same_function(&c(&k, 1, 1)));
        assert!(r.bound.is_zero());
    }

    #[test]
    fn sqrt_of_x_within_tolerance() {
        let k = unit();
        let g = PLFunction::from_labels(&k, |x| -x.clone());
        let q = MonicQuadratic::new(&c(&k, 0, 1), &g).unwrap();
        let tol = rat(1, 100);
        let r = complete_square(&q, &tol).unwrap();
        assert!(r.bound <= tol);
        for (x, h) in r.h.domain().labels().iter().zip(r.h.values()) {
            let (lo, hi) = (h - &r.bound, h + &r.bound);
            assert!(hi.clone() * hi >= *x);
            assert!(lo.is_negative() || lo.clone() * lo <= *x);
        }
    }

    #[test]
    fn negative_discriminant() {
        let k = unit();
        let q = MonicQuadratic::new(&c(&k, 0, 1), &c(&k, 1, 1)).unwrap();
        assert!(matches!(complete_square(&q, &default_tolerance()), Err(Error::NoRealRoots { .. })));
        // Nonnegative at both vertices, negative in between.
        let f = PLFunction::from_labels(&k, |x| rat(2, 1) * x - rat(1, 1));
        let q = MonicQuadratic::new(&f, &c(&k, 1, 2)).unwrap();
        assert!(matches!(complete_square(&q, &default_tolerance()), Err(Error::NoRealRoots { witness: crate::complex::Site::Edge(..) })));
    }
}
