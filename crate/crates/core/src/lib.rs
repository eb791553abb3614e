//! Exact continuous root selections for completely factored polynomials
//! `p(t) = (t - f_1)...(t - f_n)` whose coefficients are piecewise-linear
//! functions on a finite 1-D complex.
//!
//! Given bounds `u`, `v` with `p(u) <= 0 <= p(v)`, the crate either builds a
//! continuous `w` with `p(w) = 0` and `min(u,v) <= w <= max(u,v)`, or returns
//! a certificate that none exists. All arithmetic is exact rational.

pub mod complex;
pub mod crochet;
pub mod crooked;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod pipeline;
pub mod pl;
pub mod poly;
pub mod problem;
pub mod quadratic;
pub mod region;
pub mod report;
pub mod selection;
pub mod sets;

pub use complex::{make_graph, make_interval, Cell, Complex1D, DomainKind, Point, Site};
pub use error::{Error, Result};
pub use pl::{lattice, refine, LatticeOp, PLFunction};
pub use poly::FactoredPoly;
pub use sets::{closure_of_pred, ClosedSet, OpenSet, Relation};

/// Exact rationals used everywhere.
pub type Rational = num::BigRational;

/// Shorthand for `numer / denom`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}
