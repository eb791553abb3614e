//! Small problems with known answers, shared by tests, examples and the CLI.

use std::sync::Arc;

use crate::complex::{make_interval, Complex1D, DomainKind};
use crate::crooked::generate_crooked_chain;
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::problem::Problem;
use crate::selection::zigzag_witness;
use crate::{rat, Rational};

fn values(k: &Arc<Complex1D>, xs: &[(i64, i64)]) -> Result<PLFunction> {
    PLFunction::new(k.clone(), xs.iter().map(|&(n, d)| rat(n, d)).collect())
}

/// Copies functions that share a (possibly refined) interval onto a freshly
/// declared interval with the same breakpoints.
fn redeclare(fs: &[&PLFunction]) -> Result<(Arc<Complex1D>, Vec<PLFunction>)> {
    if fs[0].domain().kind() != DomainKind::Interval {
        return Err(Error::InvalidDomain("problem fixtures are declared on intervals".into()));
    }
    let k = make_interval(&fs[0].domain().labels())?;
    let out = fs.iter().map(|f| PLFunction::new(k.clone(), f.values().to_vec())).collect::<Result<_>>()?;
    Ok((k, out))
}

fn cubic(fs: &[&PLFunction]) -> Result<Problem> {
    let (k, fs) = redeclare(fs)?;
    let mut p = Problem::new(&k);
    for (name, f) in ["f1", "f2", "f3", "u", "v"].iter().zip(&fs) {
        p = p.with_function(name, f)?;
    }
    p.with_poly(&["f1", "f2", "f3"], "u", "v")
}

/// The zig-zag cubic of `f(x) = x` on `[0,1]` with `u = 0`, `v = 1`. It has no
/// continuous root between `u` and `v`.
pub fn zigzag_cubic() -> Result<Problem> {
    let k = make_interval(&[rat(0, 1), rat(1, 1)])?;
    zigzag_problem(&PLFunction::from_labels(&k, |x| x.clone()))
}

/// The zig-zag cubic of `f: [a,b] -> [0,1]` with `u = 0`, `v = 1`.
pub fn zigzag_problem(f: &PLFunction) -> Result<Problem> {
    let z = zigzag_witness(f)?;
    let d = z.f.domain();
    let (u, v) = (PLFunction::constant(d, rat(0, 1)), PLFunction::constant(d, rat(1, 1)));
    cubic(&[&z.f1, &z.f2, &z.f3, &u, &v])
}

/// Constant roots `0, 1/2, 1` on `[0,1]` with `u = 0`, `v = 1`.
pub fn constant_cubic() -> Result<Problem> {
    let k = make_interval(&[rat(0, 1), rat(1, 1)])?;
    let c = |n, d| PLFunction::constant(&k, rat(n, d));
    cubic(&[&c(0, 1), &c(1, 2), &c(1, 1), &c(0, 1), &c(1, 1)])
}

/// The zig-zag cubic over a crooked chain: `f` follows the level-one crooked
/// pattern on four links, each entry held for three vertices, with link values
/// `0, 1/4, 3/4, 1`. Here a continuous root exists.
pub fn crooked_cubic() -> Result<Problem> {
    let chain = generate_crooked_chain(4, 1)?;
    let link = [rat(0, 1), rat(1, 4), rat(3, 4), rat(1, 1)];
    let seq: Vec<usize> = chain.pattern.seq().iter().flat_map(|&s| [s; 3]).collect();
    let m = seq.len() as i64;
    let k = make_interval(&(0..m).map(|i| rat(i, m - 1)).collect::<Vec<Rational>>())?;
    let f = PLFunction::new(k, seq.iter().map(|&s| link[s - 1].clone()).collect())?;
    zigzag_problem(&f)
}

/// `(t - f1)(t - f2)` on `[-1,1]` with `u = x`, `v = -x`, so `P`, `Q` and `R`
/// are all non-empty. The root is `-|x|/2`.
pub fn factored_quadratic() -> Result<Problem> {
    let k = make_interval(&[rat(-1, 1), rat(0, 1), rat(1, 1)])?;
    let mut p = Problem::new(&k)
        .with_function("f1", &values(&k, &[(-2, 1), (0, 1), (-1, 2)])?)?
        .with_function("f2", &values(&k, &[(-1, 2), (0, 1), (2, 1)])?)?
        .with_function("u", &values(&k, &[(-1, 1), (0, 1), (1, 1)])?)?
        .with_function("v", &values(&k, &[(1, 1), (0, 1), (-1, 1)])?)?;
    p = p.with_poly(&["f1", "f2"], "u", "v")?;
    Ok(p)
}

/// Roots `-1, x, 1` on `[0,1]` with `u = v = x`: the root is forced to be `u`.
pub fn forced_middle() -> Result<Problem> {
    let k = make_interval(&[rat(0, 1), rat(1, 2), rat(1, 1)])?;
    let x = PLFunction::from_labels(&k, |x| x.clone());
    cubic(&[&PLFunction::constant(&k, rat(-1, 1)), &x, &PLFunction::constant(&k, rat(1, 1)), &x, &x])
}

/// A monic quadratic `t² + 2ft + g` on `[0,1]` with `f = -x` and
/// `g = x² - 1/4` sampled at the breakpoints, whose discriminant stays positive.
pub fn monic_quadratic() -> Result<Problem> {
    let k = make_interval(&[rat(0, 1), rat(1, 2), rat(1, 1)])?;
    let p = Problem::new(&k)
        .with_function("f", &values(&k, &[(0, 1), (-1, 2), (-1, 1)])?)?
        .with_function("g", &values(&k, &[(-1, 4), (0, 1), (3, 4)])?)?;
    Ok(Problem { monic: Some(("f".into(), "g".into())), ..p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for p in [zigzag_cubic(), constant_cubic(), crooked_cubic(), factored_quadratic(), forced_middle()] {
            let p = p.unwrap();
            assert!(p.poly().is_ok());
            assert!(p.lower().is_ok() && p.upper().is_ok());
        }
        assert_eq!(zigzag_cubic().unwrap().domain.num_vertices(), 4);
        assert_eq!(crooked_cubic().unwrap().domain.num_vertices(), 24);
        assert!(monic_quadratic().unwrap().monic_quadratic().is_ok());
    }
}
