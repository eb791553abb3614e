//! Crooked chain patterns.
//!
//! A pattern lists, for each link of a fine chain, the link of an `n`-link
//! coarse chain containing it. Crookedness forces every passage between far
//! apart links to double back first: to go from link `a` to link `b`, the
//! pattern must reach the neighbour of `b`, return to the neighbour of `a`, and
//! only then proceed.

use std::sync::Arc;

use crate::complex::{make_interval, Complex1D};
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrookedPattern {
    links: usize,
    seq: Vec<usize>,
}

impl CrookedPattern {
    /// Validates a pattern over `links` links (indices are 1-based).
    pub fn new(links: usize, seq: Vec<usize>) -> Result<Self> {
        if links < 1 || seq.is_empty() {
            return Err(Error::InvalidParameter("empty pattern".into()));
        }
        if seq[0] != 1 || *seq.last().unwrap() != links {
            return Err(Error::InvalidParameter(format!("pattern must run from 1 to {links}")));
        }
        if seq.iter().any(|&s| s < 1 || s > links) {
            return Err(Error::InvalidParameter("link index out of range".into()));
        }
        if seq.windows(2).any(|w| w[0].abs_diff(w[1]) > 1) {
            return Err(Error::InvalidParameter("consecutive links differ by more than 1".into()));
        }
        Ok(Self { links, seq })
    }

    pub fn links(&self) -> usize {
        self.links
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn is_crooked(&self) -> bool {
        is_crooked(&self.seq, self.links)
    }
}

/// Crookedness: for all positions `a < b` with `|s(b) - s(a)| >= 2` there are
/// `a < c < d < b` with `s(c)` one step from `s(b)` toward `s(a)` and `s(d)`
/// one step from `s(a)` toward `s(b)`.
pub fn is_crooked(seq: &[usize], links: usize) -> bool {
    let len = seq.len();
    // next[i][x]: first position > i holding x; prev[j][x]: last position < j.
    let mut next = vec![vec![usize::MAX; links + 2]; len + 1];
    for i in (0..len).rev() {
        next[i] = next[i + 1].clone();
        if i + 1 < len {
            next[i][seq[i + 1]] = i + 1;
        }
    }
    let mut prev = vec![vec![usize::MAX; links + 2]; len];
    for j in 1..len {
        prev[j] = prev[j - 1].clone();
        prev[j][seq[j - 1]] = j - 1;
    }
    for a in 0..len {
        for b in a + 1..len {
            let (sa, sb) = (seq[a], seq[b]);
            if sa.abs_diff(sb) < 2 {
                continue;
            }
            let (near_b, near_a) = if sb > sa { (sb - 1, sa + 1) } else { (sb + 1, sa - 1) };
            let c = next[a][near_b];
            let d = prev[b][near_a];
            if c == usize::MAX || d == usize::MAX || c >= d {
                return false;
            }
        }
    }
    true
}

/// A crooked walk from link `a` to link `b`: go crookedly to the neighbour of
/// `b`, come back crookedly to the neighbour of `a`, then go on to `b`.
fn crooked_walk(a: usize, b: usize) -> Vec<usize> {
    if a == b {
        return vec![a, a];
    }
    if a.abs_diff(b) == 1 {
        return vec![a, b];
    }
    let (near_b, near_a) = if b > a { (b - 1, a + 1) } else { (b + 1, a - 1) };
    let mut out = crooked_walk(a, near_b);
    out.extend_from_slice(&crooked_walk(near_b, near_a)[1..]);
    out.extend_from_slice(&crooked_walk(near_a, b)[1..]);
    out
}

/// Longest pattern the generator will build.
pub const MAX_PATTERN_LEN: usize = 100_000;

/// Length of `crooked_walk(a, b)` for `|a - b| = dist`, saturating.
fn walk_len(dist: usize) -> usize {
    let (mut prev, mut cur) = (2usize, 2usize);
    if dist <= 1 {
        return 2;
    }
    for _ in 2..=dist {
        let next = cur.saturating_mul(2).saturating_add(prev).saturating_sub(2);
        prev = cur;
        cur = next;
    }
    cur
}

/// A crooked pattern with its interval complex: one vertex per pattern entry,
/// evenly spaced on `[0,1]`.
#[derive(Clone, Debug)]
pub struct CrookedChain {
    pub pattern: CrookedPattern,
    pub complex: Arc<Complex1D>,
}

impl CrookedChain {
    /// The map sending vertex `k` to `values[s(k) - 1]`, one value per link.
    pub fn profile(&self, values: &[Rational]) -> Result<PLFunction> {
        if values.len() != self.pattern.links {
            return Err(Error::InvalidParameter(format!(
                "need one value per link ({}), got {}",
                self.pattern.links,
                values.len()
            )));
        }
        let vals = self.pattern.seq.iter().map(|&s| values[s - 1].clone()).collect();
        PLFunction::new(Arc::clone(&self.complex), vals)
    }
}

/// Level 0 is the straight chain `1..n`; each further level composes one more
/// crooked refinement on top of the previous pattern.
pub fn generate_crooked_chain(links: usize, level: usize) -> Result<CrookedChain> {
    if links < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 links, got {links}")));
    }
    let mut seq: Vec<usize> = (1..=links).collect();
    for _ in 0..level {
        let len = walk_len(seq.len() - 1);
        if len > MAX_PATTERN_LEN {
            return Err(Error::Size {
                what: format!("crooked pattern for {links} links at level {level}"),
                got: len,
                cap: MAX_PATTERN_LEN,
                hint: String::new(),
            });
        }
        let walk = crooked_walk(1, seq.len());
        seq = walk.iter().map(|&j| seq[j - 1]).collect();
    }
    let pattern = CrookedPattern::new(links, seq)?;
    let m = pattern.len() as i64;
    let breakpoints: Vec<Rational> = (0..m).map(|k| rat(k, m - 1)).collect();
    let complex = make_interval(&breakpoints)?;
    Ok(CrookedChain { pattern, complex })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_links_are_vacuously_crooked() {
        for level in 0..4 {
            let c = generate_crooked_chain(2, level).unwrap();
            assert_eq!(c.pattern.seq(), &[1, 2]);
            assert!(c.pattern.is_crooked());
        }
    }

    #[test]
    fn straight_three_is_not_crooked() {
        let c = generate_crooked_chain(3, 0).unwrap();
        assert_eq!(c.pattern.seq(), &[1, 2, 3]);
        assert!(!c.pattern.is_crooked());
    }

    #[test]
    fn level_one_four_links() {
        let c = generate_crooked_chain(4, 1).unwrap();
        assert_eq!(c.pattern.seq(), &[1, 2, 2, 3, 2, 3, 3, 4]);
        assert!(c.pattern.is_crooked());
        assert_eq!(c.complex.num_vertices(), 8);
    }

    #[test]
    fn walk_lengths_match() {
        for d in 0..9 {
            assert_eq!(crooked_walk(1, 1 + d).len(), walk_len(d), "distance {d}");
        }
    }

    #[test]
    fn oversized_levels_are_refused() {
        assert!(matches!(generate_crooked_chain(6, 2), Err(Error::Size { .. })));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(generate_crooked_chain(1, 1).is_err());
        assert!(CrookedPattern::new(3, vec![1, 3]).is_err());
        assert!(CrookedPattern::new(3, vec![1, 2]).is_err());
    }
}
