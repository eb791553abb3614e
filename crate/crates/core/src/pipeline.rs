//! End-to-end construction of a continuous root `w` of `p` between `u` and
//! `v`: sort, split into `P`, `Q`, `R`, reduce the degree, and finish with the
//! quadratic or the pattern-based final case. When the final case is not
//! available the exhaustive branch search decides the problem instead.

use serde::{Deserialize, Serialize};

use crate::crochet::{
    assemble_final, build_scaffold, check_fspace_hypothesis, search_pattern, CrochetPattern, DEFAULT_PATTERN_CAP,
};
use crate::error::{Error, Result};
use crate::pl::{align, PLFunction};
use crate::poly::{
    sign_profile, sort_roots_lattice, sort_roots_pointwise, FactoredPoly, SignBound, DEFAULT_LATTICE_CAP,
};
use crate::problem::Problem;
use crate::quadratic::solve_factored_quadratic;
use crate::region::{glue, reduce_even, reduce_to_le, require_signs, restrict_to, split_pqr};
use crate::report::{CheckLog, Report};
use crate::selection::{find_selection, verify_selection, SelectOptions, SelectionResult, DEFAULT_SELECTION_CAP};
use crate::sets::ClosedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SingleRoot,
    Quadratic,
    ForcedMiddle,
    FinalCase,
    ExhaustiveSearch,
}

/// Which construction produced `w` on a region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Path of the region in the recursion, such as `X/R/P`.
    pub region: String,
    pub method: Method,
    pub cells: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Cell cap for pattern search on non-path components.
    pub pattern_cap: usize,
    /// Cell cap for the exhaustive search on cyclic components.
    pub select_cap: usize,
    /// Patterns to use in the final case instead of searching.
    pub patterns: Vec<CrochetPattern>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { pattern_cap: DEFAULT_PATTERN_CAP, select_cap: DEFAULT_SELECTION_CAP, patterns: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub result: SelectionResult,
    pub provenance: Vec<Provenance>,
    pub report: Report,
}

struct Run<'a> {
    opts: &'a PipelineOptions,
    report: Report,
    provenance: Vec<Provenance>,
}

impl Run<'_> {
    fn note(&mut self, region: &str, method: Method, cells: usize, detail: impl Into<String>) {
        self.provenance.push(Provenance { region: region.to_string(), method, cells, detail: detail.into() });
    }

    fn absorb(&mut self, log: CheckLog) {
        self.report.extend(log);
    }

    /// `w` on the space of `p`, or `None` when a final case could not be
    /// carried out.
    fn construct(&mut self, path: &str, p: &FactoredPoly, lo: &PLFunction, hi: &PLFunction) -> Result<Option<PLFunction>> {
        let n = p.degree();
        let p = if p.is_sorted() {
            p.clone()
        } else if n <= DEFAULT_LATTICE_CAP {
            self.report.step(path, format!("sorted {n} roots by the lattice formula"));
            sort_roots_lattice(p)?
        } else {
            self.report.step(path, format!("sorted {n} roots pointwise"));
            sort_roots_pointwise(p)?
        };
        let mut fs = p.roots().to_vec();
        fs.push(lo.clone());
        fs.push(hi.clone());
        let mut fs = align(&fs)?;
        let hi = fs.pop().expect("upper");
        let lo = fs.pop().expect("lower");
        let p = FactoredPoly::new(fs)?;
        let cells = p.domain().num_cells();

        let mut log = CheckLog::new(path);
        require_signs(&mut log, &p, &lo, &hi, "p", None)?;
        self.absorb(log);

        if n == 1 {
            self.report.step(path, "one root: w = f_1");
            self.note(path, Method::SingleRoot, cells, "");
            return Ok(Some(p.root(1).clone()));
        }
        if n == 2 {
            let sol = solve_factored_quadratic(p.root(1), p.root(2), &lo, &hi).map_err(|e| e.in_stage(path))?;
            self.absorb(sol.log);
            self.report.step(path, "two roots: f_2 on P, u on Q, f_1 on R");
            self.note(path, Method::Quadratic, cells, "");
            return Ok(Some(sol.w));
        }

        let cover = split_pqr(&lo, &hi)?;
        let mut pieces: Vec<(ClosedSet, PLFunction)> = Vec::new();
        if !cover.q.is_empty() {
            let region = format!("{path}/Q");
            let mut log = CheckLog::new(region.as_str());
            let w = sign_profile(&p, &lo)?.first_violation(SignBound::Zero, Some(&cover.q));
            log.require("p(u) = 0", "Q", w)?;
            self.absorb(log);
            self.note(&region, Method::ForcedMiddle, cover.q.cell_count(), "w = u where u = v");
            pieces.push((cover.q.clone(), lo.clone()));
        }

        if n % 2 == 0 {
            let red = reduce_even(&p, &lo, &hi, &cover).map_err(|e| e.in_stage(path))?;
            self.absorb(red.log);
            for (name, sub) in [("P", &red.on_p), ("R", &red.on_r)] {
                let Some((q, l, h)) = sub.restricted()? else { continue };
                let region = format!("{path}/{name}");
                self.report.step(&region, format!("degree {} subproblem on {name}", q.degree()));
                let Some(w) = self.construct(&region, &q, &l, &h)? else { return Ok(None) };
                pieces.push((sub.region.clone(), w));
            }
        } else {
            if !cover.p.is_empty() {
                let mut fs = p.roots().to_vec();
                fs.push(lo.clone());
                fs.push(hi.clone());
                let (_, mut fs) = restrict_to(&cover.p, &fs)?;
                let h = fs.pop().expect("upper");
                let l = fs.pop().expect("lower");
                let region = format!("{path}/P");
                let Some(w) = self.final_case(&region, &FactoredPoly::new(fs)?, &l, &h)? else { return Ok(None) };
                pieces.push((cover.p.clone(), w));
            }
            let red = reduce_to_le(&p, &lo, &hi, &cover).map_err(|e| e.in_stage(path))?;
            self.absorb(red.log);
            if let Some(sub) = red.on_r {
                if let Some((q, l, h)) = sub.restricted()? {
                    let region = format!("{path}/R");
                    self.report.step(&region, format!("degree {} subproblem on R with u and v swapped", q.degree()));
                    let Some(w) = self.construct(&region, &q, &l, &h)? else { return Ok(None) };
                    pieces.push((sub.region.clone(), w));
                }
            }
        }
        let w = glue(&pieces).map_err(|e| e.in_stage(path))?;
        Ok(Some(w))
    }

    fn final_case(&mut self, path: &str, p: &FactoredPoly, lo: &PLFunction, hi: &PLFunction) -> Result<Option<PLFunction>> {
        let scaffold = build_scaffold(p, lo, hi).map_err(|e| e.in_stage(path))?;
        self.absorb(scaffold.log);
        let mut log = CheckLog::new(path);
        for s in &scaffold.stages {
            let verdict = check_fspace_hypothesis(s);
            for c in &verdict.violations {
                log.record(format!("stage {}: {}", s.i, c.clause), "X", Some(c.witness.clone()));
            }
            if let Some(c) = verdict.first() {
                self.absorb(log);
                self.report.step(
                    path,
                    format!("stage {}: {} fails at {}; the final case does not apply", s.i, c.clause, c.witness),
                );
                return Ok(None);
            }
            log.record(format!("stage {}: separation of A and B", s.i), "X", None);
        }
        self.absorb(log);

        let space = p.domain();
        let k = scaffold.stages.len();
        let supplied = self.opts.patterns.len() == k;
        let patterns = if supplied {
            self.report.step(path, format!("using {k} supplied patterns"));
            self.opts.patterns.iter().map(|pat| CrochetPattern {
                x0: pat.x0.relocate(space),
                x1: pat.x1.relocate(space),
                x2: pat.x2.relocate(space),
            }).collect()
        } else {
            let mut found = Vec::with_capacity(k);
            for s in &scaffold.stages {
                let searched = search_pattern(&s.a, &s.b, &s.c.interior(), &s.d.interior(), space, self.opts.pattern_cap);
                match searched {
                    Ok(Some(pat)) => found.push(pat),
                    Ok(None) => {
                        self.report.step(path, format!("stage {}: no pattern exists on this complex", s.i));
                        return Ok(None);
                    }
                    Err(e @ Error::Size { .. }) => {
                        self.report.step(path, format!("stage {}: pattern search skipped: {e}", s.i));
                        return Ok(None);
                    }
                    Err(e) => return Err(e),
                }
            }
            self.report.step(path, format!("found {k} patterns by search"));
            found
        };
        let asm = assemble_final(p, lo, hi, &scaffold.stages, &patterns).map_err(|e| e.in_stage(path))?;
        self.absorb(asm.log);
        let detail = if supplied { "supplied patterns" } else { "searched patterns" };
        self.note(path, Method::FinalCase, space.num_cells(), detail);
        Ok(Some(asm.w))
    }
}

/// Runs the construction on `p`, `u`, `v`, falling back to the exhaustive
/// search when a final case cannot be carried out.
pub fn solve(p: &FactoredPoly, u: &PLFunction, v: &PLFunction, opts: &PipelineOptions) -> Result<Solved> {
    let mut run = Run { opts, report: Report::default(), provenance: Vec::new() };
    let built = run.construct("X", p, u, v)?;
    let result = match built {
        Some(w) => {
            let mut log = CheckLog::new("X");
            log.require("p(w) = 0 and u∧v <= w <= u∨v", "X", verify_selection(p, u, v, &w)?.map(|(_, s)| s))?;
            run.absorb(log);
            SelectionResult::Found(w)
        }
        None => {
            run.provenance.clear();
            run.report.step("X", "falling back to the exhaustive branch search");
            let sel = SelectOptions { cell_cap: opts.select_cap, check_signs: true };
            let result = find_selection(p, u, v, sel)?;
            let cells = p.domain().num_cells();
            match &result {
                SelectionResult::Found(w) => {
                    let mut log = CheckLog::new("exhaustive-search");
                    log.require("p(w) = 0 and u∧v <= w <= u∨v", "X", verify_selection(p, u, v, w)?.map(|(_, s)| s))?;
                    run.absorb(log);
                    run.note("X", Method::ExhaustiveSearch, cells, "selection found");
                }
                SelectionResult::Obstructed(o) => {
                    run.report.step("X", format!("no continuous root: the branches cannot pass {}", o.cut_vertex));
                    run.note("X", Method::ExhaustiveSearch, cells, "no selection exists");
                }
            }
            result
        }
    };
    Ok(Solved { result, provenance: run.provenance, report: run.report })
}

/// Solves a problem file's polynomial with its bounds and options.
pub fn solve_problem(problem: &Problem, opts: &PipelineOptions) -> Result<Solved> {
    let mut opts = opts.clone();
    if let Some(cap) = problem.options.cell_cap {
        opts.pattern_cap = cap;
    }
    if opts.patterns.is_empty() {
        opts.patterns = problem.patterns.clone();
    }
    solve(&problem.poly()?, problem.lower()?, problem.upper()?, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Site;
    use crate::fixtures;
    use crate::rat;

    fn run(p: Problem) -> Solved {
        solve_problem(&p, &PipelineOptions::default()).unwrap()
    }

    #[test]
    fn zigzag_cubic_is_obstructed() {
        let s = run(fixtures::zigzag_cubic().unwrap());
        assert_eq!(s.result.obstruction().unwrap().cut_vertex, Site::Vertex("1".into()));
        assert_eq!(s.provenance[0].method, Method::ExhaustiveSearch);
    }

    #[test]
    fn constant_cubic_takes_lowest_root() {
        let s = run(fixtures::constant_cubic().unwrap());
        let w = s.result.selection().unwrap();
        assert!(w.values().iter().all(|x| *x == rat(0, 1)));
        assert_eq!(s.provenance[0].method, Method::FinalCase);
        assert!(s.report.all_passed());
    }

    #[test]
    fn crooked_cubic_uses_final_case() {
        let s = run(fixtures::crooked_cubic().unwrap());
        assert!(s.result.selection().is_some());
        assert_eq!(s.provenance[0].method, Method::FinalCase);
    }

    #[test]
    fn quadratic_and_forced_middle() {
        let s = run(fixtures::factored_quadratic().unwrap());
        let w = s.result.selection().unwrap();
        assert_eq!(w.values(), &[rat(-1, 2), rat(0, 1), rat(-1, 2)]);
        let s = run(fixtures::forced_middle().unwrap());
        let w = s.result.selection().unwrap();
        assert_eq!(w.values(), &[rat(0, 1), rat(1, 2), rat(1, 1)]);
        assert_eq!(s.provenance[0].method, Method::ForcedMiddle);
    }
}
