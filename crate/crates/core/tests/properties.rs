use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rootsel::crochet::{check_pattern, CrochetPattern};
use rootsel::crooked::is_crooked;
use rootsel::pipeline::{solve_problem, PipelineOptions};
use rootsel::pl::{max, min, refine_at_zeros};
use rootsel::poly::{sign_profile, sort_roots_lattice, sort_roots_pointwise};
use rootsel::problem::{parse_problem, Problem};
use rootsel::selection::{
    f_space_probe, find_selection, oracle_bruteforce, verify_selection, FSpaceProbe, SelectOptions,
    SelectionResult,
};
use rootsel::sets::OpenSet;
use rootsel::{
    closure_of_pred, make_interval, rat, refine, Cell, ClosedSet, Complex1D, FactoredPoly, PLFunction, Rational,
    Relation,
};

fn small(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    rat(r.gen_range(lo..=hi), r.gen_range(1..=4))
}

fn nonneg(r: &mut ChaCha8Rng) -> Rational {
    if r.gen_bool(0.25) {
        rat(0, 1)
    } else {
        small(r, 0, 6)
    }
}

/// Breakpoints at the partial sums of `gaps`, starting from 0.
fn interval(gaps: &[i64]) -> Arc<Complex1D> {
    let mut xs = vec![rat(0, 1)];
    for g in gaps {
        let next = xs.last().unwrap() + rat(*g, 4);
        xs.push(next);
    }
    make_interval(&xs).unwrap()
}

fn random_interval(r: &mut ChaCha8Rng, lo: usize, hi: usize) -> Arc<Complex1D> {
    let m = r.gen_range(lo..=hi);
    interval(&(1..m).map(|_| r.gen_range(1..=4)).collect::<Vec<_>>())
}

fn random_fn(r: &mut ChaCha8Rng, k: &Arc<Complex1D>) -> PLFunction {
    PLFunction::new(k.clone(), (0..k.num_vertices()).map(|_| small(r, -6, 6)).collect()).unwrap()
}

/// Sorted roots with `u` and `v` in bands where `p(u) <= 0 <= p(v)`.
fn random_signed(r: &mut ChaCha8Rng, n: usize) -> (Vec<PLFunction>, PLFunction, PLFunction) {
    let k = random_interval(r, 2, 4);
    let m = k.num_vertices();
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|_| {
            let mut row = vec![small(r, -6, 6)];
            for _ in 1..n {
                let next = row.last().unwrap() + nonneg(r);
                row.push(next);
            }
            row
        })
        .collect();
    let bands = |neg: bool| (0..=n).filter(|i| ((n - i) % 2 == 1) == neg).collect::<Vec<_>>();
    let (nb, pb) = (bands(true), bands(false));
    let (bu, bv) = (nb[r.gen_range(0..nb.len())], pb[r.gen_range(0..pb.len())]);
    let mut at = |row: &[Rational], band: usize| -> Rational {
        if band == 0 {
            &row[0] - nonneg(r)
        } else if band == n {
            &row[n - 1] + nonneg(r)
        } else {
            &row[band - 1] + (&row[band] - &row[band - 1]) * rat(r.gen_range(0..=4), 4)
        }
    };
    let us: Vec<Rational> = rows.iter().map(|row| at(row, bu)).collect();
    let vs: Vec<Rational> = rows.iter().map(|row| at(row, bv)).collect();
    let roots =
        (0..n).map(|j| PLFunction::new(k.clone(), rows.iter().map(|row| row[j].clone()).collect()).unwrap()).collect();
    (roots, PLFunction::new(k.clone(), us).unwrap(), PLFunction::new(k, vs).unwrap())
}

fn closed(k: &Arc<Complex1D>, mask: &[bool]) -> ClosedSet {
    ClosedSet::from_cells(k, k.cells().into_iter().zip(mask).filter(|(_, &b)| b).map(|(c, _)| c))
}

fn fns_strategy(count: usize) -> impl Strategy<Value = Vec<PLFunction>> {
    prop::collection::vec(1i64..=4, 1..5).prop_flat_map(move |gaps| {
        let k = interval(&gaps);
        let m = k.num_vertices();
        prop::collection::vec(prop::collection::vec((-8i64..=8, 1i64..=4), m), count).prop_map(move |rows| {
            rows.into_iter()
                .map(|row| PLFunction::new(k.clone(), row.into_iter().map(|(n, d)| rat(n, d)).collect()).unwrap())
                .collect()
        })
    })
}

fn fspace_bruteforce(f: &PLFunction) -> bool {
    let (d, fs) = refine_at_zeros(std::slice::from_ref(f)).unwrap();
    let f = &fs[0];
    let sign = |x: &Rational| if *x > rat(0, 1) { 1i8 } else if *x < rat(0, 1) { -1 } else { 0 };
    // Each vertex takes a value in {-1, 0, 1}; a signed cell forces its sign
    // on itself and its endpoints.
    let nv = d.num_vertices();
    (0..3usize.pow(nv as u32)).any(|code| {
        let vals: Vec<i8> = (0..nv).map(|x| (code / 3usize.pow(x as u32) % 3) as i8 - 1).collect();
        (0..nv).all(|x| sign(f.value(x)) == 0 || vals[x] == sign(f.value(x)))
            && (0..d.num_edges()).all(|e| {
                let s = sign(&f.mid(e));
                let edge = d.edge(e);
                s == 0 || (vals[edge.a] == s && vals[edge.b] == s)
            })
    })
}

fn naive_crooked(s: &[usize]) -> bool {
    (0..s.len()).all(|a| {
        (a + 1..s.len()).all(|b| {
            let (sa, sb) = (s[a] as i64, s[b] as i64);
            if (sa - sb).abs() < 2 {
                return true;
            }
            let step = (sb - sa).signum();
            (a + 1..b).any(|c| (c + 1..b).any(|d| s[c] as i64 == sb - step && s[d] as i64 == sa + step))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_absorbs_and_distributes(fs in fns_strategy(3)) {
        let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
        prop_assert!(min(f, &max(f, g).unwrap()).unwrap().same_function(f));
        prop_assert!(max(f, &min(f, g).unwrap()).unwrap().same_function(f));
        let lhs = min(f, &max(g, h).unwrap()).unwrap();
        let rhs = max(&min(f, g).unwrap(), &min(f, h).unwrap()).unwrap();
        prop_assert!(lhs.same_function(&rhs));
    }

    #[test]
    fn lattice_sort_matches_pointwise_and_keeps_values(fs in fns_strategy(4)) {
        let p = FactoredPoly::new(fs.clone()).unwrap();
        let a = sort_roots_lattice(&p).unwrap();
        let b = sort_roots_pointwise(&p).unwrap();
        prop_assert!(a.is_sorted());
        for (x, y) in a.roots().iter().zip(b.roots()) {
            prop_assert!(x.same_function(y));
        }
        let mut all = fs.clone();
        all.extend(a.roots().iter().cloned());
        let (d, all) = refine(p.domain(), &all).unwrap();
        for x in 0..d.num_vertices() {
            let mut before: Vec<&Rational> = all[..4].iter().map(|f| f.value(x)).collect();
            let after: Vec<&Rational> = all[4..].iter().map(|f| f.value(x)).collect();
            before.sort();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn sign_profile_ignores_root_order(fs in fns_strategy(4), rot in 0usize..3) {
        let u = fs[3].clone();
        let mut roots = fs[..3].to_vec();
        let a = sign_profile(&FactoredPoly::new(roots.clone()).unwrap(), &u).unwrap();
        roots.rotate_left(rot + 1);
        let b = sign_profile(&FactoredPoly::new(roots).unwrap(), &u).unwrap();
        let (da, db) = (a.domain.clone(), b.domain.clone());
        prop_assert!(da.same_space(&db));
        for x in 0..da.num_vertices() {
            let y = db.vertex_of(da.point(x)).unwrap();
            prop_assert_eq!(a.sign(Cell::Vertex(x)), b.sign(Cell::Vertex(y)));
        }
        for e in 0..da.num_edges() {
            let c = db.locate(&da.midpoint(e)).unwrap();
            prop_assert_eq!(a.sign(Cell::Edge(e)), b.sign(c));
        }
    }

    #[test]
    fn predicate_closures_cover(fs in fns_strategy(1)) {
        let g = &fs[0];
        let sets = [Relation::Less, Relation::Greater, Relation::Equal].map(|r| closure_of_pred(g, r));
        let d = sets[0].domain().clone();
        prop_assert_eq!(ClosedSet::uncovered(&d, &[&sets[0], &sets[1], &sets[2]]), None);
    }

    #[test]
    fn interior_is_open_and_inside(gaps in prop::collection::vec(1i64..=4, 1..6), mask in prop::collection::vec(any::<bool>(), 11)) {
        let k = interval(&gaps);
        let s = closed(&k, &mask);
        let int = s.interior();
        prop_assert!(int.is_open());
        for c in k.cells() {
            prop_assert!(!int.contains(c) || s.contains(c));
        }
    }

    #[test]
    fn passing_patterns_survive_weaker_requirements(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let k = random_interval(&mut r, 2, 5);
        let n = k.num_cells();
        let mut mask = |p: f64| -> Vec<bool> { (0..n).map(|_| r.gen_bool(p)).collect() };
        let pat = CrochetPattern { x0: closed(&k, &mask(0.5)), x1: closed(&k, &mask(0.5)), x2: closed(&k, &mask(0.5)) };
        let (a, b) = (closed(&k, &mask(0.3)), closed(&k, &mask(0.3)));
        let (u, v) = (closed(&k, &mask(0.7)).interior(), closed(&k, &mask(0.7)).interior());
        let (a2, b2) = (a.intersection(&closed(&k, &mask(0.5))), b.intersection(&closed(&k, &mask(0.5))));
        let (u2, v2) = (u.union(&closed(&k, &mask(0.5)).interior()), v.union(&OpenSet::whole(&k)));
        let strong = check_pattern(&pat, &a, &b, &u, &v);
        let weak = check_pattern(&pat, &a2, &b2, &u2, &v2);
        prop_assert!(weak.violations.len() <= strong.violations.len());
        if strong.passed() {
            prop_assert!(weak.passed());
        }
    }

    #[test]
    fn selection_search_agrees_with_enumeration(seed in any::<u64>(), n in 1usize..4) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let k = random_interval(&mut r, 2, 3);
        let roots: Vec<PLFunction> = (0..n).map(|_| random_fn(&mut r, &k)).collect();
        let (u, v) = (random_fn(&mut r, &k), random_fn(&mut r, &k));
        let p = FactoredPoly::new(roots).unwrap();
        let Ok(all) = oracle_bruteforce(&p, &u, &v, 12) else { return Ok(()) };
        let found = find_selection(&p, &u, &v, SelectOptions { check_signs: false, ..Default::default() }).unwrap();
        match found {
            SelectionResult::Found(w) => {
                prop_assert!(!all.is_empty());
                prop_assert_eq!(verify_selection(&p, &u, &v, &w).unwrap(), None);
            }
            SelectionResult::Obstructed(_) => prop_assert!(all.is_empty()),
        }
    }

    #[test]
    fn fspace_probe_matches_brute_force(gaps in prop::collection::vec(1i64..=4, 1..5), ys in prop::collection::vec(-2i64..=2, 5)) {
        let k = interval(&gaps);
        let f = PLFunction::new(k.clone(), ys[..k.num_vertices()].iter().map(|&y| rat(y, 1)).collect()).unwrap();
        let found = matches!(f_space_probe(&f).unwrap(), FSpaceProbe::Found(_));
        prop_assert_eq!(found, fspace_bruteforce(&f));
    }

    #[test]
    fn crooked_predicate_matches_definition(steps in prop::collection::vec(-1i64..=1, 0..14), links in 1usize..6) {
        let mut seq = vec![1usize];
        for s in steps {
            let next = (*seq.last().unwrap() as i64 + s).clamp(1, links as i64) as usize;
            seq.push(next);
        }
        prop_assert_eq!(is_crooked(&seq, links), naive_crooked(&seq));
    }

    #[test]
    fn problems_round_trip_through_json(fs in fns_strategy(4)) {
        let k = fs[0].domain().clone();
        let mut p = Problem::new(&k);
        for (name, f) in ["a", "b", "lo", "hi"].iter().zip(&fs) {
            p = p.with_function(name, f).unwrap();
        }
        let p = p.with_poly(&["b", "a"], "lo", "hi").unwrap();
        let text = p.to_json();
        let q = parse_problem(&text).unwrap();
        prop_assert_eq!(q.to_json(), text);
        prop_assert_eq!(&q.roots, &p.roots);
        for name in ["a", "b", "lo", "hi"] {
            prop_assert!(q.function(name).unwrap().same_function(p.function(name).unwrap()));
        }
    }

    #[test]
    fn pipeline_selections_verify(seed in any::<u64>(), n in 1usize..6) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (roots, u, v) = random_signed(&mut r, n);
        let k = u.domain().clone();
        let names: Vec<String> = (1..=n).map(|i| format!("f{i}")).collect();
        let mut p = Problem::new(&k).with_function("u", &u).unwrap().with_function("v", &v).unwrap();
        for (name, f) in names.iter().zip(&roots) {
            p = p.with_function(name, f).unwrap();
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let p = p.with_poly(&refs, "u", "v").unwrap();
        let solved = solve_problem(&p, &PipelineOptions::default()).unwrap();
        let poly = FactoredPoly::new(roots).unwrap();
        match &solved.result {
            SelectionResult::Found(w) => prop_assert_eq!(verify_selection(&poly, &u, &v, w).unwrap(), None),
            SelectionResult::Obstructed(_) => {
                if let Ok(all) = oracle_bruteforce(&poly, &u, &v, 12) {
                    prop_assert!(all.is_empty());
                }
            }
        }
        prop_assert!(solved.report.all_passed());
    }
}
