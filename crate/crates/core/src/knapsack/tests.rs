use std::collections::BTreeSet;
use std::time::Instant;

use super::*;
use crate::groups::{FiniteTable, Group, GroupSpec};
use crate::oracle::brute_solve;
use crate::semilinear::Valuation;

fn z2(name: &str) -> GroupSpec {
    GroupSpec::finite(name, FiniteTable::cyclic(2, &["e", name]).unwrap())
}

fn dihedral() -> Group {
    Group::new(z2("a").free_product(z2("b"))).unwrap()
}

fn f1z() -> Group {
    Group::new(GroupSpec::Free(1).direct_z()).unwrap()
}

fn k(g: &Group, text: &str) -> KnapsackExpression {
    KnapsackExpression::parse(g, text).unwrap()
}

fn val(pairs: &[(&str, u64)]) -> Valuation {
    pairs.iter().map(|&(x, n)| (x, n)).collect()
}

/// `enumerate_box(solve(E), b) == brute_solve(E, b)`, plus soundness of every point.
fn matches_oracle(g: &Group, text: &str, b: u64) {
    let e = k(g, text);
    let start = Instant::now();
    let set = Solver::new(g.clone()).solve(&e).unwrap();
    let elapsed = start.elapsed();
    let got = set.enumerate_box(b);
    let want = brute_solve(g, e.expr(), b).unwrap();
    assert_eq!(got, want, "{text} over {} (solved in {elapsed:?})", g.spec());
}

#[test]
fn binomial_counts_over_z() {
    let g = Group::free(1);
    for (n, count) in [(3u64, 10usize), (4, 35)] {
        let text = match n {
            3 => "a^x1 a^x2 a^x3 a^-3",
            _ => "a^x1 a^x2 a^x3 a^x4 a^-4",
        };
        let start = Instant::now();
        let set = Solver::new(g.clone()).solve(&k(&g, text)).unwrap();
        assert_eq!(set.enumerate_box(n).len(), count);
        assert!(start.elapsed().as_secs_f64() < 2.0, "{:?}", start.elapsed());
    }
}

#[test]
fn depth_one_examples() {
    let z = Group::free(1);
    let s = solve_depth1(&z, &z.parse_word("a").unwrap(), &z.parse_word("a^-7").unwrap(), "x", 1, 0).unwrap();
    assert_eq!(s.enumerate_box(20), BTreeSet::from([val(&[("x", 7)])]));
    let f2 = Group::free(2);
    let s = solve_depth1(&f2, &f2.parse_word("a").unwrap(), &f2.parse_word("b").unwrap(), "x", 1, 0).unwrap();
    assert!(s.is_empty());
    let s = solve_depth1(&f2, &f2.parse_word("a b").unwrap(), &[], "x", 1, 0).unwrap();
    assert_eq!(s.enumerate_box(20), BTreeSet::from([val(&[("x", 0)])]));
}

#[test]
fn depth_two_examples() {
    let f2 = Group::free(2);
    matches_oracle(&f2, "[a b]^x [a b]^-y", 20);
    matches_oracle(&f2, "a^x b^-y", 20);
    let z = Group::free(1);
    // v1 u1^x = u2^y v2 with v1 = a^3, v2 = ε
    matches_oracle(&z, "a^3 a^x a^-y", 20);
    let s = Solver::new(z.clone()).solve(&k(&z, "a^3 a^x a^-y")).unwrap();
    assert!(s.member(&val(&[("x", 40), ("y", 43)])).unwrap());
}

#[test]
fn positivity_split_examples() {
    let f2 = Group::free(2);
    let f = positivity_split(&k(&f2, "a^x a^-1"));
    assert_eq!(f.disjuncts.len(), 2);
    matches_oracle(&f2, "a^x a^-1", 10);
    matches_oracle(&f2, "a^x b^y a^-z b^-w", 10);
}

#[test]
fn torsion_examples() {
    let g = Group::new(z2("a")).unwrap();
    let branches = reduce_torsion(&g, &k(&g, "a^x")).unwrap();
    assert_eq!(branches.len(), 2);
    let s = Solver::new(g.clone()).solve(&k(&g, "a^x")).unwrap();
    assert_eq!(s, SemilinearSet_residue("x", 0, 2));
    matches_oracle(&dihedral(), "a^x b^y", 8);
    matches_oracle(&dihedral(), "[a b]^x a [b a]^y b", 8);
}

#[allow(non_snake_case)]
fn SemilinearSet_residue(x: &str, r: u64, m: u64) -> crate::semilinear::SemilinearSet {
    crate::semilinear::SemilinearSet::residue_class(x, r, m)
}

#[test]
fn normalization_examples() {
    let f2 = Group::free(2);
    matches_oracle(&f2, "[a b]^x [a b]^-3", 10);
    let np = normalize_power(&f2, &f2.parse_word("a b a^-1").unwrap()).unwrap();
    assert_eq!(np.len(), 1);
    assert_eq!(f2.format_word(&np[0].power), "b");
    matches_oracle(&f2, "[a b a^-1]^x a b^-5 a^-1", 10);
}

#[test]
fn polygon_examples() {
    let z = Group::free(1);
    let e = k(&z, "a^x a^y a^z a^-6");
    let set = Solver::new(z.clone()).solve(&e).unwrap();
    assert_eq!(set.enumerate_box(6).len(), 28);
    matches_oracle(&z, "a^x a^y a^z a^-6", 6);
    let f2 = Group::free(2);
    let want: BTreeSet<Valuation> = (0..=8)
        .flat_map(|n| [val(&[("x", n), ("y", 0), ("z", n), ("w", 0)]), val(&[("x", 0), ("y", n), ("z", 0), ("w", n)])])
        .collect();
    let set = Solver::new(f2.clone()).solve(&k(&f2, "a^x b^y a^-z b^-w")).unwrap();
    assert_eq!(set.enumerate_box(8), want);
}

#[test]
fn solve_examples() {
    let f2 = Group::free(2);
    // The commutator [a, b] is nontrivial, so no exponents work here...
    let s = Solver::new(f2.clone()).solve(&k(&f2, "a^x b^y a^-1 b^-1")).unwrap();
    assert!(s.is_empty());
    matches_oracle(&f2, "a^x b^y a^-1 b^-1", 10);
    // ...while free reduction of a^x b^y b^-1 a^-1 forces x = y = 1.
    let s = Solver::new(f2.clone()).solve(&k(&f2, "a^x b^y b^-1 a^-1")).unwrap();
    assert_eq!(s.enumerate_box(10), BTreeSet::from([val(&[("x", 1), ("y", 1)])]));
    let g = f1z();
    let s = Solver::new(g.clone()).solve(&k(&g, "[a t]^x a^-2 t^-2")).unwrap();
    assert_eq!(s.enumerate_box(10), BTreeSet::from([val(&[("x", 2)])]));
    matches_oracle(&g, "[a t]^x a^y t^-z a^-3", 8);
}

#[test]
fn decide_examples() {
    let f2 = Group::free(2);
    let solver = Solver::new(f2.clone());
    let d = solver.decide(&k(&f2, "a^x a^-5"), Route::Auto, None).unwrap();
    assert!(d.answer);
    assert_eq!(d.witness, Some(val(&[("x", 5)])));
    assert!(!solver.decide(&k(&f2, "a^x b^-1"), Route::Auto, None).unwrap().answer);
    let g = dihedral();
    let d = Solver::new(g.clone()).decide(&k(&g, "[a b]^x [a b]^-4"), Route::Grid, Some(10)).unwrap();
    assert!(d.answer);
    assert_eq!(d.witness, Some(val(&[("x", 4)])));
}

#[test]
fn routes_agree() {
    let f2 = Group::free(2);
    let solver = Solver::new(f2.clone());
    for text in ["a^x b^y a^-2 b^-3", "a^x b^y a^-z", "[a b]^x b^-1 a^-1 [b a]^-y", "a^x b a^-y b^-1"] {
        let e = k(&f2, text);
        let a = solver.decide(&e, Route::Semilinear, None).unwrap();
        let b = solver.decide(&e, Route::Grid, None).unwrap();
        assert_eq!(a.answer, b.answer, "{text}");
    }
}

#[test]
fn free_product_needs_a_bound() {
    let g = Group::new(z2("a").free_product(GroupSpec::Free(1).direct_z())).unwrap();
    let e = k(&g, "left.a^x");
    let solver = Solver::new(g);
    assert!(matches!(solver.solve(&e), Err(KnapsackError::Unsupported(_))));
    assert!(matches!(solver.decide(&e, Route::Auto, None), Err(KnapsackError::BoundRequired)));
    assert!(solver.decide(&e, Route::Auto, Some(3)).unwrap().answer);
}

#[test]
fn systems() {
    let z = Group::free(1);
    let solver = Solver::new(z.clone());
    let ex = |t: &str| ExponentExpression::parse(&z, t).unwrap();
    assert!(solver.solve_system(&[ex("a^x a^-2"), ex("a^x a^-2")]).unwrap().witness.is_some());
    assert!(solver.solve_system(&[ex("a^x a^-2"), ex("a^x a^-3")]).unwrap().witness.is_none());
    let s = solver.solve_system(&[ex("a^x a^y a^-4"), ex("a^x a^-y")]).unwrap();
    assert_eq!(s.witness, Some(val(&[("x", 2), ("y", 2)])));
    // Repeated variable inside one expression: x + x = 6.
    let s = solver.solve_system(&[ex("a^x a^x a^-6")]).unwrap();
    assert_eq!(s.set.enumerate_box(10), BTreeSet::from([val(&[("x", 3)])]));
}

