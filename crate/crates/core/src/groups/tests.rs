use std::collections::HashMap;
use std::path::Path;

use proptest::prelude::*;

use super::*;

fn z2(name: &str) -> GroupSpec {
    GroupSpec::finite(name, FiniteTable::cyclic(2, &["e", name]).unwrap())
}

/// ℤ/2 * ℤ/2 with generators `left.a`, `right.b`.
fn dihedral() -> Group {
    Group::new(z2("a").free_product(z2("b"))).unwrap()
}

fn f1_times_z() -> Group {
    Group::new(GroupSpec::Free(1).direct_z()).unwrap()
}

fn w(g: &Group, s: &str) -> Word {
    g.parse_word(s).unwrap()
}

/// All words of length ≤ `n` in shortlex order.
fn words_upto(alphabet: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &layer {
            for l in 0..alphabet as Letter {
                let mut q = p.clone();
                q.push(l);
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn free_word_problem() {
    let g = Group::free(2);
    assert!(g.word_problem(&w(&g, "a b b^-1 a^-1")).unwrap());
    assert!(!g.word_problem(&w(&g, "a b a^-1 b^-1")).unwrap());
}

#[test]
fn dihedral_word_problem() {
    let g = dihedral();
    assert!(!g.word_problem(&w(&g, "a b a b a b")).unwrap());
    assert!(g.word_problem(&w(&g, "a b b a")).unwrap());
}

#[test]
fn out_of_range_letter_is_an_error() {
    let g = Group::free(2);
    assert_eq!(g.word_problem(&[7]), Err(GroupError::LetterOutOfRange(7)));
}

#[test]
fn unknown_and_ambiguous_names() {
    let g = Group::free(2);
    assert!(matches!(g.parse_word("c"), Err(GroupError::UnknownSymbol(_))));
    let fp = Group::new(GroupSpec::Free(2).free_product(GroupSpec::Free(2))).unwrap();
    assert!(matches!(fp.parse_word("a"), Err(GroupError::AmbiguousSymbol(..))));
    assert_eq!(fp.parse_word("right.a").unwrap(), vec![4]);
}

#[test]
fn shortlex_examples() {
    let g = Group::free(2);
    assert_eq!(g.shortlex_reduce(&w(&g, "a a^-1 b")).unwrap(), w(&g, "b"));
    let h = f1_times_z();
    assert_eq!(h.shortlex_reduce(&w(&h, "t a")).unwrap(), w(&h, "a t"));
}

#[test]
fn ball_sizes_free() {
    let g = Group::free(2);
    let sizes: Vec<usize> = (0..=3).map(|r| g.ball(r).unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 5, 17, 53]);
    assert_eq!(g.ball(0).unwrap(), vec![Vec::<Letter>::new()]);
    let b1 = g.ball(1).unwrap();
    assert_eq!(b1, vec![vec![], vec![0], vec![1], vec![2], vec![3]]);
}

#[test]
fn ball_is_monotone_and_sorted() {
    for g in [Group::free(2), dihedral(), f1_times_z()] {
        for r in 0..4 {
            let small = g.ball(r).unwrap();
            let big = g.ball(r + 1).unwrap();
            assert!(small.iter().all(|x| big.contains(x)));
            let sorted = big.windows(2).all(|p| (p[0].len(), &p[0]) < (p[1].len(), &p[1]));
            assert!(sorted, "ball not in shortlex order for {g:?}");
        }
    }
}

#[test]
fn ball_cap_is_reported() {
    let g = Group::free(2);
    assert_eq!(
        g.ball_elements(3, 10).unwrap_err(),
        GroupError::BallCap { radius: 3, cap: 10 }
    );
}

#[test]
fn finite_ball() {
    let t = FiniteTable::cyclic(3, &["e", "a", "b"]).unwrap();
    let g = Group::new(GroupSpec::finite("z3", t)).unwrap();
    assert_eq!(g.ball(2).unwrap().len(), 3);
}

#[test]
fn orders() {
    let g = Group::free(2);
    assert_eq!(g.order_of(&[]).unwrap(), Order::Finite(1));
    assert_eq!(g.order_of(&w(&g, "a b")).unwrap(), Order::Infinite);
    let d = dihedral();
    assert_eq!(d.order_of(&w(&d, "a")).unwrap(), Order::Finite(2));
    assert_eq!(d.order_of(&w(&d, "a b")).unwrap(), Order::Infinite);
    // Conjugates of torsion elements stay torsion.
    assert_eq!(d.order_of(&w(&d, "b a b")).unwrap(), Order::Finite(2));
    let h = f1_times_z();
    assert_eq!(h.order_of(&w(&h, "t a t^-1 a^-1")).unwrap(), Order::Finite(1));
}

#[test]
fn order_definition_holds() {
    let d = dihedral();
    for word in words_upto(d.alphabet_size(), 6) {
        if let Order::Finite(n) = d.order_of(&word).unwrap() {
            for m in 1..=n {
                let p: Word = word.iter().cycle().take(word.len() * m as usize).copied().collect();
                assert_eq!(d.is_one(&p), m == n, "{word:?}^{m}");
            }
        }
    }
}

#[test]
fn geodesic_lengths() {
    let g = Group::free(2);
    assert_eq!(g.geodesic_length(&w(&g, "a b a b")).unwrap(), 4);
    assert_eq!(g.geodesic_length(&w(&g, "a a^-1")).unwrap(), 0);
    let h = f1_times_z();
    assert_eq!(h.geodesic_length(&w(&h, "a t a^-1")).unwrap(), 1);
}

#[test]
fn constants_free_and_finite() {
    let g = Group::free(2);
    let c = g.constants().unwrap();
    assert_eq!((c.delta, c.n, c.l, c.k_eh), (0, 1, 2, 1));
    assert_eq!((c.lambda, c.epsilon), (5, 60));
    assert_eq!(g.constants_for_word(&w(&g, "a b a")).unwrap(), (3, 24));

    let z = Group::new(z2("a")).unwrap();
    let c = z.constants().unwrap();
    assert_eq!((c.delta, c.l), (1, 36));

    assert!(matches!(
        f1_times_z().constants(),
        Err(GroupError::NotHyperbolic(_))
    ));
}

#[test]
fn quasigeodesic_examples() {
    let g = Group::free(2);
    let geo = w(&g, "a b a^-1 b");
    assert!(g.is_local_quasigeodesic(&geo, 1, 0, None));
    let back: Word = w(&g, "a a^-1").repeat(5);
    assert!(!g.is_local_quasigeodesic(&back, 1, 0, None));
    assert!(g.is_local_quasigeodesic(&w(&g, "a b").repeat(10), 1, 0, None));
}

#[test]
fn powers_of_geodesics_are_quasigeodesic() {
    use rand::{Rng, SeedableRng};
    let g = Group::free(2);
    let c = g.constants().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let len = rng.gen_range(1..6);
        let raw: Word = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let geo = g.shlex(&raw);
        if geo.is_empty() {
            continue;
        }
        let (lambda, eps) = c.for_word_length(geo.len() as u64);
        for n in 1..=10 {
            assert!(g.is_local_quasigeodesic(&geo.repeat(n), lambda, eps, None));
        }
    }
}

/// Shortlex normal forms agree with brute-force minimal words, and the word
/// problem agrees with the normal form, for every test backend.
#[test]
fn normal_forms_are_shortlex_minimal() {
    let groups = [
        Group::free(2),
        dihedral(),
        f1_times_z(),
        Group::new(z2("a")).unwrap(),
        Group::new(GroupSpec::Free(1).free_product(z2("b"))).unwrap(),
    ];
    for g in groups {
        let mut first: HashMap<Element, Word> = HashMap::new();
        let all = words_upto(g.alphabet_size(), 4);
        for word in &all {
            first.entry(g.eval(word)).or_insert_with(|| word.clone());
        }
        for word in words_upto(g.alphabet_size(), 4) {
            let e = g.eval(&word);
            let nf = g.element_word(&e);
            // Every element here has a representative of length ≤ 4, so the
            // shortlex-least one was enumerated.
            assert_eq!(&nf, &first[&e], "{g:?}: {word:?}");
            assert_eq!(g.is_one(&word), nf.is_empty());
            assert_eq!(g.element_length(&e), nf.len() as u64);
        }
    }
}

/// Independent reducers for ℤ/2*ℤ/2 (cancel `aa`, `bb`) and F1×ℤ (count).
#[test]
fn word_problem_matches_independent_reducers() {
    let d = dihedral();
    for word in words_upto(2, 8) {
        let mut stack: Vec<Letter> = Vec::new();
        for &l in &word {
            if stack.last() == Some(&l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        assert_eq!(d.is_one(&word), stack.is_empty());
    }
    let h = f1_times_z();
    for word in words_upto(4, 5) {
        let count = |p: Letter, n: Letter| {
            word.iter().filter(|&&l| l == p).count() as i64
                - word.iter().filter(|&&l| l == n).count() as i64
        };
        assert_eq!(h.is_one(&word), count(0, 1) == 0 && count(2, 3) == 0);
    }
}

#[test]
fn spec_parsing_and_display() {
    let dir = std::env::temp_dir().join(format!("hypersack-groups-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("z2.txt"), "e,a\ne,a\na,e\n").unwrap();

    let s = GroupSpec::parse("(finite:z2.txt) * (F2)", &dir).unwrap();
    assert!(matches!(s, GroupSpec::FreeProduct(..)));
    let g = Group::new(s).unwrap();
    assert_eq!(g.alphabet_size(), 5);
    assert_eq!(g.letter_name(1), "right.a");

    let s = GroupSpec::parse("((Z) x Z) x Z", Path::new(".")).unwrap();
    let g = Group::new(s.clone()).unwrap();
    assert_eq!(g.letter_name(2), "t1");
    assert_eq!(g.letter_name(5), "t2^-1");
    assert_eq!(GroupSpec::parse(&s.to_string(), Path::new(".")).unwrap(), s);

    assert!(matches!(
        GroupSpec::parse("F0", Path::new(".")),
        Err(GroupError::Parse { .. })
    ));
    assert!(matches!(
        GroupSpec::parse("(F2) x Q", Path::new(".")),
        Err(GroupError::Parse { pos: 8, .. })
    ));
    std::fs::remove_dir_all(&dir).ok();
}

fn arb_word(alphabet: u16) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..alphabet, 0..24)
}

proptest! {
    #[test]
    fn shortlex_is_idempotent_and_equivalent(wd in arb_word(5)) {
        let g = Group::new(z2("a").free_product(GroupSpec::Free(1)).direct_z()).unwrap();
        let s = g.shlex(&wd);
        prop_assert_eq!(g.shlex(&s), s.clone());
        let mut check = wd.clone();
        check.extend(g.inverse_word(&s));
        prop_assert!(g.is_one(&check));
        prop_assert!(s.len() <= wd.len());
    }

    #[test]
    fn free_shortlex_idempotent(wd in arb_word(4)) {
        let g = Group::free(2);
        let s = g.shlex(&wd);
        prop_assert_eq!(g.shlex(&s), s);
    }
}
