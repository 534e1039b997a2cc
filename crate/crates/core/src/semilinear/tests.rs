use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use super::*;

fn val(pairs: &[(&str, u64)]) -> Valuation {
    pairs.iter().map(|(k, v)| (*k, *v)).collect()
}

fn lin(offset: &[(&str, u64)], periods: &[&[(&str, u64)]]) -> SemilinearSet {
    SemilinearSet::from_linear(
        LinearSet::new(val(offset), periods.iter().map(|p| val(p)).collect()).unwrap(),
    )
}

fn diag() -> SemilinearSet {
    lin(&[("x", 0), ("y", 0)], &[&[("x", 1), ("y", 1)]])
}

#[test]
fn union_with_empty_is_identity() {
    let s = diag();
    let u = s.union(&SemilinearSet::empty(["x", "y"])).unwrap();
    assert_eq!(u, s);
    assert_eq!(u.magnitude(), 1);
}

#[test]
fn union_of_points() {
    let u = lin(&[("x", 1), ("y", 0)], &[])
        .union(&lin(&[("x", 0), ("y", 1)], &[]))
        .unwrap();
    assert_eq!(u.num_components(), 2);
    let pts = u.enumerate_box(5);
    assert_eq!(pts.len(), 2);
    assert!(pts.contains(&val(&[("x", 1), ("y", 0)])));
    assert!(pts.contains(&val(&[("x", 0), ("y", 1)])));
}

#[test]
fn union_rejects_mismatched_variables() {
    let err = diag().union(&SemilinearSet::empty(["x"])).unwrap_err();
    assert!(matches!(err, SemilinearError::VariableMismatch { .. }));
}

#[test]
fn oplus_points_and_empty() {
    let a = SemilinearSet::singleton(&val(&[("x", 1)]));
    let b = SemilinearSet::singleton(&val(&[("y", 2)]));
    let s = a.oplus(&b).unwrap();
    assert_eq!(s.enumerate_box(3).into_iter().collect::<Vec<_>>(), vec![val(&[("x", 1), ("y", 2)])]);
    assert!(a.oplus(&SemilinearSet::empty(["y"])).unwrap().is_empty());
    assert!(matches!(
        a.oplus(&a).unwrap_err(),
        SemilinearError::OverlappingVariables(_)
    ));
}

#[test]
fn scale_shift_makes_odd_numbers() {
    let s = SemilinearSet::universal(["x"]);
    let odd = s.scale_shift(&val(&[("x", 2)]), &val(&[("x", 1)])).unwrap();
    let pts: Vec<u64> = odd.enumerate_box(9).iter().map(|v| v.get("x").unwrap()).collect();
    assert_eq!(pts, vec![1, 3, 5, 7, 9]);
    assert_eq!(
        s.scale_shift(&val(&[("x", 0)]), &val(&[("x", 0)])).unwrap_err(),
        SemilinearError::ZeroScale("x".into())
    );
}

#[test]
fn intersect_diagonal_with_double() {
    let double = lin(&[("x", 0), ("y", 0)], &[&[("x", 1), ("y", 2)]]);
    let i = diag().intersect(&double).unwrap();
    assert_eq!(
        i.enumerate_box(20).into_iter().collect::<Vec<_>>(),
        vec![val(&[("x", 0), ("y", 0)])]
    );
}

#[test]
fn intersect_shifted_diagonal_is_empty() {
    let shifted = lin(&[("x", 0), ("y", 2)], &[&[("x", 1), ("y", 1)]]);
    let i = diag().intersect(&shifted).unwrap();
    assert!(i.is_empty());
}

#[test]
fn project_point() {
    let s = SemilinearSet::singleton(&val(&[("x", 1), ("y", 2)]));
    let p = s.project(&["x"]).unwrap();
    assert_eq!(p, SemilinearSet::singleton(&val(&[("x", 1)])));
    assert_eq!(s.project(&["x", "y"]).unwrap(), s);
    assert!(matches!(
        s.project(&["z"]).unwrap_err(),
        SemilinearError::UnknownVariable(_)
    ));
}

#[test]
fn membership_on_diagonal() {
    let s = diag();
    assert!(s.member(&val(&[("x", 0), ("y", 0)])).unwrap());
    assert!(!s.member(&val(&[("x", 1), ("y", 2)])).unwrap());
}

#[test]
fn magnitude_examples() {
    assert_eq!(diag().magnitude(), 1);
    assert_eq!(SemilinearSet::empty(["x"]).magnitude(), 0);
}

#[test]
fn enumerate_diagonal_box() {
    let pts = diag().enumerate_box(3);
    let expected: BTreeSet<Valuation> = (0..=3).map(|n| val(&[("x", n), ("y", n)])).collect();
    assert_eq!(pts, expected);
    assert!(SemilinearSet::empty(["x"]).enumerate_box(10).is_empty());
}

#[test]
fn restrict_positive_matches_filter() {
    let s = lin(&[("x", 0), ("y", 1)], &[&[("x", 1), ("y", 0)], &[("x", 2), ("y", 1)]]);
    let r = s.restrict_positive("x").unwrap();
    let expected: BTreeSet<Valuation> = s
        .enumerate_box(8)
        .into_iter()
        .filter(|v| v.get("x").unwrap() >= 1)
        .collect();
    assert_eq!(r.enumerate_box(8), expected);
}

#[test]
fn affine_coordinate_agrees_with_equation_route() {
    let s = SemilinearSet::universal(["a", "b"]);
    let via_affine = s.add_affine_coordinate("z", &["a", "b"], 1).unwrap();
    let coeffs: BTreeMap<String, i64> =
        [("z".to_owned(), 1), ("a".to_owned(), -1), ("b".to_owned(), -1)].into();
    let via_equation = s
        .extend_universal(&["z"])
        .unwrap()
        .intersect_equation(&coeffs, 1)
        .unwrap();
    assert_eq!(via_affine.enumerate_box(9), via_equation.enumerate_box(9));
}

#[test]
fn text_round_trip() {
    let s = lin(&[("x", 2), ("y", 0)], &[&[("x", 1), ("y", 0)], &[("x", 0), ("y", 3)]])
        .union(&SemilinearSet::singleton(&val(&[("x", 0), ("y", 1)])))
        .unwrap();
    let text = s.to_text();
    assert_eq!(parse_semilinear(&text).unwrap(), s);
    let empty_vars = SemilinearSet::universal(Vec::<String>::new());
    assert_eq!(parse_semilinear(&empty_vars.to_text()).unwrap(), empty_vars);
}

#[test]
fn parse_reports_line_numbers() {
    let err = parse_semilinear("vars: x\nx=1\nx=q\n").unwrap_err();
    assert!(matches!(err, SemilinearError::Parse { line: 3, .. }));
}

#[test]
fn construction_order_does_not_change_text() {
    let a = lin(&[("x", 1), ("y", 0)], &[&[("x", 0), ("y", 1)], &[("x", 1), ("y", 1)]]);
    let b = lin(&[("x", 1), ("y", 0)], &[&[("x", 1), ("y", 1)], &[("x", 0), ("y", 1)]]);
    let c = SemilinearSet::singleton(&val(&[("x", 5), ("y", 5)]));
    assert_eq!(
        a.union(&c).unwrap().to_text(),
        c.union(&b).unwrap().to_text()
    );
}

// ---------------------------------------------------------------------------
// Property tests: every operation is exact on small boxes.

const VARS: [&str; 2] = ["x", "y"];
const BOX: u64 = 12;

fn arb_set(vars: &'static [&'static str]) -> impl Strategy<Value = SemilinearSet> {
    let d = vars.len();
    let vec = move || prop::collection::vec(0u64..4, d);
    let comp = (vec(), prop::collection::vec(vec(), 0..3));
    prop::collection::vec(comp, 0..3).prop_map(move |comps| {
        SemilinearSet::from_raw(vars.iter().map(|s| s.to_string()).collect(), comps)
    })
}

fn vecs(s: &SemilinearSet, b: u64) -> BTreeSet<Vec<u64>> {
    s.enumerate_box_vectors(b)
}

/// Brute-force box filter via `member`.
fn filtered(s: &SemilinearSet, b: u64) -> BTreeSet<Vec<u64>> {
    let d = s.variables().len();
    let mut out = BTreeSet::new();
    let mut cur = vec![0u64; d];
    loop {
        let v = Valuation::from_vector(s.variables(), &cur);
        if s.member(&v).unwrap() {
            out.insert(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= b {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerate_matches_member(s in arb_set(&VARS)) {
        prop_assert_eq!(vecs(&s, 8), filtered(&s, 8));
    }

    #[test]
    fn union_is_exact(s in arb_set(&VARS), t in arb_set(&VARS)) {
        let u = s.union(&t).unwrap();
        let expected: BTreeSet<_> = vecs(&s, BOX).union(&vecs(&t, BOX)).cloned().collect();
        prop_assert_eq!(vecs(&u, BOX), expected);
        prop_assert!(u.magnitude() <= s.magnitude().max(t.magnitude()));
    }

    #[test]
    fn intersect_is_exact(s in arb_set(&VARS), t in arb_set(&VARS)) {
        let i = s.intersect(&t).unwrap();
        let expected: BTreeSet<_> = vecs(&s, BOX).intersection(&vecs(&t, BOX)).cloned().collect();
        prop_assert_eq!(vecs(&i, BOX), expected);
    }

    #[test]
    fn oplus_is_exact(s in arb_set(&["x"]), t in arb_set(&["y"])) {
        let o = s.oplus(&t).unwrap();
        let mut expected = BTreeSet::new();
        for a in vecs(&s, BOX) {
            for b in vecs(&t, BOX) {
                expected.insert(vec![a[0], b[0]]);
            }
        }
        prop_assert_eq!(vecs(&o, BOX), expected);
        prop_assert!(o.magnitude() <= s.magnitude().max(t.magnitude()));
    }

    #[test]
    fn scale_shift_is_exact(s in arb_set(&VARS), m in (1u64..3, 1u64..3), d in (0u64..3, 0u64..3)) {
        let mv = val(&[("x", m.0), ("y", m.1)]);
        let dv = val(&[("x", d.0), ("y", d.1)]);
        let r = s.scale_shift(&mv, &dv).unwrap();
        let expected: BTreeSet<_> = vecs(&s, BOX)
            .into_iter()
            .map(|v| vec![v[0] * m.0 + d.0, v[1] * m.1 + d.1])
            .filter(|v| v.iter().all(|&x| x <= BOX))
            .collect();
        prop_assert_eq!(vecs(&r, BOX), expected);
        prop_assert!(r.magnitude() <= m.0.max(m.1) * s.magnitude() + d.0.max(d.1));
    }

    #[test]
    fn project_is_exact(s in arb_set(&VARS)) {
        let p = s.project(&["x"]).unwrap();
        prop_assert!(p.magnitude() <= s.magnitude());
        // Every projected point in the box lifts to some member; periods with
        // a zero x-entry make the fibre infinite, so compare on a wider box.
        let lifted: BTreeSet<_> = vecs(&s, 4 * BOX).into_iter().map(|v| vec![v[0]]).filter(|v| v[0] <= BOX).collect();
        prop_assert_eq!(vecs(&p, BOX), lifted);
    }

    #[test]
    fn restrict_positive_is_exact(s in arb_set(&VARS)) {
        let r = s.restrict_positive("y").unwrap();
        let expected: BTreeSet<_> = vecs(&s, BOX).into_iter().filter(|v| v[1] >= 1).collect();
        prop_assert_eq!(vecs(&r, BOX), expected);
    }

    #[test]
    fn equation_is_exact(s in arb_set(&VARS), a in -2i64..3, b in -2i64..3, c in -3i64..6) {
        let coeffs: BTreeMap<String, i64> = [("x".to_owned(), a), ("y".to_owned(), b)].into();
        let r = s.intersect_equation(&coeffs, c).unwrap();
        let expected: BTreeSet<_> = vecs(&s, BOX)
            .into_iter()
            .filter(|v| a * v[0] as i64 + b * v[1] as i64 == c)
            .collect();
        prop_assert_eq!(vecs(&r, BOX), expected);
    }

    #[test]
    fn text_round_trips(s in arb_set(&VARS)) {
        prop_assert_eq!(parse_semilinear(&s.to_text()).unwrap(), s);
    }
}
