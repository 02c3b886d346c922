use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::arith::{int, ints};

fn w(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

fn cong(m: i64, r: &[i64]) -> IntSet {
    IntSet::congruence(int(m), ints(r)).unwrap()
}

fn tail(c: i64, r: i64) -> IntSet {
    IntSet::tail(int(c), int(r)).unwrap()
}

fn fin(xs: &[i64]) -> IntSet {
    IntSet::finite(ints(xs))
}

fn mat(s: &IntSet, lo: i64, hi: i64) -> Vec<Int> {
    s.materialize(&w(lo, hi), 1 << 20).unwrap()
}

fn brute(s: &IntSet, lo: i64, hi: i64) -> Vec<Int> {
    (lo..=hi).map(int).filter(|x| s.contains(x)).collect()
}

#[test]
fn membership_examples() {
    assert!(tail(0, 5).contains(&int(5)));
    assert!(!tail(0, 5).contains(&int(4)));
    assert!(cong(7, &[0, 1, 3]).contains(&int(10)));
    let a = IntSet::affine(Unit::Minus, int(-4), fin(&[0, 1, 3]));
    assert!(a.contains(&int(-7)));
    assert_eq!(mat(&a, -10, 10), ints(&[-7, -5, -4]));
}

#[test]
fn materialize_examples() {
    assert_eq!(mat(&tail(0, 5), -7, 7), ints(&[-7, -6, -5, 5, 6, 7]));
    assert_eq!(mat(&IntSet::cofinite(ints(&[2])), 0, 4), ints(&[0, 1, 3, 4]));
    let u = IntSet::Union(vec![cong(7, &[0, 1, 3]), tail(0, 100)]);
    assert_eq!(mat(&u, 0, 10), ints(&[0, 1, 3, 7, 8, 10]));
}

#[test]
fn oversized_window_is_an_error() {
    assert!(tail(0, 1).materialize(&w(0, 1000), 10).is_err());
}

#[test]
fn normalize_examples() {
    let x = cong(7, &[0, 1, 3]);
    assert_eq!(IntSet::affine(Unit::Plus, int(0), x.clone()).normalize(), x.normalize());
    assert_eq!(IntSet::Union(vec![fin(&[1]), fin(&[2])]).normalize(), fin(&[1, 2]));
    for q in 1..6 {
        let t = tail(0, q);
        assert_eq!(IntSet::affine(Unit::Minus, int(0), t.clone()).normalize(), t.normalize());
    }
}

#[test]
fn canonical_forms_of_basic_shapes() {
    assert_eq!(tail(3, 2).normalize(), tail(3, 2));
    assert_eq!(IntSet::half_tail(int(-4)).normalize(), IntSet::half_tail(int(-4)));
    assert_eq!(IntSet::lower_half(int(7)).normalize(), IntSet::lower_half(int(7)));
    assert_eq!(cong(12, &[0, 3, 6, 9]).normalize(), cong(3, &[0]));
    assert_eq!(cong(4, &[0, 1, 2, 3]).normalize(), IntSet::all());
    assert_eq!(IntSet::Union(vec![cong(2, &[0]), cong(2, &[1])]).normalize(), IntSet::all());
    // an even-length gap is not a centered tail
    assert_eq!(
        IntSet::cofinite(ints(&[0, 1])).normalize(),
        IntSet::cofinite(ints(&[0, 1]))
    );
    assert_eq!(
        IntSet::Intersection(vec![IntSet::half_tail(int(0)), IntSet::lower_half(int(3))])
            .normalize(),
        fin(&[0, 1, 2, 3])
    );
}

#[test]
fn half_tails_on_both_sides_join_into_a_tail() {
    let u = IntSet::Union(vec![IntSet::half_tail(int(5)), IntSet::lower_half(int(-5))]);
    assert_eq!(u.normalize(), tail(0, 5));
}

#[test]
fn intersect_truncated_examples() {
    let nested = [tail(0, 1), tail(0, 2), tail(0, 3)];
    assert_eq!(intersect_truncated(&nested).unwrap(), tail(0, 3));

    let f = cong(2, &[0]);
    let q_max = 12;
    let fam: Vec<IntSet> =
        (1..=q_max).map(|q| IntSet::Union(vec![f.clone(), tail(0, q)])).collect();
    let got = intersect_truncated(&fam).unwrap();
    let expect = IntSet::Union(vec![f, tail(0, q_max)]).normalize();
    assert_eq!(got, expect);

    let chain = [cong(7, &[0, 1, 3]), cong(14, &[0, 1, 3])];
    let got = intersect_truncated(&chain).unwrap();
    assert_eq!(got, cong(14, &[0, 1, 3]));
    assert_eq!(mat(&got, -50, 50), brute(&cong(14, &[0, 1, 3]), -50, 50));

    assert!(intersect_truncated(&[]).is_err());
}

#[test]
fn huge_moduli_fall_back_to_structural_form() {
    let big = int(7) << 80usize;
    let c = IntSet::congruence(big.clone(), ints(&[0, 1, 3])).unwrap();
    let n = c.normalize();
    for x in [0i64, 1, 2, 3, 4, 7] {
        assert_eq!(n.contains(&int(x)), c.contains(&int(x)));
    }
    assert!(n.contains(&(big + 3)));
    assert_eq!(c.canonical(), None);
}

#[test]
fn equivalence_detects_equal_and_different_sets() {
    let a = IntSet::Union(vec![cong(4, &[0]), fin(&[1])]);
    let b = IntSet::Union(vec![fin(&[1]), cong(8, &[0, 4])]);
    assert_eq!(a.equivalent(&b), Some(true));
    assert_eq!(a.equivalent(&cong(4, &[0])), Some(false));
    assert!(IntSet::cofinite(Vec::new()).is_all());
    assert!(!IntSet::nonzero().is_all());
}

#[test]
fn first_difference_uses_witness_order() {
    let a = IntSet::all();
    let b = IntSet::Union(vec![fin(&[0]), tail(0, 3)]);
    assert_eq!(a.first_difference(&b, &w(-10, 10)), Some(int(-1)));
}

#[test]
fn display_is_readable() {
    assert_eq!(alloc::format!("{}", cong(7, &[0, 1, 3])), "7Z+{0,1,3}");
    assert_eq!(alloc::format!("{}", IntSet::all()), "Z");
    assert_eq!(alloc::format!("{}", IntSet::lower_half(int(2))), "{x<=2}");
}

fn leaf() -> impl Strategy<Value = IntSet> {
    prop_oneof![
        Just(IntSet::Empty),
        prop::collection::vec(-15i64..15, 0..6).prop_map(|v| IntSet::finite(ints(&v))),
        prop::collection::vec(-15i64..15, 0..4).prop_map(|v| IntSet::cofinite(ints(&v))),
        (1i64..9, prop::collection::vec(0i64..9, 1..4))
            .prop_map(|(m, r)| IntSet::congruence(int(m), ints(&r)).unwrap()),
        (-8i64..8, 1i64..8).prop_map(|(c, r)| tail(c, r)),
        (-10i64..10).prop_map(|t| IntSet::half_tail(int(t))),
    ]
}

fn arb_set() -> impl Strategy<Value = IntSet> {
    leaf().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(IntSet::Union),
            prop::collection::vec(inner.clone(), 1..4).prop_map(IntSet::Intersection),
            (any::<bool>(), -6i64..6, inner).prop_map(|(neg, s, x)| {
                let u = if neg { Unit::Minus } else { Unit::Plus };
                IntSet::affine(u, int(s), x)
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn materialize_matches_contains(s in arb_set(), lo in -40i64..0, len in 0i64..60) {
        prop_assert_eq!(mat(&s, lo, lo + len), brute(&s, lo, lo + len));
    }

    #[test]
    fn normalize_preserves_members(s in arb_set()) {
        let n = s.normalize();
        prop_assert_eq!(mat(&n, -80, 80), mat(&s, -80, 80));
    }

    #[test]
    fn normalize_is_idempotent(s in arb_set()) {
        let n = s.normalize();
        prop_assert_eq!(n.normalize(), n);
    }

    #[test]
    fn equal_sets_get_identical_forms(s in arb_set(), shift in -5i64..5) {
        // the same set written two ways
        let back = IntSet::affine(Unit::Plus, int(-shift), s.shifted(&int(shift)));
        let doubled = IntSet::Union(vec![s.clone(), s.clone()]);
        prop_assert_eq!(back.normalize(), s.normalize());
        prop_assert_eq!(doubled.normalize(), s.normalize());
    }

    #[test]
    fn union_and_intersection_membership(a in arb_set(), b in arb_set(), x in -40i64..40) {
        let x = int(x);
        let u = IntSet::Union(vec![a.clone(), b.clone()]);
        let i = IntSet::Intersection(vec![a.clone(), b.clone()]);
        prop_assert_eq!(u.contains(&x), a.contains(&x) || b.contains(&x));
        prop_assert_eq!(i.contains(&x), a.contains(&x) && b.contains(&x));
        prop_assert_eq!(u.normalize().contains(&x), u.contains(&x));
        prop_assert_eq!(i.normalize().contains(&x), i.contains(&x));
    }

    #[test]
    fn shared_part_factors_out_of_truncations(
        f in prop::collection::vec(-12i64..12, 0..6),
        radii in prop::collection::vec(1i64..14, 1..8),
    ) {
        let f = IntSet::finite(ints(&f));
        let fam: Vec<IntSet> =
            radii.iter().map(|&q| IntSet::Union(vec![f.clone(), tail(0, q)])).collect();
        let tails: Vec<IntSet> = radii.iter().map(|&q| tail(0, q)).collect();
        let expect = IntSet::Union(vec![f, IntSet::Intersection(tails)]);
        prop_assert_eq!(
            mat(&intersect_truncated(&fam).unwrap(), -30, 30),
            mat(&expect, -30, 30)
        );
    }

    #[test]
    fn strictly_decreasing_truncations_lose_a_point_per_step(q_max in 1i64..20) {
        // A_q = {|r| >= q}: each A_q \ A_{q+1} = {±q} meets [-W, W]
        let fam: Vec<IntSet> = (1..=q_max).map(|q| tail(0, q)).collect();
        let cap = intersect_truncated(&fam).unwrap();
        let win = 25;
        let missing = (2 * win + 1) as usize - mat(&cap, -win, win).len();
        prop_assert!(missing as i64 >= q_max);
    }
}

#[test]
fn complements_and_first_members() {
    let a = IntSet::Union(vec![cong(4, &[0]), fin(&[1])]);
    let c = a.complement().unwrap();
    for x in -20..20 {
        assert_ne!(a.contains(&int(x)), c.contains(&int(x)));
    }
    assert_eq!(a.first_member(1 << 16), Some(Some(int(0))));
    assert_eq!(IntSet::Empty.first_member(1 << 16), Some(None));
    let far = IntSet::half_tail(int(-30)).minus(&IntSet::half_tail(int(-29))).unwrap();
    assert_eq!(far.first_member(1 << 16), Some(Some(int(-30))));
    let d = IntSet::all().minus(&IntSet::Union(vec![fin(&[0]), tail(0, 3)])).unwrap();
    assert_eq!(d.first_member(1 << 16), Some(Some(int(-1))));
}

proptest! {
    #[test]
    fn complement_flips_membership(s in arb_set(), x in -60i64..60) {
        if let Some(c) = s.complement() {
            prop_assert_ne!(c.contains(&int(x)), s.contains(&int(x)));
        }
    }

    #[test]
    fn first_member_is_smallest_in_witness_order(s in arb_set()) {
        if let Some(found) = s.first_member(1 << 16) {
            let scan = Window::symmetric(200).witness_order().find(|x| s.contains(x));
            prop_assert_eq!(found, scan);
        }
    }
}
