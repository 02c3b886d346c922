use intersets_core::hset::{compute_h, transfer_affine, AnalyzerConfig, HStatus};
use intersets_core::sumset::{brute_count, brute_hfold, representation_count, symbolic_hfold_sum, try_closed_hfold_sum, Mode, RepCount};
use intersets_core::window::DEFAULT_WINDOW_CAP;
use intersets_core::{Family, FamilySpec, Int, IntSet, Unit, Window};
use proptest::prelude::*;

fn n(v: i64) -> Int {
    Int::from(v)
}

fn w(lo: i64, hi: i64) -> Window {
    Window { lo: n(lo), hi: n(hi) }
}

fn periodic() -> impl Strategy<Value = IntSet> {
    (1i64..7, prop::collection::vec(0i64..7, 1..4), prop::collection::vec(-10i64..10, 0..4)).prop_map(|(m, rs, extra)| {
        IntSet::Union(vec![
            IntSet::congruence(n(m), rs.into_iter().map(|r| n(r % m))).unwrap(),
            IntSet::finite(extra.into_iter().map(n)),
        ])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finite_sumsets_match_enumeration(xs in prop::collection::vec(-15i64..15, 1..7), h in 1usize..5) {
        let elems: Vec<Int> = xs.into_iter().map(n).collect();
        let set = IntSet::finite(elems.clone());
        let mut sorted = elems.clone();
        sorted.sort();
        sorted.dedup();
        let expect = brute_hfold(&sorted, h);
        let reach = 15 * h as i64;
        let got = symbolic_hfold_sum(&set, h, &w(-reach, reach), &n(reach)).unwrap()
            .members_in(&w(-reach, reach), DEFAULT_WINDOW_CAP).unwrap();
        prop_assert_eq!(got, expect);
        for x in [-7i64, 0, 3, 11] {
            let c = representation_count(&set, h, &n(x), Mode::Additive, &n(reach)).unwrap();
            prop_assert_eq!(c, RepCount::Exact(brute_count(&sorted, h, &n(x), Mode::Additive)));
        }
    }

    #[test]
    fn periodic_closed_forms_agree_with_truncated_sums(set in periodic(), h in 1usize..4) {
        let closed = try_closed_hfold_sum(&set, h);
        prop_assume!(closed.is_some());
        let closed = closed.unwrap();
        let inner = w(-20, 20);
        let sample: Vec<Int> = set.materialize(&w(-80, 80), DEFAULT_WINDOW_CAP).unwrap();
        let truncated: Vec<Int> = brute_hfold(&sample, h).into_iter().filter(|x| inner.contains(x)).collect();
        prop_assert_eq!(closed.materialize(&inner, DEFAULT_WINDOW_CAP).unwrap(), truncated);
    }

    #[test]
    fn tail_families_are_affinely_invariant(core in periodic(), t in -6i64..6, flip in any::<bool>()) {
        let cfg = AnalyzerConfig { h_max: 3, q: 6, window: w(-20, 20), gen_radius: n(100), ..AnalyzerConfig::default() };
        let unit = if flip { Unit::Minus } else { Unit::Plus };
        let spec = FamilySpec::Tail { core };
        let before = compute_h(&Family::new(spec.clone()).unwrap(), &cfg).unwrap();
        let moved = FamilySpec::Affine { unit, shift: n(t), inner: Box::new(spec) };
        let after = compute_h(&Family::new(moved).unwrap(), &cfg).unwrap();
        prop_assert!(before.same_statuses(&after));
        prop_assert!(transfer_affine(&before, unit, &n(t)).same_statuses(&after));
        prop_assert_eq!(&before.verdicts[0].status, &HStatus::CertifiedIn);
    }
}

#[test]
fn tail_family_has_h_equal_to_one() {
    let f = Family::new(FamilySpec::Tail { core: IntSet::Empty }).unwrap();
    let r = compute_h(&f, &AnalyzerConfig::default()).unwrap();
    assert_eq!(r.h_set(), vec![1]);
}
