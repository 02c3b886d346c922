//! Exact rational point families and unions of open intervals with rational
//! endpoints, with their h-fold sums.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Int;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContinuumError {
    #[error("need b_1 > 1, got {0}")]
    FirstBase(Int),
    #[error("need b_(n+1) > b_n + 2, got {0} after {1}")]
    Gap(Int, Int),
    #[error("base sequence has {have} points, n_max is {want}")]
    TooFewBasePoints { have: usize, want: usize },
    #[error("bounds must be at least 1")]
    Bounds,
    #[error("q = {q} is outside 1..={r_max}")]
    Q { q: usize, r_max: usize },
    #[error("h must be at least {0}")]
    H(usize),
    #[error("need 2h < Q, got h = {h}, Q = {q}")]
    DepthTooSmall { h: usize, q: usize },
    #[error("need r_max >= 2Q = {need}, got {r_max}")]
    RadiusTooSmall { need: usize, r_max: usize },
    #[error("empty interval ({0}, {1})")]
    EmptyInterval(String, String),
    #[error("{0} points exceed the cap {1}")]
    Cap(usize, usize),
    #[error("scaled values exceed 128-bit arithmetic; lower r_max or the window")]
    Overflow,
}

/// Base points `b_1 < b_2 < ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSequence {
    Arithmetic { first: Int, step: Int },
    Explicit(Vec<Int>),
}

impl BaseSequence {
    pub fn take(&self, n: usize) -> Result<Vec<Int>, ContinuumError> {
        match self {
            BaseSequence::Arithmetic { first, step } => {
                Ok((0..n).map(|i| first + step * Int::from(i)).collect())
            }
            BaseSequence::Explicit(v) if v.len() >= n => Ok(v[..n].to_vec()),
            BaseSequence::Explicit(v) => Err(ContinuumError::TooFewBasePoints { have: v.len(), want: n }),
        }
    }
}

/// `b_1 > 1` and `b_(n+1) > b_n + 2`.
pub fn check_gaps(base: &[Int]) -> Result<(), ContinuumError> {
    if let Some(b1) = base.first() {
        if *b1 <= Int::one() {
            return Err(ContinuumError::FirstBase(b1.clone()));
        }
    }
    for w in base.windows(2) {
        if w[1] <= &w[0] + 2 {
            return Err(ContinuumError::Gap(w[1].clone(), w[0].clone()));
        }
    }
    Ok(())
}

/// `A_q = ∪_n { b_n + 1/r : q <= |r| <= r_max }`, with `b_n` added when
/// `include_base` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPerturbFamily {
    base: Vec<Int>,
    include_base: bool,
    r_max: usize,
}

/// Points of a family handled at once.
pub const POINT_CAP: usize = 1 << 16;

impl RationalPerturbFamily {
    pub fn new(base: &BaseSequence, include_base: bool, n_max: usize, r_max: usize) -> Result<Self, ContinuumError> {
        if n_max == 0 || r_max == 0 {
            return Err(ContinuumError::Bounds);
        }
        let base = base.take(n_max)?;
        check_gaps(&base)?;
        if n_max.saturating_mul(2 * r_max + 1) > POINT_CAP {
            return Err(ContinuumError::Cap(n_max * (2 * r_max + 1), POINT_CAP));
        }
        Ok(RationalPerturbFamily { base, include_base, r_max })
    }

    pub fn base(&self) -> &[Int] {
        &self.base
    }

    pub fn include_base(&self) -> bool {
        self.include_base
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// Common denominator `lcm(1, ..., r_max)`.
    fn scale(&self) -> Int {
        (1..=self.r_max).fold(Int::one(), |l, r| l.lcm(&Int::from(r)))
    }

    /// Points of `A_q` as numerators over [`Self::scale`], sorted.
    fn scaled_points(&self, q: usize, scale: &Int) -> Result<Vec<Int>, ContinuumError> {
        if q == 0 || q > self.r_max {
            return Err(ContinuumError::Q { q, r_max: self.r_max });
        }
        let mut out = Vec::new();
        for b in &self.base {
            let c = b * scale;
            if self.include_base {
                out.push(c.clone());
            }
            for r in q..=self.r_max {
                let d = scale / Int::from(r);
                out.push(&c - &d);
                out.push(&c + &d);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn set_at(&self, q: usize) -> Result<Vec<Rational>, ContinuumError> {
        let scale = self.scale();
        Ok(self
            .scaled_points(q, &scale)?
            .into_iter()
            .map(|n| Rational::new(n, scale.clone()))
            .collect())
    }
}

/// All `b_n + 1/r` with `n <= n_max`, `q <= |r| <= r_max`, plus `b_n` for the
/// primed variant, sorted.
pub fn rational_family_set(family: &RationalPerturbFamily, q: usize) -> Result<Vec<Rational>, ContinuumError> {
    family.set_at(q)
}

/// `h`-fold sums of positive sorted points, restricted to `[lo, hi]`.
fn bounded_hfold<T>(points: &[T], h: usize, zero: T, lo: &T, hi: &T) -> BTreeSet<T>
where
    T: Ord + Clone + for<'a> core::ops::Add<&'a T, Output = T>,
{
    // floor[k] = k * min, the least a sum of k more points can add
    let mut floor = vec![zero.clone()];
    if let Some(min) = points.first() {
        for k in 0..h {
            let next = floor[k].clone() + min;
            floor.push(next);
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn go<T>(points: &[T], floor: &[T], start: usize, left: usize, acc: T, lo: &T, hi: &T, out: &mut BTreeSet<T>)
    where
        T: Ord + Clone + for<'a> core::ops::Add<&'a T, Output = T>,
    {
        if left == 0 {
            if &acc >= lo {
                out.insert(acc);
            }
            return;
        }
        for i in start..points.len() {
            let next = acc.clone() + &points[i];
            if next.clone() + &floor[left - 1] > *hi {
                break;
            }
            go(points, floor, i, left - 1, next, lo, hi, out);
        }
    }
    let mut out = BTreeSet::new();
    if !points.is_empty() {
        go(points, &floor, 0, h, zero, lo, hi, &mut out);
    }
    out
}

fn narrow(x: &Int) -> Result<i128, ContinuumError> {
    i128::try_from(x).map_err(|_| ContinuumError::Overflow)
}

/// `hB*` inside `[lo, hi]`.
pub fn base_hfold(base: &[Int], h: usize, lo: &Rational, hi: &Rational) -> Vec<Int> {
    let lo = lo.ceil().to_integer();
    let hi = hi.floor().to_integer();
    bounded_hfold(base, h, Int::zero(), &lo, &hi).into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCheck {
    pub h: usize,
    pub q: usize,
    /// `hB*` in the window.
    pub centers: Vec<Int>,
    /// `|T|` in the window, `T = ⋂_{q <= Q} hA_q`.
    pub truncated_size: usize,
    /// Centers missing from `T`.
    pub missing: Vec<Int>,
    /// Members of `T` farther than `h/Q` from every center.
    pub far: Vec<Rational>,
    /// Members of `T` that are not centers.
    pub extra: Vec<Rational>,
}

impl RationalCheck {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.far.is_empty()
    }
}

/// `T = ⋂_{q <= Q} hA_q` inside `[lo, hi]`: contains `hB*` and stays within
/// `h/Q` of it.
pub fn verify_rational_theorem(
    family: &RationalPerturbFamily,
    h: usize,
    q_big: usize,
    lo: &Rational,
    hi: &Rational,
) -> Result<RationalCheck, ContinuumError> {
    if h < 2 {
        return Err(ContinuumError::H(2));
    }
    if 2 * h >= q_big {
        return Err(ContinuumError::DepthTooSmall { h, q: q_big });
    }
    if family.r_max < 2 * q_big {
        return Err(ContinuumError::RadiusTooSmall { need: 2 * q_big, r_max: family.r_max });
    }
    let big_scale = family.scale();
    let slo = (lo * Rational::from(big_scale.clone())).ceil().to_integer();
    let shi = (hi * Rational::from(big_scale.clone())).floor().to_integer();
    let headroom = Int::from(1u128 << 100);
    if slo.abs() > headroom || shi.abs() > headroom || &big_scale * Int::from(h) > headroom {
        return Err(ContinuumError::Overflow);
    }
    let (scale, slo, shi) = (narrow(&big_scale)?, narrow(&slo)?, narrow(&shi)?);
    let mut t: Option<BTreeSet<i128>> = None;
    for q in 1..=q_big {
        let pts = family
            .scaled_points(q, &big_scale)?
            .iter()
            .map(narrow)
            .collect::<Result<Vec<i128>, _>>()?;
        let s = bounded_hfold(&pts, h, 0i128, &slo, &shi);
        t = Some(match t {
            None => s,
            Some(prev) => prev.intersection(&s).copied().collect(),
        });
    }
    let t = t.unwrap_or_default();
    let centers = base_hfold(&family.base, h, lo, hi);
    let scaled_centers = centers.iter().map(|c| narrow(&(c * &big_scale))).collect::<Result<Vec<i128>, _>>()?;
    let missing = centers
        .iter()
        .zip(&scaled_centers)
        .filter(|(_, s)| !t.contains(s))
        .map(|(c, _)| c.clone())
        .collect();
    let as_rational = |x: i128| Rational::new(Int::from(x), big_scale.clone());
    let (h_wide, q_wide) = (h as i128, q_big as i128);
    let mut far = Vec::new();
    let mut extra = Vec::new();
    for &x in &t {
        if scaled_centers.binary_search(&x).is_err() {
            extra.push(as_rational(x));
        }
        // |x - c| <= h/Q, compared as |x - c| * Q <= h * scale
        if !scaled_centers.iter().any(|&c| (x - c).abs() * q_wide <= h_wide * scale) {
            far.push(as_rational(x));
        }
    }
    Ok(RationalCheck { h, q: q_big, centers, truncated_size: t.len(), missing, far, extra })
}

/// An open interval `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenInterval {
    lo: Rational,
    hi: Rational,
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ContinuumError> {
        if lo < hi {
            Ok(OpenInterval { lo, hi })
        } else {
            Err(ContinuumError::EmptyInterval(lo.to_string(), hi.to_string()))
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A finite union of disjoint open intervals, sorted. Intervals that only
/// share an endpoint stay separate since the endpoint is not covered.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    parts: Vec<OpenInterval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn new(mut parts: Vec<OpenInterval>) -> Self {
        parts.sort();
        let mut out: Vec<OpenInterval> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(last) if p.lo < last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalUnion { parts: out }
    }

    pub fn intervals(&self) -> &[OpenInterval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let i = self.parts.partition_point(|p| &p.hi <= x);
        self.parts.get(i).is_some_and(|p| p.contains(x))
    }

    pub fn minkowski_sum(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = Vec::with_capacity(self.parts.len() * other.parts.len());
        for a in &self.parts {
            for b in &other.parts {
                parts.push(OpenInterval { lo: &a.lo + &b.lo, hi: &a.hi + &b.hi });
            }
        }
        IntervalUnion::new(parts)
    }

    pub fn minkowski_hfold(&self, h: usize) -> Result<IntervalUnion, ContinuumError> {
        if h == 0 {
            return Err(ContinuumError::H(1));
        }
        let mut acc = self.clone();
        for _ in 1..h {
            acc = acc.minkowski_sum(self);
        }
        Ok(acc)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
                let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
                if lo < hi {
                    parts.push(OpenInterval { lo: lo.clone(), hi: hi.clone() });
                }
            }
        }
        IntervalUnion::new(parts)
    }

    /// Intersection with `(lo, hi)`.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> IntervalUnion {
        match OpenInterval::new(lo.clone(), hi.clone()) {
            Ok(w) => self.intersect(&IntervalUnion { parts: vec![w] }),
            Err(_) => IntervalUnion::empty(),
        }
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.parts.iter().map(|p| format!("{p}")).collect();
        write!(f, "{}", parts.join(" U "))
    }
}

/// `∪_n (b_n - 1/q, b_n) ∪ (b_n, b_n + 1/q)`, or the unpunctured intervals
/// for the primed variant.
pub fn open_family_set(base: &[Int], q: usize, primed: bool) -> IntervalUnion {
    let e = Rational::new(Int::one(), Int::from(q.max(1)));
    let mut parts = Vec::new();
    for b in base {
        let c = Rational::from(b.clone());
        if primed {
            parts.push(OpenInterval { lo: &c - &e, hi: &c + &e });
        } else {
            parts.push(OpenInterval { lo: &c - &e, hi: c.clone() });
            parts.push(OpenInterval { lo: c.clone(), hi: &c + &e });
        }
    }
    IntervalUnion::new(parts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenCheck {
    pub h: usize,
    pub q: usize,
    /// `⋂_{q <= Q} hA_q` inside the window.
    pub intersection: IntervalUnion,
    /// `⋂_{q <= Q} hA'_q` inside the window.
    pub primed: IntervalUnion,
    pub centers: Vec<Int>,
    /// Intervals that are not within `h/Q` of a single center.
    pub stray: Vec<OpenInterval>,
    /// For `h >= 2`, centers missing from the intersection; for `h = 1`,
    /// centers wrongly present.
    pub center_errors: Vec<Int>,
    /// Centers missing from the primed intersection.
    pub primed_missing: Vec<Int>,
}

impl OpenCheck {
    pub fn passed(&self) -> bool {
        self.stray.is_empty() && self.center_errors.is_empty() && self.primed_missing.is_empty()
    }
}

/// Computes both intersections exactly and checks that they shrink onto
/// `hB*`. Centers are the points of `hB*` in `[lo, hi]`; intervals are kept
/// on the window widened by `h/Q` so the ones around boundary centers stay
/// whole.
pub fn verify_open_theorem(
    base: &[Int],
    h: usize,
    q_big: usize,
    lo: &Rational,
    hi: &Rational,
) -> Result<OpenCheck, ContinuumError> {
    if h == 0 {
        return Err(ContinuumError::H(1));
    }
    if q_big == 0 {
        return Err(ContinuumError::Bounds);
    }
    check_gaps(base)?;
    let radius = Rational::new(Int::from(h), Int::from(q_big));
    let (rlo, rhi) = (lo - &radius, hi + &radius);
    let relevant: Vec<Int> = base.iter().filter(|b| Rational::from((*b).clone()) < rhi).cloned().collect();
    let mut inter: Option<IntervalUnion> = None;
    let mut primed: Option<IntervalUnion> = None;
    for q in 1..=q_big {
        let s = open_family_set(&relevant, q, false).minkowski_hfold(h)?.restrict(&rlo, &rhi);
        let p = open_family_set(&relevant, q, true).minkowski_hfold(h)?.restrict(&rlo, &rhi);
        inter = Some(match inter {
            None => s,
            Some(prev) => prev.intersect(&s),
        });
        primed = Some(match primed {
            None => p,
            Some(prev) => prev.intersect(&p),
        });
    }
    let (inter, primed) = (inter.unwrap_or_default(), primed.unwrap_or_default());
    let nearby = base_hfold(&relevant, h, &rlo, &rhi);
    let centers: Vec<Int> = base_hfold(&relevant, h, lo, hi);
    let stray = inter
        .intervals()
        .iter()
        .filter(|iv| {
            let near = nearby
                .iter()
                .filter(|c| {
                    let c = Rational::from((*c).clone());
                    iv.lo >= &c - &radius && iv.hi <= &c + &radius
                })
                .count();
            near != 1
        })
        .cloned()
        .collect();
    let center_errors = centers
        .iter()
        .filter(|c| inter.contains(&Rational::from((*c).clone())) != (h >= 2))
        .cloned()
        .collect();
    let primed_missing = centers
        .iter()
        .filter(|c| !primed.contains(&Rational::from((*c).clone())))
        .cloned()
        .collect();
    Ok(OpenCheck { h, q: q_big, intersection: inter, primed, centers, stray, center_errors, primed_missing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ints};
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(int(n), int(d))
    }

    fn fours() -> BaseSequence {
        BaseSequence::Arithmetic { first: int(4), step: int(4) }
    }

    #[test]
    fn family_set_examples() {
        let f = RationalPerturbFamily::new(&fours(), false, 1, 3).unwrap();
        assert_eq!(rational_family_set(&f, 2).unwrap(), vec![r(7, 2), r(11, 3), r(13, 3), r(9, 2)]);
        let g = RationalPerturbFamily::new(&fours(), true, 1, 3).unwrap();
        assert!(rational_family_set(&g, 3).unwrap().contains(&r(4, 1)));
        let ones = BaseSequence::Arithmetic { first: int(2), step: int(1) };
        assert!(matches!(RationalPerturbFamily::new(&ones, false, 3, 3), Err(ContinuumError::Gap(..))));
        let low = BaseSequence::Explicit(ints(&[1, 5]));
        assert!(matches!(RationalPerturbFamily::new(&low, false, 2, 3), Err(ContinuumError::FirstBase(_))));
        assert!(rational_family_set(&f, 0).is_err());
    }

    #[test]
    fn rational_check_example() {
        let f = RationalPerturbFamily::new(&fours(), false, 5, 16).unwrap();
        let c = verify_rational_theorem(&f, 2, 8, &r(0, 1), &r(20, 1)).unwrap();
        assert_eq!(c.centers, ints(&[8, 12, 16, 20]));
        assert!(c.passed(), "{c:?}");
        assert!(matches!(
            verify_rational_theorem(&f, 2, 3, &r(0, 1), &r(20, 1)),
            Err(ContinuumError::DepthTooSmall { .. })
        ));
        let short = RationalPerturbFamily::new(&fours(), false, 5, 10).unwrap();
        assert!(matches!(
            verify_rational_theorem(&short, 2, 8, &r(0, 1), &r(20, 1)),
            Err(ContinuumError::RadiusTooSmall { .. })
        ));
    }

    #[test]
    fn primed_rational_family_contains_centers_for_odd_h() {
        let f = RationalPerturbFamily::new(&fours(), true, 4, 16).unwrap();
        let c = verify_rational_theorem(&f, 3, 7, &r(0, 1), &r(30, 1)).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.centers, ints(&[12, 16, 20, 24, 28]));
    }

    #[test]
    fn minkowski_examples() {
        let unit = IntervalUnion::new(vec![OpenInterval::new(r(0, 1), r(1, 1)).unwrap()]);
        assert_eq!(unit.minkowski_hfold(2).unwrap(), IntervalUnion::new(vec![OpenInterval::new(r(0, 1), r(2, 1)).unwrap()]));
        for q in 1i64..6 {
            let s = open_family_set(&ints(&[4]), q as usize, false).minkowski_hfold(2).unwrap();
            let e = r(2, q);
            assert_eq!(s.intervals(), &[OpenInterval::new(r(8, 1) - &e, r(8, 1) + &e).unwrap()]);
        }
        assert!(IntervalUnion::empty().minkowski_hfold(3).unwrap().is_empty());
    }

    #[test]
    fn touching_intervals_keep_the_gap() {
        let u = IntervalUnion::new(vec![
            OpenInterval::new(r(0, 1), r(1, 1)).unwrap(),
            OpenInterval::new(r(1, 1), r(2, 1)).unwrap(),
        ]);
        assert_eq!(u.intervals().len(), 2);
        assert!(!u.contains(&r(1, 1)));
        assert!(u.contains(&r(1, 2)));
    }

    #[test]
    fn open_check_examples() {
        let base = ints(&[4, 8, 12, 16, 20]);
        let c = verify_open_theorem(&base, 2, 10, &r(0, 1), &r(20, 1)).unwrap();
        assert_eq!(c.centers, ints(&[8, 12, 16, 20]));
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.intersection.intervals().len(), 4);
        for (iv, center) in c.intersection.intervals().iter().zip([8, 12, 16, 20]) {
            assert!(iv.contains(&r(center, 1)));
            assert!(iv.hi() - iv.lo() <= r(4, 10));
        }
        let one = verify_open_theorem(&base, 1, 6, &r(0, 1), &r(20, 1)).unwrap();
        assert!(one.passed(), "{one:?}");
        for b in &base[..4] {
            assert!(!one.intersection.contains(&Rational::from(b.clone())));
        }
        let three = verify_open_theorem(&base, 3, 5, &r(0, 1), &r(40, 1)).unwrap();
        assert!(three.primed_missing.is_empty());
    }

    fn arb_union() -> impl Strategy<Value = IntervalUnion> {
        prop::collection::vec((-20i64..20, 1i64..6, 1i64..4), 0..4).prop_map(|v| {
            IntervalUnion::new(
                v.into_iter()
                    .map(|(a, len, d)| OpenInterval::new(r(a, d), r(a + len, d)).unwrap())
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn canonical_unions_are_disjoint(u in arb_union()) {
            for w in u.intervals().windows(2) {
                prop_assert!(w[0].hi() <= w[1].lo());
            }
        }

        #[test]
        fn minkowski_is_associative(u in arb_union()) {
            let left = u.minkowski_sum(&u).minkowski_sum(&u);
            let right = u.minkowski_sum(&u.minkowski_sum(&u));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn membership_matches_parts(u in arb_union(), n in -100i64..100, d in 1i64..5) {
            let x = r(n, d);
            prop_assert_eq!(u.contains(&x), u.intervals().iter().any(|p| p.contains(&x)));
        }

        #[test]
        fn truncations_shrink_and_stay_close(q in 5usize..8, h in 2usize..3) {
            let f = RationalPerturbFamily::new(&fours(), false, 3, 2 * (q + 1)).unwrap();
            let a = verify_rational_theorem(&f, h, q, &r(0, 1), &r(16, 1)).unwrap();
            let b = verify_rational_theorem(&f, h, q + 1, &r(0, 1), &r(16, 1)).unwrap();
            prop_assert!(b.truncated_size <= a.truncated_size);
            prop_assert!(a.passed() && b.passed());
        }
    }
}
