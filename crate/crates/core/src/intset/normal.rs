//! Canonical forms.
//!
//! Every set in the algebra is eventually periodic towards both `-inf` and
//! `+inf`. The canonical form is read off from the two end patterns (reduced
//! to their minimal periods), the extreme points where the set stops agreeing
//! with them, and the finite stretch in between. When a pattern or that
//! stretch exceeds the caps below, only structural rewrites are applied.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{IntSet, SetError, Unit};
use crate::arith::{lcm, lift_residues, modp, reduce_pattern, sort_dedup};
use crate::Int;

/// Maximum number of residues a periodic pattern may carry.
pub const PATTERN_CAP: usize = 1 << 16;
/// Maximum number of points scanned between the two periodic ends.
pub const SCAN_CAP: usize = 1 << 16;

/// A periodic subset of `Z`: residues (sorted) modulo `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Pattern {
    pub m: Int,
    pub r: Vec<Int>,
}

impl Pattern {
    pub fn full() -> Self {
        Pattern { m: Int::one(), r: vec![Int::zero()] }
    }

    pub fn empty() -> Self {
        Pattern { m: Int::one(), r: Vec::new() }
    }

    pub fn new(m: Int, r: Vec<Int>) -> Self {
        let (m, r) = reduce_pattern(&m, &r);
        Pattern { m, r }
    }

    pub fn is_full(&self) -> bool {
        Int::from(self.r.len()) == self.m
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn contains(&self, x: &Int) -> bool {
        self.r.binary_search(&modp(x, &self.m)).is_ok()
    }

    fn map(&self, unit: Unit, shift: &Int) -> Pattern {
        let mut r: Vec<Int> =
            self.r.iter().map(|x| modp(&(unit.apply(x) + shift), &self.m)).collect();
        sort_dedup(&mut r);
        Pattern { m: self.m.clone(), r }
    }

    /// Both patterns over a common modulus.
    fn align(&self, o: &Pattern, cap: usize) -> Option<(Int, Vec<Int>, Vec<Int>)> {
        let m = lcm(&self.m, &o.m);
        let a = lift_residues(&self.r, &self.m, &m, cap)?;
        let b = lift_residues(&o.r, &o.m, &m, cap)?;
        Some((m, a, b))
    }

    pub fn union(&self, o: &Pattern, cap: usize) -> Option<Pattern> {
        if self.is_full() || o.is_empty() {
            return Some(self.clone());
        }
        if o.is_full() || self.is_empty() {
            return Some(o.clone());
        }
        let (m, mut a, b) = self.align(o, cap)?;
        a.extend(b);
        sort_dedup(&mut a);
        Some(Pattern::new(m, a))
    }

    pub fn intersect(&self, o: &Pattern, cap: usize) -> Option<Pattern> {
        if self.is_empty() || o.is_full() {
            return Some(self.clone());
        }
        if o.is_empty() || self.is_full() {
            return Some(o.clone());
        }
        // refine along a divisibility chain without lifting the finer side
        if o.m.is_multiple_of(&self.m) {
            let r = o.r.iter().filter(|x| self.contains(x)).cloned().collect();
            return Some(Pattern::new(o.m.clone(), r));
        }
        if self.m.is_multiple_of(&o.m) {
            return o.intersect(self, cap);
        }
        let (m, a, b) = self.align(o, cap)?;
        let r = a.into_iter().filter(|x| b.binary_search(x).is_ok()).collect();
        Some(Pattern::new(m, r))
    }

    /// `self \ o`.
    pub fn minus(&self, o: &Pattern, cap: usize) -> Option<Pattern> {
        if self.is_empty() || o.is_empty() {
            return Some(self.clone());
        }
        if o.is_full() {
            return Some(Pattern::empty());
        }
        if self.m.is_multiple_of(&o.m) {
            let r = self.r.iter().filter(|x| !o.contains(x)).cloned().collect();
            return Some(Pattern::new(self.m.clone(), r));
        }
        let (m, a, b) = self.align(o, cap)?;
        let r = a.into_iter().filter(|x| b.binary_search(x).is_err()).collect();
        Some(Pattern::new(m, r))
    }

    fn to_set(&self) -> IntSet {
        if self.is_empty() {
            IntSet::Empty
        } else if self.is_full() {
            IntSet::all()
        } else {
            IntSet::Congruence { modulus: self.m.clone(), residues: self.r.clone() }
        }
    }

    /// Smallest member `>= x`.
    fn next_at_or_above(&self, x: &Int) -> Option<Int> {
        let base = x - modp(x, &self.m);
        let rx = modp(x, &self.m);
        match self.r.iter().find(|r| **r >= rx) {
            Some(r) => Some(&base + r),
            None => self.r.first().map(|r| base + &self.m + r),
        }
    }

    /// Largest member `<= x`.
    fn next_at_or_below(&self, x: &Int) -> Option<Int> {
        let base = x - modp(x, &self.m);
        let rx = modp(x, &self.m);
        match self.r.iter().rev().find(|r| **r <= rx) {
            Some(r) => Some(&base + r),
            None => self.r.last().map(|r| base - &self.m + r),
        }
    }
}

/// The set agrees with `left` below `span.0` and with `right` above `span.1`.
#[derive(Debug, Clone)]
pub(crate) struct Profile {
    pub left: Pattern,
    pub right: Pattern,
    pub span: Option<(Int, Int)>,
}

fn hull(a: Option<(Int, Int)>, b: Option<(Int, Int)>) -> Option<(Int, Int)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
    }
}

/// End patterns of a set, or `None` past the pattern cap.
pub(crate) fn profile_of(set: &IntSet) -> Option<Profile> {
    let p = match set {
        IntSet::Empty => Profile { left: Pattern::empty(), right: Pattern::empty(), span: None },
        IntSet::Finite(e) => Profile {
            left: Pattern::empty(),
            right: Pattern::empty(),
            span: e.first().map(|lo| (lo.clone(), e.last().cloned().unwrap_or_default())),
        },
        IntSet::Cofinite(e) => Profile {
            left: Pattern::full(),
            right: Pattern::full(),
            span: e.first().map(|lo| (lo.clone(), e.last().cloned().unwrap_or_default())),
        },
        IntSet::Congruence { modulus, residues } => {
            let p = Pattern::new(modulus.clone(), residues.clone());
            Profile { left: p.clone(), right: p, span: None }
        }
        IntSet::Tail { center, radius } => Profile {
            left: Pattern::full(),
            right: Pattern::full(),
            span: Some((center - radius + 1, center + radius - 1)),
        },
        IntSet::HalfTail { threshold } => Profile {
            left: Pattern::empty(),
            right: Pattern::full(),
            span: Some((threshold.clone(), threshold.clone())),
        },
        IntSet::Affine { unit, shift, inner } => {
            let p = profile_of(inner)?;
            match unit {
                Unit::Plus => Profile {
                    left: p.left.map(Unit::Plus, shift),
                    right: p.right.map(Unit::Plus, shift),
                    span: p.span.map(|(a, b)| (a + shift, b + shift)),
                },
                Unit::Minus => Profile {
                    left: p.right.map(Unit::Minus, shift),
                    right: p.left.map(Unit::Minus, shift),
                    span: p.span.map(|(a, b)| (shift - b, shift - a)),
                },
            }
        }
        IntSet::Union(parts) | IntSet::Intersection(parts) => {
            let is_union = matches!(set, IntSet::Union(_));
            let mut acc: Option<Profile> = None;
            for part in parts {
                let p = profile_of(part)?;
                acc = Some(match acc {
                    None => p,
                    Some(a) => {
                        let (left, right) = if is_union {
                            (a.left.union(&p.left, PATTERN_CAP)?, a.right.union(&p.right, PATTERN_CAP)?)
                        } else {
                            (
                                a.left.intersect(&p.left, PATTERN_CAP)?,
                                a.right.intersect(&p.right, PATTERN_CAP)?,
                            )
                        };
                        Profile { left, right, span: hull(a.span, p.span) }
                    }
                });
            }
            acc?
        }
    };
    Some(Profile {
        left: Pattern::new(p.left.m, p.left.r),
        right: Pattern::new(p.right.m, p.right.r),
        span: p.span,
    })
}

impl IntSet {
    /// Canonical form, or `None` if the set exceeds the pattern or scan caps.
    pub fn canonical(&self) -> Option<IntSet> {
        let set = self.structural();
        let prof = profile_of(&set)?;
        let (left, right) = (prof.left, prof.right);
        let (a, b) = prof.span.unwrap_or_else(|| (Int::zero(), Int::zero()));
        let period = lcm(&left.m, &right.m);
        let reach = period.to_usize().filter(|p| *p <= SCAN_CAP)?;
        let width = (&b - &a).to_usize().filter(|w| *w <= SCAN_CAP)?;
        let _ = width;

        // first point (from the left) where the set leaves the left pattern
        let mut lo = None;
        let mut x = a.clone();
        let stop = &b + reach;
        while x <= stop {
            if set.contains(&x) != left.contains(&x) {
                lo = Some(x.clone());
                break;
            }
            x += 1;
        }
        // last point (from the right) where it leaves the right pattern
        let mut hi = None;
        let mut x = b.clone();
        let stop = &a - reach;
        while x >= stop {
            if set.contains(&x) != right.contains(&x) {
                hi = Some(x.clone());
                break;
            }
            x -= 1;
        }

        let (lo, hi) = match (lo, hi) {
            (Some(lo), Some(hi)) => (lo, hi),
            (None, None) if left == right => return Some(left.to_set()),
            _ => return None,
        };

        let common = left.intersect(&right, PATTERN_CAP)?;
        let left_only = left.minus(&common, PATTERN_CAP)?;
        let right_only = right.minus(&common, PATTERN_CAP)?;

        let mut added = Vec::new();
        let mut removed = Vec::new();
        if lo <= hi {
            let mut x = lo.clone();
            while x <= hi {
                match (set.contains(&x), common.contains(&x)) {
                    (true, false) => added.push(x.clone()),
                    (false, true) => removed.push(x.clone()),
                    _ => {}
                }
                x += 1;
            }
        }

        let mut parts = Vec::new();
        if !added.is_empty() {
            parts.push(IntSet::Finite(added));
        }
        if common.is_full() {
            parts.push(cofinite_or_tail(removed));
        } else if !common.is_empty() {
            let c = common.to_set();
            if removed.is_empty() {
                parts.push(c);
            } else {
                parts.push(IntSet::Intersection(vec![c, IntSet::Cofinite(removed)]));
            }
        }
        if let Some(t) = left_only.next_at_or_below(&(&lo - 1)) {
            let bound = IntSet::lower_half(t);
            parts.push(if left_only.is_full() {
                bound
            } else {
                IntSet::Intersection(vec![left_only.to_set(), bound])
            });
        }
        if let Some(t) = right_only.next_at_or_above(&(&hi + 1)) {
            let bound = IntSet::HalfTail { threshold: t };
            parts.push(if right_only.is_full() {
                bound
            } else {
                IntSet::Intersection(vec![right_only.to_set(), bound])
            });
        }
        parts.sort();
        Some(match parts.len() {
            0 => IntSet::Empty,
            1 => parts.pop().unwrap_or(IntSet::Empty),
            _ => IntSet::Union(parts),
        })
    }

    /// Canonical form when within caps, otherwise the structural rewrite.
    pub fn normalize(&self) -> IntSet {
        self.canonical().unwrap_or_else(|| self.structural())
    }

    /// Local rewrites that never enumerate points: affine maps pushed to the
    /// leaves, nested unions and intersections flattened, parts sorted and
    /// merged where a rule applies.
    pub fn structural(&self) -> IntSet {
        match self {
            IntSet::Empty => IntSet::Empty,
            IntSet::Finite(e) if e.is_empty() => IntSet::Empty,
            IntSet::Finite(e) => IntSet::finite(e.iter().cloned()),
            IntSet::Cofinite(e) => IntSet::cofinite(e.iter().cloned()),
            IntSet::Congruence { modulus, residues } => {
                Pattern::new(modulus.clone(), residues.clone()).to_set()
            }
            IntSet::Tail { .. } | IntSet::HalfTail { .. } => self.clone(),
            IntSet::Affine { unit, shift, inner } => {
                if *unit == Unit::Plus && shift.is_zero() {
                    return inner.structural();
                }
                match inner.structural() {
                    h @ IntSet::HalfTail { .. } if *unit == Unit::Minus => {
                        
                        h.map_affine(*unit, shift)
                    }
                    other => other.map_affine(*unit, shift).structural(),
                }
            }
            IntSet::Union(parts) => structural_union(parts),
            IntSet::Intersection(parts) => structural_intersection(parts),
        }
    }
}

fn cofinite_or_tail(removed: Vec<Int>) -> IntSet {
    let n = removed.len();
    if n >= 3 && n % 2 == 1 {
        let (first, last) = (&removed[0], &removed[n - 1]);
        if last - first + 1 == Int::from(n) {
            let center = (first + last) / 2;
            return IntSet::Tail { center, radius: Int::from(n.div_ceil(2)) };
        }
    }
    IntSet::Cofinite(removed)
}

fn flatten(parts: &[IntSet], union: bool) -> Vec<IntSet> {
    let mut out = Vec::new();
    for p in parts {
        match (p.structural(), union) {
            (IntSet::Union(inner), true) | (IntSet::Intersection(inner), false) => out.extend(inner),
            (q, _) => out.push(q),
        }
    }
    out
}

fn structural_union(parts: &[IntSet]) -> IntSet {
    let flat = flatten(parts, true);
    let mut finite: Vec<Int> = Vec::new();
    let mut cofinite: Option<Vec<Int>> = None;
    let mut rest = Vec::new();
    for p in flat {
        match p {
            IntSet::Empty => {}
            IntSet::Finite(e) => finite.extend(e),
            IntSet::Cofinite(e) => {
                cofinite = Some(match cofinite {
                    None => e,
                    Some(c) => c.into_iter().filter(|x| e.binary_search(x).is_ok()).collect(),
                })
            }
            other => rest.push(other),
        }
    }
    if let Some(c) = cofinite {
        let c: Vec<Int> = c.into_iter().filter(|x| !finite.contains(x)).collect();
        if c.is_empty() {
            return IntSet::all();
        }
        rest.push(IntSet::Cofinite(c));
    }
    if !finite.is_empty() {
        rest.push(IntSet::finite(finite));
    }
    rest.sort();
    rest.dedup();
    match rest.len() {
        0 => IntSet::Empty,
        1 => rest.pop().unwrap_or(IntSet::Empty),
        _ => IntSet::Union(rest),
    }
}

fn structural_intersection(parts: &[IntSet]) -> IntSet {
    let flat = flatten(parts, false);
    if flat.contains(&IntSet::Empty) {
        return IntSet::Empty;
    }
    if let Some(IntSet::Finite(e)) = flat.iter().find(|p| matches!(p, IntSet::Finite(_))) {
        return IntSet::finite(e.iter().filter(|x| flat.iter().all(|p| p.contains(x))).cloned());
    }
    let mut excluded: Option<Vec<Int>> = None;
    let mut tails: Vec<(Int, Int)> = Vec::new();
    let mut half: Option<Int> = None;
    let mut pattern: Option<Pattern> = None;
    let mut rest = Vec::new();
    for p in flat {
        match p {
            IntSet::Cofinite(e) => {
                let mut all = excluded.take().unwrap_or_default();
                all.extend(e);
                sort_dedup(&mut all);
                excluded = Some(all);
            }
            IntSet::Tail { center, radius } => match tails.iter_mut().find(|(c, _)| *c == center) {
                Some((_, r)) if *r < radius => *r = radius,
                Some(_) => {}
                None => tails.push((center, radius)),
            },
            IntSet::HalfTail { threshold } => {
                half = Some(match half {
                    Some(t) if t > threshold => t,
                    _ => threshold,
                })
            }
            IntSet::Congruence { modulus, residues } => {
                let p = Pattern::new(modulus.clone(), residues.clone());
                match pattern.as_ref().and_then(|q| q.intersect(&p, PATTERN_CAP)) {
                    Some(merged) => pattern = Some(merged),
                    None if pattern.is_none() => pattern = Some(p),
                    None => rest.push(IntSet::Congruence { modulus, residues }),
                }
            }
            other => rest.push(other),
        }
    }
    if let Some(p) = pattern {
        match p.to_set() {
            IntSet::Empty => return IntSet::Empty,
            s if s == IntSet::all() => {}
            s => rest.push(s),
        }
    }
    if let Some(e) = excluded.filter(|e| !e.is_empty()) {
        rest.push(IntSet::Cofinite(e));
    }
    rest.extend(tails.into_iter().map(|(center, radius)| IntSet::Tail { center, radius }));
    if let Some(t) = half {
        rest.push(IntSet::HalfTail { threshold: t });
    }
    rest.sort();
    rest.dedup();
    if let Some(factored) = factor_common(&rest) {
        return factored;
    }
    match rest.len() {
        0 => IntSet::all(),
        1 => rest.pop().unwrap_or(IntSet::Empty),
        _ => IntSet::Intersection(rest),
    }
}

/// `⋂ (A ∪ B_q) = A ∪ ⋂ B_q` for a part `A` shared by every union.
fn factor_common(parts: &[IntSet]) -> Option<IntSet> {
    if parts.len() < 2 {
        return None;
    }
    let members: Vec<&[IntSet]> = parts
        .iter()
        .map(|p| match p {
            IntSet::Union(ps) => Some(ps.as_slice()),
            _ => None,
        })
        .collect::<Option<_>>()?;
    let common: Vec<IntSet> = members[0]
        .iter()
        .filter(|c| members.iter().all(|m| m.contains(c)))
        .cloned()
        .collect();
    if common.is_empty() {
        return None;
    }
    let rests: Vec<IntSet> = members
        .iter()
        .map(|m| {
            let r: Vec<IntSet> = m.iter().filter(|x| !common.contains(x)).cloned().collect();
            match r.len() {
                0 => IntSet::Empty,
                1 => r.into_iter().next().unwrap_or(IntSet::Empty),
                _ => IntSet::Union(r),
            }
        })
        .collect();
    let mut out = common;
    if rests.iter().all(|r| *r != IntSet::Empty) {
        out.push(structural_intersection(&rests));
    }
    Some(structural_union(&out))
}

/// `⋂ sets`, with the shared-part rewrite applied first so that truncated
/// families `A ∪ B_q` stay readable even past the normalizer's caps.
pub fn intersect_truncated(sets: &[IntSet]) -> Result<IntSet, SetError> {
    if sets.is_empty() {
        return Err(SetError::NoParts);
    }
    let parts: Vec<IntSet> = sets.iter().map(IntSet::structural).collect();
    let lazy = factor_common(&parts).unwrap_or(IntSet::Intersection(parts));
    Ok(lazy.normalize())
}

