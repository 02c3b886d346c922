//! Symbolic descriptions of (possibly infinite) subsets of `Z`.
//!
//! Every description has exact membership. [`IntSet::normalize`] rewrites a
//! description into a canonical form, so equal sets get identical
//! descriptions as long as the set stays within the normalizer's caps.

mod normal;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{modp, sort_dedup};
use crate::window::{BitWindow, Window, WindowError};
use crate::Int;

pub use normal::{intersect_truncated, PATTERN_CAP, SCAN_CAP};
pub(crate) use normal::{profile_of, Profile};

/// Multiplicative unit of `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unit {
    Minus,
    Plus,
}

impl Unit {
    pub fn from_sign(s: i64) -> Option<Unit> {
        match s {
            1 => Some(Unit::Plus),
            -1 => Some(Unit::Minus),
            _ => None,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Unit::Plus => 1,
            Unit::Minus => -1,
        }
    }

    pub fn apply(self, x: &Int) -> Int {
        match self {
            Unit::Plus => x.clone(),
            Unit::Minus => -x,
        }
    }

    pub fn compose(self, other: Unit) -> Unit {
        if self == other {
            Unit::Plus
        } else {
            Unit::Minus
        }
    }
}

/// A subset of `Z`.
///
/// Variant order is the canonical ordering of union parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntSet {
    Empty,
    /// Sorted, duplicate-free elements.
    Finite(Vec<Int>),
    /// Residues are sorted, nonempty and in `[0, modulus)`.
    Congruence { modulus: Int, residues: Vec<Int> },
    /// `{ x : |x - center| >= radius }`, `radius >= 1`.
    Tail { center: Int, radius: Int },
    /// `{ x : x >= threshold }`.
    HalfTail { threshold: Int },
    /// `unit * inner + shift`.
    Affine { unit: Unit, shift: Int, inner: Box<IntSet> },
    /// `Z` minus the sorted, duplicate-free `excluded` list.
    Cofinite(Vec<Int>),
    Intersection(Vec<IntSet>),
    Union(Vec<IntSet>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("modulus must be at least 1, got {0}")]
    Modulus(Int),
    #[error("congruence needs at least one residue")]
    NoResidues,
    #[error("tail radius must be at least 1, got {0}")]
    Radius(Int),
    #[error("union or intersection needs at least one part")]
    NoParts,
    #[error(transparent)]
    Window(#[from] WindowError),
}

impl IntSet {
    pub fn all() -> IntSet {
        IntSet::Cofinite(Vec::new())
    }

    /// `Z \ {0}`.
    pub fn nonzero() -> IntSet {
        IntSet::Cofinite(alloc::vec![Int::zero()])
    }

    pub fn finite<I: IntoIterator<Item = Int>>(elements: I) -> IntSet {
        let mut v: Vec<Int> = elements.into_iter().collect();
        sort_dedup(&mut v);
        IntSet::Finite(v)
    }

    pub fn cofinite<I: IntoIterator<Item = Int>>(excluded: I) -> IntSet {
        let mut v: Vec<Int> = excluded.into_iter().collect();
        sort_dedup(&mut v);
        IntSet::Cofinite(v)
    }

    /// Union of residue classes; residues are reduced modulo `modulus`.
    pub fn congruence<I: IntoIterator<Item = Int>>(
        modulus: Int,
        residues: I,
    ) -> Result<IntSet, SetError> {
        if modulus < Int::one() {
            return Err(SetError::Modulus(modulus));
        }
        let mut r: Vec<Int> = residues.into_iter().map(|x| modp(&x, &modulus)).collect();
        sort_dedup(&mut r);
        if r.is_empty() {
            return Err(SetError::NoResidues);
        }
        Ok(IntSet::Congruence { modulus, residues: r })
    }

    pub fn tail(center: Int, radius: Int) -> Result<IntSet, SetError> {
        if radius < Int::one() {
            return Err(SetError::Radius(radius));
        }
        Ok(IntSet::Tail { center, radius })
    }

    pub fn half_tail(threshold: Int) -> IntSet {
        IntSet::HalfTail { threshold }
    }

    /// `{ x : x <= bound }`.
    pub fn lower_half(bound: Int) -> IntSet {
        IntSet::Affine {
            unit: Unit::Minus,
            shift: Int::zero(),
            inner: Box::new(IntSet::HalfTail { threshold: -bound }),
        }
    }

    pub fn union(parts: Vec<IntSet>) -> Result<IntSet, SetError> {
        if parts.is_empty() {
            return Err(SetError::NoParts);
        }
        Ok(IntSet::Union(parts))
    }

    pub fn intersection(parts: Vec<IntSet>) -> Result<IntSet, SetError> {
        if parts.is_empty() {
            return Err(SetError::NoParts);
        }
        Ok(IntSet::Intersection(parts))
    }

    pub fn affine(unit: Unit, shift: Int, inner: IntSet) -> IntSet {
        IntSet::Affine { unit, shift, inner: Box::new(inner) }
    }

    pub fn shifted(&self, shift: &Int) -> IntSet {
        self.map_affine(Unit::Plus, shift)
    }

    /// Exact membership.
    pub fn contains(&self, x: &Int) -> bool {
        match self {
            IntSet::Empty => false,
            IntSet::Finite(e) => e.binary_search(x).is_ok(),
            IntSet::Cofinite(e) => e.binary_search(x).is_err(),
            IntSet::Congruence { modulus, residues } => {
                residues.binary_search(&modp(x, modulus)).is_ok()
            }
            IntSet::Tail { center, radius } => (x - center).abs() >= *radius,
            IntSet::HalfTail { threshold } => x >= threshold,
            IntSet::Affine { unit, shift, inner } => inner.contains(&unit.apply(&(x - shift))),
            IntSet::Union(parts) => parts.iter().any(|p| p.contains(x)),
            IntSet::Intersection(parts) => parts.iter().all(|p| p.contains(x)),
        }
    }

    /// Members inside `w`, sorted.
    pub fn materialize(&self, w: &Window, cap: usize) -> Result<Vec<Int>, WindowError> {
        Ok(self.materialize_bits(w, cap)?.values())
    }

    /// Members inside `w` as a bit window over `w`.
    pub fn materialize_bits(&self, w: &Window, cap: usize) -> Result<BitWindow, WindowError> {
        let mut out = BitWindow::over(w, cap)?;
        let len = out.len();
        match self {
            IntSet::Empty => {}
            IntSet::Finite(e) => {
                for x in e.iter().filter(|x| w.contains(x)) {
                    out.insert(x);
                }
            }
            IntSet::Cofinite(e) => {
                out.fill(0, len);
                for x in e.iter().filter(|x| w.contains(x)) {
                    if let Some(i) = (x - &w.lo).to_usize() {
                        out.clear_offset(i);
                    }
                }
            }
            IntSet::Congruence { modulus, residues } => {
                let step = modulus.to_usize();
                for r in residues {
                    let first = &w.lo + modp(&(r - &w.lo), modulus);
                    if first > w.hi {
                        continue;
                    }
                    let start = (&first - &w.lo).to_usize().unwrap_or(usize::MAX);
                    match step {
                        Some(s) => {
                            let mut i = start;
                            while i < len {
                                out.set_offset(i);
                                i = match i.checked_add(s) {
                                    Some(n) => n,
                                    None => break,
                                };
                            }
                        }
                        None => out.set_offset(start),
                    }
                }
            }
            IntSet::Tail { center, radius } => {
                // members are x <= center - radius and x >= center + radius
                let left_end = center - radius;
                if left_end >= w.lo {
                    let n = (&left_end - &w.lo + Int::one()).to_usize().unwrap_or(usize::MAX).min(len);
                    out.fill(0, n);
                }
                let right_start = center + radius;
                if right_start <= w.hi {
                    let s = if right_start > w.lo {
                        (&right_start - &w.lo).to_usize().unwrap_or(len)
                    } else {
                        0
                    };
                    out.fill(s, len);
                }
            }
            IntSet::HalfTail { threshold } => {
                if threshold <= &w.hi {
                    let s = if threshold > &w.lo {
                        (threshold - &w.lo).to_usize().unwrap_or(len)
                    } else {
                        0
                    };
                    out.fill(s, len);
                }
            }
            IntSet::Affine { unit, shift, inner } => {
                let pre = match unit {
                    Unit::Plus => Window { lo: &w.lo - shift, hi: &w.hi - shift },
                    Unit::Minus => Window { lo: shift - &w.hi, hi: shift - &w.lo },
                };
                let inner_bits = inner.materialize_bits(&pre, cap)?;
                for x in inner_bits.values() {
                    out.insert(&(unit.apply(&x) + shift));
                }
            }
            IntSet::Union(parts) => {
                for p in parts {
                    let b = p.materialize_bits(w, cap)?;
                    for i in b.offsets() {
                        out.set_offset(i);
                    }
                }
            }
            IntSet::Intersection(parts) => {
                let mut it = parts.iter();
                if let Some(first) = it.next() {
                    out = first.materialize_bits(w, cap)?;
                    for p in it {
                        out.intersect_with(&p.materialize_bits(w, cap)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies `x -> unit * x + shift`, pushing the map into the leaves.
    pub fn map_affine(&self, unit: Unit, shift: &Int) -> IntSet {
        let map = |x: &Int| unit.apply(x) + shift;
        match self {
            IntSet::Empty => IntSet::Empty,
            IntSet::Finite(e) => IntSet::finite(e.iter().map(map)),
            IntSet::Cofinite(e) => IntSet::cofinite(e.iter().map(map)),
            IntSet::Congruence { modulus, residues } => {
                let mut r: Vec<Int> = residues.iter().map(|x| modp(&map(x), modulus)).collect();
                sort_dedup(&mut r);
                IntSet::Congruence { modulus: modulus.clone(), residues: r }
            }
            IntSet::Tail { center, radius } => {
                IntSet::Tail { center: map(center), radius: radius.clone() }
            }
            IntSet::HalfTail { threshold } => match unit {
                Unit::Plus => IntSet::HalfTail { threshold: threshold + shift },
                // -[t, inf) + s = (-inf, s - t]
                Unit::Minus => IntSet::lower_half(shift - threshold),
            },
            IntSet::Affine { unit: u2, shift: s2, inner } => {
                inner.map_affine(unit.compose(*u2), &(unit.apply(s2) + shift))
            }
            IntSet::Union(parts) => {
                IntSet::Union(parts.iter().map(|p| p.map_affine(unit, shift)).collect())
            }
            IntSet::Intersection(parts) => {
                IntSet::Intersection(parts.iter().map(|p| p.map_affine(unit, shift)).collect())
            }
        }
    }

    /// A lower bound on the set's elements when one exists; the empty set is
    /// vacuously bounded by 0.
    pub fn lower_bound(&self) -> Option<Int> {
        match self {
            IntSet::Empty => Some(Int::zero()),
            IntSet::Finite(e) => Some(e.first().cloned().unwrap_or_default()),
            IntSet::HalfTail { threshold } => Some(threshold.clone()),
            IntSet::Cofinite(_) | IntSet::Congruence { .. } | IntSet::Tail { .. } => None,
            IntSet::Affine { unit: Unit::Plus, shift, inner } => Some(inner.lower_bound()? + shift),
            IntSet::Affine { unit: Unit::Minus, shift, inner } => {
                Some(shift - inner.upper_bound()?)
            }
            IntSet::Union(parts) => {
                parts.iter().map(IntSet::lower_bound).try_fold(None::<Int>, |acc, b| {
                    let b = b?;
                    Some(Some(match acc {
                        Some(a) => a.min(b),
                        None => b,
                    }))
                })?
            }
            IntSet::Intersection(parts) => parts.iter().filter_map(IntSet::lower_bound).max(),
        }
    }

    pub fn upper_bound(&self) -> Option<Int> {
        match self {
            IntSet::Empty => Some(Int::zero()),
            IntSet::Finite(e) => Some(e.last().cloned().unwrap_or_default()),
            IntSet::HalfTail { .. }
            | IntSet::Cofinite(_)
            | IntSet::Congruence { .. }
            | IntSet::Tail { .. } => None,
            IntSet::Affine { unit: Unit::Plus, shift, inner } => Some(inner.upper_bound()? + shift),
            IntSet::Affine { unit: Unit::Minus, shift, inner } => {
                Some(shift - inner.lower_bound()?)
            }
            IntSet::Union(parts) => {
                parts.iter().map(IntSet::upper_bound).try_fold(None::<Int>, |acc, b| {
                    let b = b?;
                    Some(Some(match acc {
                        Some(a) => a.max(b),
                        None => b,
                    }))
                })?
            }
            IntSet::Intersection(parts) => parts.iter().filter_map(IntSet::upper_bound).min(),
        }
    }

    /// `true` when the description is structurally known to be finite.
    pub fn is_bounded(&self) -> bool {
        self.lower_bound().is_some() && self.upper_bound().is_some()
    }

    /// Exact equality of the described sets, or `None` when the normalizer's
    /// caps prevent a decision.
    pub fn equivalent(&self, other: &IntSet) -> Option<bool> {
        let (a, b) = (self.normalize(), other.normalize());
        if a == b {
            return Some(true);
        }
        match (self.canonical(), other.canonical()) {
            (Some(x), Some(y)) => Some(x == y),
            _ => None,
        }
    }

    /// `true` when the set is provably all of `Z`.
    pub fn is_all(&self) -> bool {
        self.normalize() == IntSet::all()
    }

    /// Smallest element of `self \ other` inside `w` in witness order
    /// (absolute value, negative first).
    pub fn first_difference(&self, other: &IntSet, w: &Window) -> Option<Int> {
        w.witness_order().find(|x| self.contains(x) && !other.contains(x))
    }

    /// `Z \ self`, or `None` for a congruence whose complement has more
    /// residues than [`PATTERN_CAP`].
    pub fn complement(&self) -> Option<IntSet> {
        Some(match self {
            IntSet::Empty => IntSet::all(),
            IntSet::Finite(e) => IntSet::Cofinite(e.clone()),
            IntSet::Cofinite(e) if e.is_empty() => IntSet::Empty,
            IntSet::Cofinite(e) => IntSet::Finite(e.clone()),
            IntSet::Congruence { modulus, residues } => {
                let rest: Vec<Int> = crate::arith::all_residues(modulus, PATTERN_CAP)?
                    .into_iter()
                    .filter(|r| residues.binary_search(r).is_err())
                    .collect();
                if rest.is_empty() {
                    IntSet::Empty
                } else {
                    IntSet::Congruence { modulus: modulus.clone(), residues: rest }
                }
            }
            IntSet::Tail { center, radius } => {
                if radius.to_usize().is_none_or(|r| r > PATTERN_CAP) {
                    return None;
                }
                let mut v = Vec::new();
                let mut x = center - radius + Int::one();
                let end = center + radius;
                while x < end {
                    v.push(x.clone());
                    x += 1;
                }
                IntSet::Finite(v)
            }
            IntSet::HalfTail { threshold } => IntSet::lower_half(threshold - Int::one()),
            IntSet::Affine { unit, shift, inner } => {
                IntSet::affine(*unit, shift.clone(), inner.complement()?)
            }
            IntSet::Union(parts) => IntSet::Intersection(
                parts.iter().map(IntSet::complement).collect::<Option<_>>()?,
            ),
            IntSet::Intersection(parts) => {
                IntSet::Union(parts.iter().map(IntSet::complement).collect::<Option<_>>()?)
            }
        })
    }

    /// `self \ other`.
    pub fn minus(&self, other: &IntSet) -> Option<IntSet> {
        Some(IntSet::Intersection(alloc::vec![self.clone(), other.complement()?]).normalize())
    }

    /// The witness-order smallest member (absolute value, negative first).
    ///
    /// `Some(None)` means the set is empty; `None` means the normalizer's
    /// caps (or `cap`) were exceeded before a decision.
    pub fn first_member(&self, cap: usize) -> Option<Option<Int>> {
        let n = self.normalize();
        let prof = profile_of(&n)?;
        let (a, b) = prof.span.clone().unwrap_or_else(|| (Int::zero(), Int::zero()));
        let period = crate::arith::lcm(&prof.left.m, &prof.right.m);
        let r = a.abs().max(b.abs()) + period;
        if r.to_usize().is_none_or(|r| r > cap) {
            return None;
        }
        Some(Window::symmetric(r).witness_order().find(|x| n.contains(x)))
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, xs: &[Int]) -> fmt::Result {
            write!(f, "{{")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")
        }
        fn joined(f: &mut fmt::Formatter<'_>, parts: &[IntSet], sep: &str) -> fmt::Result {
            write!(f, "(")?;
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    write!(f, " {sep} ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")
        }
        match self {
            IntSet::Empty => write!(f, "{{}}"),
            IntSet::Finite(e) => list(f, e),
            IntSet::Cofinite(e) if e.is_empty() => write!(f, "Z"),
            IntSet::Cofinite(e) => {
                write!(f, "Z\\")?;
                list(f, e)
            }
            IntSet::Congruence { modulus, residues } => {
                write!(f, "{modulus}Z+")?;
                list(f, residues)
            }
            IntSet::Tail { center, radius } => write!(f, "{{|x-{center}|>={radius}}}"),
            IntSet::HalfTail { threshold } => write!(f, "{{x>={threshold}}}"),
            IntSet::Affine { unit: Unit::Minus, shift, inner }
                if shift.is_zero() && matches!(**inner, IntSet::HalfTail { .. }) =>
            {
                match &**inner {
                    IntSet::HalfTail { threshold } => write!(f, "{{x<={}}}", -threshold),
                    _ => unreachable!(),
                }
            }
            IntSet::Affine { unit, shift, inner } => {
                let s = if *unit == Unit::Minus { "-" } else { "" };
                write!(f, "{s}{inner}+{shift}")
            }
            IntSet::Union(parts) => joined(f, parts, "∪"),
            IntSet::Intersection(parts) => joined(f, parts, "∩"),
        }
    }
}

#[cfg(test)]
mod tests;
