//! h-fold sumsets, h-fold integer products, representation counts and
//! basis orders.
//!
//! Closed forms come from a small rewrite algebra over normalized sets. When
//! no rule applies, sums are evaluated over a window by bit-array convolution
//! and reported with a three-valued membership contract.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{divisors, gcd, lcm, modp, sort_dedup};
use crate::intset::{profile_of, IntSet, Profile, Unit, PATTERN_CAP};
use crate::window::{BitWindow, Membership3, Window, WindowError, DEFAULT_WINDOW_CAP};
use crate::Int;

/// Largest number of union parts expanded multinomially.
pub const MAX_UNION_PARTS: usize = 4;
/// Largest `h` for which unions are expanded multinomially.
pub const MAX_UNION_H: usize = 8;
const BRUTE_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SumsetError {
    #[error("h must be at least 1")]
    ZeroH,
    #[error("generation radius {radius} is smaller than the window radius {needed}")]
    Radius { radius: Int, needed: Int },
    #[error("{0}")]
    Domain(&'static str),
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// An h-fold sum or product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SumsetResult {
    /// Exact closed form.
    Closed(IntSet),
    /// Members found inside `window` using summands with `|a| <= generation_radius`.
    /// With `complete` set, no member of the true result inside the window is missing.
    Windowed { window: Window, members: Vec<Int>, generation_radius: Int, complete: bool },
}

impl SumsetResult {
    pub fn membership(&self, x: &Int) -> Membership3 {
        match self {
            SumsetResult::Closed(s) => {
                if s.contains(x) {
                    Membership3::In
                } else {
                    Membership3::Out
                }
            }
            SumsetResult::Windowed { window, members, generation_radius, complete } => {
                if members.binary_search(x).is_ok() {
                    Membership3::In
                } else if *complete && window.contains(x) {
                    Membership3::Out
                } else {
                    Membership3::OutUpTo(generation_radius.clone())
                }
            }
        }
    }

    /// Known members inside `w`.
    pub fn members_in(&self, w: &Window, cap: usize) -> Result<Vec<Int>, WindowError> {
        match self {
            SumsetResult::Closed(s) => s.materialize(w, cap),
            SumsetResult::Windowed { members, .. } => {
                Ok(members.iter().filter(|x| w.contains(x)).cloned().collect())
            }
        }
    }

    /// `true` when members inside `w` are known exactly.
    pub fn is_exact_on(&self, w: &Window) -> bool {
        match self {
            SumsetResult::Closed(_) => true,
            SumsetResult::Windowed { window, complete, .. } => {
                *complete && window.lo <= w.lo && w.hi <= window.hi
            }
        }
    }

    pub fn closed(&self) -> Option<&IntSet> {
        match self {
            SumsetResult::Closed(s) => Some(s),
            SumsetResult::Windowed { .. } => None,
        }
    }
}

/// Number of ordered representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepCount {
    Exact(Int),
    /// Count over a bounded search; the true value may be larger.
    LowerBound(Int),
    Infinite,
}

impl RepCount {
    pub fn is_positive(&self) -> bool {
        match self {
            RepCount::Exact(n) | RepCount::LowerBound(n) => n.is_positive(),
            RepCount::Infinite => true,
        }
    }
}

/// Shapes the rewrite algebra knows how to add.
#[derive(Debug, Clone)]
enum Shape {
    Empty,
    Finite(Vec<Int>),
    /// Complement of a finite set (cofinite sets and centered tails).
    Cofinite,
    Periodic(Int, Vec<Int>),
    /// `start + step * N_0`.
    Up(Int, Int),
    /// `end - step * N_0`.
    Down(Int, Int),
    Union(Vec<IntSet>),
}

fn shape(s: &IntSet) -> Option<Shape> {
    Some(match s {
        IntSet::Empty => Shape::Empty,
        IntSet::Finite(e) => Shape::Finite(e.clone()),
        IntSet::Cofinite(_) | IntSet::Tail { .. } => Shape::Cofinite,
        IntSet::Congruence { modulus, residues } => {
            Shape::Periodic(modulus.clone(), residues.clone())
        }
        IntSet::HalfTail { threshold } => Shape::Up(threshold.clone(), Int::one()),
        IntSet::Affine { unit: Unit::Minus, shift, inner } => match &**inner {
            IntSet::HalfTail { threshold } => Shape::Down(shift - threshold, Int::one()),
            _ => return None,
        },
        IntSet::Intersection(parts) if parts.len() == 2 => {
            let (m, r) = match &parts[0] {
                IntSet::Congruence { modulus, residues } if residues.len() == 1 => {
                    (modulus, &residues[0])
                }
                _ => return None,
            };
            match shape(&parts[1])? {
                Shape::Up(t, _) => {
                    let start = &t + modp(&(r - &t), m);
                    Shape::Up(start, m.clone())
                }
                Shape::Down(b, _) => {
                    let end = &b - modp(&(&b - r), m);
                    Shape::Down(end, m.clone())
                }
                _ => return None,
            }
        }
        IntSet::Union(parts) => Shape::Union(parts.clone()),
        _ => return None,
    })
}

fn periodic(m: Int, r: Vec<Int>) -> IntSet {
    let r: Vec<Int> = r.iter().map(|x| modp(x, &m)).collect();
    IntSet::congruence(m, r).map(|s| s.normalize()).unwrap_or(IntSet::Empty)
}

fn progression_up(start: Int, step: Int) -> IntSet {
    if step.is_one() {
        return IntSet::HalfTail { threshold: start };
    }
    let r = modp(&start, &step);
    IntSet::Intersection(vec![
        IntSet::Congruence { modulus: step, residues: vec![r] },
        IntSet::HalfTail { threshold: start },
    ])
}

fn progression_down(end: Int, step: Int) -> IntSet {
    if step.is_one() {
        return IntSet::lower_half(end);
    }
    let r = modp(&end, &step);
    IntSet::Intersection(vec![
        IntSet::Congruence { modulus: step, residues: vec![r] },
        IntSet::lower_half(end),
    ])
}

fn residue_sum(m: &Int, a: &[Int], b: &[Int]) -> Option<Vec<Int>> {
    if a.len().checked_mul(b.len())? > BRUTE_CAP {
        return None;
    }
    let mut out: Vec<Int> = a.iter().flat_map(|x| b.iter().map(move |y| modp(&(x + y), m))).collect();
    sort_dedup(&mut out);
    Some(out)
}

fn finite_sum(a: &[Int], b: &[Int]) -> Option<Vec<Int>> {
    if a.len().checked_mul(b.len())? > BRUTE_CAP {
        return None;
    }
    let mut out: Vec<Int> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    sort_dedup(&mut out);
    Some(out)
}

/// Exact `A + B` when a rewrite rule applies.
pub fn sum_sets(a: &IntSet, b: &IntSet) -> Option<IntSet> {
    let (a, b) = (a.normalize(), b.normalize());
    let (sa, sb) = (shape(&a)?, shape(&b)?);
    let out = match (sa, sb) {
        (Shape::Empty, _) | (_, Shape::Empty) => IntSet::Empty,
        (Shape::Finite(x), Shape::Finite(y)) => IntSet::Finite(finite_sum(&x, &y)?),
        (Shape::Finite(x), _) => shifts(&x, &b)?,
        (_, Shape::Finite(y)) => shifts(&y, &a)?,
        (Shape::Union(parts), _) => union_of(parts.iter().map(|p| sum_sets(p, &b)))?,
        (_, Shape::Union(parts)) => union_of(parts.iter().map(|p| sum_sets(&a, p)))?,
        (Shape::Cofinite, _) | (_, Shape::Cofinite) => IntSet::all(),
        (Shape::Periodic(m1, r1), Shape::Periodic(m2, r2)) => {
            let g = gcd(&m1, &m2);
            periodic(g.clone(), residue_sum(&g, &r1, &r2)?)
        }
        (Shape::Periodic(m, r), Shape::Up(s, k) | Shape::Down(s, k))
        | (Shape::Up(s, k) | Shape::Down(s, k), Shape::Periodic(m, r)) => {
            let g = gcd(&m, &k);
            periodic(g.clone(), r.iter().map(|x| x + &s).collect())
        }
        (Shape::Up(s1, k1), Shape::Up(s2, k2)) => {
            progression_up(s1 + s2, nested_step(&k1, &k2)?)
        }
        (Shape::Down(e1, k1), Shape::Down(e2, k2)) => {
            progression_down(e1 + e2, nested_step(&k1, &k2)?)
        }
        (Shape::Up(s, k1), Shape::Down(e, k2)) | (Shape::Down(e, k2), Shape::Up(s, k1)) => {
            periodic(gcd(&k1, &k2), vec![s + e])
        }
    };
    Some(out.normalize())
}

/// `k1 N_0 + k2 N_0` is a single progression when one step divides the other.
fn nested_step(k1: &Int, k2: &Int) -> Option<Int> {
    if k2.is_multiple_of(k1) {
        Some(k1.clone())
    } else if k1.is_multiple_of(k2) {
        Some(k2.clone())
    } else {
        None
    }
}

fn shifts(points: &[Int], set: &IntSet) -> Option<IntSet> {
    if points.len() > 256 {
        return None;
    }
    union_of(points.iter().map(|t| Some(set.shifted(t))))
}

fn union_of(parts: impl Iterator<Item = Option<IntSet>>) -> Option<IntSet> {
    let parts: Vec<IntSet> = parts.collect::<Option<_>>()?;
    Some(match parts.len() {
        0 => IntSet::Empty,
        _ => IntSet::Union(parts).normalize(),
    })
}

fn finite_hfold(e: &[Int], h: usize) -> Option<Vec<Int>> {
    let (lo, hi) = (e.first()?, e.last()?);
    let span = (hi - lo).to_usize()?;
    if span.checked_add(1)?.checked_mul(h)? <= DEFAULT_WINDOW_CAP {
        let mut bits = BitWindow::empty(lo.clone(), span + 1);
        for x in e {
            bits.insert(x);
        }
        return Some(bits.hfold(h).values());
    }
    let mut acc: Vec<Int> = vec![Int::zero()];
    for _ in 0..h {
        acc = finite_sum(&acc, e)?;
    }
    Some(acc)
}

/// Exact `hA` when the rewrite algebra closes.
pub fn try_closed_hfold_sum(set: &IntSet, h: usize) -> Option<IntSet> {
    if h == 0 {
        return None;
    }
    let s = set.normalize();
    if h == 1 {
        return Some(s);
    }
    let hh = Int::from(h);
    let out = match shape(&s)? {
        Shape::Empty => IntSet::Empty,
        Shape::Finite(e) => IntSet::Finite(finite_hfold(&e, h)?),
        Shape::Cofinite => IntSet::all(),
        Shape::Periodic(m, r) => {
            let n = m.to_usize().filter(|n| *n <= PATTERN_CAP)?;
            let mut acc = vec![false; n];
            acc[0] = true;
            for _ in 0..h {
                let mut next = vec![false; n];
                for (i, _) in acc.iter().enumerate().filter(|(_, b)| **b) {
                    for x in &r {
                        next[(i + x.to_usize()?) % n] = true;
                    }
                }
                acc = next;
            }
            let res: Vec<Int> =
                acc.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| Int::from(i)).collect();
            periodic(m, res)
        }
        Shape::Up(s, k) => progression_up(&hh * s, k),
        Shape::Down(e, k) => progression_down(&hh * e, k),
        Shape::Union(parts) => {
            if parts.len() > MAX_UNION_PARTS || h > MAX_UNION_H {
                return None;
            }
            multinomial(&parts, h)?
        }
    };
    Some(out.normalize())
}

/// `hA` for `A = P_1 ∪ ... ∪ P_p` as the union over `k_1 + ... + k_p = h` of
/// `k_1 P_1 + ... + k_p P_p`.
fn multinomial(parts: &[IntSet], h: usize) -> Option<IntSet> {
    let zero = IntSet::Finite(vec![Int::zero()]);
    let mut folds: Vec<Vec<IntSet>> = Vec::with_capacity(parts.len());
    for p in parts {
        let mut f = vec![zero.clone()];
        for k in 1..=h {
            f.push(try_closed_hfold_sum(p, k)?);
        }
        folds.push(f);
    }
    let mut terms = Vec::new();
    let mut counts = vec![0usize; parts.len()];
    loop {
        if counts.iter().sum::<usize>() == h {
            let mut acc = zero.clone();
            for (i, &k) in counts.iter().enumerate() {
                acc = sum_sets(&acc, &folds[i][k])?;
            }
            terms.push(acc);
        }
        // next composition in odometer order
        let mut i = 0;
        loop {
            if i == counts.len() {
                return union_of(terms.into_iter().map(Some));
            }
            counts[i] += 1;
            if counts[i] <= h {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// `hA` in closed form when possible, otherwise windowed over `w`.
pub fn symbolic_hfold_sum(
    set: &IntSet,
    h: usize,
    w: &Window,
    gen_radius: &Int,
) -> Result<SumsetResult, SumsetError> {
    if h == 0 {
        return Err(SumsetError::ZeroH);
    }
    match try_closed_hfold_sum(set, h) {
        Some(c) => Ok(SumsetResult::Closed(c)),
        None => windowed_hfold_sum(set, h, w, gen_radius, DEFAULT_WINDOW_CAP),
    }
}

/// Sums of `h` elements of `A ∩ [-R, R]` that land in `w`.
///
/// The result is complete when a bound on `A` forces every summand of a
/// window member into `[-R, R]`.
pub fn windowed_hfold_sum(
    set: &IntSet,
    h: usize,
    w: &Window,
    gen_radius: &Int,
    cap: usize,
) -> Result<SumsetResult, SumsetError> {
    if h == 0 {
        return Err(SumsetError::ZeroH);
    }
    let needed = w.radius();
    if *gen_radius < needed {
        return Err(SumsetError::Radius { radius: gen_radius.clone(), needed });
    }
    let gen = Window::symmetric(gen_radius.clone());
    let bits = set.materialize_bits(&gen, cap)?;
    let sums = bits.hfold(h);
    let members = sums.values().into_iter().filter(|x| w.contains(x)).collect();
    let complete = summands_bounded(set, h, w, gen_radius);
    Ok(SumsetResult::Windowed {
        window: w.clone(),
        members,
        generation_radius: gen_radius.clone(),
        complete,
    })
}

fn summands_bounded(set: &IntSet, h: usize, w: &Window, r: &Int) -> bool {
    let n = set.normalize();
    let k = Int::from(h - 1);
    let from_below = n.lower_bound().is_some_and(|b| -&b <= *r && &w.hi - &k * &b <= *r);
    let from_above = n.upper_bound().is_some_and(|u| u <= *r && &w.lo - &k * &u >= -r);
    let inside = match (n.lower_bound(), n.upper_bound()) {
        (Some(b), Some(u)) => -&b <= *r && u <= *r,
        _ => false,
    };
    from_below || from_above || inside
}

/// Number of ordered `h`-tuples from `A` summing (or multiplying) to `x`.
pub fn representation_count(
    set: &IntSet,
    h: usize,
    x: &Int,
    mode: Mode,
    gen_radius: &Int,
) -> Result<RepCount, SumsetError> {
    if h == 0 {
        return Err(SumsetError::ZeroH);
    }
    match mode {
        Mode::Multiplicative => multiplicative_count(set, h, x).map(RepCount::Exact),
        Mode::Additive => Ok(additive_count(set, h, x, gen_radius)),
    }
}

fn multiplicative_count(set: &IntSet, h: usize, x: &Int) -> Result<Int, SumsetError> {
    if x.is_zero() {
        return Err(SumsetError::Domain("multiplicative counts need x != 0"));
    }
    if set.contains(&Int::zero()) {
        return Err(SumsetError::Domain("multiplicative counts need 0 outside the set"));
    }
    fn go(set: &IntSet, x: &Int, k: usize) -> Result<Int, SumsetError> {
        if k == 1 {
            return Ok(if set.contains(x) { Int::one() } else { Int::zero() });
        }
        let ds = divisors(x).ok_or(SumsetError::Domain("value too large to factor"))?;
        let mut total = Int::zero();
        for d in ds {
            for d in [Int::from(d), -Int::from(d)] {
                if set.contains(&d) {
                    total += go(set, &(x / &d), k - 1)?;
                }
            }
        }
        Ok(total)
    }
    go(set, x, h)
}

fn additive_count(set: &IntSet, h: usize, x: &Int, gen_radius: &Int) -> RepCount {
    if h == 1 {
        return RepCount::Exact(if set.contains(x) { Int::one() } else { Int::zero() });
    }
    let s = set.normalize();
    let Some(prof) = profile_of(&s) else {
        return RepCount::LowerBound(count_in_range(&s, h, x, &-gen_radius, gen_radius));
    };
    if let Some(true) = infinitely_many(&s, &prof, h, x) {
        return RepCount::Infinite;
    }
    // Without an unbounded family, every tuple lies entirely above the start
    // of the span or entirely below its end.
    let (a, b) = prof.span.clone().unwrap_or_else(|| (Int::zero(), Int::zero()));
    let k = Int::from(h - 1);
    let lo = a.clone().min(x - &k * &b);
    let hi = b.clone().max(x - &k * &a);
    let exact = (&hi - &lo).to_usize().is_some_and(|n| n.saturating_mul(h) <= DEFAULT_WINDOW_CAP);
    if exact {
        RepCount::Exact(count_in_range(&s, h, x, &lo, &hi))
    } else {
        RepCount::LowerBound(count_in_range(&s, h, x, &-gen_radius, gen_radius))
    }
}

/// `Some(true)` when a tuple with one summand past each end of the span
/// exists; such tuples shift by the common period forever.
fn infinitely_many(
    s: &IntSet,
    prof: &Profile,
    h: usize,
    x: &Int,
) -> Option<bool> {
    if prof.left.r.is_empty() || prof.right.r.is_empty() {
        return Some(false);
    }
    let m = lcm(&prof.left.m, &prof.right.m);
    let n = m.to_usize().filter(|n| *n <= PATTERN_CAP)?;
    // residues occupied by A modulo m
    let mut occupied = vec![false; n];
    let (a, b) = prof.span.clone().unwrap_or_else(|| (Int::zero(), Int::zero()));
    let mut y = &a - &m;
    while y <= &b + &m {
        if s.contains(&y) {
            occupied[modp(&y, &m).to_usize()?] = true;
        }
        y += 1;
    }
    let mut acc = vec![false; n];
    acc[0] = true;
    for _ in 0..h - 2 {
        let mut next = vec![false; n];
        for i in (0..n).filter(|&i| acc[i]) {
            for j in (0..n).filter(|&j| occupied[j]) {
                next[(i + j) % n] = true;
            }
        }
        acc = next;
    }
    let right: Vec<Int> = prof.right.r.iter().flat_map(|r| lifts(r, &prof.right.m, &m, n)).collect();
    let left: Vec<Int> = prof.left.r.iter().flat_map(|r| lifts(r, &prof.left.m, &m, n)).collect();
    for r1 in &right {
        for r2 in &left {
            let need = modp(&(x - r1 - r2), &m).to_usize()?;
            if acc[need] {
                return Some(true);
            }
        }
    }
    Some(false)
}

fn lifts(r: &Int, m: &Int, big: &Int, cap: usize) -> Vec<Int> {
    let k = (big / m).to_usize().unwrap_or(0).min(cap);
    (0..k).map(|i| r + m * Int::from(i)).collect()
}

/// Ordered tuples from `A ∩ [lo, hi]` with sum `x`, by dynamic programming
/// over partial sums.
fn count_in_range(s: &IntSet, h: usize, x: &Int, lo: &Int, hi: &Int) -> Int {
    let Ok(w) = Window::new(lo.clone(), hi.clone()) else {
        return Int::zero();
    };
    let Ok(members) = s.materialize(&w, DEFAULT_WINDOW_CAP) else {
        return Int::zero();
    };
    let Some(width) = (hi - lo).to_usize() else {
        return Int::zero();
    };
    let offs: Vec<usize> = members.iter().filter_map(|a| (a - lo).to_usize()).collect();
    // dp[j] counts k-tuples with sum k*lo + j
    let mut dp: Vec<Int> = vec![Int::one()];
    for k in 1..=h {
        let mut next = vec![Int::zero(); k * width + 1];
        for (j, c) in dp.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for &o in &offs {
                next[j + o] += c;
            }
        }
        dp = next;
    }
    match (x - Int::from(h) * lo).to_usize() {
        Some(j) if j < dp.len() => dp[j].clone(),
        _ => Int::zero(),
    }
}

/// `A^h = { a_1 ⋯ a_h }` inside `w`; exact because every factor of `x`
/// divides `x`.
pub fn hfold_product(set: &IntSet, h: usize, w: &Window) -> Result<SumsetResult, SumsetError> {
    if h == 0 {
        return Err(SumsetError::ZeroH);
    }
    if set.contains(&Int::zero()) {
        return Err(SumsetError::Domain("product sets need 0 outside the set"));
    }
    w.checked_len(DEFAULT_WINDOW_CAP)?;
    fn reachable(set: &IntSet, x: &Int, k: usize) -> Result<bool, SumsetError> {
        if k == 1 {
            return Ok(set.contains(x));
        }
        let ds = divisors(x).ok_or(SumsetError::Domain("value too large to factor"))?;
        for d in ds {
            for d in [Int::from(d), -Int::from(d)] {
                if set.contains(&d) && reachable(set, &(x / &d), k - 1)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
    let mut members = Vec::new();
    let mut x = w.lo.clone();
    while x <= w.hi {
        if !x.is_zero() && reachable(set, &x, h)? {
            members.push(x.clone());
        }
        x += 1;
    }
    Ok(SumsetResult::Windowed {
        window: w.clone(),
        generation_radius: w.radius(),
        members,
        complete: true,
    })
}

/// Whether `hA` covers a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage {
    Covers,
    /// Certified gap.
    Misses(Int),
    /// Not found with summands up to the radius.
    Undetermined { missing: Int, radius: Int },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVerdict {
    pub h: usize,
    pub coverage: Coverage,
    pub closed_form: bool,
}

/// Coverage of `w` by `hA` for `h = 1..=h_max`.
pub fn basis_order(
    set: &IntSet,
    h_max: usize,
    w: &Window,
    gen_radius: &Int,
) -> Result<Vec<BasisVerdict>, SumsetError> {
    let mut out = Vec::with_capacity(h_max);
    for h in 1..=h_max {
        let r = symbolic_hfold_sum(set, h, w, gen_radius)?;
        let missing = w.witness_order().find(|x| r.membership(x) != Membership3::In);
        let coverage = match missing {
            None => Coverage::Covers,
            Some(x) => match r.membership(&x) {
                Membership3::OutUpTo(radius) => Coverage::Undetermined { missing: x, radius },
                _ => Coverage::Misses(x),
            },
        };
        out.push(BasisVerdict { h, coverage, closed_form: r.closed().is_some() });
    }
    Ok(out)
}

/// Whether an exact order is reported for sets without the identity `0`,
/// where coverage need not be monotone in `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderPolicy {
    IdentityOnly,
    Always,
}

/// Smallest `h` with coverage from `h` through the last tested value,
/// preceded by a certified miss (or `h = 1`).
pub fn exact_order(set: &IntSet, verdicts: &[BasisVerdict], policy: OrderPolicy) -> Option<usize> {
    if policy == OrderPolicy::IdentityOnly && !set.contains(&Int::zero()) {
        return None;
    }
    let first = verdicts.iter().rposition(|v| v.coverage != Coverage::Covers).map_or(0, |i| i + 1);
    if first == verdicts.len() {
        return None;
    }
    match first.checked_sub(1).map(|i| &verdicts[i].coverage) {
        None | Some(Coverage::Misses(_)) => Some(verdicts[first].h),
        _ => None,
    }
}

/// Brute force over all `|A|^h` ordered tuples of a finite set; the oracle
/// used to cross-check everything above.
pub fn brute_hfold(elements: &[Int], h: usize) -> Vec<Int> {
    let mut acc: BTreeSet<Int> = BTreeSet::new();
    acc.insert(Int::zero());
    for _ in 0..h {
        let mut next = BTreeSet::new();
        for s in &acc {
            for a in elements {
                next.insert(s + a);
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// Brute-force ordered representation count over a finite set.
pub fn brute_count(elements: &[Int], h: usize, x: &Int, mode: Mode) -> Int {
    fn go(elements: &[Int], k: usize, acc: Int, x: &Int, mode: Mode) -> Int {
        if k == 0 {
            return if &acc == x { Int::one() } else { Int::zero() };
        }
        elements
            .iter()
            .map(|a| {
                let next = match mode {
                    Mode::Additive => &acc + a,
                    Mode::Multiplicative => &acc * a,
                };
                go(elements, k - 1, next, x, mode)
            })
            .sum()
    }
    let start = match mode {
        Mode::Additive => Int::zero(),
        Mode::Multiplicative => Int::one(),
    };
    go(elements, h, start, x, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ints};
    use proptest::prelude::*;

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    fn cong(m: i64, r: &[i64]) -> IntSet {
        IntSet::congruence(int(m), ints(r)).unwrap()
    }

    #[test]
    fn closed_rules() {
        let tail = IntSet::tail(int(0), int(5)).unwrap();
        assert_eq!(try_closed_hfold_sum(&tail, 2), Some(IntSet::all()));
        assert_eq!(
            try_closed_hfold_sum(&cong(7, &[0, 1, 3]), 2),
            Some(cong(7, &[0, 1, 2, 3, 4, 6]))
        );
        assert_eq!(
            try_closed_hfold_sum(&IntSet::finite(ints(&[0, 1, 3])), 2),
            Some(IntSet::finite(ints(&[0, 1, 2, 3, 4, 6])))
        );
        assert_eq!(
            try_closed_hfold_sum(&IntSet::half_tail(int(1)), 3),
            Some(IntSet::half_tail(int(3)))
        );
        assert_eq!(
            try_closed_hfold_sum(&IntSet::cofinite(ints(&[5])), 2),
            Some(IntSet::all())
        );
        let x = try_closed_hfold_sum(&IntSet::finite(ints(&[4])), 1).unwrap();
        assert_eq!(x, IntSet::finite(ints(&[4])));
    }

    #[test]
    fn union_expansion_of_a_congruence_with_a_point() {
        let a = IntSet::Union(vec![cong(4, &[0]), IntSet::finite(ints(&[1]))]);
        let two = try_closed_hfold_sum(&a, 2).unwrap();
        let expect = IntSet::Union(vec![cong(4, &[0, 1]), IntSet::finite(ints(&[2]))]);
        assert_eq!(two.equivalent(&expect), Some(true));
        let three = try_closed_hfold_sum(&a, 3).unwrap();
        assert!(!three.contains(&int(7)));
        assert!(three.contains(&int(3)));
        assert_eq!(try_closed_hfold_sum(&a, 4), Some(IntSet::all()));
    }

    #[test]
    fn progressions_sum_in_closed_form() {
        // {1 + 2r : r >= 4}
        let p = IntSet::Intersection(vec![cong(2, &[1]), IntSet::half_tail(int(9))]);
        let two = try_closed_hfold_sum(&p, 2).unwrap();
        assert_eq!(two.materialize(&w(0, 30), 1000).unwrap(), ints(&[18, 20, 22, 24, 26, 28, 30]));
        let with_evens = IntSet::Union(vec![cong(2, &[0]), p]);
        assert_eq!(try_closed_hfold_sum(&with_evens, 2), Some(IntSet::all()));
    }

    #[test]
    fn windowed_examples() {
        let n = IntSet::half_tail(int(1));
        let r = windowed_hfold_sum(&n, 3, &w(0, 10), &int(10), 1 << 20).unwrap();
        match r {
            SumsetResult::Windowed { members, complete, .. } => {
                assert_eq!(members, (3..=10).map(int).collect::<Vec<_>>());
                assert!(complete);
            }
            _ => panic!(),
        }
        let t = IntSet::tail(int(0), int(5)).unwrap();
        let r = windowed_hfold_sum(&t, 2, &w(-3, 3), &int(20), 1 << 20).unwrap();
        assert_eq!(r.members_in(&w(-3, 3), 100).unwrap(), (-3..=3).map(int).collect::<Vec<_>>());
        assert!(!r.is_exact_on(&w(-3, 3)));
        let f = IntSet::finite(ints(&[0, 1]));
        let r = windowed_hfold_sum(&f, 4, &w(0, 10), &int(10), 1 << 20).unwrap();
        assert_eq!(r.members_in(&w(0, 10), 100).unwrap(), ints(&[0, 1, 2, 3, 4]));
        assert!(r.is_exact_on(&w(0, 10)));
        assert_eq!(r.membership(&int(7)), Membership3::Out);
        assert!(windowed_hfold_sum(&f, 2, &w(0, 10), &int(5), 1 << 20).is_err());
    }

    #[test]
    fn incomplete_searches_never_claim_absence() {
        let t = IntSet::tail(int(0), int(5)).unwrap();
        let r = windowed_hfold_sum(&t, 3, &w(-3, 3), &int(2), 1 << 20);
        assert!(r.is_err());
        let r = windowed_hfold_sum(&t, 3, &w(-3, 3), &int(6), 1 << 20).unwrap();
        assert_eq!(r.membership(&int(0)), Membership3::OutUpTo(int(6)));
    }

    #[test]
    fn representation_examples() {
        let r = representation_count(&cong(3, &[1]), 1, &int(4), Mode::Additive, &int(10));
        assert_eq!(r, Ok(RepCount::Exact(int(1))));
        let nz = IntSet::nonzero();
        let r = representation_count(&nz, 2, &int(6), Mode::Multiplicative, &int(10));
        assert_eq!(r, Ok(RepCount::Exact(int(8))));
        let r = representation_count(&IntSet::all(), 2, &int(0), Mode::Additive, &int(10));
        assert_eq!(r, Ok(RepCount::Infinite));
        assert!(representation_count(&nz, 2, &int(0), Mode::Multiplicative, &int(10)).is_err());
        let n0 = IntSet::half_tail(int(0));
        let r = representation_count(&n0, 2, &int(5), Mode::Additive, &int(10));
        assert_eq!(r, Ok(RepCount::Exact(int(6))));
    }

    #[test]
    fn representation_counts_on_two_sided_sets() {
        // 4Z ∪ {1}: x = 2 has exactly the representation 1 + 1, while
        // every multiple of 4 splits in infinitely many ways
        let a = IntSet::Union(vec![cong(4, &[0]), IntSet::finite(ints(&[1]))]);
        let add = |x: i64| representation_count(&a, 2, &int(x), Mode::Additive, &int(50)).unwrap();
        assert_eq!(add(2), RepCount::Exact(int(1)));
        assert_eq!(add(8), RepCount::Infinite);
        assert_eq!(add(3), RepCount::Exact(int(0)));
        assert_eq!(add(5), RepCount::Exact(int(2)));
        let evens = cong(2, &[0]);
        let r = representation_count(&evens, 3, &int(7), Mode::Additive, &int(10));
        assert_eq!(r, Ok(RepCount::Exact(int(0))));
    }

    #[test]
    fn product_examples() {
        let r = hfold_product(&IntSet::half_tail(int(1)), 2, &w(1, 12)).unwrap();
        assert_eq!(r.members_in(&w(1, 12), 100).unwrap(), (1..=12).map(int).collect::<Vec<_>>());
        let r = hfold_product(&IntSet::half_tail(int(2)), 2, &w(1, 12)).unwrap();
        assert_eq!(r.members_in(&w(1, 12), 100).unwrap(), ints(&[4, 6, 8, 9, 10, 12]));
        let r = hfold_product(&IntSet::finite(ints(&[-2, 3])), 2, &w(-10, 10)).unwrap();
        assert_eq!(r.members_in(&w(-10, 10), 100).unwrap(), ints(&[-6, 4, 9]));
        assert!(hfold_product(&IntSet::all(), 2, &w(1, 3)).is_err());
    }

    #[test]
    fn basis_examples() {
        let a = IntSet::Union(vec![cong(4, &[0]), IntSet::finite(ints(&[1]))]);
        let v = basis_order(&a, 5, &w(-30, 30), &int(60)).unwrap();
        let cov: Vec<bool> = v.iter().map(|v| v.coverage == Coverage::Covers).collect();
        assert_eq!(cov, [false, false, false, true, true]);
        assert_eq!(v[2].coverage, Coverage::Misses(int(-1)));
        assert_eq!(exact_order(&a, &v, OrderPolicy::IdentityOnly), Some(4));

        let v = basis_order(&IntSet::cofinite(ints(&[5])), 2, &w(-20, 20), &int(40)).unwrap();
        assert_eq!(v[1].coverage, Coverage::Covers);

        let mut pts = vec![0i64];
        for i in 0..=6 {
            pts.push(1 << i);
            pts.push(-(1 << i));
        }
        let a = IntSet::finite(ints(&pts));
        let v = basis_order(&a, 2, &w(-20, 20), &int(64)).unwrap();
        assert_eq!(v[1].coverage, Coverage::Misses(int(-11)));
    }

    #[test]
    fn exact_order_policy_for_sets_without_zero() {
        let a = IntSet::cofinite(ints(&[0]));
        let v = basis_order(&a, 3, &w(-10, 10), &int(30)).unwrap();
        assert_eq!(exact_order(&a, &v, OrderPolicy::IdentityOnly), None);
        assert_eq!(exact_order(&a, &v, OrderPolicy::Always), Some(2));
    }

    fn small_finite() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-12i64..=12, 1..=8)
    }

    proptest! {
        #[test]
        fn closed_and_windowed_match_brute_force(a in small_finite(), h in 1usize..=4) {
            let elems = ints(&a);
            let set = IntSet::finite(elems.clone());
            let expect = brute_hfold(&elems, h);
            let closed = try_closed_hfold_sum(&set, h).unwrap();
            let win = w(-60, 60);
            prop_assert_eq!(closed.materialize(&win, 1000).unwrap(), expect.clone());
            let r = windowed_hfold_sum(&set, h, &win, &int(60), 1 << 20).unwrap();
            prop_assert!(r.is_exact_on(&win));
            prop_assert_eq!(r.members_in(&win, 1000).unwrap(), expect);
        }

        #[test]
        fn counts_match_brute_force(a in small_finite(), h in 1usize..=4, x in -50i64..50) {
            let mut elems = ints(&a);
            sort_dedup(&mut elems);
            let set = IntSet::finite(elems.clone());
            let x = int(x);
            let add = representation_count(&set, h, &x, Mode::Additive, &int(60)).unwrap();
            prop_assert_eq!(add.clone(), RepCount::Exact(brute_count(&elems, h, &x, Mode::Additive)));
            prop_assert_eq!(add.is_positive(), brute_hfold(&elems, h).contains(&x));
            if !elems.contains(&Int::zero()) && !x.is_zero() {
                let mul = representation_count(&set, h, &x, Mode::Multiplicative, &int(60)).unwrap();
                prop_assert_eq!(mul, RepCount::Exact(brute_count(&elems, h, &x, Mode::Multiplicative)));
            }
        }

        #[test]
        fn sums_are_monotone(a in small_finite(), extra in small_finite(), h in 1usize..=3) {
            let small = IntSet::finite(ints(&a));
            let mut both = a.clone();
            both.extend(extra);
            let big = IntSet::finite(ints(&both));
            let win = w(-40, 40);
            let hs = try_closed_hfold_sum(&small, h).unwrap().materialize(&win, 1000).unwrap();
            let hb = try_closed_hfold_sum(&big, h).unwrap();
            prop_assert!(hs.iter().all(|x| hb.contains(x)));
        }

        #[test]
        fn closed_forms_agree_with_windows_on_infinite_sets(
            m in 1i64..8,
            r in prop::collection::vec(0i64..8, 1..3),
            f in prop::collection::vec(-6i64..6, 0..3),
            t in -5i64..5,
            h in 1usize..=3,
        ) {
            // nonnegative-ish set so windows are complete: (mZ + R) ∩ [t, inf) ∪ F ∪ [t+20, inf)
            let mut parts = vec![IntSet::half_tail(int(t + 20))];
            if !f.is_empty() {
                parts.push(IntSet::finite(ints(&f)));
            }
            parts.push(IntSet::congruence(int(m), ints(&r)).unwrap());
            let set = IntSet::Union(parts);
            if let Some(c) = try_closed_hfold_sum(&set, h) {
                let win = w(-30, 30);
                let r = windowed_hfold_sum(&set, h, &win, &int(200), 1 << 20).unwrap();
                let got = r.members_in(&win, 1000).unwrap();
                let exp = c.materialize(&win, 1000).unwrap();
                prop_assert!(got.iter().all(|x| c.contains(x)));
                if r.is_exact_on(&win) {
                    prop_assert_eq!(got, exp);
                }
            }
        }
    }
}
