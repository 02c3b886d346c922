//! Finite windows of the integer line and offset bit arrays over them.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, ToPrimitive};

use crate::Int;

/// Default cap on the number of points a single window may span.
pub const DEFAULT_WINDOW_CAP: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WindowError {
    #[error("window [{lo}, {hi}] is inverted")]
    Inverted { lo: Int, hi: Int },
    #[error("window of {len} points exceeds the size cap of {cap}")]
    TooLarge { len: Int, cap: usize },
}

/// Closed window `[lo, hi]` of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: Int,
    pub hi: Int,
}

impl Window {
    pub fn new(lo: impl Into<Int>, hi: impl Into<Int>) -> Result<Self, WindowError> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo > hi {
            return Err(WindowError::Inverted { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    /// Symmetric window `[-r, r]`.
    pub fn symmetric(r: impl Into<Int>) -> Self {
        let r: Int = r.into();
        let r = if r < Int::from(0) { -r } else { r };
        Window { lo: -r.clone(), hi: r }
    }

    pub fn contains(&self, x: &Int) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Number of points, checked against `cap`.
    pub fn checked_len(&self, cap: usize) -> Result<usize, WindowError> {
        let len = &self.hi - &self.lo + Int::one();
        match len.to_usize() {
            Some(n) if n <= cap => Ok(n),
            _ => Err(WindowError::TooLarge { len, cap }),
        }
    }

    /// Largest absolute value in the window.
    pub fn radius(&self) -> Int {
        let a = if self.lo < Int::from(0) { -self.lo.clone() } else { self.lo.clone() };
        let b = if self.hi < Int::from(0) { -self.hi.clone() } else { self.hi.clone() };
        a.max(b)
    }

    /// The window scaled about zero by `k`, e.g. `[-50,50]` to `[-100,100]`.
    pub fn scaled(&self, k: i64) -> Window {
        Window { lo: &self.lo * k, hi: &self.hi * k }
    }

    /// Points ordered by absolute value, negative first on ties.
    pub fn witness_order(&self) -> impl Iterator<Item = Int> + '_ {
        let r = self.radius();
        let mut k = Int::from(0);
        let mut negative_next = false;
        core::iter::from_fn(move || loop {
            if k > r {
                return None;
            }
            let candidate = if k == Int::from(0) {
                k += 1;
                negative_next = true;
                Int::from(0)
            } else if negative_next {
                negative_next = false;
                -k.clone()
            } else {
                let c = k.clone();
                k += 1;
                negative_next = true;
                c
            };
            if self.contains(&candidate) {
                return Some(candidate);
            }
        })
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Three-valued membership verdict for windowed searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership3 {
    In,
    Out,
    /// Not found among sums of summands with `|a| <= radius`.
    OutUpTo(Int),
}

/// A set of integers inside `[lo, lo + len)` stored as a bit array.
#[derive(Clone, PartialEq, Eq)]
pub struct BitWindow {
    lo: Int,
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BitWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BitWindow")
            .field("lo", &self.lo)
            .field("len", &self.len)
            .field("members", &self.values())
            .finish()
    }
}

impl BitWindow {
    pub fn empty(lo: Int, len: usize) -> Self {
        BitWindow { lo, len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn over(w: &Window, cap: usize) -> Result<Self, WindowError> {
        Ok(Self::empty(w.lo.clone(), w.checked_len(cap)?))
    }

    /// The set `{0}`, neutral for [`BitWindow::sum`].
    pub fn zero() -> Self {
        let mut b = Self::empty(Int::from(0), 1);
        b.words[0] = 1;
        b
    }

    pub fn lo(&self) -> &Int {
        &self.lo
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn set_offset(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn clear_offset(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
    }

    /// Sets offsets `from..to` (clamped to the window).
    pub fn fill(&mut self, from: usize, to: usize) {
        let to = to.min(self.len);
        let mut i = from;
        while i < to {
            if i.is_multiple_of(64) && i + 64 <= to {
                self.words[i / 64] = u64::MAX;
                i += 64;
            } else {
                self.set_offset(i);
                i += 1;
            }
        }
    }

    pub fn get_offset(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn offset_of(&self, x: &Int) -> Option<usize> {
        let d = (x - &self.lo).to_usize()?;
        (d < self.len).then_some(d)
    }

    pub fn insert(&mut self, x: &Int) -> bool {
        match self.offset_of(x) {
            Some(i) => {
                self.set_offset(i);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, x: &Int) -> bool {
        self.offset_of(x).is_some_and(|i| self.get_offset(i))
    }

    pub fn offsets(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    pub fn values(&self) -> Vec<Int> {
        self.offsets().map(|i| &self.lo + i).collect()
    }

    /// Minkowski sum, computed by OR-ing shifted copies of the denser
    /// operand for every member of the sparser one.
    pub fn sum(&self, other: &BitWindow) -> BitWindow {
        let (sparse, dense) = if self.count() <= other.count() {
            (self, other)
        } else {
            (other, self)
        };
        let len = sparse.len + dense.len - 1;
        let mut out = BitWindow::empty(&sparse.lo + &dense.lo, len);
        for shift in sparse.offsets() {
            or_shifted(&mut out.words, &dense.words, shift);
        }
        out.trim_tail();
        out
    }

    /// `h`-fold sumset by repeated doubling.
    pub fn hfold(&self, h: usize) -> BitWindow {
        let mut acc = BitWindow::zero();
        let mut base = self.clone();
        let mut k = h;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.sum(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sum(&base);
            }
        }
        acc
    }

    /// Members inside `w`, as a bit window over `w`.
    pub fn restrict(&self, w: &Window, cap: usize) -> Result<BitWindow, WindowError> {
        let mut out = BitWindow::over(w, cap)?;
        for i in self.offsets() {
            let x = &self.lo + i;
            if w.contains(&x) {
                out.insert(&x);
            }
        }
        Ok(out)
    }

    pub fn intersect_with(&mut self, other: &BitWindow) {
        if self.lo == other.lo && self.len == other.len {
            for (a, b) in self.words.iter_mut().zip(&other.words) {
                *a &= *b;
            }
            return;
        }
        let keep: Vec<usize> = self
            .offsets()
            .filter(|&i| other.contains(&(&self.lo + i)))
            .collect();
        self.words.iter_mut().for_each(|w| *w = 0);
        for i in keep {
            self.set_offset(i);
        }
    }

    fn trim_tail(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }
}

fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let j = i + ws;
        if j < dst.len() {
            dst[j] |= w << bs;
        }
        if bs > 0 && j + 1 < dst.len() {
            dst[j + 1] |= w >> (64 - bs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ints};

    fn bits(lo: i64, xs: &[i64], len: usize) -> BitWindow {
        let mut b = BitWindow::empty(int(lo), len);
        for &x in xs {
            assert!(b.insert(&int(x)));
        }
        b
    }

    #[test]
    fn witness_order_is_abs_then_negative_first() {
        let w = Window::new(-2, 3).unwrap();
        let got: Vec<Int> = w.witness_order().collect();
        assert_eq!(got, ints(&[0, -1, 1, -2, 2, 3]));
    }

    #[test]
    fn sum_matches_pairwise() {
        let a = bits(0, &[0, 1, 3], 4);
        let s = a.sum(&a);
        assert_eq!(s.values(), ints(&[0, 1, 2, 3, 4, 6]));
        let b = bits(-70, &[-70, -5, 60], 131);
        let s = a.sum(&b);
        let mut expect = Vec::new();
        for x in [0, 1, 3] {
            for y in [-70, -5, 60] {
                expect.push(int(x + y));
            }
        }
        crate::arith::sort_dedup(&mut expect);
        assert_eq!(s.values(), expect);
    }

    #[test]
    fn hfold_by_doubling_matches_iteration() {
        let a = bits(-3, &[-3, 0, 2], 6);
        let mut it = BitWindow::zero();
        for h in 1..=7 {
            it = it.sum(&a);
            assert_eq!(a.hfold(h).values(), it.values(), "h={h}");
        }
    }

    #[test]
    fn inverted_and_oversized_windows_rejected() {
        assert!(Window::new(3, 1).is_err());
        let w = Window::new(0, 100).unwrap();
        assert!(matches!(w.checked_len(10), Err(WindowError::TooLarge { .. })));
    }
}
