//! Small integer helpers shared by the set algebra.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Int;

/// Least nonnegative residue of `x` modulo `m` (`m > 0`).
pub fn modp(x: &Int, m: &Int) -> Int {
    x.mod_floor(m)
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    a.lcm(b)
}

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn ints(vs: &[i64]) -> Vec<Int> {
    vs.iter().map(|&v| BigInt::from(v)).collect()
}

/// Sorts and removes duplicates in place.
pub fn sort_dedup(v: &mut Vec<Int>) {
    v.sort();
    v.dedup();
}

/// Residues `0..m` as a vector, or `None` when `m` exceeds `cap`.
pub fn all_residues(m: &Int, cap: usize) -> Option<Vec<Int>> {
    let n = m.to_usize()?;
    if n > cap {
        return None;
    }
    Some((0..n).map(BigInt::from).collect())
}

/// Lifts residues modulo `m` to residues modulo `big` (a multiple of `m`).
/// Returns `None` when the lifted list would exceed `cap` entries.
pub fn lift_residues(residues: &[Int], m: &Int, big: &Int, cap: usize) -> Option<Vec<Int>> {
    debug_assert!(big.is_multiple_of(m));
    let factor = (big / m).to_usize()?;
    if factor.checked_mul(residues.len())? > cap {
        return None;
    }
    let mut out = Vec::with_capacity(factor * residues.len());
    let mut offset = Int::zero();
    for _ in 0..factor {
        for r in residues {
            out.push(r + &offset);
        }
        offset += m;
    }
    out.sort();
    Some(out)
}

/// Smallest period `d | m` of a residue pattern, together with the reduced
/// residues modulo `d`. `residues` must be sorted and nonempty.
pub fn reduce_pattern(m: &Int, residues: &[Int]) -> (Int, Vec<Int>) {
    if residues.is_empty() {
        return (Int::one(), Vec::new());
    }
    let base = &residues[0];
    let mut candidates: Vec<Int> = residues
        .iter()
        .map(|r| {
            let d = modp(&(r - base), m);
            if d.is_zero() {
                m.clone()
            } else {
                d
            }
        })
        .filter(|d| m.is_multiple_of(d))
        .collect();
    candidates.push(m.clone());
    sort_dedup(&mut candidates);
    for d in candidates {
        if is_period(m, residues, &d) {
            let mut reduced: Vec<Int> = residues.iter().map(|r| modp(r, &d)).collect();
            sort_dedup(&mut reduced);
            return (d, reduced);
        }
    }
    (m.clone(), residues.to_vec())
}

fn is_period(m: &Int, residues: &[Int], d: &Int) -> bool {
    residues
        .iter()
        .all(|r| residues.binary_search(&modp(&(r + d), m)).is_ok())
}

/// Converts to `i64` or `None`.
pub fn small(x: &Int) -> Option<i64> {
    x.to_i64()
}

pub fn abs(x: &Int) -> Int {
    x.abs()
}

/// Orders integers by absolute value, negative first on ties.
pub fn witness_order(a: &Int, b: &Int) -> core::cmp::Ordering {
    a.abs().cmp(&b.abs()).then(a.cmp(b))
}

/// Nonnegative divisors of `|n|` (`n != 0`) by trial division, or `None`
/// if `|n|` does not fit in a `u64`.
pub fn divisors(n: &Int) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u64 = 1;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_reduction_finds_smallest_period() {
        let (d, r) = reduce_pattern(&int(12), &ints(&[0, 3, 6, 9]));
        assert_eq!(d, int(3));
        assert_eq!(r, ints(&[0]));
        let (d, r) = reduce_pattern(&int(7), &ints(&[0, 1, 3]));
        assert_eq!(d, int(7));
        assert_eq!(r, ints(&[0, 1, 3]));
        let (d, r) = reduce_pattern(&int(4), &ints(&[0, 1, 2, 3]));
        assert_eq!(d, int(1));
        assert_eq!(r, ints(&[0]));
    }

    #[test]
    fn lifting_respects_cap() {
        assert_eq!(
            lift_residues(&ints(&[1]), &int(2), &int(6), 10),
            Some(ints(&[1, 3, 5]))
        );
        assert_eq!(lift_residues(&ints(&[1]), &int(2), &int(1 << 40), 1000), None);
    }

    #[test]
    fn divisor_enumeration() {
        assert_eq!(divisors(&int(12)), Some(alloc::vec![1, 2, 3, 4, 6, 12]));
        assert_eq!(divisors(&int(-7)), Some(alloc::vec![1, 7]));
        assert_eq!(divisors(&int(0)), None);
    }
}
