//! Lattice points in `Z^d`: h-fold sums, representation counts and
//! norm-tail families over `N_0^d`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Signed;

use crate::Int;

pub type Point = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("expected dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("box has lo > hi in coordinate {0}")]
    EmptyBox(usize),
    #[error("{0} points exceed the cap {1}")]
    Cap(usize, usize),
    #[error("h must be at least 1")]
    ZeroH,
    #[error("vector {0} is zero")]
    ZeroVector(usize),
    #[error("vector {0} has a negative coordinate")]
    NegativeCoordinate(usize),
    #[error("need at least one point")]
    NoPoints,
    #[error("m*^2 = {0} is below the largest core norm {1}")]
    MStar(BigRational, i128),
    #[error("core point {0:?} lies outside the box")]
    CoreOutsideBox(Point),
}

/// Largest number of points materialized by a single operation.
pub const LATTICE_CAP: usize = 1 << 20;

pub fn norm_sq(p: &[i64]) -> i128 {
    p.iter().map(|&c| (c as i128) * (c as i128)).sum()
}

fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn check_dims(points: &[Point], d: usize) -> Result<(), LatticeError> {
    match points.iter().find(|p| p.len() != d) {
        Some(p) => Err(LatticeError::Dimension { expected: d, got: p.len() }),
        None => Ok(()),
    }
}

/// A per-coordinate window, optionally cut down to `‖x‖² <= max_norm_sq`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBox {
    lo: Point,
    hi: Point,
    max_norm_sq: Option<i128>,
}

impl LatticeBox {
    pub fn new(lo: Point, hi: Point) -> Result<Self, LatticeError> {
        if lo.len() != hi.len() {
            return Err(LatticeError::Dimension { expected: lo.len(), got: hi.len() });
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(LatticeError::EmptyBox(i));
        }
        Ok(LatticeBox { lo, hi, max_norm_sq: None })
    }

    /// `[-r, r]^d ∩ { ‖x‖ <= r }`.
    pub fn ball(d: usize, r: i64) -> Self {
        LatticeBox { lo: vec![-r; d], hi: vec![r; d], max_norm_sq: Some((r as i128) * (r as i128)) }
    }

    pub fn with_max_norm_sq(mut self, n: i128) -> Self {
        self.max_norm_sq = Some(n);
        self
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim()
            && p.iter().zip(&self.lo).zip(&self.hi).all(|((x, l), h)| l <= x && x <= h)
            && self.max_norm_sq.is_none_or(|m| norm_sq(p) <= m)
    }

    /// Every point of the box, in lexicographic order.
    pub fn points(&self, cap: usize) -> Result<Vec<Point>, LatticeError> {
        let mut count: usize = 1;
        for i in 0..self.dim() {
            let len = (self.hi[i] - self.lo[i] + 1) as usize;
            count = count.saturating_mul(len);
        }
        if count > cap {
            return Err(LatticeError::Cap(count, cap));
        }
        let mut out = vec![self.lo.clone()];
        for i in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (self.lo[i]..=self.hi[i]).map(move |c| {
                        let mut q = p.clone();
                        q[i] = c;
                        q
                    })
                })
                .collect();
        }
        out.retain(|p| self.contains(p));
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSum {
    pub points: BTreeSet<Point>,
    /// The sums would be unchanged by adding any further points of `N_0^d`
    /// outside the box, which holds when every summand is nonnegative.
    pub complete: bool,
}

/// `hA ∩ box` for a finite `A ⊂ Z^d`.
pub fn lattice_hfold_sum(points: &[Point], h: usize, bx: &LatticeBox) -> Result<LatticeSum, LatticeError> {
    if h == 0 {
        return Err(LatticeError::ZeroH);
    }
    check_dims(points, bx.dim())?;
    let nonneg = points.iter().all(|p| p.iter().all(|&c| c >= 0));
    let fits = |p: &Point| !nonneg || p.iter().zip(&bx.hi).all(|(x, h)| x <= h);
    let mut acc: BTreeSet<Point> = BTreeSet::new();
    acc.insert(vec![0; bx.dim()]);
    for _ in 0..h {
        let mut next = BTreeSet::new();
        for s in &acc {
            for a in points {
                let t = add(s, a);
                if fits(&t) {
                    next.insert(t);
                }
            }
            if next.len() > LATTICE_CAP {
                return Err(LatticeError::Cap(next.len(), LATTICE_CAP));
            }
        }
        acc = next;
    }
    acc.retain(|p| bx.contains(p));
    Ok(LatticeSum { points: acc, complete: nonneg })
}

/// Ordered representations of `x` as a sum of `h` points of `A`.
pub fn lattice_rep_count(points: &[Point], h: usize, x: &[i64]) -> Result<u128, LatticeError> {
    if h == 0 {
        return Err(LatticeError::ZeroH);
    }
    check_dims(points, x.len())?;
    let nonneg = points.iter().all(|p| p.iter().all(|&c| c >= 0));
    let mut acc: BTreeMap<Point, u128> = BTreeMap::new();
    acc.insert(vec![0; x.len()], 1);
    for _ in 0..h {
        let mut next: BTreeMap<Point, u128> = BTreeMap::new();
        for (s, n) in &acc {
            for a in points {
                let t = add(s, a);
                if !nonneg || t.iter().zip(x).all(|(u, v)| u <= v) {
                    *next.entry(t).or_insert(0) += n;
                }
            }
        }
        if next.len() > LATTICE_CAP {
            return Err(LatticeError::Cap(next.len(), LATTICE_CAP));
        }
        acc = next;
    }
    Ok(acc.get(x).copied().unwrap_or(0))
}

/// `N_0^d ∩ [0, x]`.
pub fn hypercube(x: &[i64]) -> Result<Vec<Point>, LatticeError> {
    let bx = LatticeBox::new(vec![0; x.len()], x.iter().map(|&c| c.max(0)).collect())?;
    bx.points(LATTICE_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinNormCheck {
    /// `‖x_1 + ... + x_k‖²`.
    pub sum_norm_sq: i128,
    /// `k · min ‖x_i‖²`.
    pub bound: i128,
}

impl MinNormCheck {
    pub fn holds(&self) -> bool {
        self.sum_norm_sq >= self.bound
    }
}

/// `‖x_1 + ... + x_k‖² >= k · min ‖x_i‖²` for nonzero nonnegative vectors.
pub fn min_norm_inequality(vectors: &[Point]) -> Result<MinNormCheck, LatticeError> {
    let first = vectors.first().ok_or(LatticeError::NoPoints)?;
    check_dims(vectors, first.len())?;
    for (i, v) in vectors.iter().enumerate() {
        if v.iter().any(|&c| c < 0) {
            return Err(LatticeError::NegativeCoordinate(i));
        }
        if v.iter().all(|&c| c == 0) {
            return Err(LatticeError::ZeroVector(i));
        }
    }
    let sum = vectors.iter().skip(1).fold(first.clone(), |acc, v| add(&acc, v));
    let min = vectors.iter().map(|v| norm_sq(v)).min().unwrap_or(0);
    Ok(MinNormCheck { sum_norm_sq: norm_sq(&sum), bound: vectors.len() as i128 * min })
}

/// `A_q = A ∪ { x ∈ N_0^d : ‖x‖² >= (2q)² m*² }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormTailFamily {
    core: Vec<Point>,
    m_star_sq: BigRational,
}

impl NormTailFamily {
    pub fn new(core: Vec<Point>, m_star_sq: BigRational) -> Result<Self, LatticeError> {
        let first = core.first().ok_or(LatticeError::NoPoints)?;
        check_dims(&core, first.len())?;
        let max = core.iter().map(|p| norm_sq(p)).max().unwrap_or(0);
        if !m_star_sq.is_positive() || m_star_sq < BigRational::from(Int::from(max)) {
            return Err(LatticeError::MStar(m_star_sq, max));
        }
        let mut core = core;
        core.sort();
        core.dedup();
        Ok(NormTailFamily { core, m_star_sq })
    }

    /// `m*²` set to the largest core norm, or 1 when the core is `{0}`.
    pub fn with_tight_bound(core: Vec<Point>) -> Result<Self, LatticeError> {
        let max = core.iter().map(|p| norm_sq(p)).max().unwrap_or(0).max(1);
        Self::new(core, BigRational::from(Int::from(max)))
    }

    pub fn core(&self) -> &[Point] {
        &self.core
    }

    pub fn dim(&self) -> usize {
        self.core[0].len()
    }

    pub fn m_star_sq(&self) -> &BigRational {
        &self.m_star_sq
    }

    fn in_tail(&self, p: &[i64], q: usize) -> bool {
        let r = Int::from(2 * q as u64);
        p.iter().all(|&c| c >= 0) && BigRational::from(Int::from(norm_sq(p))) >= &self.m_star_sq * BigRational::from(&r * &r)
    }

    pub fn contains(&self, p: &[i64], q: usize) -> bool {
        self.core.binary_search(&p.to_vec()).is_ok() || self.in_tail(p, q)
    }

    /// `(2q - h)² m*² >= ‖x‖²` with `2q >= h`, which rules out any
    /// representation of `x` that uses a tail point of `A_q`.
    pub fn tail_excluded(&self, x: &[i64], h: usize, q: usize) -> bool {
        if 2 * q < h {
            return false;
        }
        let k = Int::from((2 * q - h) as u64);
        &self.m_star_sq * BigRational::from(&k * &k) >= BigRational::from(Int::from(norm_sq(x)))
    }

    /// Smallest `q` with [`Self::tail_excluded`].
    pub fn certifying_q(&self, x: &[i64], h: usize) -> usize {
        let mut q = h.div_ceil(2);
        while !self.tail_excluded(x, h, q) {
            q += 1;
        }
        q
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeRow {
    pub h: usize,
    /// Box points whose certifying `q` exceeds `Q`.
    pub undetermined: Vec<Point>,
    /// Box points where `hA` and `⋂_{q <= Q} hA_q` were both computed and
    /// differ.
    pub mismatches: Vec<Point>,
    /// Largest certifying `q` over the box.
    pub max_certifying_q: usize,
    /// `|hA ∩ box|`.
    pub members: usize,
}

impl LatticeRow {
    pub fn certified(&self) -> bool {
        self.undetermined.is_empty() && self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeReport {
    pub q: usize,
    /// Truncations were computed exactly, which needs a core in `N_0^d`.
    pub exact: bool,
    pub rows: Vec<LatticeRow>,
}

/// For each `h <= h_max`, compares `hA ∩ box` with `⋂_{q <= Q} hA_q ∩ box`
/// and certifies each box point by the norm threshold.
pub fn verify_lattice_theorem(
    family: &NormTailFamily,
    h_max: usize,
    q_big: usize,
    bx: &LatticeBox,
) -> Result<LatticeReport, LatticeError> {
    if h_max == 0 {
        return Err(LatticeError::ZeroH);
    }
    if bx.dim() != family.dim() {
        return Err(LatticeError::Dimension { expected: family.dim(), got: bx.dim() });
    }
    if let Some(p) = family.core.iter().find(|p| !bx.contains(p)) {
        return Err(LatticeError::CoreOutsideBox(p.clone()));
    }
    let exact = family.core.iter().all(|p| p.iter().all(|&c| c >= 0));
    let box_points = bx.points(LATTICE_CAP)?;
    // summands of a sum landing in the box lie in [0, box.hi] when everything is nonnegative
    let summand_region = if exact { hypercube(bx.hi())? } else { Vec::new() };
    let mut rows = Vec::with_capacity(h_max);
    for h in 1..=h_max {
        let ha = lattice_hfold_sum(&family.core, h, bx)?.points;
        let truncated = if exact {
            let mut t: Option<BTreeSet<Point>> = None;
            for q in 1..=q_big.max(1) {
                let aq: Vec<Point> = summand_region.iter().filter(|p| family.contains(p, q)).cloned().collect();
                let s = lattice_hfold_sum(&aq, h, bx)?.points;
                t = Some(match t {
                    None => s,
                    Some(prev) => prev.intersection(&s).cloned().collect(),
                });
            }
            t
        } else {
            None
        };
        let mut row = LatticeRow { h, undetermined: Vec::new(), mismatches: Vec::new(), max_certifying_q: 0, members: ha.len() };
        for x in &box_points {
            let cq = family.certifying_q(x, h);
            row.max_certifying_q = row.max_certifying_q.max(cq);
            if cq > q_big {
                row.undetermined.push(x.clone());
            }
            if let Some(t) = &truncated {
                if t.contains(x) != ha.contains(x) {
                    row.mismatches.push(x.clone());
                }
            }
        }
        rows.push(row);
    }
    Ok(LatticeReport { q: q_big, exact, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[Point]) -> BTreeSet<Point> {
        v.iter().cloned().collect()
    }

    #[test]
    fn hfold_examples() {
        let bx = LatticeBox::new(vec![-5, -5], vec![5, 5]).unwrap();
        let a = lattice_hfold_sum(&[vec![0, 0], vec![1, 1]], 2, &bx).unwrap();
        assert_eq!(a.points, set(&[vec![0, 0], vec![1, 1], vec![2, 2]]));
        assert!(a.complete);
        let b = lattice_hfold_sum(&[vec![0, 1], vec![1, 0]], 2, &bx).unwrap();
        assert_eq!(b.points, set(&[vec![0, 2], vec![1, 1], vec![2, 0]]));
        let c = lattice_hfold_sum(&[vec![-1, 0], vec![1, 0]], 2, &bx).unwrap();
        assert!(!c.complete);
        assert_eq!(c.points, set(&[vec![-2, 0], vec![0, 0], vec![2, 0]]));
    }

    #[test]
    fn rep_count_example() {
        let cube = hypercube(&[1, 1]).unwrap();
        assert_eq!(lattice_rep_count(&cube, 2, &[1, 1]).unwrap(), 4);
    }

    #[test]
    fn min_norm_examples() {
        for k in 1..6 {
            let basis: Vec<Point> = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
            let c = min_norm_inequality(&basis).unwrap();
            assert_eq!((c.sum_norm_sq, c.bound), (k as i128, k as i128));
        }
        let c = min_norm_inequality(&[vec![3, 4], vec![1, 0]]).unwrap();
        assert_eq!((c.sum_norm_sq, c.bound), (32, 2));
        let c = min_norm_inequality(&[vec![1, 1], vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!((c.sum_norm_sq, c.bound), (18, 6));
        assert_eq!(min_norm_inequality(&[vec![0, 0]]), Err(LatticeError::ZeroVector(0)));
        assert_eq!(min_norm_inequality(&[vec![1, -1]]), Err(LatticeError::NegativeCoordinate(0)));
    }

    fn example_family() -> NormTailFamily {
        NormTailFamily::new(vec![vec![0, 0], vec![1, 1]], BigRational::from(Int::from(2))).unwrap()
    }

    #[test]
    fn lattice_theorem_examples() {
        let f = example_family();
        let bx = LatticeBox::ball(2, 3);
        assert_eq!(f.certifying_q(&[3, 0], 2), 3);
        let r = verify_lattice_theorem(&f, 2, 3, &bx).unwrap();
        assert!(r.exact);
        assert!(r.rows.iter().all(|row| row.certified()), "{r:?}");
        assert_eq!(r.rows[0].members, 2);
        let early = verify_lattice_theorem(&f, 2, 1, &bx).unwrap();
        assert!(!early.rows[1].undetermined.is_empty());
        assert!(NormTailFamily::new(vec![vec![2, 2]], BigRational::from(Int::from(7))).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn min_norm_holds(vs in prop::collection::vec(prop::collection::vec(0i64..20, 3), 1..8)) {
            prop_assume!(vs.iter().all(|v| v.iter().any(|&c| c > 0)));
            prop_assert!(min_norm_inequality(&vs).unwrap().holds());
        }

        #[test]
        fn hfold_matches_brute_force(
            pts in prop::collection::vec(prop::collection::vec(-3i64..4, 2), 1..5),
            h in 1usize..4,
        ) {
            let bx = LatticeBox::new(vec![-12, -12], vec![12, 12]).unwrap();
            let got = lattice_hfold_sum(&pts, h, &bx).unwrap().points;
            let mut brute = BTreeSet::new();
            let mut idx = vec![0usize; h];
            loop {
                let s = idx.iter().fold(vec![0, 0], |acc, &i| add(&acc, &pts[i]));
                if bx.contains(&s) {
                    brute.insert(s);
                }
                let mut k = 0;
                while k < h && idx[k] + 1 == pts.len() {
                    idx[k] = 0;
                    k += 1;
                }
                if k == h {
                    break;
                }
                idx[k] += 1;
            }
            prop_assert_eq!(got, brute);
        }

        #[test]
        fn rep_counts_are_positive_exactly_on_sums(
            pts in prop::collection::vec(prop::collection::vec(0i64..3, 2), 1..4),
            h in 1usize..4,
            x in prop::collection::vec(0i64..7, 2),
        ) {
            let bx = LatticeBox::new(vec![0, 0], vec![8, 8]).unwrap();
            let sums = lattice_hfold_sum(&pts, h, &bx).unwrap().points;
            prop_assert_eq!(lattice_rep_count(&pts, h, &x).unwrap() > 0, sums.contains(&x));
        }
    }
}
