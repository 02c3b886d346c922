//! Finite groups given by multiplication tables, and product sets in them.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::families::{Family, FamilySpec};
use crate::hset::{compute_h, AnalyzerConfig, HStatus, Witness};
use crate::intset::IntSet;
use crate::sumset::{basis_order, Coverage};
use crate::window::Window;
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("row {0} has the wrong length")]
    NotSquare(usize),
    #[error("entry ({row}, {col}) = {value} is not an element")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("{0} is not an element")]
    BadElement(usize),
}

/// A finite group on `0..n` given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

/// Tables up to this order are checked for associativity on every triple.
const FULL_ASSOCIATIVITY_CHECK: usize = 64;

impl FiniteGroupTable {
    /// `Z/mZ` with elements `0..m`.
    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::Empty);
        }
        let table = (0..m * m).map(|k| (k / m + k % m) % m).collect();
        let inverses = (0..m).map(|a| (m - a) % m).collect();
        Ok(FiniteGroupTable { n: m, table, identity: 0, inverses })
    }

    /// `G × H`, with `(g, h)` stored as `g * |H| + h`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let n = g.n * h.n;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / h.n, a % h.n);
                let (b1, b2) = (b / h.n, b % h.n);
                table[a * n + b] = g.mul(a1, b1) * h.n + h.mul(a2, b2);
            }
        }
        let inverses = (0..n).map(|a| g.inverse(a / h.n) * h.n + h.inverse(a % h.n)).collect();
        FiniteGroupTable { n, table, identity: g.identity * h.n + h.identity, inverses }
    }

    /// Validates a row-major table.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare(i));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::OutOfRange { row: i, col: j, value: v });
                }
            }
            table.extend_from_slice(row);
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverses.push(inv);
        }
        let third: Vec<usize> = if n <= FULL_ASSOCIATIVITY_CHECK {
            (0..n).collect()
        } else {
            let stride = n / 16;
            (0..n).step_by(stride.max(1)).collect()
        };
        for a in 0..n {
            for b in 0..n {
                for &c in &third {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroupTable { n, table, identity, inverses })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `A^h = { a_1 a_2 ⋯ a_h }`, multiplied left to right.
    pub fn hfold(&self, subset: &[usize], h: usize) -> Result<Vec<usize>, GroupError> {
        if subset.is_empty() {
            return Err(GroupError::EmptySubset);
        }
        if let Some(&bad) = subset.iter().find(|&&a| a >= self.n) {
            return Err(GroupError::BadElement(bad));
        }
        let mut acc: BTreeSet<usize> = BTreeSet::new();
        acc.insert(self.identity);
        for _ in 0..h {
            let mut next = vec![false; self.n];
            for &x in &acc {
                for &a in subset {
                    next[self.mul(x, a)] = true;
                }
            }
            acc = (0..self.n).filter(|&i| next[i]).collect();
        }
        Ok(acc.into_iter().collect())
    }
}

/// `A^h` in a finite group table.
pub fn group_hfold(table: &FiniteGroupTable, subset: &[usize], h: usize) -> Result<Vec<usize>, GroupError> {
    table.hfold(subset, h)
}

/// A group-theoretic scenario realized over the additive group `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupScenario {
    /// `A_q = dZ ∪ { x + d r : r >= q }`: every `h >= 2` is out of `H`.
    Subgroup { step: Int, base: Int, config: AnalyzerConfig },
    /// `Z \ E` covers the window with `h`-fold sums.
    CofiniteBasis { excluded: Vec<Int>, h: usize, window: Window },
    /// `A_q = A ∪ {|r| >= q}`: `H = {1} ∪ { h : hA = Z }`.
    Sharp { core: IntSet, config: AnalyzerConfig },
    /// `A_q = A ∪ { a_r : r >= q }` with finite `A`: `H = {1}`.
    Countable { core: Vec<Int>, config: AnalyzerConfig },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs each scenario and reports whether the expected verdicts appeared.
pub fn verify_group_theorems(scenarios: &[GroupScenario]) -> Vec<ScenarioOutcome> {
    scenarios.iter().map(run_scenario).collect()
}

fn run_scenario(s: &GroupScenario) -> ScenarioOutcome {
    match s {
        GroupScenario::Subgroup { step, base, config } => {
            let name = format!("subgroup d={step} x={base}");
            let report = Family::new(FamilySpec::CosetTail { step: step.clone(), base: base.clone() })
                .map_err(|e| format!("{e}"))
                .and_then(|f| compute_h(&f, config).map_err(|e| format!("{e}")));
            match report {
                Err(e) => ScenarioOutcome { name, passed: false, detail: e },
                Ok(r) => {
                    let mut bad = Vec::new();
                    for v in &r.verdicts {
                        let ok = match (&v.status, v.h) {
                            (HStatus::CertifiedIn, 1) => true,
                            (HStatus::CertifiedOut { witness: Witness::Int(x) }, h) => {
                                let off = crate::arith::modp(x, step);
                                let coset = (1..h).any(|j| crate::arith::modp(&(base * Int::from(j)), step) == off);
                                coset && (h != 2 || off == crate::arith::modp(base, step))
                            }
                            _ => false,
                        };
                        if !ok {
                            bad.push(v.h);
                        }
                    }
                    ScenarioOutcome {
                        name,
                        passed: bad.is_empty(),
                        detail: format!("H={{1}} expected; unexpected verdicts at h in {bad:?}"),
                    }
                }
            }
        }
        GroupScenario::CofiniteBasis { excluded, h, window } => {
            let name = format!("cofinite basis E={:?} h={h}", excluded.iter().map(|x| format!("{x}")).collect::<Vec<_>>());
            let set = IntSet::cofinite(excluded.iter().cloned());
            let radius = window.radius() * 2 + Int::from(64);
            match basis_order(&set, *h, window, &radius) {
                Ok(v) => {
                    let covered = v.last().is_some_and(|v| v.coverage == Coverage::Covers);
                    ScenarioOutcome { name, passed: covered, detail: format!("{:?}", v.last().map(|v| &v.coverage)) }
                }
                Err(e) => ScenarioOutcome { name, passed: false, detail: format!("{e}") },
            }
        }
        GroupScenario::Sharp { core, config } => {
            let name = format!("sharp core={core}");
            let report = Family::new(FamilySpec::Tail { core: core.clone() })
                .map_err(|e| format!("{e}"))
                .and_then(|f| compute_h(&f, config).map_err(|e| format!("{e}")));
            match report {
                Err(e) => ScenarioOutcome { name, passed: false, detail: e },
                Ok(r) => {
                    let mut bad = Vec::new();
                    for v in &r.verdicts {
                        let basis = v.h == 1
                            || crate::sumset::try_closed_hfold_sum(core, v.h).is_some_and(|s| s.is_all());
                        let ok = match v.status {
                            HStatus::CertifiedIn => basis,
                            HStatus::CertifiedOut { .. } => !basis,
                            _ => false,
                        };
                        if !ok {
                            bad.push(v.h);
                        }
                    }
                    ScenarioOutcome {
                        name,
                        passed: bad.is_empty(),
                        detail: format!("H = {{1}} ∪ {{h : hA = Z}}; mismatches at {bad:?}"),
                    }
                }
            }
        }
        GroupScenario::Countable { core, config } => {
            let name = format!("countable core={}", IntSet::finite(core.iter().cloned()));
            let report = Family::new(FamilySpec::Enumeration { core: core.clone() })
                .map_err(|e| format!("{e}"))
                .and_then(|f| compute_h(&f, config).map_err(|e| format!("{e}")));
            match report {
                Err(e) => ScenarioOutcome { name, passed: false, detail: e },
                Ok(r) => {
                    let bad: Vec<usize> = r
                        .verdicts
                        .iter()
                        .filter(|v| match v.status {
                            HStatus::CertifiedIn => v.h != 1,
                            HStatus::CertifiedOut { .. } => v.h == 1,
                            _ => true,
                        })
                        .map(|v| v.h)
                        .collect();
                    ScenarioOutcome { name, passed: bad.is_empty(), detail: format!("H={{1}} expected; mismatches at {bad:?}") }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ints};
    use proptest::prelude::*;

    #[test]
    fn hfold_examples() {
        let z6 = FiniteGroupTable::cyclic(6).unwrap();
        assert_eq!(group_hfold(&z6, &[1, 3], 2).unwrap(), vec![0, 2, 4]);
        let all: Vec<usize> = (0..6).collect();
        for h in 1..4 {
            assert_eq!(group_hfold(&z6, &all, h).unwrap(), all);
        }
        let z2 = FiniteGroupTable::cyclic(2).unwrap();
        let z3 = FiniteGroupTable::cyclic(3).unwrap();
        let p = FiniteGroupTable::direct_product(&z2, &z3);
        let one_one = 3 + 1;
        assert_eq!(p.element_order(one_one), 6);
        assert_eq!(group_hfold(&p, &[one_one], 6).unwrap(), vec![0]);
        assert!(group_hfold(&p, &[], 2).is_err());
    }

    fn s3() -> Vec<Vec<usize>> {
        // permutations of {0,1,2} in lexicographic order, composed left to right
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([b[a[0]], b[a[1]], b[a[2]]])).collect())
            .collect()
    }

    #[test]
    fn nonabelian_tables_respect_order() {
        let g = FiniteGroupTable::from_table(&s3()).unwrap();
        assert!(!g.is_abelian());
        let (a, b) = (1, 2);
        let ab = group_hfold(&g, &[a, b], 2).unwrap();
        assert!(ab.contains(&g.mul(a, b)) && ab.contains(&g.mul(b, a)));
        assert_ne!(g.mul(a, b), g.mul(b, a));
    }

    #[test]
    fn invalid_tables_rejected() {
        assert_eq!(FiniteGroupTable::from_table(&[]), Err(GroupError::Empty));
        assert!(matches!(
            FiniteGroupTable::from_table(&[vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse(1))
        ));
        assert!(matches!(
            FiniteGroupTable::from_table(&[vec![0, 1], vec![1]]),
            Err(GroupError::NotSquare(1))
        ));
        // a Latin square with identity that is not associative
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroupTable::from_table(&loop5), Err(GroupError::NotAssociative(..))));
    }

    #[test]
    fn scenarios_pass() {
        let config = AnalyzerConfig { h_max: 4, q: 10, ..AnalyzerConfig::default() };
        let out = verify_group_theorems(&[
            GroupScenario::Subgroup { step: int(2), base: int(1), config: config.clone() },
            GroupScenario::CofiniteBasis { excluded: ints(&[5]), h: 2, window: Window::symmetric(20) },
            GroupScenario::Sharp {
                core: IntSet::Union(vec![
                    IntSet::congruence(int(4), ints(&[0])).unwrap(),
                    IntSet::finite(ints(&[1])),
                ]),
                config: config.clone(),
            },
            GroupScenario::Countable { core: ints(&[0, 1]), config },
        ]);
        for o in out {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }

    proptest! {
        #[test]
        fn product_sets_factor(
            m1 in 1usize..6,
            m2 in 1usize..6,
            a in prop::collection::vec(0usize..6, 1..3),
            b in prop::collection::vec(0usize..6, 1..3),
            h in 1usize..4,
        ) {
            let g1 = FiniteGroupTable::cyclic(m1).unwrap();
            let g2 = FiniteGroupTable::cyclic(m2).unwrap();
            let p = FiniteGroupTable::direct_product(&g1, &g2);
            let a: Vec<usize> = a.into_iter().map(|x| x % m1).collect();
            let b: Vec<usize> = b.into_iter().map(|x| x % m2).collect();
            let ab: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| x * m2 + y)).collect();
            let lhs = group_hfold(&p, &ab, h).unwrap();
            let ha = group_hfold(&g1, &a, h).unwrap();
            let hb = group_hfold(&g2, &b, h).unwrap();
            let mut rhs: Vec<usize> = ha.iter().flat_map(|&x| hb.iter().map(move |&y| x * m2 + y)).collect();
            rhs.sort();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
