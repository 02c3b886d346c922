//! Product families `A_q × B_q` in `Z × Z`, analyzed directly on pairs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::arith::{abs, witness_order};
use crate::families::{Family, FamilyError};
use crate::hset::{hfold_on, AnalyzerConfig, HError, HReport, HStatus, HVerdict, Witness};
use crate::intset::IntSet;
use crate::sumset::SumsetResult;
use crate::window::{Membership3, Window};
use crate::Int;

/// Pairs ordered by `|x| + |y|`, then by the witness order on `x`, then `y`.
pub fn pair_order(a: &(Int, Int), b: &(Int, Int)) -> Ordering {
    (abs(&a.0) + abs(&a.1))
        .cmp(&(abs(&b.0) + abs(&b.1)))
        .then_with(|| witness_order(&a.0, &b.0))
        .then_with(|| witness_order(&a.1, &b.1))
}

/// Points of `w × w` in pair order.
pub fn pairs_in_order(w: &Window, cap: usize) -> Result<Vec<(Int, Int)>, HError> {
    let n = w.checked_len(cap).map_err(|e| HError::Config(format!("{e}")))?;
    if n.saturating_mul(n) > cap {
        return Err(HError::Config(format!("{n}x{n} box exceeds the cap {cap}")));
    }
    let xs: Vec<Int> = w.witness_order().collect();
    let mut pairs: Vec<(Int, Int)> = xs.iter().flat_map(|x| xs.iter().map(move |y| (x.clone(), y.clone()))).collect();
    pairs.sort_by(pair_order);
    Ok(pairs)
}

fn pair_membership(a: &SumsetResult, b: &SumsetResult, p: &(Int, Int)) -> Membership3 {
    match (a.membership(&p.0), b.membership(&p.1)) {
        (Membership3::In, Membership3::In) => Membership3::In,
        (Membership3::Out, _) | (_, Membership3::Out) => Membership3::Out,
        (Membership3::OutUpTo(r), _) | (_, Membership3::OutUpTo(r)) => Membership3::OutUpTo(r),
    }
}

/// `h(A × B)` as component sums; `(x, y)` is a sum of `h` pairs iff
/// `x ∈ hA` and `y ∈ hB`.
pub fn product_hfold(
    a: &IntSet,
    b: &IntSet,
    h: usize,
    cfg: &AnalyzerConfig,
) -> Result<(SumsetResult, SumsetResult), HError> {
    Ok((
        hfold_on(a, h, &cfg.window, &cfg.gen_radius, cfg.cap)?,
        hfold_on(b, h, &cfg.window, &cfg.gen_radius, cfg.cap)?,
    ))
}

/// `(C \ S) × D ∪ C × (D \ S')` is empty, when decidable.
fn product_difference_empty(
    ca: &IntSet,
    cb: &IntSet,
    ha: &SumsetResult,
    hb: &SumsetResult,
    cap: usize,
) -> Option<bool> {
    let (sa, sb) = (ha.closed()?, hb.closed()?);
    let da = ca.minus(sa)?.first_member(cap)?.is_none();
    let db = cb.minus(sb)?.first_member(cap)?.is_none();
    let ea = ca.first_member(cap)?.is_none();
    let eb = cb.first_member(cap)?.is_none();
    Some((da || eb) && (ea || db))
}

pub(crate) fn compute_h_product(family: &Family, cfg: &AnalyzerConfig) -> Result<HReport, HError> {
    let (fa, fb) = family.factors().ok_or(HError::Family(FamilyError::TwoDimensional))?;
    let (a, b) = (fa.limit()?, fb.limit()?);
    let pairs = pairs_in_order(&cfg.window, cfg.cap)?;
    let mut verdicts = Vec::with_capacity(cfg.h_max);
    for h in 1..=cfg.h_max {
        let (ha, hb) = product_hfold(&a, &b, h, cfg)?;
        let member = pairs
            .iter()
            .find(|p| pair_membership(&ha, &hb, p) == Membership3::In)
            .map(|(x, y)| Witness::Pair(x.clone(), y.clone()));
        let empty_sum = [&ha, &hb].iter().any(|r| r.closed().is_some_and(|c| c.first_member(cfg.cap) == Some(None)));
        let mut evidence = vec![String::from("pairs searched on the box")];
        let status = if h == 1 {
            HStatus::CertifiedIn
        } else {
            match (fa.tail_certificate(h), fb.tail_certificate(h)) {
                (Some(ca), Some(cb)) => {
                    evidence.push(format!("certificate:{}x{}", ca.rule.tag(), cb.rule.tag()));
                    let (ca, cb) = (ca.closed_form, cb.closed_form);
                    let gap = pairs.iter().find(|p| {
                        ca.contains(&p.0) && cb.contains(&p.1) && pair_membership(&ha, &hb, p) == Membership3::Out
                    });
                    match (gap, product_difference_empty(&ca, &cb, &ha, &hb, cfg.cap)) {
                        (Some((x, y)), _) => HStatus::CertifiedOut { witness: Witness::Pair(x.clone(), y.clone()) },
                        (None, Some(true)) => HStatus::CertifiedIn,
                        (None, Some(false)) => HStatus::Undetermined {
                            reason: "certified gap lies outside the box".into(),
                        },
                        (None, None) => {
                            let exact = ha.is_exact_on(&cfg.window) && hb.is_exact_on(&cfg.window);
                            let agree = pairs.iter().all(|p| {
                                (ca.contains(&p.0) && cb.contains(&p.1))
                                    == (pair_membership(&ha, &hb, p) == Membership3::In)
                            });
                            if exact && agree {
                                HStatus::EmpiricalEqual { q: cfg.q, window: cfg.window.clone() }
                            } else {
                                HStatus::Undetermined { reason: "sums not closed and not exact on the box".into() }
                            }
                        }
                    }
                }
                _ => HStatus::Undetermined { reason: "a factor has no tail certificate".into() },
            }
        };
        verdicts.push(HVerdict { h, status, evidence, member, empty_sum });
    }
    Ok(HReport {
        family: format!("{}", family.spec()),
        h_max: cfg.h_max,
        q: cfg.q,
        window: cfg.window.clone(),
        gen_radius: cfg.gen_radius.clone(),
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ints};
    use crate::families::{FamilySpec, ModulusChain};
    use crate::hset::{compute_h, transfer_product};
    use alloc::boxed::Box;

    fn cfg() -> AnalyzerConfig {
        AnalyzerConfig { h_max: 4, q: 6, window: Window::symmetric(12), gen_radius: int(60), ..AnalyzerConfig::default() }
    }

    fn specs() -> Vec<FamilySpec> {
        vec![
            FamilySpec::Tail { core: IntSet::Empty },
            FamilySpec::HalfTail { core: IntSet::Empty },
            FamilySpec::CongruenceChain {
                core: ints(&[0, 1, 3]),
                moduli: ModulusChain::Geometric { first: int(7), ratio: int(2) },
            },
            FamilySpec::Tail { core: IntSet::finite(ints(&[0, 1, 3])) },
        ]
    }

    #[test]
    fn pair_order_is_by_l1_norm_first() {
        let pairs = pairs_in_order(&Window::symmetric(1), 1 << 10).unwrap();
        assert_eq!(pairs[0], (int(0), int(0)));
        assert_eq!(pairs[1], (int(0), int(-1)));
        assert_eq!(pairs[2], (int(0), int(1)));
        assert_eq!(pairs[3], (int(-1), int(0)));
    }

    #[test]
    fn direct_analysis_matches_conjunction() {
        let c = cfg();
        for l in specs() {
            for r in specs() {
                let p = Family::new(FamilySpec::Product { left: Box::new(l.clone()), right: Box::new(r.clone()) }).unwrap();
                let direct = compute_h(&p, &c).unwrap();
                let lr = compute_h(&Family::new(l.clone()).unwrap(), &c).unwrap();
                let rr = compute_h(&Family::new(r.clone()).unwrap(), &c).unwrap();
                let conj = transfer_product(&lr, &rr).unwrap();
                assert!(direct.same_statuses(&conj), "{l} x {r}:\n{direct}\n{conj}");
            }
        }
    }

    #[test]
    fn tail_times_chain_is_out() {
        let p = Family::new(FamilySpec::Product {
            left: Box::new(FamilySpec::Tail { core: IntSet::Empty }),
            right: Box::new(specs()[2].clone()),
        })
        .unwrap();
        let r = compute_h(&p, &cfg()).unwrap();
        assert_eq!(r.h_set(), vec![1]);
        assert_eq!(r.verdicts[1].status.witness(), Some(&Witness::Pair(int(0), int(0))));
    }
}
