//! Intersection sets `H(A_q) = { h : hA = ⋂_q hA_q }` as per-`h` verdicts,
//! and the transfer rules for affine images, products and pullbacks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::families::{Family, FamilyError, FamilySpec, TailCertificate};
use crate::groups::FiniteGroupTable;
use crate::intset::{IntSet, Unit};
use crate::sumset::{try_closed_hfold_sum, windowed_hfold_sum, SumsetError, SumsetResult};
use crate::window::{Membership3, Window, DEFAULT_WINDOW_CAP};
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzerConfig {
    pub h_max: usize,
    /// Truncation depth `Q`.
    pub q: usize,
    pub window: Window,
    /// Summands with `|a|` up to this radius are used by windowed sums.
    pub gen_radius: Int,
    pub cap: usize,
    /// Cross-check every tail certificate against the truncations first.
    pub validate_certificates: bool,
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        AnalyzerConfig {
            h_max: 5,
            q: 20,
            window: Window::symmetric(50),
            gen_radius: Int::from(200),
            cap: DEFAULT_WINDOW_CAP,
            validate_certificates: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Sumset(#[from] SumsetError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("reports cover different h ranges ({0} vs {1})")]
    Mismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Witness {
    Int(Int),
    Pair(Int, Int),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Int(x) => write!(f, "{x}"),
            Witness::Pair(x, y) => write!(f, "({x},{y})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HStatus {
    CertifiedIn,
    /// `witness ∈ ⋂_q hA_q` but not in `hA`.
    CertifiedOut { witness: Witness },
    /// `hA` and `⋂_{q <= Q} hA_q` agree on the window (and on the doubled
    /// window and depth), without a closed form.
    EmpiricalEqual { q: usize, window: Window },
    Undetermined { reason: String },
}

impl HStatus {
    pub fn label(&self) -> &'static str {
        match self {
            HStatus::CertifiedIn => "certified_in",
            HStatus::CertifiedOut { .. } => "certified_out",
            HStatus::EmpiricalEqual { .. } => "empirical_equal",
            HStatus::Undetermined { .. } => "undetermined",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            HStatus::CertifiedOut { witness } => Some(witness),
            _ => None,
        }
    }

    /// Same variant, ignoring witnesses and parameters.
    pub fn same_kind(&self, other: &HStatus) -> bool {
        self.label() == other.label()
    }

    fn rank(&self) -> u8 {
        match self {
            HStatus::Undetermined { .. } => 0,
            HStatus::EmpiricalEqual { .. } => 1,
            HStatus::CertifiedIn => 2,
            HStatus::CertifiedOut { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HVerdict {
    pub h: usize,
    pub status: HStatus,
    pub evidence: Vec<String>,
    /// A known member of `hA` (hence of every `hA_q`), when one was found.
    pub member: Option<Witness>,
    /// `hA` is known to be empty.
    pub empty_sum: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HReport {
    pub family: String,
    pub h_max: usize,
    pub q: usize,
    pub window: Window,
    pub gen_radius: Int,
    pub verdicts: Vec<HVerdict>,
}

impl HReport {
    /// The `h` with a certified or empirical equality.
    pub fn h_set(&self) -> Vec<usize> {
        self.verdicts
            .iter()
            .filter(|v| matches!(v.status, HStatus::CertifiedIn | HStatus::EmpiricalEqual { .. }))
            .map(|v| v.h)
            .collect()
    }

    pub fn labels(&self) -> Vec<&'static str> {
        self.verdicts.iter().map(|v| v.status.label()).collect()
    }

    /// Same status kinds for every `h`.
    pub fn same_statuses(&self, other: &HReport) -> bool {
        self.verdicts.len() == other.verdicts.len()
            && self.verdicts.iter().zip(&other.verdicts).all(|(a, b)| a.status.same_kind(&b.status))
    }
}

/// `hA` in closed form, otherwise windowed over `w`.
pub fn hfold_on(set: &IntSet, h: usize, w: &Window, radius: &Int, cap: usize) -> Result<SumsetResult, SumsetError> {
    match try_closed_hfold_sum(set, h) {
        Some(c) => Ok(SumsetResult::Closed(c)),
        None => windowed_hfold_sum(set, h, w, radius, cap),
    }
}

fn first_known_member(r: &SumsetResult, w: &Window, cap: usize) -> Option<Int> {
    match r {
        SumsetResult::Closed(c) => c
            .first_member(cap)
            .flatten()
            .or_else(|| w.witness_order().find(|x| c.contains(x))),
        SumsetResult::Windowed { members, .. } => {
            members.iter().min_by(|a, b| crate::arith::witness_order(a, b)).cloned()
        }
    }
}

fn check_config(cfg: &AnalyzerConfig) -> Result<(), HError> {
    if cfg.h_max == 0 {
        return Err(HError::Config("h_max must be at least 1".into()));
    }
    if cfg.q == 0 {
        return Err(HError::Config("Q must be at least 1".into()));
    }
    if cfg.gen_radius < cfg.window.radius() {
        return Err(HError::Config(format!(
            "generation radius {} is below the window radius {}",
            cfg.gen_radius,
            cfg.window.radius()
        )));
    }
    cfg.window.checked_len(cfg.cap).map_err(|e| HError::Config(format!("{e}")))?;
    Ok(())
}

/// Per-`h` verdicts for `h = 1..=h_max`.
pub fn compute_h(family: &Family, cfg: &AnalyzerConfig) -> Result<HReport, HError> {
    check_config(cfg)?;
    if family.is_product() {
        return crate::plane::compute_h_product(family, cfg);
    }
    let a = family.limit()?;
    let mut verdicts = Vec::with_capacity(cfg.h_max);
    for h in 1..=cfg.h_max {
        verdicts.push(verdict(family, &a, h, cfg)?);
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

fn depth(family: &Family, q: usize) -> usize {
    family.q_max().map_or(q, |m| m.min(q))
}

fn verdict(family: &Family, a: &IntSet, h: usize, cfg: &AnalyzerConfig) -> Result<HVerdict, HError> {
    let w = &cfg.window;
    let ha = hfold_on(a, h, w, &cfg.gen_radius, cfg.cap)?;
    let member = first_known_member(&ha, w, cfg.cap).map(Witness::Int);
    let empty_sum = ha.closed().is_some_and(|c| c.first_member(cfg.cap) == Some(None));
    let mut evidence = vec![match &ha {
        SumsetResult::Closed(_) => String::from("hA closed"),
        SumsetResult::Windowed { generation_radius, complete, .. } => {
            format!("hA windowed R={generation_radius} complete={complete}")
        }
    }];
    if h == 1 {
        evidence.push("h=1".into());
        return Ok(HVerdict { h, status: HStatus::CertifiedIn, evidence, member, empty_sum });
    }
    let status = match family.tail_certificate(h) {
        Some(cert) => {
            evidence.push(format!("certificate:{}", cert.rule.tag()));
            let check = if cfg.validate_certificates {
                validate_certificate(family, &cert, cfg)?
            } else {
                CertificateCheck::default()
            };
            if check.confirmed {
                if cfg.validate_certificates {
                    evidence.push(format!("certificate validated q<={}", depth(family, cfg.q)));
                }
                certified_status(a, h, &cert, &ha, cfg, &mut evidence)?
            } else {
                HStatus::Undetermined {
                    reason: format!("certificate not confirmed: {}", check.detail),
                }
            }
        }
        None => empirical_status(family, a, h, cfg, &mut evidence)?,
    };
    Ok(HVerdict { h, status, evidence, member, empty_sum })
}

fn certified_status(
    a: &IntSet,
    h: usize,
    cert: &TailCertificate,
    ha: &SumsetResult,
    cfg: &AnalyzerConfig,
    evidence: &mut Vec<String>,
) -> Result<HStatus, HError> {
    let w = &cfg.window;
    if let SumsetResult::Closed(c) = ha {
        match cert.closed_form.minus(c).and_then(|d| d.first_member(cfg.cap)) {
            Some(None) => return Ok(HStatus::CertifiedIn),
            Some(Some(x)) => return Ok(HStatus::CertifiedOut { witness: Witness::Int(x) }),
            None => evidence.push("difference beyond normalizer caps".into()),
        }
    }
    // search growing windows for a certified gap
    let mut win = w.clone();
    let mut radius = cfg.gen_radius.clone();
    for step in 0..3 {
        let r = match ha {
            SumsetResult::Windowed { .. } if step > 0 => windowed_hfold_sum(a, h, &win, &radius, cfg.cap)?,
            _ => ha.clone(),
        };
        for x in win.witness_order() {
            if cert.closed_form.contains(&x) && r.membership(&x) == Membership3::Out {
                return Ok(HStatus::CertifiedOut { witness: Witness::Int(x) });
            }
        }
        if matches!(ha, SumsetResult::Closed(_)) {
            break;
        }
        win = win.scaled(2);
        radius *= 2;
    }
    if let SumsetResult::Windowed { .. } = ha {
        let exact = ha.is_exact_on(w);
        let cert_members = cert.closed_form.materialize(w, cfg.cap).map_err(SumsetError::from)?;
        let members = ha.members_in(w, cfg.cap).map_err(SumsetError::from)?;
        if exact && cert_members == members {
            evidence.push("certificate agrees with hA on the window".into());
            return Ok(HStatus::EmpiricalEqual { q: cfg.q, window: w.clone() });
        }
    }
    Ok(HStatus::Undetermined { reason: "no certified gap found in the searched windows".into() })
}

/// Outcome of checking a certificate against truncations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateCheck {
    pub confirmed: bool,
    pub detail: String,
}

impl Default for CertificateCheck {
    fn default() -> Self {
        CertificateCheck { confirmed: true, detail: String::new() }
    }
}

/// Every certificate member in the window must be a found member of
/// `hA_q` for each `q <= Q`.
pub fn validate_certificate(
    family: &Family,
    cert: &TailCertificate,
    cfg: &AnalyzerConfig,
) -> Result<CertificateCheck, HError> {
    let w = &cfg.window;
    let claimed = cert.closed_form.materialize(w, cfg.cap).map_err(SumsetError::from)?;
    for q in 1..=depth(family, cfg.q) {
        let set = family.set_at(q)?;
        let r = hfold_on(&set, cert.h, w, &cfg.gen_radius, cfg.cap)?;
        for x in &claimed {
            match r.membership(x) {
                Membership3::In => {}
                Membership3::Out => {
                    return Ok(CertificateCheck {
                        confirmed: false,
                        detail: format!("{x} is not in hA_{q}"),
                    })
                }
                Membership3::OutUpTo(radius) => {
                    return Ok(CertificateCheck {
                        confirmed: false,
                        detail: format!("{x} not found in hA_{q} with summands up to {radius}"),
                    })
                }
            }
        }
    }
    Ok(CertificateCheck::default())
}

/// Members of `⋂_{q <= depth} hA_q` inside `w`, and whether every `hA_q` was
/// known exactly there.
fn truncated_intersection(
    family: &Family,
    h: usize,
    q_depth: usize,
    w: &Window,
    radius: &Int,
    cap: usize,
) -> Result<(Vec<Int>, bool), HError> {
    let mut acc: Option<Vec<Int>> = None;
    let mut exact = true;
    for q in 1..=depth(family, q_depth) {
        let r = hfold_on(&family.set_at(q)?, h, w, radius, cap)?;
        exact &= r.is_exact_on(w);
        let m = r.members_in(w, cap).map_err(SumsetError::from)?;
        acc = Some(match acc {
            None => m,
            Some(prev) => prev.into_iter().filter(|x| m.binary_search(x).is_ok()).collect(),
        });
    }
    Ok((acc.unwrap_or_default(), exact))
}

fn empirical_status(
    family: &Family,
    a: &IntSet,
    h: usize,
    cfg: &AnalyzerConfig,
    evidence: &mut Vec<String>,
) -> Result<HStatus, HError> {
    let w2 = cfg.window.scaled(2);
    let r2 = &cfg.gen_radius * 2;
    for (q, w, r) in [
        (cfg.q, &cfg.window, &cfg.gen_radius),
        (cfg.q, &w2, &r2),
        (2 * cfg.q, &cfg.window, &cfg.gen_radius),
        (2 * cfg.q, &w2, &r2),
    ] {
        let ha = hfold_on(a, h, w, r, cfg.cap)?;
        let (t, exact) = truncated_intersection(family, h, q, w, r, cfg.cap)?;
        if !exact || !ha.is_exact_on(w) {
            return Ok(HStatus::Undetermined {
                reason: format!("windowed sums incomplete on {w} at Q={q}"),
            });
        }
        let members = ha.members_in(w, cfg.cap).map_err(SumsetError::from)?;
        if members != t {
            let x = t
                .iter()
                .filter(|x| members.binary_search(x).is_err())
                .min_by(|a, b| crate::arith::witness_order(a, b))
                .cloned()
                .unwrap_or_default();
            return Ok(HStatus::Undetermined {
                reason: format!("{x} lies in the truncated intersection at Q={q} but not in hA"),
            });
        }
    }
    evidence.push(format!("agrees at Q={},{} on {},{}", cfg.q, 2 * cfg.q, cfg.window, w2));
    Ok(HStatus::EmpiricalEqual { q: cfg.q, window: cfg.window.clone() })
}

/// Report for `unit * A_q + shift`: statuses carry over, witnesses map to
/// `unit * x + h * shift`.
pub fn transfer_affine(report: &HReport, unit: Unit, shift: &Int) -> HReport {
    let map = |w: &Witness, h: usize| match w {
        Witness::Int(x) => Witness::Int(unit.apply(x) + shift * Int::from(h)),
        other => other.clone(),
    };
    let verdicts = report
        .verdicts
        .iter()
        .map(|v| {
            let status = match &v.status {
                HStatus::CertifiedOut { witness } => HStatus::CertifiedOut { witness: map(witness, v.h) },
                other => other.clone(),
            };
            let mut evidence = v.evidence.clone();
            evidence.push(format!("affine transfer ({}, {shift})", unit.sign()));
            HVerdict { h: v.h, status, evidence, member: v.member.as_ref().map(|m| map(m, v.h)), empty_sum: v.empty_sum }
        })
        .collect();
    HReport {
        family: format!("affine({}, {shift}, {})", unit.sign(), report.family),
        verdicts,
        ..report.clone()
    }
}

/// Report for the product family `A_q × B_q` from the two component reports.
pub fn transfer_product(left: &HReport, right: &HReport) -> Result<HReport, HError> {
    if left.verdicts.len() != right.verdicts.len() {
        return Err(HError::Mismatch(left.verdicts.len(), right.verdicts.len()));
    }
    let known = |v: &HVerdict| -> Option<Int> {
        match (&v.status, &v.member) {
            (HStatus::CertifiedOut { witness: Witness::Int(x) }, _) => Some(x.clone()),
            (_, Some(Witness::Int(x))) => Some(x.clone()),
            _ => None,
        }
    };
    let mut verdicts = Vec::new();
    for (l, r) in left.verdicts.iter().zip(&right.verdicts) {
        let mut evidence = vec![format!("left:{}", l.status.label()), format!("right:{}", r.status.label())];
        let empty_in = |v: &HVerdict| v.empty_sum && v.status == HStatus::CertifiedIn;
        let status = match (&l.status, &r.status) {
            _ if empty_in(l) || empty_in(r) => HStatus::CertifiedIn,
            (HStatus::CertifiedOut { witness: Witness::Int(x) }, _) => match known(r) {
                Some(y) => HStatus::CertifiedOut { witness: Witness::Pair(x.clone(), y) },
                None => HStatus::Undetermined { reason: "no known member on the right".into() },
            },
            (_, HStatus::CertifiedOut { witness: Witness::Int(y) }) => match known(l) {
                Some(x) => HStatus::CertifiedOut { witness: Witness::Pair(x, y.clone()) },
                None => HStatus::Undetermined { reason: "no known member on the left".into() },
            },
            (a, b) => {
                if a.rank() <= b.rank() {
                    a.clone()
                } else {
                    b.clone()
                }
            }
        };
        evidence.push("conjunction".into());
        let member = match (&l.member, &r.member) {
            (Some(Witness::Int(x)), Some(Witness::Int(y))) => Some(Witness::Pair(x.clone(), y.clone())),
            _ => None,
        };
        verdicts.push(HVerdict { h: l.h, status, evidence, member, empty_sum: l.empty_sum || r.empty_sum });
    }
    Ok(HReport {
        family: format!("product({}, {})", left.family, right.family),
        verdicts,
        ..left.clone()
    })
}

/// Outcome of comparing `Z -> Z/mZ` preimages with the finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackReport {
    pub modulus: usize,
    /// `(q, h, hB_q)` where the windowed sums of the preimage disagreed with
    /// the preimage of `hB_q`.
    pub sum_mismatches: Vec<(usize, usize, Vec<usize>)>,
    /// `h ∈ H(B_q)`, computed in the finite group.
    pub group_h: Vec<bool>,
    /// Statuses of `H(f^{-1}(B_q))`.
    pub preimage_statuses: Vec<HStatus>,
    pub agree: bool,
}

fn preimage(m: usize, residues: &[usize]) -> IntSet {
    if residues.is_empty() {
        IntSet::Empty
    } else {
        IntSet::congruence(Int::from(m), residues.iter().map(|&r| Int::from(r)))
            .map(|s| s.normalize())
            .unwrap_or(IntSet::Empty)
    }
}

/// Checks `h f^{-1}(B) = f^{-1}(hB)` on `w` for each set of the family, and
/// `H(f^{-1}(B_q)) = H(B_q)`.
pub fn pullback_check(m: usize, family: &[Vec<usize>], h_max: usize, w: &Window) -> Result<PullbackReport, HError> {
    if m == 0 {
        return Err(HError::Config("modulus must be at least 1".into()));
    }
    if family.is_empty() || family.iter().any(|b| b.is_empty()) {
        return Err(HError::Config("residue sets must be nonempty".into()));
    }
    let g = FiniteGroupTable::cyclic(m).map_err(|e| HError::Config(format!("{e}")))?;
    let radius = w.radius() + Int::from(m);
    let mut sum_mismatches = Vec::new();
    let mut sums: Vec<Vec<Vec<usize>>> = Vec::new();
    for (i, b) in family.iter().enumerate() {
        let b: Vec<usize> = b.iter().map(|r| r % m).collect();
        let pre = preimage(m, &b);
        let mut row = Vec::new();
        for h in 1..=h_max {
            let hb = g.hfold(&b, h).map_err(|e| HError::Config(format!("{e}")))?;
            let expect = preimage(m, &hb).materialize(w, DEFAULT_WINDOW_CAP).map_err(SumsetError::from)?;
            let got = windowed_hfold_sum(&pre, h, w, &radius, DEFAULT_WINDOW_CAP)?
                .members_in(w, DEFAULT_WINDOW_CAP)
                .map_err(SumsetError::from)?;
            let closed = try_closed_hfold_sum(&pre, h)
                .map(|c| c.materialize(w, DEFAULT_WINDOW_CAP))
                .transpose()
                .map_err(SumsetError::from)?;
            if got != expect || closed.is_some_and(|c| c != expect) {
                sum_mismatches.push((i + 1, h, hb.clone()));
            }
            row.push(hb);
        }
        sums.push(row);
    }

    // H in the finite group: h(⋂ B_q) = ⋂ hB_q
    let mut limit: Vec<usize> = (0..m).collect();
    for b in family {
        limit.retain(|x| b.iter().any(|r| r % m == *x));
    }
    let mut group_h = Vec::with_capacity(h_max);
    for h in 1..=h_max {
        let lhs = if limit.is_empty() {
            Vec::new()
        } else {
            g.hfold(&limit, h).map_err(|e| HError::Config(format!("{e}")))?
        };
        let mut rhs: Vec<usize> = (0..m).collect();
        for row in &sums {
            rhs.retain(|x| row[h - 1].contains(x));
        }
        group_h.push(lhs == rhs);
    }

    let sets = family.iter().map(|b| preimage(m, b)).collect();
    let fam = Family::new(FamilySpec::Explicit { sets })?;
    let cfg = AnalyzerConfig {
        h_max,
        q: family.len(),
        window: w.clone(),
        gen_radius: w.radius() + Int::from(m * h_max),
        ..AnalyzerConfig::default()
    };
    let report = compute_h(&fam, &cfg)?;
    let preimage_statuses: Vec<HStatus> = report.verdicts.into_iter().map(|v| v.status).collect();
    let agree = sum_mismatches.is_empty()
        && preimage_statuses.iter().zip(&group_h).all(|(s, &inside)| match s {
            HStatus::CertifiedIn => inside,
            HStatus::CertifiedOut { .. } => !inside,
            _ => false,
        });
    Ok(PullbackReport { modulus: m, sum_mismatches, group_h, preimage_statuses, agree })
}

impl fmt::Display for HReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family {} (Q={}, window {}, R={})", self.family, self.q, self.window, self.gen_radius)?;
        for v in &self.verdicts {
            write!(f, "h={} {}", v.h, v.status.label())?;
            if let Some(w) = v.status.witness() {
                write!(f, " witness={w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
