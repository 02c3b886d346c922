//! Decreasing families `q -> A_q` and closed forms of `⋂_q hA_q`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{Pow, Signed, Zero};

use crate::arith::{modp, sort_dedup};
use crate::intset::{intersect_truncated, IntSet, SetError, Unit};
use crate::sumset::try_closed_hfold_sum;
use crate::window::{Window, DEFAULT_WINDOW_CAP};
use crate::Int;

/// Moduli `m_1 | m_2 | ...` of a congruence chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModulusChain {
    /// `m_q = first * ratio^(q-1)`.
    Geometric { first: Int, ratio: Int },
    /// `m_1, ..., m_n`; the family is only defined for `q <= n`.
    Explicit(Vec<Int>),
}

impl ModulusChain {
    pub fn at(&self, q: usize) -> Option<Int> {
        match self {
            ModulusChain::Geometric { first, ratio } => {
                Some(first * Pow::pow(ratio, q.checked_sub(1)? as u32))
            }
            ModulusChain::Explicit(ms) => ms.get(q.checked_sub(1)?).cloned(),
        }
    }

    pub fn first(&self) -> Option<Int> {
        self.at(1)
    }

    fn len(&self) -> Option<usize> {
        match self {
            ModulusChain::Geometric { .. } => None,
            ModulusChain::Explicit(ms) => Some(ms.len()),
        }
    }
}

/// Construction data for a family `(A_q)_{q >= 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `A_q = core ∪ { |r| >= q }`.
    Tail { core: IntSet },
    /// `A_q = core ∪ { r >= q }`.
    HalfTail { core: IntSet },
    /// `A_q = ∪_{a ∈ core} (a + m_q Z)`.
    CongruenceChain { core: Vec<Int>, moduli: ModulusChain },
    /// `A_q = dZ ∪ { x + d r : r >= q }`.
    CosetTail { step: Int, base: Int },
    /// `A_q = core ∪ { a_r : r >= q }`, where `a_1, a_2, ...` lists `Z \ core`
    /// by absolute value, negative first.
    Enumeration { core: Vec<Int> },
    /// `A_q = unit * B_q + shift`.
    Affine { unit: Unit, shift: Int, inner: Box<FamilySpec> },
    /// `A_q = B_q × C_q` in `Z × Z`.
    Product { left: Box<FamilySpec>, right: Box<FamilySpec> },
    /// `A_1, ..., A_n` given directly.
    Explicit { sets: Vec<IntSet> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("congruence chain core must be nonempty")]
    EmptyCore,
    #[error("m_1 > 2m* violated: m_1 = {first}, m* = {m_star}")]
    FirstModulus { first: Int, m_star: Int },
    #[error("moduli must strictly increase: m_{q} = {m}, m_{next} = {next_m}", next = q + 1)]
    NotIncreasing { q: usize, m: Int, next_m: Int },
    #[error("m_{q} = {m} does not divide m_{next} = {next_m}", next = q + 1)]
    NotDividing { q: usize, m: Int, next_m: Int },
    #[error("ratio of a geometric modulus chain must be at least 2, got {0}")]
    Ratio(Int),
    #[error("coset step must be at least 2, got {0}")]
    Step(Int),
    #[error("coset base {base} lies in the subgroup {step}Z")]
    BaseInSubgroup { base: Int, step: Int },
    #[error("index q must be at least 1")]
    ZeroIndex,
    #[error("index q = {q} is past the last set (q <= {max})")]
    OutOfRange { q: usize, max: usize },
    #[error("explicit family needs at least one set")]
    NoSets,
    #[error("family is not decreasing: {x} lies in A_{next} but not in A_{q}", next = q + 1)]
    NotDecreasing { q: usize, x: Int },
    #[error("a product family has no single integer set; use the pair accessor")]
    TwoDimensional,
    #[error("affine and product families need one-dimensional components")]
    NestedProduct,
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Rule a tail certificate was transcribed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateRule {
    /// `h = 1`: the intersection itself.
    Limit,
    /// `h(core ∪ {|r| >= q}) ⊇ h{|r| >= q} = Z`.
    TailSetsCoverZ,
    /// Half tails drift to infinity, leaving `h * core` (or `Z` when the
    /// core is unbounded below).
    HalfTailDrift,
    /// Sums of the core are pairwise incongruent modulo large `m_q`.
    CongruenceChain,
    /// `hA_q` is the union of cosets `j x + dZ`, `j < h`, plus a shrinking tail.
    CosetTail,
    /// Cofinite sets are bases of every order `h >= 2`.
    CofiniteBasis,
    /// `h(εA + t) = ε hA + ht`.
    Affine(Box<CertificateRule>),
    /// Finite family: exact intersection of closed forms.
    Explicit,
}

impl CertificateRule {
    pub fn tag(&self) -> String {
        match self {
            CertificateRule::Limit => "limit".into(),
            CertificateRule::TailSetsCoverZ => "tail-sets-cover-z".into(),
            CertificateRule::HalfTailDrift => "half-tail-drift".into(),
            CertificateRule::CongruenceChain => "congruence-chain".into(),
            CertificateRule::CosetTail => "coset-tail".into(),
            CertificateRule::CofiniteBasis => "cofinite-basis".into(),
            CertificateRule::Affine(inner) => format!("affine({})", inner.tag()),
            CertificateRule::Explicit => "explicit".into(),
        }
    }
}

/// Closed form of `⋂_q hA_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailCertificate {
    pub h: usize,
    pub closed_form: IntSet,
    pub rule: CertificateRule,
}

/// Result of [`Family::classify_monotonicity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monotonicity {
    pub decreasing: bool,
    /// `(q, x)` with `x ∈ A_{q+1} \ A_q`.
    pub violation: Option<(usize, Int)>,
    /// For `q = 1..Q-1`: whether `A_q ≠ A_{q+1}`, with a witness of
    /// `A_q \ A_{q+1}` when one lies in the window.
    pub steps: Vec<(usize, bool, Option<Int>)>,
    pub strictly: bool,
    /// No trailing constant run within the tested range.
    pub asymptotically_strict_within_range: bool,
}

/// A validated family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    spec: FamilySpec,
}

/// Number of leading indices checked for monotonicity at construction.
pub const CONSTRUCT_CHECK_Q: usize = 8;

impl Family {
    pub fn new(spec: FamilySpec) -> Result<Family, FamilyError> {
        validate(&spec)?;
        let f = Family { spec };
        if !matches!(f.spec, FamilySpec::Product { .. }) {
            let q_max = f.q_max().unwrap_or(CONSTRUCT_CHECK_Q);
            f.check_decreasing(q_max, &Window::symmetric(64))?;
        }
        Ok(f)
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn is_product(&self) -> bool {
        matches!(self.spec, FamilySpec::Product { .. })
    }

    /// Last valid index, when the family is finite.
    pub fn q_max(&self) -> Option<usize> {
        q_max_of(&self.spec)
    }

    pub fn set_at(&self, q: usize) -> Result<IntSet, FamilyError> {
        set_at(&self.spec, q)
    }

    /// Components `(B_q, C_q)` of a product family.
    pub fn pair_at(&self, q: usize) -> Result<(IntSet, IntSet), FamilyError> {
        match &self.spec {
            FamilySpec::Product { left, right } => Ok((set_at(left, q)?, set_at(right, q)?)),
            _ => Err(FamilyError::TwoDimensional),
        }
    }

    /// Components of a product family as families.
    pub fn factors(&self) -> Option<(Family, Family)> {
        match &self.spec {
            FamilySpec::Product { left, right } => Some((
                Family { spec: (**left).clone() },
                Family { spec: (**right).clone() },
            )),
            _ => None,
        }
    }

    /// `A = ⋂_q A_q`.
    pub fn limit(&self) -> Result<IntSet, FamilyError> {
        limit(&self.spec)
    }

    /// `⋂_{q <= Q} A_q`.
    pub fn truncation(&self, q_max: usize) -> Result<IntSet, FamilyError> {
        let sets = (1..=q_max.max(1)).map(|q| self.set_at(q)).collect::<Result<Vec<_>, _>>()?;
        Ok(intersect_truncated(&sets)?)
    }

    /// Checks `A_{q+1} ⊆ A_q` for `q < q_max`, exactly when the normalizer
    /// decides it and on `w` otherwise.
    pub fn check_decreasing(&self, q_max: usize, w: &Window) -> Result<(), FamilyError> {
        match self.monotonicity_violation(q_max, w)? {
            Some((q, x)) => Err(FamilyError::NotDecreasing { q, x }),
            None => Ok(()),
        }
    }

    fn monotonicity_violation(
        &self,
        q_max: usize,
        w: &Window,
    ) -> Result<Option<(usize, Int)>, FamilyError> {
        let q_max = self.q_max().map_or(q_max, |m| m.min(q_max));
        for q in 1..q_max {
            let (a, b) = (self.set_at(q)?, self.set_at(q + 1)?);
            let extra = b.minus(&a).and_then(|d| d.first_member(DEFAULT_WINDOW_CAP));
            let found = match extra {
                Some(x) => x,
                None => w.witness_order().find(|x| b.contains(x) && !a.contains(x)),
            };
            if let Some(x) = found {
                return Ok(Some((q, x)));
            }
        }
        Ok(None)
    }

    /// Decreasing / strictly / asymptotically strictly decreasing, tested
    /// for `q <= q_max`. Asymptotic strictness is only a claim about the
    /// tested range.
    pub fn classify_monotonicity(&self, q_max: usize, w: &Window) -> Result<Monotonicity, FamilyError> {
        let violation = self.monotonicity_violation(q_max, w)?;
        let q_max = self.q_max().map_or(q_max, |m| m.min(q_max));
        let mut steps = Vec::new();
        for q in 1..q_max {
            let (a, b) = (self.set_at(q)?, self.set_at(q + 1)?);
            let in_window = a.first_difference(&b, w);
            let differs = match &in_window {
                Some(_) => true,
                None => a.equivalent(&b).map(|e| !e).unwrap_or(false),
            };
            steps.push((q, differs, in_window));
        }
        let strictly = steps.iter().all(|s| s.1);
        let asymptotically = steps.last().is_some_and(|s| s.1);
        Ok(Monotonicity {
            decreasing: violation.is_none(),
            violation,
            steps,
            strictly,
            asymptotically_strict_within_range: asymptotically,
        })
    }

    /// Closed form of `⋂_q hA_q` from a transcribed rule, if one applies.
    pub fn tail_certificate(&self, h: usize) -> Option<TailCertificate> {
        certificate(&self.spec, h)
    }
}

fn q_max_of(spec: &FamilySpec) -> Option<usize> {
    match spec {
        FamilySpec::Explicit { sets } => Some(sets.len()),
        FamilySpec::CongruenceChain { moduli, .. } => moduli.len(),
        FamilySpec::Affine { inner, .. } => q_max_of(inner),
        FamilySpec::Product { left, right } => match (q_max_of(left), q_max_of(right)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
        _ => None,
    }
}

fn m_star(core: &[Int]) -> Int {
    core.iter().map(|a| a.abs()).max().unwrap_or_default()
}

fn validate(spec: &FamilySpec) -> Result<(), FamilyError> {
    match spec {
        FamilySpec::CongruenceChain { core, moduli } => {
            if core.is_empty() {
                return Err(FamilyError::EmptyCore);
            }
            let ms = m_star(core);
            let first = moduli.first().ok_or(FamilyError::NoSets)?;
            if first <= Int::from(2) * &ms {
                return Err(FamilyError::FirstModulus { first, m_star: ms });
            }
            match moduli {
                ModulusChain::Geometric { ratio, .. } => {
                    if *ratio < Int::from(2) {
                        return Err(FamilyError::Ratio(ratio.clone()));
                    }
                }
                ModulusChain::Explicit(list) => {
                    for (i, pair) in list.windows(2).enumerate() {
                        let q = i + 1;
                        if pair[1] <= pair[0] {
                            return Err(FamilyError::NotIncreasing {
                                q,
                                m: pair[0].clone(),
                                next_m: pair[1].clone(),
                            });
                        }
                        if !pair[1].is_multiple_of(&pair[0]) {
                            return Err(FamilyError::NotDividing {
                                q,
                                m: pair[0].clone(),
                                next_m: pair[1].clone(),
                            });
                        }
                    }
                }
            }
            Ok(())
        }
        FamilySpec::CosetTail { step, base } => {
            if *step < Int::from(2) {
                return Err(FamilyError::Step(step.clone()));
            }
            if modp(base, step).is_zero() {
                return Err(FamilyError::BaseInSubgroup { base: base.clone(), step: step.clone() });
            }
            Ok(())
        }
        FamilySpec::Explicit { sets } if sets.is_empty() => Err(FamilyError::NoSets),
        FamilySpec::Affine { inner, .. } => {
            if matches!(**inner, FamilySpec::Product { .. }) {
                return Err(FamilyError::NestedProduct);
            }
            validate(inner)
        }
        FamilySpec::Product { left, right } => {
            for side in [left, right] {
                if matches!(**side, FamilySpec::Product { .. }) {
                    return Err(FamilyError::NestedProduct);
                }
                validate(side)?;
                Family::new((**side).clone())?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// The first `n` elements of `Z \ core` in enumeration order.
fn enumerate_outside(core: &[Int], n: usize) -> Vec<Int> {
    let mut out = Vec::with_capacity(n);
    let mut k = Int::zero();
    while out.len() < n {
        let candidates = if k.is_zero() { vec![k.clone()] } else { vec![-k.clone(), k.clone()] };
        for c in candidates {
            if out.len() < n && core.binary_search(&c).is_err() {
                out.push(c);
            }
        }
        k += 1;
    }
    out
}

fn sorted(core: &[Int]) -> Vec<Int> {
    let mut v = core.to_vec();
    sort_dedup(&mut v);
    v
}

fn set_at(spec: &FamilySpec, q: usize) -> Result<IntSet, FamilyError> {
    if q == 0 {
        return Err(FamilyError::ZeroIndex);
    }
    let qi = Int::from(q);
    let out = match spec {
        FamilySpec::Tail { core } => {
            IntSet::Union(vec![core.clone(), IntSet::Tail { center: Int::zero(), radius: qi }])
        }
        FamilySpec::HalfTail { core } => {
            IntSet::Union(vec![core.clone(), IntSet::HalfTail { threshold: qi }])
        }
        FamilySpec::CongruenceChain { core, moduli } => {
            let m = moduli.at(q).ok_or(FamilyError::OutOfRange {
                q,
                max: moduli.len().unwrap_or(0),
            })?;
            IntSet::congruence(m, core.iter().cloned())?
        }
        FamilySpec::CosetTail { step, base } => IntSet::Union(vec![
            IntSet::Congruence { modulus: step.clone(), residues: vec![Int::zero()] },
            IntSet::Intersection(vec![
                IntSet::Congruence { modulus: step.clone(), residues: vec![modp(base, step)] },
                IntSet::HalfTail { threshold: base + step * &qi },
            ]),
        ]),
        FamilySpec::Enumeration { core } => {
            let core = sorted(core);
            IntSet::cofinite(enumerate_outside(&core, q - 1))
        }
        FamilySpec::Affine { unit, shift, inner } => set_at(inner, q)?.map_affine(*unit, shift),
        FamilySpec::Product { .. } => return Err(FamilyError::TwoDimensional),
        FamilySpec::Explicit { sets } => {
            sets.get(q - 1).cloned().ok_or(FamilyError::OutOfRange { q, max: sets.len() })?
        }
    };
    Ok(out.normalize())
}

fn limit(spec: &FamilySpec) -> Result<IntSet, FamilyError> {
    let out = match spec {
        FamilySpec::Tail { core } | FamilySpec::HalfTail { core } => core.clone(),
        FamilySpec::CongruenceChain { core, .. } => IntSet::finite(core.iter().cloned()),
        FamilySpec::CosetTail { step, .. } => {
            IntSet::Congruence { modulus: step.clone(), residues: vec![Int::zero()] }
        }
        FamilySpec::Enumeration { core } => IntSet::finite(core.iter().cloned()),
        FamilySpec::Affine { unit, shift, inner } => limit(inner)?.map_affine(*unit, shift),
        FamilySpec::Product { .. } => return Err(FamilyError::TwoDimensional),
        FamilySpec::Explicit { sets } => intersect_truncated(sets)?,
    };
    Ok(out.normalize())
}

fn certificate(spec: &FamilySpec, h: usize) -> Option<TailCertificate> {
    if h == 0 {
        return None;
    }
    if h == 1 {
        return Some(TailCertificate { h, closed_form: limit(spec).ok()?, rule: CertificateRule::Limit });
    }
    let (closed_form, rule) = match spec {
        FamilySpec::Tail { .. } => (IntSet::all(), CertificateRule::TailSetsCoverZ),
        FamilySpec::HalfTail { core } => {
            let core = core.normalize();
            let c = match core.lower_bound() {
                Some(_) => try_closed_hfold_sum(&core, h)?,
                None => IntSet::all(),
            };
            (c, CertificateRule::HalfTailDrift)
        }
        FamilySpec::CongruenceChain { core, .. } => {
            (try_closed_hfold_sum(&IntSet::finite(core.iter().cloned()), h)?, CertificateRule::CongruenceChain)
        }
        FamilySpec::CosetTail { step, base } => {
            let residues = (0..h).map(|j| modp(&(base * Int::from(j)), step));
            (IntSet::congruence(step.clone(), residues).ok()?.normalize(), CertificateRule::CosetTail)
        }
        FamilySpec::Enumeration { .. } => (IntSet::all(), CertificateRule::CofiniteBasis),
        FamilySpec::Affine { unit, shift, inner } => {
            let c = certificate(inner, h)?;
            let shift = shift * Int::from(h);
            (c.closed_form.map_affine(*unit, &shift).normalize(), CertificateRule::Affine(Box::new(c.rule)))
        }
        FamilySpec::Product { .. } => return None,
        FamilySpec::Explicit { sets } => {
            let sums = sets
                .iter()
                .map(|s| try_closed_hfold_sum(s, h))
                .collect::<Option<Vec<_>>>()?;
            (intersect_truncated(&sums).ok()?, CertificateRule::Explicit)
        }
    };
    Some(TailCertificate { h, closed_form, rule })
}

impl fmt::Display for ModulusChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusChain::Geometric { first, ratio } => write!(f, "{first}*{ratio}^(q-1)"),
            ModulusChain::Explicit(ms) => {
                write!(f, "[")?;
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Tail { core } => write!(f, "tail(core={core})"),
            FamilySpec::HalfTail { core } => write!(f, "half_tail(core={core})"),
            FamilySpec::CongruenceChain { core, moduli } => {
                write!(f, "congruence_chain(core={}, m={moduli})", IntSet::Finite(sorted(core)))
            }
            FamilySpec::CosetTail { step, base } => write!(f, "coset_tail(d={step}, x={base})"),
            FamilySpec::Enumeration { core } => {
                write!(f, "enumeration(core={})", IntSet::Finite(sorted(core)))
            }
            FamilySpec::Affine { unit, shift, inner } => {
                write!(f, "affine({}, {shift}, {inner})", unit.sign())
            }
            FamilySpec::Product { left, right } => write!(f, "product({left}, {right})"),
            FamilySpec::Explicit { sets } => write!(f, "explicit({} sets)", sets.len()),
        }
    }
}
