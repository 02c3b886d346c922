//! Verification suites run by `intersets verify <id>`. Randomized suites
//! draw from a ChaCha stream seeded by `--seed`.

use std::time::{Duration, Instant};

use intersets_core::continuum::{verify_open_theorem, verify_rational_theorem, BaseSequence, ContinuumError, Rational, RationalPerturbFamily};
use intersets_core::families::{Family, FamilyError, FamilySpec, ModulusChain};
use intersets_core::groups::{verify_group_theorems, GroupScenario};
use intersets_core::hset::{compute_h, pullback_check, transfer_affine, transfer_product, validate_certificate, AnalyzerConfig, HError, HStatus, Witness};
use intersets_core::intset::intersect_truncated;
use intersets_core::lattice::{min_norm_inequality, verify_lattice_theorem, LatticeBox, LatticeError, NormTailFamily, Point};
use intersets_core::sumset::{brute_count, brute_hfold, hfold_product, representation_count, try_closed_hfold_sum, windowed_hfold_sum, Mode, RepCount, SumsetError};
use intersets_core::window::{Membership3, WindowError, DEFAULT_WINDOW_CAP};
use intersets_core::{Int, IntSet, Unit, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_IDS: [&str; 17] = [
    "integers-tail",
    "rational",
    "open-intervals",
    "finiteness",
    "finiteness-H",
    "subgroup",
    "surjection",
    "cofinite-basis",
    "sharp",
    "congruence-chain",
    "vector-min",
    "lattice",
    "countable",
    "product-closure",
    "affine",
    "simple-lemma",
    "oracle",
];

/// Overrides for a suite's defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub h_max: Option<usize>,
    pub q: Option<usize>,
    pub window: Option<Window>,
    pub gen_radius: Option<Int>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub h: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { h_max: None, q: None, window: None, gen_radius: None, seed: 42, samples: None, h: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub id: String,
    pub assertions: Vec<Assertion>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> Vec<&Assertion> {
        self.assertions.iter().filter(|a| !a.passed).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.assertions {
            let tag = if a.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", a.name, a.detail));
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{verdict} suite {} ({} assertions, {} failed, {:.2?})\n",
            self.id,
            self.assertions.len(),
            self.failures().len(),
            self.elapsed
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    Unknown(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
}

impl SuiteError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SuiteError::Unknown(_) | SuiteError::Config(_) => 2,
            SuiteError::Cap(_) => 3,
        }
    }
}

fn from_window(e: &WindowError) -> SuiteError {
    match e {
        WindowError::TooLarge { .. } => SuiteError::Cap(e.to_string()),
        WindowError::Inverted { .. } => SuiteError::Config(e.to_string()),
    }
}

impl From<SumsetError> for SuiteError {
    fn from(e: SumsetError) -> Self {
        match &e {
            SumsetError::Window(w) => from_window(w),
            _ => SuiteError::Config(e.to_string()),
        }
    }
}

impl From<FamilyError> for SuiteError {
    fn from(e: FamilyError) -> Self {
        match &e {
            FamilyError::Set(intersets_core::intset::SetError::Window(w)) => from_window(w),
            _ => SuiteError::Config(e.to_string()),
        }
    }
}

impl From<HError> for SuiteError {
    fn from(e: HError) -> Self {
        match e {
            HError::Sumset(s) => s.into(),
            HError::Family(f) => f.into(),
            other => SuiteError::Config(other.to_string()),
        }
    }
}

impl From<ContinuumError> for SuiteError {
    fn from(e: ContinuumError) -> Self {
        match &e {
            ContinuumError::Cap(..) | ContinuumError::Overflow => SuiteError::Cap(e.to_string()),
            _ => SuiteError::Config(e.to_string()),
        }
    }
}

impl From<LatticeError> for SuiteError {
    fn from(e: LatticeError) -> Self {
        match &e {
            LatticeError::Cap(..) => SuiteError::Cap(e.to_string()),
            _ => SuiteError::Config(e.to_string()),
        }
    }
}

impl From<WindowError> for SuiteError {
    fn from(e: WindowError) -> Self {
        from_window(&e)
    }
}

#[derive(Default)]
struct Checks(Vec<Assertion>);

impl Checks {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Assertion { name: name.into(), passed, detail: detail.into() });
    }
}

fn n(v: i64) -> Int {
    Int::from(v)
}

fn window_or(cfg: &SuiteConfig, lo: i64, hi: i64) -> Window {
    cfg.window.clone().unwrap_or(Window { lo: n(lo), hi: n(hi) })
}

fn rng(cfg: &SuiteConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

fn analyzer(cfg: &SuiteConfig, h_max: usize, q: usize, w: Window, radius: Int) -> AnalyzerConfig {
    AnalyzerConfig {
        h_max: cfg.h_max.unwrap_or(h_max),
        q: cfg.q.unwrap_or(q),
        gen_radius: cfg.gen_radius.clone().unwrap_or(radius).max(w.radius()),
        window: w,
        ..AnalyzerConfig::default()
    }
}

pub fn run_suite(id: &str, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let mut c = Checks::default();
    match id {
        "integers-tail" => integers_tail(cfg, &mut c)?,
        "rational" => rational(cfg, &mut c)?,
        "open-intervals" => open_intervals(cfg, &mut c)?,
        "finiteness" => {
            finiteness(cfg, &mut c)?;
            stabilization(cfg, &mut c)?;
        }
        "finiteness-H" => stabilization(cfg, &mut c)?,
        "subgroup" => subgroup(cfg, &mut c)?,
        "surjection" => surjection(cfg, &mut c)?,
        "cofinite-basis" => cofinite_basis(cfg, &mut c)?,
        "sharp" => sharp(cfg, &mut c)?,
        "congruence-chain" => congruence_chain(cfg, &mut c)?,
        "vector-min" => vector_min(cfg, &mut c)?,
        "lattice" => lattice(cfg, &mut c)?,
        "countable" => countable(cfg, &mut c)?,
        "product-closure" => product_closure(cfg, &mut c)?,
        "affine" => affine(cfg, &mut c)?,
        "simple-lemma" => simple_lemma(cfg, &mut c)?,
        "oracle" => oracle(cfg, &mut c)?,
        other => return Err(SuiteError::Unknown(other.to_string())),
    }
    Ok(SuiteReport { id: id.to_string(), assertions: c.0, elapsed: start.elapsed() })
}

fn integers_tail(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let h_max = cfg.h_max.unwrap_or(5);
    let q_big = cfg.q.unwrap_or(20);
    let w = window_or(cfg, -50, 50);
    let margin = n(16);
    for h in 2..=h_max {
        let radius = w.radius() + n(q_big as i64 * (h as i64 - 1)) + &margin;
        let len = w.checked_len(DEFAULT_WINDOW_CAP)?;
        let mut gaps = Vec::new();
        for q in 1..=q_big {
            let a = IntSet::tail(n(0), n(q as i64)).map_err(|e| SuiteError::Config(e.to_string()))?;
            let r = windowed_hfold_sum(&a, h, &w, &radius, DEFAULT_WINDOW_CAP)?;
            let found = r.members_in(&w, DEFAULT_WINDOW_CAP)?.len();
            if found != len {
                gaps.push(q);
            }
        }
        c.check(
            format!("h={h} windowed hA_q covers {w} for q=1..{q_big}"),
            gaps.is_empty(),
            format!("R={radius}, incomplete at q in {gaps:?}"),
        );
    }
    let family = Family::new(FamilySpec::Tail { core: IntSet::Empty })?;
    let radius = w.radius() + n(q_big as i64 * (h_max as i64 - 1)) + &margin;
    let acfg = analyzer(cfg, h_max, q_big, w.clone(), radius);
    for h in 2..=h_max {
        match family.tail_certificate(h) {
            Some(cert) => {
                let check = validate_certificate(&family, &cert, &acfg)?;
                c.check(
                    format!("h={h} certificate Z validated"),
                    cert.closed_form.is_all() && check.confirmed,
                    format!("closed form {}; {}", cert.closed_form, check.detail),
                );
            }
            None => c.check(format!("h={h} certificate Z validated"), false, "no certificate"),
        }
    }
    let report = compute_h(&family, &acfg)?;
    let out_ok = report.verdicts.iter().skip(1).all(|v| matches!(v.status, HStatus::CertifiedOut { .. }));
    c.check(
        "H = {1} with certified witnesses for h >= 2",
        report.h_set() == vec![1] && out_ok,
        format!("statuses {:?}, witnesses {:?}", report.labels(), witnesses(&report.verdicts)),
    );
    Ok(())
}

fn witnesses(v: &[intersets_core::HVerdict]) -> Vec<String> {
    v.iter().map(|v| v.status.witness().map_or("-".to_string(), |w| w.to_string())).collect()
}

fn congruence_chain(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let h_max = cfg.h_max.unwrap_or(4);
    let q_big = cfg.q.unwrap_or(6);
    let w = window_or(cfg, -100, 100);
    let core = vec![n(0), n(1), n(3)];
    let m_star = n(3);
    let chain = ModulusChain::Geometric { first: n(7), ratio: n(2) };
    let family = Family::new(FamilySpec::CongruenceChain { core: core.clone(), moduli: chain.clone() })?;
    for h in 1..=h_max {
        let ha = brute_hfold(&core, h);
        let ha_in: Vec<Int> = ha.iter().filter(|x| w.contains(x)).cloned().collect();
        let threshold = (1..=q_big).find(|&q| chain.at(q).is_some_and(|m| m > &m_star * Int::from(2 * h)));
        let mut stable_from = None;
        let mut acc: Option<Vec<Int>> = None;
        let mut incongruent = true;
        for q in 1..=q_big {
            let set = family.set_at(q)?;
            let closed = try_closed_hfold_sum(&set, h)
                .ok_or_else(|| SuiteError::Config(format!("no closed form for hA_{q}")))?;
            let m = closed.materialize(&w, DEFAULT_WINDOW_CAP)?;
            let t: Vec<Int> = match acc {
                None => m,
                Some(prev) => prev.into_iter().filter(|x| m.binary_search(x).is_ok()).collect(),
            };
            if t == ha_in && stable_from.is_none() {
                stable_from = Some(q);
            } else if t != ha_in {
                stable_from = None;
            }
            if threshold.is_some_and(|t0| q >= t0) {
                let mq = chain.at(q).unwrap_or_default();
                let mut residues: Vec<Int> = ha.iter().map(|x| ((x % &mq) + &mq) % &mq).collect();
                residues.sort();
                residues.dedup();
                incongruent &= residues.len() == ha.len();
            }
            acc = Some(t);
        }
        let t = acc.unwrap_or_default();
        c.check(
            format!("h={h} truncated intersection equals hA on {w}"),
            t == ha_in && incongruent && threshold.is_some(),
            format!(
                "|hA|={}, equal from q={stable_from:?}, m_q > 2h m* from q={threshold:?}, hA pairwise incongruent there: {incongruent}",
                ha.len()
            ),
        );
    }
    let acfg = analyzer(cfg, h_max, q_big, w.clone(), w.radius() * 2);
    let report = compute_h(&family, &acfg)?;
    c.check(
        "H all certified in",
        report.verdicts.iter().all(|v| v.status == HStatus::CertifiedIn),
        format!("{:?}", report.labels()),
    );
    let rejected = Family::new(FamilySpec::CongruenceChain {
        core,
        moduli: ModulusChain::Geometric { first: n(6), ratio: n(2) },
    });
    c.check("m_1 = 2m* is rejected", matches!(rejected, Err(FamilyError::FirstModulus { .. })), format!("{rejected:?}"));
    Ok(())
}

fn rational(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let hs = cfg.h.map_or(vec![2, 3], |h| vec![h]);
    let q_big = cfg.q.unwrap_or(10);
    let r_max = 25.max(2 * q_big);
    let w = window_or(cfg, 0, 40);
    let (lo, hi) = (Rational::from(w.lo.clone()), Rational::from(w.hi.clone()));
    let n_max = usize::try_from(&w.hi / 4).unwrap_or(1).max(1);
    let base = BaseSequence::Arithmetic { first: n(4), step: n(4) };
    for include_base in [false, true] {
        let family = RationalPerturbFamily::new(&base, include_base, n_max, r_max)?;
        let tag = if include_base { "A'" } else { "A" };
        for &h in &hs {
            let check = verify_rational_theorem(&family, h, q_big, &lo, &hi)?;
            c.check(
                format!("{tag} h={h} hB* within T(Q={q_big})"),
                check.missing.is_empty(),
                format!("centers {:?}, missing {:?}", strs(&check.centers), strs(&check.missing)),
            );
            c.check(
                format!("{tag} h={h} T(Q) within h/Q of hB*"),
                check.far.is_empty(),
                format!("|T|={}, {} off-center points, far {:?}", check.truncated_size, check.extra.len(), check.far),
            );
        }
    }
    Ok(())
}

fn strs(v: &[Int]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn open_intervals(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let h = cfg.h.unwrap_or(2);
    let q_big = cfg.q.unwrap_or(10);
    let w = window_or(cfg, 0, 20);
    let (lo, hi) = (Rational::from(w.lo.clone()), Rational::from(w.hi.clone()));
    let count = usize::try_from(&w.hi / 4 + 2).unwrap_or(2);
    let base: Vec<Int> = (1..=count as i64).map(|k| n(4 * k)).collect();
    let check = verify_open_theorem(&base, h, q_big, &lo, &hi)?;
    c.check(
        format!("h={h} intersection is centered on hB* with radius <= {h}/{q_big}"),
        check.stray.is_empty() && check.intersection.intervals().len() == check.centers.len(),
        format!("{} over centers {:?}", check.intersection, strs(&check.centers)),
    );
    c.check(
        format!("h={h} centers {}", if h >= 2 { "contained" } else { "excluded" }),
        check.center_errors.is_empty(),
        format!("errors at {:?}", strs(&check.center_errors)),
    );
    c.check(
        format!("h={h} primed variant contains hB*"),
        check.primed_missing.is_empty(),
        format!("{}", check.primed),
    );
    let one = verify_open_theorem(&base, 1, q_big, &lo, &hi)?;
    c.check(
        "h=1 intersection misses every base point",
        one.center_errors.is_empty(),
        format!("{}", one.intersection),
    );
    let three = verify_open_theorem(&base, 3, 5, &lo, &(hi * Rational::from(n(2))))?;
    c.check(
        "primed variant h=3 Q=5 contains 3B*",
        three.primed_missing.is_empty(),
        format!("centers {:?}", strs(&three.centers)),
    );
    Ok(())
}

fn finiteness(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let mut rng = rng(cfg);
    let samples = cfg.samples.unwrap_or(20);
    let w = window_or(cfg, -20, 40);
    let radius = w.radius() * 4;
    let mut bad = Vec::new();
    for _ in 0..samples {
        let t = rng.random_range(-8..8i64);
        let extra: Vec<Int> = (0..rng.random_range(0..4)).map(|_| n(rng.random_range(t - 6..t + 10))).collect();
        let set = IntSet::Union(vec![IntSet::half_tail(n(t)), IntSet::finite(extra)]);
        let h = rng.random_range(1..=4usize);
        let mut x = w.lo.clone();
        while x <= w.hi {
            let here = x.clone();
            x += 3;
            match representation_count(&set, h, &here, Mode::Additive, &radius)? {
                RepCount::Exact(_) => {}
                other => bad.push(format!("{set} h={h} x={here}: {other:?}")),
            }
        }
    }
    c.check("additive counts finite for sets bounded below", bad.is_empty(), format!("{} failures {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()));
    let mut bad = Vec::new();
    for _ in 0..samples {
        let m = rng.random_range(2..6i64);
        let set = IntSet::Intersection(vec![
            IntSet::congruence(n(m), [n(rng.random_range(1..m))]).map_err(|e| SuiteError::Config(e.to_string()))?,
            IntSet::nonzero(),
        ]);
        let h = rng.random_range(1..=3usize);
        for x in [-12i64, -6, 1, 6, 30] {
            match representation_count(&set, h, &n(x), Mode::Multiplicative, &radius)? {
                RepCount::Exact(_) => {}
                other => bad.push(format!("{set} h={h} x={x}: {other:?}")),
            }
        }
    }
    c.check("multiplicative counts finite away from 0", bad.is_empty(), format!("{} failures", bad.len()));
    let all = representation_count(&IntSet::all(), 2, &n(0), Mode::Additive, &radius)?;
    c.check("r_{Z,2}(0) is infinite", all == RepCount::Infinite, format!("{all:?}"));
    let six = representation_count(&IntSet::nonzero(), 2, &n(6), Mode::Multiplicative, &radius)?;
    c.check("multiplicative r_{Z*,2}(6) = 8", six == RepCount::Exact(n(8)), format!("{six:?}"));
    Ok(())
}

/// Random families `A_q = F ∪ (P ∩ [t_q, ∞))` inside `N_0`, with `t_q`
/// stepping past at least one point of the periodic part `P` every time.
fn stabilization(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let mut rng = rng(cfg);
    let samples = cfg.samples.unwrap_or(20);
    let q_big = cfg.q.unwrap_or(12);
    let h_max = cfg.h_max.unwrap_or(4);
    let w = Window { lo: n(0), hi: n(40) };
    let mut failures = Vec::new();
    let mut stabilized_at = Vec::new();
    for i in 0..samples {
        let core: Vec<Int> = (0..rng.random_range(1..5)).map(|_| n(rng.random_range(0..16))).collect();
        let m = rng.random_range(1..6i64);
        let residues: Vec<Int> = (0..rng.random_range(1..=m)).map(|_| n(rng.random_range(0..m))).collect();
        let periodic = IntSet::congruence(n(m), residues).map_err(|e| SuiteError::Config(e.to_string()))?;
        let mut t = 16i64;
        let mut sets = Vec::new();
        for _ in 0..q_big {
            sets.push(IntSet::Union(vec![
                IntSet::finite(core.clone()),
                IntSet::Intersection(vec![periodic.clone(), IntSet::half_tail(n(t))]),
            ]));
            let step = m.max(4);
            t += rng.random_range(step..=2 * step);
        }
        let family = Family::new(FamilySpec::Explicit { sets: sets.clone() })?;
        let strict = family.classify_monotonicity(q_big, &Window { lo: n(0), hi: n(t + 2 * m) })?;
        if !strict.strictly {
            failures.push(format!("family {i} is not strictly decreasing"));
        }
        for h in 1..=h_max {
            let ha: Vec<Int> = brute_hfold(&core, h).into_iter().filter(|x| w.contains(x)).collect();
            let mut acc: Option<Vec<Int>> = None;
            let mut from = None;
            for (q, set) in sets.iter().enumerate() {
                let r = windowed_hfold_sum(set, h, &w, &w.hi, DEFAULT_WINDOW_CAP)?;
                if !r.is_exact_on(&w) {
                    failures.push(format!("family {i} h={h} q={}: windowed sum incomplete", q + 1));
                }
                let m = r.members_in(&w, DEFAULT_WINDOW_CAP)?;
                let t: Vec<Int> = match acc {
                    None => m,
                    Some(prev) => prev.into_iter().filter(|x| m.binary_search(x).is_ok()).collect(),
                };
                if t == ha {
                    from.get_or_insert(q + 1);
                } else {
                    from = None;
                }
                acc = Some(t);
            }
            match from {
                Some(q) => stabilized_at.push(q),
                None => failures.push(format!("family {i} h={h}: no stabilization by Q={q_big}")),
            }
        }
    }
    c.check(
        format!("truncated intersections stabilize to hA on {w} for {samples} families, h <= {h_max}"),
        failures.is_empty(),
        format!(
            "latest stabilization q={:?}; failures {:?}",
            stabilized_at.iter().max(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
    Ok(())
}

fn scenario_checks(c: &mut Checks, scenarios: &[GroupScenario]) {
    for o in verify_group_theorems(scenarios) {
        c.check(o.name, o.passed, o.detail);
    }
}

fn subgroup(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let acfg = analyzer(cfg, 4, 10, window_or(cfg, -30, 30), n(120));
    let mut scenarios = Vec::new();
    for d in 2..=5i64 {
        for x in 1..d {
            scenarios.push(GroupScenario::Subgroup { step: n(d), base: n(x), config: acfg.clone() });
        }
    }
    scenario_checks(c, &scenarios);
    let f = Family::new(FamilySpec::CosetTail { step: n(2), base: n(1) })?;
    let r = compute_h(&f, &acfg)?;
    let w = r.verdicts.get(1).and_then(|v| v.status.witness().cloned());
    let odd = matches!(&w, Some(Witness::Int(x)) if x % 2 != n(0));
    c.check("d=2 x=1 h=2 witness is odd", odd, format!("{w:?}"));
    Ok(())
}

fn surjection(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let h_max = cfg.h_max.unwrap_or(4);
    let m_max = cfg.samples.unwrap_or(12);
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for m in 1..=m_max {
        let w = Window { lo: n(-10 * m as i64), hi: n(10 * m as i64) };
        for b in subsets_up_to(m, 3) {
            let r = pullback_check(m, std::slice::from_ref(&b), h_max, &w)?;
            checked += 1;
            if !r.agree {
                bad.push(format!("m={m} B={b:?}: {:?}", r.sum_mismatches));
            }
        }
    }
    c.check(
        format!("(f^-1 B)^h = f^-1(B^h) for m <= {m_max}, |B| <= 3, h <= {h_max}"),
        bad.is_empty(),
        format!("{checked} residue sets, failures {:?}", bad.iter().take(3).collect::<Vec<_>>()),
    );
    let mut rng = rng(cfg);
    let mut bad = Vec::new();
    for _ in 0..20 {
        let m = rng.random_range(2..=12usize);
        let mut b: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.6)).collect();
        if b.is_empty() {
            b.push(0);
        }
        let mut family = vec![b.clone()];
        for _ in 0..2 {
            let mut next: Vec<usize> = b.iter().copied().filter(|_| rng.random_bool(0.7)).collect();
            if next.is_empty() {
                next.push(b[0]);
            }
            family.push(next.clone());
            b = next;
        }
        let w = Window { lo: n(-10 * m as i64), hi: n(10 * m as i64) };
        let r = pullback_check(m, &family, h_max.min(3), &w)?;
        if !r.agree {
            bad.push(format!("m={m} family={family:?}"));
        }
    }
    c.check("H of preimage families matches H in Z/mZ", bad.is_empty(), format!("20 chains, failures {bad:?}"));
    Ok(())
}

fn subsets_up_to(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in start..m {
            cur.push(i);
            go(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(m, k, 0, &mut cur, &mut out);
    out
}

fn cofinite_basis(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let w = window_or(cfg, -20, 20);
    let mut scenarios = vec![GroupScenario::CofiniteBasis { excluded: vec![n(5)], h: 2, window: w.clone() }];
    let mut rng = rng(cfg);
    for _ in 0..cfg.samples.unwrap_or(20) {
        let excluded: Vec<Int> = (0..rng.random_range(1..6)).map(|_| n(rng.random_range(-15..=15))).collect();
        let h = rng.random_range(2..=cfg.h_max.unwrap_or(3).max(2));
        scenarios.push(GroupScenario::CofiniteBasis { excluded, h, window: w.clone() });
    }
    scenario_checks(c, &scenarios);
    Ok(())
}

fn congruence(m: i64, r: &[i64]) -> Result<IntSet, SuiteError> {
    IntSet::congruence(n(m), r.iter().map(|&x| n(x))).map_err(|e| SuiteError::Config(e.to_string()))
}

fn sharp(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let acfg = analyzer(cfg, 5, 10, window_or(cfg, -40, 40), n(160));
    let mut cores = vec![
        IntSet::Union(vec![congruence(4, &[0])?, IntSet::finite([n(1)])]),
        IntSet::Union(vec![congruence(2, &[0])?, IntSet::finite([n(1)])]),
        congruence(7, &[0, 1, 3])?,
        IntSet::nonzero(),
    ];
    let mut rng = rng(cfg);
    for _ in 0..cfg.samples.unwrap_or(6) {
        let m = rng.random_range(2..7i64);
        let r: Vec<i64> = (0..rng.random_range(1..3)).map(|_| rng.random_range(0..m)).collect();
        let extra: Vec<Int> = (0..rng.random_range(0..3)).map(|_| n(rng.random_range(-6..6))).collect();
        cores.push(IntSet::Union(vec![congruence(m, &r)?, IntSet::finite(extra)]));
    }
    let scenarios: Vec<GroupScenario> =
        cores.into_iter().map(|core| GroupScenario::Sharp { core, config: acfg.clone() }).collect();
    scenario_checks(c, &scenarios);
    Ok(())
}

fn countable(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let acfg = analyzer(cfg, 4, 10, window_or(cfg, -30, 30), n(120));
    let mut cores = vec![vec![n(0), n(1)]];
    let mut rng = rng(cfg);
    for _ in 0..cfg.samples.unwrap_or(5) {
        cores.push((0..rng.random_range(1..5)).map(|_| n(rng.random_range(-8..8))).collect());
    }
    for core in cores {
        let f = Family::new(FamilySpec::Enumeration { core: core.clone() })?;
        let r = compute_h(&f, &acfg)?;
        let ok = r.verdicts.iter().all(|v| match v.status {
            HStatus::CertifiedIn => v.h == 1,
            HStatus::CertifiedOut { .. } => v.h >= 2,
            _ => false,
        });
        c.check(
            format!("enumeration core={} has H = {{1}}", IntSet::finite(core)),
            ok,
            format!("statuses {:?}, witnesses {:?}", r.labels(), witnesses(&r.verdicts)),
        );
    }
    Ok(())
}

fn vector_min(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let samples = cfg.samples.unwrap_or(10_000);
    let mut rng = rng(cfg);
    let mut failures = Vec::new();
    let mut equalities = 0usize;
    for _ in 0..samples {
        let k = rng.random_range(1..=8usize);
        let d = rng.random_range(1..=5usize);
        let vs: Vec<Point> = (0..k)
            .map(|_| loop {
                let v: Point = (0..d).map(|_| rng.random_range(0..=20i64)).collect();
                if v.iter().any(|&x| x > 0) {
                    break v;
                }
            })
            .collect();
        let r = min_norm_inequality(&vs)?;
        equalities += usize::from(r.sum_norm_sq == r.bound);
        if !r.holds() {
            failures.push(vs);
        }
    }
    c.check(
        format!("|sum x|^2 >= k min |x|^2 on {samples} tuples"),
        failures.is_empty(),
        format!("{} failures, {equalities} equalities", failures.len()),
    );
    let mut ok = true;
    for k in 1..=8usize {
        let basis: Vec<Point> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
        let r = min_norm_inequality(&basis)?;
        ok &= r.sum_norm_sq == k as i128 && r.bound == k as i128;
    }
    c.check("standard basis attains equality", ok, "k = 1..8");
    Ok(())
}

fn lattice(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let h_max = cfg.h_max.unwrap_or(3);
    let q_big = cfg.q.unwrap_or(5);
    let family = NormTailFamily::new(vec![vec![0, 0], vec![1, 1]], Rational::from(n(2)))?;
    let bx = LatticeBox::ball(2, 5);
    let report = verify_lattice_theorem(&family, h_max, q_big, &bx)?;
    for row in &report.rows {
        c.check(
            format!("h={} hA = ⋂ hA_q on the box", row.h),
            row.certified() && report.exact,
            format!(
                "|hA ∩ box|={}, certifying q <= {}, undetermined {}, mismatches {:?}",
                row.members,
                row.max_certifying_q,
                row.undetermined.len(),
                row.mismatches
            ),
        );
    }
    let early = verify_lattice_theorem(&family, h_max, 1, &bx)?;
    c.check(
        "Q=1 leaves points undetermined",
        early.rows.iter().any(|r| !r.undetermined.is_empty()),
        format!("{} undetermined at h={}", early.rows[h_max - 1].undetermined.len(), h_max),
    );
    Ok(())
}

fn product_pool() -> Vec<FamilySpec> {
    vec![
        FamilySpec::Tail { core: IntSet::Empty },
        FamilySpec::CongruenceChain {
            core: vec![n(0), n(1), n(3)],
            moduli: ModulusChain::Geometric { first: n(7), ratio: n(2) },
        },
        FamilySpec::HalfTail { core: IntSet::finite([n(-2), n(0)]) },
        FamilySpec::Tail { core: IntSet::finite([n(0), n(1), n(3)]) },
        FamilySpec::CosetTail { step: n(2), base: n(1) },
    ]
}

fn product_closure(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let acfg = analyzer(cfg, 4, 6, window_or(cfg, -16, 16), n(80));
    let pool = product_pool();
    for (i, l) in pool.iter().enumerate() {
        for r in pool.iter().skip(if i == 0 { 0 } else { i }) {
            let p = Family::new(FamilySpec::Product { left: Box::new(l.clone()), right: Box::new(r.clone()) })?;
            let direct = compute_h(&p, &acfg)?;
            let lr = compute_h(&Family::new(l.clone())?, &acfg)?;
            let rr = compute_h(&Family::new(r.clone())?, &acfg)?;
            let conj = transfer_product(&lr, &rr)?;
            c.check(
                format!("{l} x {r}"),
                direct.same_statuses(&conj),
                format!("direct {:?}, conjunction {:?}", direct.labels(), conj.labels()),
            );
        }
    }
    Ok(())
}

fn random_core(rng: &mut ChaCha8Rng) -> Result<IntSet, SuiteError> {
    Ok(match rng.random_range(0..3) {
        0 => IntSet::finite((0..rng.random_range(1..6)).map(|_| n(rng.random_range(-10..=10)))),
        1 => {
            let m = rng.random_range(2..9i64);
            let r: Vec<i64> = (0..rng.random_range(1..4)).map(|_| rng.random_range(0..m)).collect();
            congruence(m, &r)?
        }
        _ => IntSet::tail(n(rng.random_range(-5..=5)), n(rng.random_range(1..=6)))
            .map_err(|e| SuiteError::Config(e.to_string()))?,
    })
}

fn affine(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let acfg = analyzer(cfg, 4, 8, window_or(cfg, -30, 30), n(150));
    let mut rng = rng(cfg);
    let samples = cfg.samples.unwrap_or(50);
    let mut bad = Vec::new();
    let mut witness_bad = Vec::new();
    for _ in 0..samples {
        let core = random_core(&mut rng)?;
        let spec = FamilySpec::Tail { core };
        let unit = if rng.random_bool(0.5) { Unit::Plus } else { Unit::Minus };
        let shift = n(rng.random_range(-10..=10));
        let moved = FamilySpec::Affine { unit, shift: shift.clone(), inner: Box::new(spec.clone()) };
        let fam = Family::new(spec.clone())?;
        let mfam = Family::new(moved.clone())?;
        let before = compute_h(&fam, &acfg)?;
        let after = compute_h(&mfam, &acfg)?;
        if !before.same_statuses(&after) {
            bad.push(format!("{moved}: {:?} vs {:?}", before.labels(), after.labels()));
        }
        let transferred = transfer_affine(&before, unit, &shift);
        let limit = mfam.limit()?;
        for v in &transferred.verdicts {
            if let Some(Witness::Int(x)) = v.status.witness() {
                let cert = mfam.tail_certificate(v.h).map(|c| c.closed_form);
                let in_cert = cert.as_ref().is_some_and(|c| c.contains(x));
                let in_sum = try_closed_hfold_sum(&limit, v.h).map(|s| s.contains(x));
                if !in_cert || in_sum != Some(false) {
                    witness_bad.push(format!("{moved} h={} x={x}", v.h));
                }
            }
        }
    }
    c.check(
        format!("status vectors unchanged by x -> ex + t ({samples} families)"),
        bad.is_empty(),
        format!("{} mismatches {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    );
    c.check(
        "transferred witnesses lie in the certificate but not in hA",
        witness_bad.is_empty(),
        format!("{witness_bad:?}"),
    );
    Ok(())
}

fn simple_lemma(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let mut rng = rng(cfg);
    let samples = cfg.samples.unwrap_or(100);
    let w = window_or(cfg, -40, 40);
    let mut bad = Vec::new();
    for i in 0..samples {
        let f = random_core(&mut rng)?;
        let q_big = rng.random_range(1..10usize);
        let (fam, lim): (Vec<IntSet>, IntSet) = if i % 2 == 0 {
            let tails = (1..=q_big)
                .map(|q| IntSet::tail(n(0), n(q as i64)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| SuiteError::Config(e.to_string()))?;
            (
                tails.iter().map(|t| IntSet::Union(vec![f.clone(), t.clone()])).collect(),
                IntSet::Union(vec![f.clone(), tails[q_big - 1].clone()]),
            )
        } else {
            let chains = (1..=q_big).map(|q| congruence(1 << q, &[0])).collect::<Result<Vec<_>, _>>()?;
            (
                chains.iter().map(|t| IntSet::Union(vec![f.clone(), t.clone()])).collect(),
                IntSet::Union(vec![f.clone(), chains[q_big - 1].clone()]),
            )
        };
        let got = intersect_truncated(&fam).map_err(|e| SuiteError::Config(e.to_string()))?;
        if got.materialize(&w, DEFAULT_WINDOW_CAP)? != lim.materialize(&w, DEFAULT_WINDOW_CAP)? {
            bad.push(format!("F={f} Q={q_big}"));
        }
    }
    c.check(
        format!("⋂ (F ∪ Y_q) = F ∪ ⋂ Y_q on {w} ({samples} cases)"),
        bad.is_empty(),
        format!("failures {:?}", bad.iter().take(3).collect::<Vec<_>>()),
    );
    Ok(())
}

fn oracle(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), SuiteError> {
    let mut rng = rng(cfg);
    let samples = cfg.samples.unwrap_or(200);
    let mut sum_bad = Vec::new();
    let mut count_bad = Vec::new();
    let mut product_bad = Vec::new();
    for _ in 0..samples {
        let mut elems: Vec<Int> = (0..rng.random_range(1..=8)).map(|_| n(rng.random_range(-12..=12))).collect();
        elems.sort();
        elems.dedup();
        let h = rng.random_range(1..=4usize);
        let set = IntSet::finite(elems.clone());
        let brute = brute_hfold(&elems, h);
        let reach = 12 * h as i64;
        let w = Window { lo: n(-reach), hi: n(reach) };
        let closed = try_closed_hfold_sum(&set, h).map(|s| s.materialize(&w, DEFAULT_WINDOW_CAP)).transpose()?;
        let windowed = windowed_hfold_sum(&set, h, &w, &n(reach), DEFAULT_WINDOW_CAP)?;
        let wm = windowed.members_in(&w, DEFAULT_WINDOW_CAP)?;
        if closed.as_ref().is_some_and(|cl| cl != &brute) || wm != brute || !windowed.is_exact_on(&w) {
            sum_bad.push(format!("{set} h={h}"));
        }
        for x in -reach - 2..=reach + 2 {
            let x = n(x);
            let got = representation_count(&set, h, &x, Mode::Additive, &n(reach))?;
            if got != RepCount::Exact(brute_count(&elems, h, &x, Mode::Additive)) {
                count_bad.push(format!("{set} h={h} x={x}: {got:?}"));
            }
        }
        let nonzero: Vec<Int> = elems.iter().filter(|x| **x != n(0)).cloned().collect();
        if !nonzero.is_empty() && h <= 3 {
            let nz = IntSet::finite(nonzero.clone());
            let mut products = vec![n(1)];
            for _ in 0..h {
                let mut next: Vec<Int> = products.iter().flat_map(|p| nonzero.iter().map(move |a| p * a)).collect();
                next.sort();
                next.dedup();
                products = next;
            }
            let pw = Window { lo: n(-2000), hi: n(2000) };
            let got = hfold_product(&nz, h, &pw)?.members_in(&pw, DEFAULT_WINDOW_CAP)?;
            let expect: Vec<Int> = products.iter().filter(|p| pw.contains(p)).cloned().collect();
            if got != expect {
                product_bad.push(format!("{nz} h={h}"));
            }
            for x in expect.iter().take(5) {
                let got = representation_count(&nz, h, x, Mode::Multiplicative, &n(reach))?;
                if got != RepCount::Exact(brute_count(&nonzero, h, x, Mode::Multiplicative)) {
                    count_bad.push(format!("{nz} h={h} x={x} (product): {got:?}"));
                }
            }
        }
    }
    let summary = |v: &Vec<String>| format!("{} mismatches {:?}", v.len(), v.iter().take(3).collect::<Vec<_>>());
    c.check(format!("sumsets match tuple enumeration ({samples} sets)"), sum_bad.is_empty(), summary(&sum_bad));
    c.check("representation counts match tuple enumeration", count_bad.is_empty(), summary(&count_bad));
    c.check("product sets match tuple enumeration", product_bad.is_empty(), summary(&product_bad));
    let _ = Membership3::In;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_input_error() {
        let e = run_suite("nope", &SuiteConfig::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn rational_rejects_shallow_truncation() {
        let cfg = SuiteConfig { q: Some(3), h: Some(2), ..SuiteConfig::default() };
        let e = run_suite("rational", &cfg).unwrap_err();
        assert!(matches!(e, SuiteError::Config(_)), "{e}");
    }

    #[test]
    fn subsets_are_enumerated() {
        assert_eq!(subsets_up_to(4, 3).len(), 4 + 6 + 4);
    }
}
