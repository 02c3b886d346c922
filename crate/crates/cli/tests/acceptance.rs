//! Acceptance suite: one PASS/FAIL line per criterion, each with its
//! runtime bound. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use intersets::suites::{run_suite, SuiteConfig, SuiteReport};
use intersets_core::hset::{compute_h, AnalyzerConfig};
use intersets_core::sumset::{basis_order, exact_order, OrderPolicy};
use intersets_core::{Family, FamilySpec, Int, IntSet, Window};

struct Outcome {
    passed: bool,
    elapsed: Duration,
    detail: String,
}

fn suites(ids: &[&str]) -> Outcome {
    let start = Instant::now();
    let mut passed = true;
    let mut details = Vec::new();
    for id in ids {
        match run_suite(id, &SuiteConfig::default()) {
            Ok(r) => {
                passed &= r.passed();
                details.push(summary(&r));
            }
            Err(e) => {
                passed = false;
                details.push(format!("{id}: error: {e}"));
            }
        }
    }
    Outcome { passed, elapsed: start.elapsed(), detail: details.join("; ") }
}

fn summary(r: &SuiteReport) -> String {
    let failed = r.failures();
    match failed.first() {
        None => format!("{}: {} assertions passed", r.id, r.assertions.len()),
        Some(a) => format!("{}: {} of {} failed, first `{}`: {}", r.id, failed.len(), r.assertions.len(), a.name, a.detail),
    }
}

fn exact_order_example() -> Outcome {
    let start = Instant::now();
    let n = Int::from;
    let core = IntSet::Union(vec![IntSet::congruence(n(4), [n(0)]).unwrap(), IntSet::finite([n(1)])]);
    let family = Family::new(FamilySpec::Tail { core: core.clone() }).unwrap();
    let cfg = AnalyzerConfig { h_max: 6, q: 20, window: Window { lo: n(-50), hi: n(50) }, gen_radius: n(200), ..AnalyzerConfig::default() };
    let report = compute_h(&family, &cfg).unwrap();
    let verdicts = basis_order(&core, 6, &cfg.window, &cfg.gen_radius).unwrap();
    let order = exact_order(&core, &verdicts, OrderPolicy::Always);
    let expected = vec![1, 3, 4, 5, 6];
    let got = report.h_set();
    let certified = report.verdicts.iter().all(|v| !matches!(v.status.label(), "empirical_equal" | "undetermined"));
    Outcome {
        passed: got == expected && order == Some(3) && certified,
        elapsed: start.elapsed(),
        detail: format!(
            "H = {got:?} (expected {expected:?}), exact order {order:?} (expected Some(3)), witnesses {:?}",
            report.verdicts.iter().map(|v| v.status.witness().map(|w| w.to_string())).collect::<Vec<_>>()
        ),
    }
}

type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("integers tail family", 5, Box::new(|| suites(&["integers-tail"]))),
        ("congruence chain", 2, Box::new(|| suites(&["congruence-chain"]))),
        ("rational perturbations", 30, Box::new(|| suites(&["rational"]))),
        ("open intervals", 2, Box::new(|| suites(&["open-intervals"]))),
        ("surjection pullback", 10, Box::new(|| suites(&["surjection"]))),
        ("product closure", 10, Box::new(|| suites(&["product-closure"]))),
        ("affine invariance", 10, Box::new(|| suites(&["affine"]))),
        ("vector minimum inequality", 2, Box::new(|| suites(&["vector-min"]))),
        ("lattice tail family", 5, Box::new(|| suites(&["lattice"]))),
        ("finiteness and countable enumeration", 20, Box::new(|| suites(&["finiteness", "countable"]))),
        ("brute-force oracle", 10, Box::new(|| suites(&["oracle"]))),
        ("exact order example 4Z ∪ {1}", 2, Box::new(exact_order_example)),
    ];
    let mut failed = 0;
    for (i, (name, bound, run)) in criteria.iter().enumerate() {
        let o = run();
        let bound = Duration::from_secs(*bound);
        let ok = o.passed && o.elapsed < bound;
        failed += usize::from(!ok);
        println!(
            "{} [{:>2}] {name} ({:.2?}, bound {:?}): {}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.elapsed,
            bound,
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
