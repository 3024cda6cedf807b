//! One line per acceptance criterion; exits nonzero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;
use steenweb::corpus::load_rings;
use steenweb::steenrod::Prime;
use steenweb::suites::{self, SuiteReport};

const ADEM_BUDGET: Duration = Duration::from_secs(300);
const EXHAUSTIVE_BUDGET: Duration = Duration::from_secs(600);
const RANDOM_RINGS: usize = 500;
const RING_SEED: u64 = 20_240_601;
const WEB_MODELS: usize = 1000;
const WEB_SEED: u64 = 1;
const WEB_BOUND: i64 = 2;

fn data() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"))
}

struct Line {
    ok: bool,
    text: String,
}

fn counts(r: &SuiteReport) -> String {
    let mut s = format!("{} checked, {} failed, {} outside hypotheses", r.checked, r.failed, r.skipped);
    if let Some(f) = &r.first_failure {
        s += &format!("; first failure {f}");
    }
    s
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn adem() -> Line {
    let ((two, three), took) =
        timed(|| (suites::adem_oracle(Prime::TWO, 20, 4), suites::adem_oracle(Prime::THREE, 40, 3)));
    Line {
        ok: two.ok() && three.ok() && two.checked > 0 && three.checked > 0 && took <= ADEM_BUDGET,
        text: format!(
            "Adem oracle: p=2 {}; p=3 {}; {:.1}s (budget {}s)",
            counts(&two),
            counts(&three),
            took.as_secs_f64(),
            ADEM_BUDGET.as_secs()
        ),
    }
}

fn hit() -> Line {
    let three = suites::hit_lemma(Prime::THREE, 200);
    let five = suites::hit_lemma(Prime::FIVE, 200);
    Line { ok: three.ok() && five.ok(), text: format!("hit lemma k <= 200: p=3 {}; p=5 {}", counts(&three), counts(&five)) }
}

fn sq() -> Line {
    let r = suites::sq_decomposition(256, 32);
    Line { ok: r.ok(), text: format!("Sq decomposition l <= 256, brute force to 32: {} ({})", counts(&r), r.summary) }
}

fn periodicity(n: u8) -> Line {
    let rings = load_rings(&data()).expect("shipped corpus loads");
    let r = match n {
        4 => suites::power_of_two(&rings, RANDOM_RINGS, RING_SEED),
        _ => suites::odd_p(&rings, &[Prime::THREE, Prime::FIVE], RANDOM_RINGS, RING_SEED),
    };
    let name = if n == 4 { "power-of-two periodicity" } else { "odd-p periodicity" };
    Line {
        ok: r.ok() && r.checked > 0,
        text: format!("{name}: {}; minimal degrees {}", counts(&r), r.summary["minimal_degrees"]),
    }
}

fn gcd() -> Line {
    let r = suites::gcd_closure(&load_rings(&data()).expect("shipped corpus loads"));
    Line { ok: r.ok() && r.checked > 0, text: format!("gcd-closure on the Q corpus, 3k <= n: {}", counts(&r)) }
}

fn bodd() -> Line {
    let r = suites::bodd(&load_rings(&data()).expect("shipped corpus loads"));
    Line { ok: r.ok() && r.checked > 0, text: format!("b_odd corollary on the Q corpus: {}", counts(&r)) }
}

fn exhaustive() -> Line {
    let (r, took) = timed(|| suites::web_exhaustive(8, 4, 1));
    let t = &r.summary["tally"];
    let p = &r.summary["pairs"];
    let clean = p["parity_failures"] == 0 && p["transversality_mismatches"] == 0;
    Line {
        ok: r.ok() && clean && took <= EXHAUSTIVE_BUDGET,
        text: format!(
            "web exhaustive n <= 8, r <= 4: {} models, {} pairs, {} certificates re-verified, {} flagged, {}; {:.1}s (budget {}s)",
            t["models"],
            p["pairs"],
            t["certificates"].as_array().map_or(0, |c| c.iter().filter_map(Value::as_u64).sum::<u64>()),
            t["flagged"],
            counts(&r),
            took.as_secs_f64(),
            EXHAUSTIVE_BUDGET.as_secs()
        ),
    }
}

fn random_web() -> Line {
    let r = suites::web_random(&[16, 32, 64], WEB_MODELS, WEB_SEED, WEB_BOUND);
    let t = &r.summary["tally"];
    let traces = t["case5_traces"].as_u64().unwrap_or(0);
    let claim_failures: u64 = t["case5_claim_failures"].as_array().map_or(0, |c| c.iter().filter_map(Value::as_u64).sum());
    let accounted = r.checked == WEB_MODELS;
    Line {
        ok: r.ok() && accounted && claim_failures == 0,
        text: format!(
            "web random {WEB_MODELS} models, n in {{16, 32, 64}}: certificates by case {}, flagged rate {}, {} Case-5 traces with {} claim failures, {}",
            t["certificates"], r.summary["flagged_rate"], traces, claim_failures, counts(&r)
        ),
    }
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_steenweb"))
        .args(args)
        .args(["--format", "json"])
        .env("STEENWEB_DATA", data())
        .output()
        .expect("binary runs");
    out.stdout
}

fn determinism() -> Line {
    let runs: &[&[&str]] = &[
        &["verify", "web-random", "--seed", "5", "--count", "60"],
        &["verify", "power-of-two", "--seed", "3", "--count", "100"],
        &["verify", "odd-p", "--seed", "3", "--count", "100"],
        &["verify", "hit-lemma", "--prime", "5"],
        &["web", "random", "--n", "16", "--r", "8", "--count", "50", "--seed", "7"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let (a, b) = (cli(args), cli(args));
        if a.is_empty() || a != b {
            differing.push(args.join(" "));
        }
    }
    Line {
        ok: differing.is_empty(),
        text: format!("determinism: {} commands run twice, byte-identical JSON except {:?}", runs.len(), differing),
    }
}

fn main() {
    let criteria: [(u8, fn() -> Line); 10] = [
        (1, adem),
        (2, hit),
        (3, sq),
        (4, || periodicity(4)),
        (5, || periodicity(5)),
        (6, gcd),
        (7, bodd),
        (8, exhaustive),
        (9, random_web),
        (10, determinism),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let line = run();
        failed += usize::from(!line.ok);
        println!("criterion {n:>2}: {} {}", if line.ok { "PASS" } else { "FAIL" }, line.text);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
