//! Batch verification suites. Every report serializes deterministically.

use std::collections::BTreeMap;
use std::thread;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::RingEntry;
use crate::field::PrimeField;
use crate::linalg::rank;
use crate::periodicity::{
    check_bodd_corollary, check_odd_p_theorem, check_power_of_two_theorem, rational_gcd_periodicity, Outcome,
    Verdict,
};
use crate::rings::random::random_ring;
use crate::rings::{AnyAlgebra, GradedAlgebra};
use crate::steenrod::{
    admissible_monomials, hit_decompose, leading_coefficient_check, p_adic_split, sq_power_of_two_decomposition,
    algebra, Monomial, PolyAction, Prime, SteenrodElement,
};
use crate::web::{
    check_result, exhaustive_models, Case5Claims, find_certificate, random_model, IsotropyModel, Leaf, PairReport, SearchMode,
    Web, WebError,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: Value,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    /// Instances outside a check's hypotheses.
    pub skipped: usize,
    pub first_failure: Option<Value>,
    pub summary: Value,
}

impl SuiteReport {
    fn new(suite: &str, params: Value) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            params,
            checked: 0,
            passed: 0,
            failed: 0,
            skipped: 0,
            first_failure: None,
            summary: Value::Null,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, ok: bool, failure: impl FnOnce() -> Value) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(failure());
            }
        }
    }

    fn record_verdict(&mut self, v: &Verdict) {
        match v.result {
            Outcome::Inapplicable => self.skipped += 1,
            Outcome::Pass => self.record(true, || Value::Null),
            Outcome::Fail => self.record(false, || serde_json::to_value(v).expect("serializable")),
        }
    }

    fn record_error(&mut self, what: &str, err: impl std::fmt::Display) {
        self.record(false, || json!({"instance": what, "error": err.to_string()}));
    }
}

fn workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get()).min(16)
}

/// Runs `f` over `items` on scoped threads; results keep the input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let chunk = items.len().div_ceil(workers()).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Reduced composites `θ₁θ₂` of admissible monomials against the direct
/// composite action on every monomial of `Z_p[t_1..t_vars]` up to degree
/// `dmax`.
pub fn adem_oracle(p: Prime, dmax: u64, vars: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("adem-oracle", json!({"p": p.get(), "dmax": dmax, "vars": vars}));
    let act = PolyAction::new(p, vars);
    let alg = algebra(p);
    let monos: Vec<Monomial> = (1..=dmax).flat_map(|d| admissible_monomials(p, d)).collect();
    let tests: Vec<_> = act.monomials_up_to(dmax, true).into_iter().map(PolyAction::monomial_poly).collect();
    let mut pairs = Vec::new();
    for a in &monos {
        for b in &monos {
            if a.degree(p) + b.degree(p) <= dmax {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    let results = par_map(&pairs, |(a, b)| {
        let reduced = alg.reduce(&SteenrodElement::from_monomial(p, a.compose(b)));
        let bad = tests.iter().find(|f| act.apply(&reduced, f) != act.apply_monomial(a, &act.apply_monomial(b, f)));
        (reduced, bad.cloned())
    });
    for ((a, b), (reduced, bad)) in pairs.iter().zip(results) {
        rep.record(bad.is_none(), || {
            json!({
                "first": format!("{}", SteenrodElement::from_monomial(p, a.clone())),
                "second": format!("{}", SteenrodElement::from_monomial(p, b.clone())),
                "reduced": reduced.to_string(),
                "on": format!("{:?}", bad.as_ref().and_then(|f| f.keys().next())),
            })
        });
    }
    rep.summary = json!({"pairs": pairs.len(), "test_monomials": tests.len()});
    rep
}

/// `Sq^l` relations for non-powers of two up to `lmax`; for powers of two
/// up to `brute_max`, `Sq^l` lies outside the span of all `Sq^a Sq^b`.
pub fn sq_decomposition(lmax: u64, brute_max: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("sq-decomposition", json!({"lmax": lmax, "brute_max": brute_max}));
    let mut brute = 0;
    for l in 1..=lmax {
        if !l.is_power_of_two() {
            let ok = sq_power_of_two_decomposition(l).verify(l);
            rep.record(ok, || json!({"l": l}));
        } else if l <= brute_max {
            brute += 1;
            let ok = indecomposable(l);
            rep.record(ok, || json!({"l": l, "reason": "Sq^l is a sum of products"}));
        }
    }
    rep.summary = json!({"brute_force": brute});
    rep
}

fn indecomposable(l: u64) -> bool {
    let p = Prime::TWO;
    let f = PrimeField(p);
    let basis = admissible_monomials(p, l);
    let coords = |e: &SteenrodElement| -> Vec<u32> { basis.iter().map(|m| e.coefficient(m)).collect() };
    let alg = algebra(p);
    let products: Vec<Vec<u32>> = (1..l).map(|a| coords(&alg.reduce(&SteenrodElement::composite(p, [a, l - a])))).collect();
    let base = rank(&f, &products, basis.len());
    let mut with = products.clone();
    with.push(coords(&SteenrodElement::power(p, l)));
    rank(&f, &with, basis.len()) == base + 1
}

/// `hit_decompose` and both leading-coefficient routes for all `k ≤ kmax`
/// and every valid `m`.
pub fn hit_lemma(p: Prime, kmax: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("hit-lemma", json!({"p": p.get(), "kmax": kmax}));
    let mut base_cases = 0;
    for k in 1..=kmax {
        let split = match p_adic_split(p, k) {
            Ok(s) => s,
            Err(e) => {
                rep.record_error(&format!("k = {k}"), e);
                continue;
            }
        };
        for m in 1..=split.lambda {
            let base = split.mu == 0 && m == split.lambda;
            base_cases += usize::from(base);
            let verdict = hit_decompose(p, k, m).map_err(|e| e.to_string()).and_then(|d| {
                if !d.verify() {
                    return Err("decomposition does not reduce to P^k".to_string());
                }
                if !base {
                    leading_coefficient_check(p, k, m).map_err(|e| e.to_string())?;
                }
                Ok(())
            });
            rep.record(verdict.is_ok(), || json!({"k": k, "m": m, "error": verdict.clone().err()}));
        }
    }
    rep.summary = json!({"base_cases": base_cases});
    rep
}

fn fp_rings(rings: &[RingEntry], p: Prime) -> Vec<(String, GradedAlgebra<PrimeField>)> {
    rings
        .iter()
        .filter_map(|e| match &e.ring {
            AnyAlgebra::Fp(a) if a.prime() == Some(p) => Some((e.file.clone(), a.clone())),
            _ => None,
        })
        .collect()
}

fn random_rings(p: Prime, count: usize, seed: u64) -> Vec<(String, GradedAlgebra<PrimeField>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| (format!("random #{i}"), random_ring(p, &mut rng))).collect()
}

fn period_suite(
    suite: &str,
    primes: &[Prime],
    rings: &[RingEntry],
    random: usize,
    seed: u64,
    check: impl Fn(&GradedAlgebra<PrimeField>) -> Result<Verdict, crate::periodicity::PeriodicityError> + Sync,
) -> SuiteReport {
    let ps: Vec<u32> = primes.iter().map(|p| p.get()).collect();
    let mut rep = SuiteReport::new(suite, json!({"primes": ps, "random": random, "seed": seed}));
    let mut minimal: BTreeMap<String, usize> = BTreeMap::new();
    for &p in primes {
        let mut all = fp_rings(rings, p);
        all.extend(random_rings(p, random, seed ^ u64::from(p.get())));
        let results = par_map(&all, |(_, a)| check(a));
        for ((what, _), res) in all.iter().zip(results) {
            match res {
                Ok(v) => {
                    if v.result == Outcome::Pass {
                        if let Some(l) = v.witness.get("l").and_then(Value::as_u64) {
                            *minimal.entry(format!("p={} l={l}", p.get())).or_default() += 1;
                        }
                    }
                    rep.record_verdict(&v);
                }
                Err(e) => rep.record_error(what, e),
            }
        }
    }
    rep.summary = json!({"minimal_degrees": minimal});
    rep
}

/// Minimal inducing degrees over `Z_2` are powers of two (with `c = n`).
pub fn power_of_two(rings: &[RingEntry], random: usize, seed: u64) -> SuiteReport {
    period_suite("power-of-two", &[Prime::TWO], rings, random, seed, |a| check_power_of_two_theorem(a, a.n()))
}

/// Minimal inducing degrees over `Z_p`, `p` odd, have the form `2λp^r`.
pub fn odd_p(rings: &[RingEntry], primes: &[Prime], random: usize, seed: u64) -> SuiteReport {
    period_suite("odd-p", primes, rings, random, seed, |a| check_odd_p_theorem(a, a.n()))
}

fn q_rings(rings: &[RingEntry]) -> impl Iterator<Item = (&str, &GradedAlgebra<crate::field::Rationals>)> {
    rings.iter().filter_map(|e| match &e.ring {
        AnyAlgebra::Q(a) => Some((e.file.as_str(), a)),
        _ => None,
    })
}

/// The set of periods is difference-closed and contains `gcd(4, k)` for
/// every rational corpus ring and every `k` with `3k ≤ n`.
pub fn gcd_closure(rings: &[RingEntry]) -> SuiteReport {
    let mut rep = SuiteReport::new("gcd-closure", json!({}));
    for (file, a) in q_rings(rings) {
        for k in (1..=a.n()).filter(|k| 3 * k <= a.n()) {
            match rational_gcd_periodicity(a, k, a.n()) {
                Ok(v) => rep.record_verdict(&v),
                // not k-periodic
                Err(crate::periodicity::PeriodicityError::HypothesisViolation(_)) => rep.skipped += 1,
                Err(e) => rep.record_error(&format!("{file}, k = {k}"), e),
            }
        }
    }
    rep
}

/// `b_odd = 0` for rational corpus rings meeting the corollary's hypotheses.
pub fn bodd(rings: &[RingEntry]) -> SuiteReport {
    let mut rep = SuiteReport::new("bodd", json!({}));
    for (file, a) in q_rings(rings) {
        match check_bodd_corollary(a) {
            Ok(v) => rep.record_verdict(&v),
            Err(e) => rep.record_error(file, e),
        }
    }
    rep
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
struct WebTally {
    models: usize,
    searched: usize,
    certificates: [usize; 6],
    point_components: usize,
    flagged: usize,
    case5_traces: usize,
    /// Traces failing `dim R_h ≡ 0 mod 4`, `k_h ≥ 2k_{h+1}` and `k_l = 0`.
    case5_claim_failures: [usize; 3],
}

enum WebOutcome {
    Verified { case: Option<u8>, trace_claims: Option<Case5Claims> },
    Flagged { trace_claims: Option<Case5Claims> },
    CheckFailed(Value),
    Error(String),
}

fn examine(model: &IsotropyModel, mode: SearchMode) -> WebOutcome {
    let res = match find_certificate(model, mode) {
        Ok(res) => res,
        Err(e) => return WebOutcome::Error(e.to_string()),
    };
    let report = check_result(&res);
    if !report.ok {
        return WebOutcome::CheckFailed(json!({"model": model, "failures": report.failures}));
    }
    match &res.leaf {
        Leaf::Certificate(c) => {
            WebOutcome::Verified { case: Some(c.case), trace_claims: c.chain.as_ref().map(|t| t.claims) }
        }
        Leaf::PointComponent => WebOutcome::Verified { case: None, trace_claims: None },
        Leaf::Flagged { chain, .. } => WebOutcome::Flagged { trace_claims: chain.as_ref().map(|t| t.claims) },
    }
}

fn tally(rep: &mut SuiteReport, t: &mut WebTally, model: &IsotropyModel, out: WebOutcome, flagged_ok: bool) {
    t.searched += 1;
    let mut note_trace = |claims: Option<Case5Claims>| {
        if let Some(c) = claims {
            t.case5_traces += 1;
            for (i, ok) in [c.dims_mod4, c.halving, c.terminal_zero].into_iter().enumerate() {
                t.case5_claim_failures[i] += usize::from(!ok);
            }
        }
    };
    match out {
        WebOutcome::Verified { case, trace_claims } => {
            note_trace(trace_claims);
            match case {
                Some(c) => t.certificates[c as usize] += 1,
                None => t.point_components += 1,
            }
            rep.record(true, || Value::Null);
        }
        WebOutcome::Flagged { trace_claims } => {
            note_trace(trace_claims);
            t.flagged += 1;
            rep.record(flagged_ok, || json!({"model": model, "flagged": true}));
        }
        WebOutcome::CheckFailed(v) => rep.record(false, || v),
        WebOutcome::Error(e) => rep.record(false, || json!({"model": model, "error": e})),
    }
}

/// All valid models with `n ≤ nmax`, `r ≤ rmax` and entries in
/// `[−bound, bound]`: pair properties for every model, a relaxed search
/// and independent re-check wherever `n ≡ 0 mod 4`.
pub fn web_exhaustive(nmax: usize, rmax: usize, bound: i64) -> SuiteReport {
    let mut rep = SuiteReport::new("web-exhaustive", json!({"nmax": nmax, "rmax": rmax, "bound": bound}));
    let mut t = WebTally::default();
    let mut pairs = PairReport::default();
    const BATCH: usize = 1 << 15;
    for n in (2..=nmax).step_by(2) {
        for r in 1..=rmax.min(n / 2) {
            let mut stream = match exhaustive_models(n, r, bound) {
                Ok(s) => s,
                Err(WebError::InfeasibleParameters(_)) => continue,
                Err(e) => {
                    rep.record_error(&format!("n = {n}, r = {r}"), e);
                    continue;
                }
            };
            loop {
                let batch: Vec<IsotropyModel> = stream.by_ref().take(BATCH).collect();
                if batch.is_empty() {
                    break;
                }
                let results = par_map(&batch, |m| {
                    let p = Web::new(m).pair_report();
                    let out = (m.n % 4 == 0).then(|| examine(m, SearchMode::Relaxed));
                    (p, out)
                });
                for (m, (p, out)) in batch.iter().zip(results) {
                    t.models += 1;
                    pairs.add(p);
                    if !p.clean() {
                        rep.record(false, || json!({"model": m, "pairs": p}));
                    }
                    if let Some(out) = out {
                        tally(&mut rep, &mut t, m, out, true);
                    }
                }
            }
        }
    }
    rep.summary = json!({"tally": t, "pairs": pairs});
    rep
}

/// Smallest `r` with `2^r ≥ n²`, i.e. `⌈2 log₂ n⌉`.
pub fn rank_for(n: usize) -> usize {
    (0..).find(|&r| (1u128 << r) >= (n as u128).pow(2)).expect("finite")
}

/// `count` seeded models cycling through `ns`, each with the minimal rank
/// allowed, searched in strict mode and re-checked.
pub fn web_random(ns: &[usize], count: usize, seed: u64, bound: i64) -> SuiteReport {
    let mut rep = SuiteReport::new("web-random", json!({"n": ns, "count": count, "seed": seed, "bound": bound}));
    let mut t = WebTally::default();
    let mut per_n: BTreeMap<usize, WebTally> = BTreeMap::new();
    let jobs: Vec<(usize, u64)> = (0..count).map(|i| (ns[i % ns.len()], seed.wrapping_add(i as u64))).collect();
    let results = par_map(&jobs, |&(n, s)| match random_model(n, rank_for(n), s, bound) {
        Ok(m) => {
            let out = examine(&m, SearchMode::Strict);
            (Some(m), out)
        }
        Err(e) => (None, WebOutcome::Error(e.to_string())),
    });
    for ((n, s), (model, out)) in jobs.iter().zip(results) {
        t.models += 1;
        let entry = per_n.entry(*n).or_default();
        entry.models += 1;
        let Some(model) = model else {
            if let WebOutcome::Error(e) = out {
                rep.record(false, || json!({"n": n, "seed": s, "error": e}));
            }
            continue;
        };
        let mut local = SuiteReport::new("", Value::Null);
        tally(&mut local, entry, &model, out, true);
        rep.checked += local.checked;
        rep.passed += local.passed;
        rep.failed += local.failed;
        if rep.first_failure.is_none() {
            rep.first_failure = local.first_failure.map(|v| json!({"n": n, "seed": s, "detail": v}));
        }
    }
    for e in per_n.values() {
        t.searched += e.searched;
        t.point_components += e.point_components;
        t.flagged += e.flagged;
        t.case5_traces += e.case5_traces;
        for c in 0..3 {
            t.case5_claim_failures[c] += e.case5_claim_failures[c];
        }
        for c in 0..6 {
            t.certificates[c] += e.certificates[c];
        }
    }
    let rate = if t.searched == 0 { 0.0 } else { t.flagged as f64 / t.searched as f64 };
    rep.summary = json!({"tally": t, "per_n": per_n, "flagged_rate": rate});
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(adem_oracle(Prime::TWO, 8, 2).ok());
        assert!(adem_oracle(Prime::THREE, 16, 2).ok());
        assert!(sq_decomposition(40, 16).ok());
        let h = hit_lemma(Prime::THREE, 30);
        assert!(h.ok() && h.checked > 30, "{h:?}");
    }

    #[test]
    fn rank_for_examples() {
        assert_eq!(rank_for(16), 8);
        assert_eq!(rank_for(32), 10);
        assert_eq!(rank_for(64), 12);
        assert_eq!(rank_for(12), 8);
    }

    #[test]
    fn web_suites_are_deterministic() {
        let a = serde_json::to_string(&web_random(&[16], 10, 3, 2)).unwrap();
        let b = serde_json::to_string(&web_random(&[16], 10, 3, 2)).unwrap();
        assert_eq!(a, b);
        let e = web_exhaustive(4, 2, 1);
        assert!(e.ok());
    }
}
