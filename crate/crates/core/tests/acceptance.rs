//! Acceptance gate. Runs every criterion in sequence, prints one line per
//! criterion, and exits non-zero if any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Num;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use powsum::arith::{is_prime, nu, Modulus};
use powsum::powersum::{eval, naive_sum, period};
use powsum::verify::{
    check_block_vanishing, check_congruence_theorems, check_generator_block_exact,
    check_lemma_binomial, check_period_formulas, check_power_congruence_grid, check_row_periods,
    TheoremId, VerificationReport, DEFAULT_BUDGET,
};

struct Outcome {
    checked: u64,
    failures: Vec<String>,
    limit: Option<Duration>,
    note: String,
}

impl Outcome {
    fn new(limit: Option<Duration>) -> Self {
        Outcome {
            checked: 0,
            failures: Vec::new(),
            limit,
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, report: &VerificationReport) {
        for r in &report.records {
            self.check(r.passed(), || {
                format!("{} {:?}: expected {}, got {}", r.theorem_id, r.params, r.expected, r.actual)
            });
        }
    }
}

fn nat(v: u64) -> BigUint {
    BigUint::from(v)
}

fn modulus(k: u64) -> Modulus {
    Modulus::new(k).unwrap()
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn prime_residue_classes() -> Outcome {
    let mut out = Outcome::new(secs(10));
    for p in (2..=100u64).filter(|&p| is_prime(p)) {
        for n in 1..=200u64 {
            let want = if n % (p - 1) == 0 { p - 1 } else { 0 };
            let got = naive_sum(&nat(n), &nat(p), modulus(p)).unwrap().value();
            out.check(got == want, || format!("p={p} n={n}: expected {want}, got {got}"));
        }
    }
    out
}

fn prime_power_congruences() -> Outcome {
    let mut out = Outcome::new(secs(60));
    let report = check_congruence_theorems(4096, 100);
    let two_powers = report.count(TheoremId::TwoPowerCongruence);
    out.note = format!("{} records on 2^a, a >= 2", two_powers.pass + two_powers.fail);
    out.absorb(&report);
    out
}

fn block_vanishing() -> Outcome {
    let mut out = Outcome::new(None);
    out.absorb(&check_block_vanishing(2000, 60));
    out
}

fn binomial_divisibility() -> Outcome {
    let mut out = Outcome::new(secs(10));
    for q in [3u64, 5, 7] {
        let report = check_lemma_binomial(q, 8, 3, 60).unwrap();
        let exact_i = report
            .records
            .iter()
            .filter(|r| {
                let n: u64 = r.params["n"].parse().unwrap();
                r.params["i"] == nu(q, &nat(n)).unwrap().to_string()
            })
            .count();
        // every n in 1..=60 and k in 1..=n, for each j, at i = v_q(n)
        out.check(exact_i == 3 * 60 * 61 / 2, || format!("q={q}: only {exact_i} cells at i = v_q(n)"));
        out.absorb(&report);
    }
    out
}

fn shifted_powers() -> Outcome {
    let mut out = Outcome::new(None);
    for q in [3u64, 5, 7, 11] {
        out.absorb(&check_power_congruence_grid(q, 2, 3, 500, 50).unwrap());
    }
    out
}

fn generator_blocks() -> Outcome {
    let mut out = Outcome::new(secs(30));
    for q in (3..=13u64).filter(|&q| is_prime(q)) {
        out.absorb(&check_generator_block_exact(q, 3, 300).unwrap());
    }
    out
}

fn row_periods() -> Outcome {
    let mut out = Outcome::new(secs(60));
    let report = check_row_periods(60, Some(50), DEFAULT_BUDGET).unwrap();
    let mut witnesses = 0;
    for r in &report.records {
        if let Some(wn) = r.params.get("witness_n") {
            witnesses += 1;
            let q: u64 = r.params["q"].parse().unwrap();
            let wn: u64 = wn.parse().unwrap();
            out.check(wn == q - 1 || wn == 1, || {
                format!("k={} q={q}: witness at n={wn}", r.params["k"])
            });
        }
    }
    // one maximal divisor per prime factor, summed over k = 2..=60
    let expected: usize = (2..=60u64)
        .map(|k| (2..=k).filter(|&q| is_prime(q) && k % q == 0).count())
        .sum();
    out.check(witnesses == expected, || format!("{witnesses} witnesses, expected {expected}"));
    out.absorb(&report);
    out
}

fn exact_periods() -> Outcome {
    let mut out = Outcome::new(secs(120));
    let report = check_period_formulas(200, 50, DEFAULT_BUDGET);
    let composite = report.count(TheoremId::CompositePeriod);
    out.note = format!("{} composite cells", composite.pass + composite.fail);
    out.absorb(&report);
    out
}

fn random_tuples() -> Outcome {
    let mut out = Outcome::new(None);
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=1_000_000_000_000_000_000u64);
        let m = rng.gen_range(0..=100_000u64);
        let k = rng.gen_range(1..=1_000_000u64);
        let (nn, mm, kk) = (nat(n), nat(m), modulus(k));
        let fast = eval(&nn, &mm, kk).unwrap();
        let direct = naive_sum(&nn, &mm, kk).unwrap();
        out.check(fast == direct, || format!("n={n} m={m} k={k}: eval {fast}, direct {direct}"));
    }
    out
}

fn digits(rng: &mut StdRng, len: usize) -> BigUint {
    let mut s = String::with_capacity(len);
    s.push(char::from(b'1' + rng.gen_range(0..9u8)));
    for _ in 1..len {
        s.push(char::from(b'0' + rng.gen_range(0..10u8)));
    }
    BigUint::from_str_radix(&s, 10).unwrap()
}

fn huge_arguments() -> Outcome {
    let per_call = Duration::from_millis(100);
    let mut out = Outcome::new(None);
    let mut rng = StdRng::seed_from_u64(0x5eed_0010);
    let mut ks: Vec<u64> = vec![999_983, 1_000_000, 720_720, 524_288, 531_441, 999_999, 2, 1];
    ks.extend((0..42).map(|_| rng.gen_range(1..=1_000_000u64)));
    let mut slowest = Duration::ZERO;
    for k in ks {
        let m = digits(&mut rng, 1000);
        let n = digits(&mut rng, 100);
        let kk = modulus(k);
        let start = Instant::now();
        let v = eval(&n, &m, kk).unwrap();
        let took = start.elapsed();
        slowest = slowest.max(took);
        out.check(took < per_call, || format!("k={k}: {took:?}"));
        // the value must not depend on m beyond its residue mod the period
        let l = period(&n, kk).unwrap().combined;
        let again = eval(&n, &(&m % &l), kk).unwrap();
        out.check(v == again, || format!("k={k}: {v} vs reduced {again}"));
    }
    out.note = format!("slowest call {slowest:?}, limit {per_call:?}");
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1  prime modulus congruence, p <= 100, n <= 200", prime_residue_classes),
        ("2  prime-power congruence, q^a <= 4096, n <= 100", prime_power_congruences),
        ("3  block vanishing mod q^(a-1), q^a <= 2000, n <= 60", block_vanishing),
        ("4  binomial divisibility, q in {3,5,7}, j <= 3, n <= 60", binomial_divisibility),
        ("5  shifted powers, q in {3,5,7,11}, i <= 2, j <= 3, n <= 500, t <= 50", shifted_powers),
        ("6  generator blocks (exact), odd q <= 13, j <= 3, n <= 300", generator_blocks),
        ("7  row period and witnesses, k <= 60, n <= 50", row_periods),
        ("8  exact period vs brute force, k <= 200, n <= 50", exact_periods),
        ("9  eval vs direct summation, 10000 random tuples", random_tuples),
        ("10 eval with 1000-digit m and 100-digit n, < 100 ms per call", huge_arguments),
    ];

    let mut all_ok = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = out.limit.is_none_or(|l| took < l);
        let ok = out.failures.is_empty() && in_time;
        all_ok &= ok;
        let limit = out.limit.map(|l| format!(" (limit {l:?})")).unwrap_or_default();
        let note = if out.note.is_empty() { String::new() } else { format!("; {}", out.note) };
        println!(
            "{} criterion {name}: {} checks, {} failures, {:.2?}{limit}{note}",
            if ok { "PASS" } else { "FAIL" },
            out.checked,
            out.failures.len(),
            took,
        );
        for f in out.failures.iter().take(10) {
            println!("       {f}");
        }
    }
    if all_ok {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
