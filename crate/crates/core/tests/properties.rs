use num_bigint::BigUint;
use proptest::prelude::*;

use powsum::arith::{crt_combine, factorize, Modulus, Residue};
use powsum::powersum::{eval, naive_sum, period, prime_power_congruence, row_period};
use powsum::verify::{emit_report, run_suite, Format, Suite, SuiteConfig, VerificationReport};

fn nat(v: u64) -> BigUint {
    BigUint::from(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eval_is_periodic(n in 1u64..10_000, m in 0u64..1_000_000, k in 1u64..5_000) {
        let kk = Modulus::new(k).unwrap();
        let l = period(&nat(n), kk).unwrap().combined;
        let a = eval(&nat(n), &nat(m), kk).unwrap();
        let b = eval(&nat(n), &(nat(m) + &l), kk).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn period_divides_row_period(n in 1u64..1_000_000, k in 1u64..1_000_000) {
        let kk = Modulus::new(k).unwrap();
        let l = period(&nat(n), kk).unwrap().combined;
        prop_assert_eq!(row_period(kk) % l, nat(0));
    }

    #[test]
    fn eval_agrees_with_its_projections(n in 1u64..1_000, m in 0u64..50_000, k in 2u64..100_000) {
        let kk = Modulus::new(k).unwrap();
        let whole = eval(&nat(n), &nat(m), kk).unwrap();
        let parts: Vec<(Residue, _)> = factorize(kk)
            .parts()
            .iter()
            .map(|&p| (eval(&nat(n), &nat(m), p.modulus()).unwrap(), p))
            .collect();
        prop_assert_eq!(crt_combine(&parts).unwrap(), whole);
    }

    #[test]
    fn eval_matches_direct_sum(n in 1u64..u64::MAX, m in 0u64..5_000, k in 1u64..u64::MAX) {
        let kk = Modulus::new(k).unwrap();
        prop_assert_eq!(eval(&nat(n), &nat(m), kk).unwrap(), naive_sum(&nat(n), &nat(m), kk).unwrap());
    }
}

#[test]
fn closed_form_is_eval_at_one_block() {
    for p in powsum::arith::prime_powers_up_to(500) {
        for n in 1..=40u64 {
            let closed = prime_power_congruence(&nat(n), p).unwrap().value;
            let fast = eval(&nat(n), &nat(p.value()), p.modulus()).unwrap();
            assert_eq!(closed, fast, "{p}, n = {n}");
        }
    }
}

#[test]
fn suite_report_round_trips() {
    let cfg = SuiteConfig::default().with_k_max(30).with_n_max(12);
    let report = run_suite(Suite::Periods, &cfg).unwrap();
    assert!(report.all_passed());
    let json = emit_report(&report, Format::Json).unwrap();
    assert_eq!(VerificationReport::from_json(&json).unwrap(), report);
}
