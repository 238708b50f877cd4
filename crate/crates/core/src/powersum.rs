//! Power sums modulo `k`: the direct-summation oracle, closed-form
//! prime-power congruences, valuation bounds, exact periods and the fast
//! evaluator built on them.
//!
//! Throughout, `S_n(m) = 1^n + ... + m^n` with `S_n(0) = 0`, and `n >= 1`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{
    add_mod, crt_combine, factorize, mod_pow, mul_mod, natural_pow, nu, phi_prime_power,
    pow_mod, pow_mod_lanes, Modulus, Natural, PrimePower, Residue,
};
use crate::error::{Error, Result};

/// Largest `m` accepted by [`naive_sum`] unless the caller overrides it.
pub const DEFAULT_ORACLE_LIMIT: u64 = 10_000_000;

/// Windows up to this length are summed with a multiplicative sieve; longer
/// ones fall back to one exponentiation per term.
const SIEVE_LIMIT: u64 = 1 << 22;

fn check_exponent(n: &Natural) -> Result<()> {
    if n.is_zero() {
        Err(Error::ZeroExponent)
    } else {
        Ok(())
    }
}

fn divides(d: u64, n: &Natural) -> bool {
    (n % d).is_zero()
}

/// Direct summation of `1^n + ... + m^n mod k`, with the default oracle limit.
pub fn naive_sum(n: &Natural, m: &Natural, k: Modulus) -> Result<Residue> {
    naive_sum_bounded(n, m, k, DEFAULT_ORACLE_LIMIT)
}

/// Direct summation with an explicit bound on `m`. Cost is `O(m log n)`.
pub fn naive_sum_bounded(n: &Natural, m: &Natural, k: Modulus, limit: u64) -> Result<Residue> {
    check_exponent(n)?;
    let count = match m.to_u64() {
        Some(c) if c <= limit => c,
        _ => {
            return Err(Error::OracleLimit {
                m: m.to_string(),
                limit,
            })
        }
    };
    let km = k.get();
    let mut acc = 0u64;
    match n.to_u128() {
        Some(e) => {
            const LANES: u64 = 8;
            let full = count / LANES * LANES;
            for start in (1..=full).step_by(LANES as usize) {
                let bases = std::array::from_fn(|j| start + j as u64);
                for t in pow_mod_lanes::<8>(bases, e, km) {
                    acc = add_mod(acc, t, km);
                }
            }
            for i in full + 1..=count {
                acc = add_mod(acc, pow_mod(i, e, km), km);
            }
        }
        None => {
            for i in 1..=count {
                acc = add_mod(acc, mod_pow(&Natural::from(i), n, k).value(), km);
            }
        }
    }
    Ok(Residue::new(acc, k))
}

/// `S_n(m) mod k` for every `m` in `0..=len`, by direct accumulation.
///
/// Each term `i^n mod k` depends only on `i mod k`, so the powers are
/// tabulated once per residue class.
pub fn naive_prefix_sums(n: &Natural, len: u64, k: Modulus) -> Result<Vec<u64>> {
    check_exponent(n)?;
    let km = k.get();
    let classes = km.min(len.saturating_add(1)) as usize;
    let table: Vec<u64> = (0..classes as u64)
        .map(|r| mod_pow(&Natural::from(r), n, k).value())
        .collect();
    let mut out = Vec::with_capacity(len as usize + 1);
    let mut acc = 0u64;
    out.push(acc);
    for i in 1..=len {
        acc = add_mod(acc, table[(i % km) as usize], km);
        out.push(acc);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseKind {
    /// `S_n(q^a) ≡ φ(q^a)`.
    Phi,
    /// `S_n(q^a) ≡ 0`.
    Zero,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseKind::Phi => write!(f, "PhiCase"),
            CaseKind::Zero => write!(f, "ZeroCase"),
        }
    }
}

/// Closed-form value of `S_n(q^a) mod q^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceCase {
    pub kind: CaseKind,
    pub value: Residue,
}

impl fmt::Display for CongruenceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.value)
    }
}

/// Whether the sum over one full block `1..=q^a` is `φ(q^a)` rather than `0`.
fn phi_branch(n: &Natural, p: PrimePower) -> bool {
    let q = p.prime();
    if q == 2 {
        p.exponent() == 1 || n.is_one() || n.is_even()
    } else {
        divides(q - 1, n)
    }
}

/// `S_n(q^a) mod q^a` without summation.
///
/// For odd `q` the value is `φ(q^a)` when `(q - 1) | n` and `0` otherwise.
/// For `q = 2` it is `φ(2^a)` when `a = 1`, `n = 1` or `n` is even, and `0`
/// otherwise. At `a = 1` this is the classic `-1 / 0 mod p` dichotomy.
pub fn prime_power_congruence(n: &Natural, p: PrimePower) -> Result<CongruenceCase> {
    check_exponent(n)?;
    let modulus = p.modulus();
    Ok(if phi_branch(n, p) {
        CongruenceCase {
            kind: CaseKind::Phi,
            value: Residue::new(phi_prime_power(p), modulus),
        }
    } else {
        CongruenceCase {
            kind: CaseKind::Zero,
            value: Residue::zero(modulus),
        }
    })
}

/// A guaranteed exponent `e` with `q^e | S_n(q^j)`.
pub fn valuation_lower_bound(n: &Natural, q: u64, j: u64) -> Result<u64> {
    check_exponent(n)?;
    if j == 0 {
        return Err(Error::ZeroParameter("j"));
    }
    if !crate::arith::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(if q == 2 {
        if j == 1 {
            0
        } else if n.is_odd() && !n.is_one() {
            j
        } else {
            j - 1
        }
    } else if divides(q - 1, n) {
        j - 1
    } else {
        nu(q, n)? + j
    })
}

/// Which closed form determines the period of `S_n(m) mod q^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodBranch {
    /// `k = 2`: period 4 for every `n`.
    Two,
    /// `q = 2, a >= 2, n = 1`: period `2^(a+1)`.
    TwoPowerLinear,
    /// `q = 2, a >= 2, n` even: period `2^(a+1)`.
    TwoPowerEven,
    /// `q = 2, a >= 2, n > 1` odd: period `2^a`.
    TwoPowerOdd,
    /// odd `q`, `(q - 1) | n`: period `q^(a+1)`.
    OddUnit,
    /// odd `q`, `(q - 1) ∤ n`, `ν_q(n) = i <= a - 2`: period `q^(a-i)`.
    OddValuation { i: u64 },
    /// odd `q`, `(q - 1) ∤ n`, `q^(a-1) | n`: period `q`.
    OddSaturated,
}

impl fmt::Display for PeriodBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodBranch::Two => write!(f, "k = 2"),
            PeriodBranch::TwoPowerLinear => write!(f, "n = 1"),
            PeriodBranch::TwoPowerEven => write!(f, "n even"),
            PeriodBranch::TwoPowerOdd => write!(f, "n odd, n > 1"),
            PeriodBranch::OddUnit => write!(f, "q-1 | n"),
            PeriodBranch::OddValuation { i } => write!(f, "q-1 ∤ n, v_q(n) = {i}"),
            PeriodBranch::OddSaturated => write!(f, "q-1 ∤ n, q^(a-1) | n"),
        }
    }
}

/// Exact period of `m -> S_n(m) mod q^a`, with the branch that produced it.
pub fn period_prime_power_branch(n: &Natural, p: PrimePower) -> Result<(PeriodBranch, Natural)> {
    check_exponent(n)?;
    let q = p.prime();
    let a = p.exponent() as u64;
    Ok(if q == 2 {
        if a == 1 {
            (PeriodBranch::Two, Natural::from(4u32))
        } else if n.is_one() {
            (PeriodBranch::TwoPowerLinear, natural_pow(2, a + 1))
        } else if n.is_even() {
            (PeriodBranch::TwoPowerEven, natural_pow(2, a + 1))
        } else {
            (PeriodBranch::TwoPowerOdd, natural_pow(2, a))
        }
    } else if divides(q - 1, n) {
        (PeriodBranch::OddUnit, natural_pow(q, a + 1))
    } else {
        let i = nu(q, n)?;
        if i + 2 <= a {
            (PeriodBranch::OddValuation { i }, natural_pow(q, a - i))
        } else {
            (PeriodBranch::OddSaturated, Natural::from(q))
        }
    })
}

/// Exact period `ℓ(q^a, n)`.
pub fn period_prime_power(n: &Natural, p: PrimePower) -> Result<Natural> {
    period_prime_power_branch(n, p).map(|(_, l)| l)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePeriod {
    pub prime_power: PrimePower,
    pub branch: PeriodBranch,
    pub period: Natural,
}

/// Period of `m -> S_n(m) mod k` and its per-prime-power components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodBreakdown {
    pub modulus: Modulus,
    pub per_prime: Vec<PrimePeriod>,
    /// Least common multiple of the component periods.
    pub combined: Natural,
}

/// Period of `S_n(m) mod k` as the lcm of the prime-power periods.
pub fn period(n: &Natural, k: Modulus) -> Result<PeriodBreakdown> {
    check_exponent(n)?;
    let mut per_prime = Vec::new();
    let mut combined = Natural::one();
    for &p in factorize(k).parts() {
        let (branch, l) = period_prime_power_branch(n, p)?;
        combined = combined.lcm(&l);
        per_prime.push(PrimePeriod {
            prime_power: p,
            branch,
            period: l,
        });
    }
    Ok(PeriodBreakdown {
        modulus: k,
        per_prime,
        combined,
    })
}

/// Common period of `S_n(m) mod k` over all `n`: the product of
/// `q^(a+1)` over the factorization of `k`.
pub fn row_period(k: Modulus) -> Natural {
    factorize(k)
        .parts()
        .iter()
        .map(|p| natural_pow(p.prime(), p.exponent() as u64 + 1))
        .product()
}

/// One prime-power component of a fast evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalComponent {
    pub prime_power: PrimePower,
    pub period: Natural,
    /// `m mod period`.
    pub offset: Natural,
    pub residue: Residue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Residue,
    pub components: Vec<EvalComponent>,
}

/// `S_n(m) mod k` for unbounded `n` and `m`.
pub fn eval(n: &Natural, m: &Natural, k: Modulus) -> Result<Residue> {
    eval_explained(n, m, k).map(|e| e.value)
}

/// [`eval`] together with the per-prime-power reduction it performed.
///
/// For each `q^a || k`, `m` is reduced modulo the exact period `ℓ(q^a, n)`,
/// which is sound because `S_n(ℓ) ≡ 0 (mod q^a)` in every branch. The
/// remaining window is summed directly and the components are recombined
/// by CRT. Cost is independent of `m`.
pub fn eval_explained(n: &Natural, m: &Natural, k: Modulus) -> Result<Evaluation> {
    check_exponent(n)?;
    let mut components = Vec::new();
    let mut parts = Vec::new();
    for &p in factorize(k).parts() {
        let l = period_prime_power(n, p)?;
        let offset = m % &l;
        let r = offset
            .to_u128()
            .expect("periods are at most q^(a+1) < 2^128");
        let residue = Residue::new(window_sum(n, r, p)?, p.modulus());
        parts.push((residue, p));
        components.push(EvalComponent {
            prime_power: p,
            period: l,
            offset,
            residue,
        });
    }
    let combined = crt_combine(&parts)?;
    debug_assert_eq!(combined.modulus(), k);
    Ok(Evaluation {
        value: combined,
        components,
    })
}

/// `S_n(r) mod q^a` for `r` below the period.
///
/// `i^n mod q^a` depends only on `i mod q^a`, so whole blocks of length
/// `q^a` contribute the closed-form block sum and only the tail is summed.
fn window_sum(n: &Natural, r: u128, p: PrimePower) -> Result<u64> {
    let pa = p.value();
    let blocks = (r / pa as u128 % pa as u128) as u64;
    let tail = (r % pa as u128) as u64;
    let block_sum = prime_power_congruence(n, p)?.value.value();
    let exp = reduced_exponent(n, p);
    Ok(add_mod(
        mul_mod(blocks, block_sum, pa),
        prefix_power_sum(exp, tail, pa),
        pa,
    ))
}

/// An exponent `e` with `i^e ≡ i^n (mod q^a)` for every integer `i`.
///
/// Units satisfy `i^φ ≡ 1`; multiples of `q` vanish once the exponent is at
/// least `a`, so any `e ≡ n (mod φ)` with `e >= a` works when `n >= a`.
fn reduced_exponent(n: &Natural, p: PrimePower) -> u128 {
    let a = p.exponent() as u64;
    let phi = phi_prime_power(p);
    if let Some(small) = n.to_u128() {
        if small <= a as u128 + phi as u128 {
            return small;
        }
    }
    let excess = (n - Natural::from(a)) % phi;
    a as u128 + excess.to_u128().expect("reduced below phi")
}

/// `1^e + ... + t^e mod pa`.
fn prefix_power_sum(exp: u128, t: u64, pa: u64) -> u64 {
    if t > SIEVE_LIMIT {
        return (1..=t).fold(0, |acc, i| add_mod(acc, pow_mod(i, exp, pa), pa));
    }
    // i -> i^e is completely multiplicative: exponentiate primes only.
    let t = t as usize;
    let mut powers = vec![0u64; t + 1];
    let mut composite = vec![false; t + 1];
    let mut primes: Vec<usize> = Vec::new();
    let mut acc = 0u64;
    for i in 1..=t {
        if i == 1 {
            powers[1] = 1 % pa;
        } else if !composite[i] {
            primes.push(i);
            powers[i] = pow_mod(i as u64, exp, pa);
        }
        acc = add_mod(acc, powers[i], pa);
        for &q in &primes {
            let iq = i * q;
            if iq > t {
                break;
            }
            composite[iq] = true;
            powers[iq] = mul_mod(powers[i], powers[q], pa);
            if i % q == 0 {
                break;
            }
        }
    }
    acc
}
