//! Modular arithmetic and 64-bit factorization kernel.
//!
//! Moduli live in `[1, 2^64 - 1]` so residue products fit in a `u128`.
//! Exponents, sums and periods are unbounded [`Natural`]s.

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU64;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Parses a plain decimal string (ASCII digits only, no sign or separators).
pub fn parse_natural(s: &str) -> Result<Natural> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::ParseNatural(s.to_string()));
    }
    Natural::parse_bytes(s.as_bytes(), 10).ok_or_else(|| Error::ParseNatural(s.to_string()))
}

/// A modulus `k` with `1 <= k <= 2^64 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus(NonZeroU64);

impl Modulus {
    pub fn new(k: u64) -> Result<Self> {
        NonZeroU64::new(k).map(Modulus).ok_or(Error::ZeroModulus)
    }

    pub fn from_natural(k: &Natural) -> Result<Self> {
        match k.to_u64() {
            Some(k) => Self::new(k),
            None => Err(Error::ModulusOverflow(k.to_string())),
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0.get()
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A canonical residue in `[0, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    /// Reduces `value` into `[0, k)`.
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: value % modulus.get(),
            modulus,
        }
    }

    /// The residue `-1 mod k`, stored as `k - 1`.
    pub fn minus_one(modulus: Modulus) -> Self {
        Residue::new(modulus.get() - 1, modulus)
    }

    pub fn zero(modulus: Modulus) -> Self {
        Residue { value: 0, modulus }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `q^a` with `q` prime, `a >= 1` and `q^a < 2^64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    q: u64,
    a: u32,
    value: u64,
}

impl PrimePower {
    pub fn new(q: u64, a: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if a == 0 {
            return Err(Error::ZeroParameter("a"));
        }
        let value = q
            .checked_pow(a)
            .ok_or(Error::PrimePowerOverflow { q, a })?;
        Ok(PrimePower { q, a, value })
    }

    #[inline]
    pub fn prime(self) -> u64 {
        self.q
    }

    #[inline]
    pub fn exponent(self) -> u32 {
        self.a
    }

    /// `q^a` as a plain integer.
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        Modulus::new(self.value).expect("prime powers are nonzero")
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{}^{}", self.q, self.a)
        }
    }
}

/// Prime factorization, sorted ascending by prime. Empty for `k = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    parts: Vec<PrimePower>,
}

impl Factorization {
    pub fn parts(&self) -> &[PrimePower] {
        &self.parts
    }

    pub fn product(&self) -> u64 {
        self.parts.iter().map(|p| p.value()).product()
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.parts.last().map(|p| p.prime())
    }

    pub fn is_prime_power(&self) -> bool {
        self.parts.len() == 1
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "1");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// `a * b mod k` for `a, b < k`.
#[inline]
pub fn mul_mod(a: u64, b: u64, k: u64) -> u64 {
    if k <= u32::MAX as u64 {
        a * b % k
    } else {
        ((a as u128 * b as u128) % k as u128) as u64
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, k: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= k {
        s.wrapping_sub(k)
    } else {
        s
    }
}

/// Barrett reduction for moduli in `[2, 2^32)`, where products of
/// residues fit in a `u64`.
#[derive(Clone, Copy)]
struct Barrett {
    k: u64,
    inv: u64,
}

impl Barrett {
    fn new(k: u64) -> Self {
        debug_assert!((2..1 << 32).contains(&k));
        Barrett {
            k,
            inv: (u64::MAX / k) + u64::from(u64::MAX % k == k - 1),
        }
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        // inv = floor(2^64 / k), so the estimated quotient is short by at most one
        let q = ((x as u128 * self.inv as u128) >> 64) as u64;
        let r = x - q * self.k;
        if r >= self.k {
            r - self.k
        } else {
            r
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }
}

/// `base^exp mod k` by square-and-multiply.
pub fn pow_mod(base: u64, mut exp: u128, k: u64) -> u64 {
    if k == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % k;
    if k < 1 << 32 {
        let br = Barrett::new(k);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = br.mul(acc, b);
            }
            exp >>= 1;
            if exp > 0 {
                b = br.mul(b, b);
            }
        }
    } else {
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, b, k);
            }
            exp >>= 1;
            if exp > 0 {
                b = mul_mod(b, b, k);
            }
        }
    }
    acc
}

/// Raises several bases to the same exponent in lockstep.
///
/// The square-and-multiply chains are independent, so running them side by
/// side keeps the multiplier busy instead of waiting on one chain.
pub fn pow_mod_lanes<const L: usize>(bases: [u64; L], exp: u128, k: u64) -> [u64; L] {
    if k == 1 {
        return [0; L];
    }
    let mut acc = [1u64; L];
    let mut b = bases.map(|x| x % k);
    if k >= 1 << 32 {
        for (a, x) in acc.iter_mut().zip(b) {
            *a = pow_mod(x, exp, k);
        }
        return acc;
    }
    let br = Barrett::new(k);
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            for i in 0..L {
                acc[i] = br.mul(acc[i], b[i]);
            }
        }
        e >>= 1;
        if e > 0 {
            for x in b.iter_mut() {
                *x = br.mul(*x, *x);
            }
        }
    }
    acc
}

/// `base^exp mod k` for unbounded base and exponent.
///
/// The base is reduced mod `k`; the exponent is used as given.
pub fn mod_pow(base: &Natural, exp: &Natural, k: Modulus) -> Residue {
    let km = k.get();
    let b = (base % km).to_u64().expect("reduced below k");
    if let Some(e) = exp.to_u128() {
        return Residue::new(pow_mod(b, e, km), k);
    }
    let mut acc = 1 % km;
    for i in (0..exp.bits()).rev() {
        acc = mul_mod(acc, acc, km);
        if exp.bit(i) {
            acc = mul_mod(acc, b, km);
        }
    }
    Residue::new(acc, k)
}

/// Deterministic Miller-Rabin over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_LIMIT: u64 = 1 << 16;

/// Complete prime factorization of `k`.
///
/// Trial division up to 2^16, then Miller-Rabin and Brent's variant of
/// Pollard rho on the remaining cofactor.
pub fn factorize(k: Modulus) -> Factorization {
    let mut n = k.get();
    let mut found: BTreeMap<u64, u32> = BTreeMap::new();

    let twos = n.trailing_zeros();
    if twos > 0 {
        found.insert(2, twos);
        n >>= twos;
    }
    let mut d = 3u64;
    while d < TRIAL_LIMIT && d * d <= n {
        while n % d == 0 {
            *found.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 2;
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(c) = stack.pop() {
            if c < TRIAL_LIMIT * TRIAL_LIMIT || is_prime(c) {
                // All factors below 2^16 are gone, so c < 2^32 is prime.
                *found.entry(c).or_insert(0) += 1;
            } else {
                let f = rho_split(c);
                stack.push(f);
                stack.push(c / f);
            }
        }
    }

    let parts = found
        .into_iter()
        .map(|(q, a)| PrimePower {
            q,
            a,
            value: q.pow(a),
        })
        .collect();
    Factorization { parts }
}

/// Finds a nontrivial factor of an odd composite `n`.
fn rho_split(n: u64) -> u64 {
    const BATCH: u64 = 128;
    let f = |x: u64, c: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    for c in 1u64.. {
        let (mut x, mut y, mut ys) = (0u64, 2u64, 2u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y, c);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // the batched product overshot; replay one step at a time
            loop {
                ys = f(ys, c);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("some increment always splits a composite")
}

/// Combines residues modulo pairwise-coprime prime powers into one residue
/// modulo their product.
pub fn crt_combine(parts: &[(Residue, PrimePower)]) -> Result<Residue> {
    let mut seen = Vec::with_capacity(parts.len());
    let mut acc: u64 = 0;
    let mut modulus: u64 = 1;
    for &(r, p) in parts {
        if seen.contains(&p.prime()) {
            return Err(Error::DuplicatePrime(p.prime()));
        }
        seen.push(p.prime());
        if r.modulus().get() != p.value() {
            return Err(Error::NonCanonicalResidue {
                value: r.value(),
                modulus: p.value(),
            });
        }
        let pa = p.value();
        let next = modulus
            .checked_mul(pa)
            .ok_or_else(|| Error::ModulusOverflow(format!("{modulus} * {pa}")))?;
        // acc + modulus * t ≡ r (mod pa)  =>  t = (r - acc) * modulus^{-1} mod pa
        let inv = inverse_mod(modulus % pa, pa).expect("coprime moduli");
        let reduced = acc % pa;
        let diff = if r.value() >= reduced {
            r.value() - reduced
        } else {
            r.value() + (pa - reduced)
        };
        let t = mul_mod(diff, inv, pa);
        acc = (acc as u128 + modulus as u128 * t as u128) as u64;
        modulus = next;
    }
    Ok(Residue::new(acc, Modulus::new(modulus)?))
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// q-adic valuation: the largest `e` with `q^e | n`.
pub fn nu(q: u64, n: &Natural) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if q == 2 {
        return Ok(n.trailing_zeros().expect("nonzero"));
    }
    let mut e = 0;
    let mut rest = n.clone();
    let qn = Natural::from(q);
    loop {
        let (quot, rem) = rest.div_rem(&qn);
        if !rem.is_zero() {
            return Ok(e);
        }
        rest = quot;
        e += 1;
    }
}

/// Euler's totient of a prime power, `q^(a-1) (q - 1)`.
pub fn phi_prime_power(p: PrimePower) -> u64 {
    p.value() / p.prime() * (p.prime() - 1)
}

/// All positive divisors of `p`, ascending.
pub fn divisors(p: u64) -> Result<Vec<u64>> {
    let fact = factorize(Modulus::new(p)?);
    let mut out = vec![1u64];
    for part in fact.parts() {
        let len = out.len();
        let mut power = 1u64;
        for _ in 0..part.exponent() {
            power *= part.prime();
            for i in 0..len {
                out.push(out[i] * power);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Every prime power `q^a <= limit`, ordered by prime then exponent.
pub fn prime_powers_up_to(limit: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for q in (2..=limit).filter(|&q| is_prime(q)) {
        let mut value = q;
        let mut a = 1;
        loop {
            out.push(PrimePower { q, a, value });
            match value.checked_mul(q) {
                Some(next) if next <= limit => {
                    value = next;
                    a += 1;
                }
                _ => break,
            }
        }
    }
    out
}

/// `q^e` as an unbounded natural.
pub fn natural_pow(q: u64, e: u64) -> Natural {
    let e = u32::try_from(e).expect("exponent fits in u32");
    Natural::from(q).pow(e)
}
