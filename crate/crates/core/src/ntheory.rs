//! Exact integer arithmetic: gcd/lcm, modular inverses, CRT, primality and
//! primes in arithmetic progressions.
//!
//! Anything that can outgrow 64 bits (lcms, prime products, CRT moduli) is
//! carried as [`BigUint`]. The 64-bit primality path is exact; larger inputs
//! fall back to a labelled probabilistic test.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// A residue class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    modulus: BigUint,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`.
    pub fn new(value: impl Into<BigInt>, modulus: impl Into<BigUint>) -> Result<Self> {
        let modulus = modulus.into();
        if modulus.is_zero() {
            return Err(Error::argument("residue modulus must be positive"));
        }
        let m = BigInt::from(modulus.clone());
        let v = value.into().mod_floor(&m);
        Ok(Residue {
            value: v.to_biguint().expect("mod_floor by a positive modulus is non-negative"),
            modulus,
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        (x % &self.modulus) == self.value
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

pub fn gcd_many(values: &[u64]) -> Result<u64> {
    if values.is_empty() {
        return Err(Error::argument("gcd of an empty list"));
    }
    Ok(values.iter().fold(0u64, |g, &v| g.gcd(&v)))
}

pub fn lcm_many(values: &[u64]) -> Result<BigUint> {
    if values.is_empty() {
        return Err(Error::argument("lcm of an empty list"));
    }
    if values.contains(&0) {
        return Err(Error::argument("lcm entries must be positive"));
    }
    Ok(values.iter().fold(BigUint::one(), |l, &v| l.lcm(&BigUint::from(v))))
}

/// `lcm` as a `u128`, or `None` when it does not fit.
pub(crate) fn lcm_u128(values: &[u64]) -> Option<u128> {
    let mut l: u128 = 1;
    for &v in values {
        let v = v as u128;
        let g = l.gcd(&v);
        l = (l / g).checked_mul(v)?;
    }
    Some(l)
}

/// The inverse of `a` modulo `m`.
pub fn mod_inverse(a: impl Into<BigInt>, m: impl Into<BigUint>) -> Result<Residue> {
    let m: BigUint = m.into();
    if m.is_zero() {
        return Err(Error::argument("modulus must be positive"));
    }
    let mi = BigInt::from(m.clone());
    let a = a.into().mod_floor(&mi);
    let e = a.extended_gcd(&mi);
    if !e.gcd.is_one() {
        return Err(Error::Arithmetic {
            message: format!("{a} has no inverse modulo {m}: common factor {}", e.gcd),
            common_factor: Some(e.gcd.to_string()),
        });
    }
    Residue::new(e.x, m)
}

/// Solves a system of congruences with pairwise coprime moduli.
pub fn crt_solve(congruences: &[Residue]) -> Result<Residue> {
    if congruences.is_empty() {
        return Err(Error::argument("empty congruence system"));
    }
    let mut acc = congruences[0].clone();
    for c in &congruences[1..] {
        let g = acc.modulus.gcd(&c.modulus);
        if !g.is_one() {
            return Err(Error::Arithmetic {
                message: format!(
                    "moduli {} and {} are not coprime (common factor {g})",
                    acc.modulus, c.modulus
                ),
                common_factor: Some(g.to_string()),
            });
        }
        // x = acc.value + acc.modulus * t, with t = (c - acc) / acc.modulus mod c.modulus
        let inv = mod_inverse(BigInt::from(acc.modulus.clone()), c.modulus.clone())?;
        let diff = BigInt::from(c.value.clone()) - BigInt::from(acc.value.clone());
        let t = Residue::new(diff * BigInt::from(inv.value), c.modulus.clone())?;
        let modulus = &acc.modulus * &c.modulus;
        let value = &acc.value + &acc.modulus * t.value;
        acc = Residue::new(BigInt::from(value), modulus)?;
    }
    Ok(acc)
}

/// How certain a primality verdict is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "tier")]
pub enum PrimalityTier {
    /// Miller–Rabin with a witness set proven complete below 2^64.
    Deterministic64,
    /// Miller–Rabin with `rounds` pseudo-random bases (error < 4^-rounds).
    Probabilistic { rounds: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Primality {
    pub is_prime: bool,
    #[serde(flatten)]
    pub tier: PrimalityTier,
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Complete for every n < 3.3 * 10^24, in particular all of u64.
const MR_WITNESSES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const BIG_MR_ROUNDS: u32 = 64;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &MR_WITNESSES_64 {
        let mut x = pow_mod(a, d, n);
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

fn miller_rabin_big(n: &BigUint, rounds: u32) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    // Fixed seed keeps verdicts reproducible run to run.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0005_eed0_fb16_u64);
    let bits = n.bits();
    'round: for _ in 0..rounds {
        let a = loop {
            let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.random()).collect();
            let mut cand = BigUint::from_slice(
                &words
                    .iter()
                    .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                    .collect::<Vec<_>>(),
            ) % n;
            if cand < BigUint::from(2u32) {
                cand += 2u32;
            }
            if cand < n_minus_1 {
                break cand;
            }
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

pub fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return Primality {
            is_prime: is_prime_u64(small),
            tier: PrimalityTier::Deterministic64,
        };
    }
    let trial = SMALL_PRIMES.iter().any(|&p| (n % p).is_zero());
    Primality {
        is_prime: !trial && miller_rabin_big(n, BIG_MR_ROUNDS),
        tier: PrimalityTier::Probabilistic { rounds: BIG_MR_ROUNDS },
    }
}

pub fn is_prime(n: &BigUint) -> bool {
    primality(n).is_prime
}

/// The first `count` primes of the form `start + t*step`, `t = 0, 1, 2, ...`.
pub fn primes_in_progression(start: &BigUint, step: &BigUint, count: usize) -> Result<Vec<BigUint>> {
    primes_in_progression_with(
        start,
        step,
        count,
        crate::config::DEFAULT_MAX_CANDIDATES,
        Exec::default(),
    )
}

/// Like [`primes_in_progression`], with an explicit cap on tested candidates.
/// Candidates may be tested speculatively in parallel; results are committed
/// strictly in progression order.
pub fn primes_in_progression_with(
    start: &BigUint,
    step: &BigUint,
    count: usize,
    max_candidates: u64,
    exec: Exec,
) -> Result<Vec<BigUint>> {
    if start.is_zero() || step.is_zero() {
        return Err(Error::argument("start and step must be positive"));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let g = start.gcd(step);
    if !g.is_one() {
        // Every term is divisible by g; only t = 0 can be prime, and only if start == g.
        log::warn!("gcd({start}, {step}) = {g}: the progression holds at most one prime");
        return Ok(if is_prime(start) {
            vec![start.clone()]
        } else {
            Vec::new()
        });
    }

    let batch = if exec.is_parallel() { 512 } else { 1 };
    let mut found = Vec::with_capacity(count);
    let mut tested: u64 = 0;
    let mut base = start.clone();
    while found.len() < count {
        if tested >= max_candidates {
            return Err(Error::resource(
                "prime search candidates",
                format!("more than {tested}"),
                max_candidates,
            ));
        }
        let n = batch.min((max_candidates - tested) as usize);
        let hits = par::map_range(exec, n, |t| {
            let cand = &base + step * BigUint::from(t);
            is_prime(&cand).then_some(cand)
        });
        for cand in hits.into_iter().flatten() {
            if found.len() < count {
                found.push(cand);
            }
        }
        tested += n as u64;
        base += step * BigUint::from(n);
    }
    Ok(found)
}

/// Prime factorization of a `u64` as `(prime, exponent)` pairs in increasing
/// prime order. Trial division up to 10^6, then Pollard's rho.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::argument("cannot factor 0"));
    }
    let mut rest = n;
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    let mut d = 2u64;
    while d <= 1_000_000 && d * d <= rest {
        while rest.is_multiple_of(d) {
            push(d, &mut out);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_rho(m)
            .ok_or_else(|| Error::resource("factorization of an entry", format!("cofactor {m}"), POLLARD_ITERS))?;
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    Ok(out)
}

const POLLARD_ITERS: u64 = 1 << 22;

fn pollard_rho(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut iters = 0;
        while d == 1 && iters < POLLARD_ITERS {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
            iters += 1;
        }
        if d != 1 && d != n {
            return Some(d);
        }
    }
    None
}
