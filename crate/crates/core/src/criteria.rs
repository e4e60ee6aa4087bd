//! Cheap arithmetic certificates: lattice points on edges (LPE), almost
//! 1-normality, the Hering–Schenck–Smith dilation bound, and the prime-tuple
//! obstructions to normality of rΔ(p_1, ..., p_n).

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::certificate::{Certificate, CertifiedResult};
use crate::error::{Error, Result};
use crate::frobenius;
use crate::ntheory;
use crate::simplex::RectSimplex;

/// Largest k such that every edge of Δ(λ) carries at least k lattice points:
/// 1 + min over pairs (i, j), i = j allowed, of gcd(λ_i, λ_j).
pub fn lpe_level(s: &RectSimplex) -> Result<u64> {
    s.require_positive()?;
    let l = s.lambda();
    let mut m = *l.iter().min().expect("non-empty");
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            m = m.min(l[i].gcd(&l[j]));
        }
    }
    Ok(m + 1)
}

/// LPE(n): sufficient for very ampleness.
pub fn very_ample_by_lpe(s: &RectSimplex) -> Result<bool> {
    Ok(lpe_level(s)? >= s.n() as u64)
}

/// LPE(4n(n+1)): sufficient for normality.
pub fn normal_by_gubeladze_lpe(s: &RectSimplex) -> Result<bool> {
    let n = s.n() as u64;
    Ok(lpe_level(s)? >= 4 * n * (n + 1))
}

/// kΔ is normal for every k ≥ n − 1.
pub fn normal_by_ewald_wessels(s: &RectSimplex, r: u64) -> bool {
    r + 1 >= s.n() as u64
}

/// ⌊Σ 1/λ_i⌋.
pub fn hss_floor(s: &RectSimplex) -> Result<u64> {
    let sum = s.reciprocal_sum()?;
    Ok(sum.floor().to_integer().to_u64().expect("at most n"))
}

/// r ≥ n − ⌊Σ 1/λ_i⌋ implies Δ(rλ) normal. False means inconclusive.
pub fn normal_by_hss(s: &RectSimplex, r: u64) -> Result<bool> {
    if r == 0 {
        return Err(Error::argument("dilation factor must be positive"));
    }
    Ok(r + hss_floor(s)? >= s.n() as u64)
}

/// The semigroup data behind almost 1-normality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct A1NInstance {
    #[serde(serialize_with = "crate::ser::biguint")]
    pub l: BigUint,
    #[serde(serialize_with = "crate::ser::biguints")]
    pub generators: Vec<BigUint>,
    #[serde(serialize_with = "crate::ser::biguint")]
    pub d: BigUint,
}

pub fn a1n_instance(s: &RectSimplex) -> Result<A1NInstance> {
    let l = s.lcm()?;
    let generators: Vec<BigUint> = s.lambda().iter().map(|&x| &l / x).collect();
    let d = generators.iter().fold(BigUint::zero(), |g, x| g.gcd(x));
    Ok(A1NInstance { l, generators, d })
}

/// Δ(λ) is A1N iff L − 1 is a non-negative combination of the L_i = L/λ_i.
pub fn is_a1n(s: &RectSimplex, max_table_bits: u64) -> Result<CertifiedResult> {
    let inst = a1n_instance(s)?;
    if !inst.d.is_one() {
        return Err(Error::Invariant(format!(
            "gcd of L/λ_i is {} for {s}, expected 1",
            inst.d
        )));
    }
    let too_big = || {
        Error::resource(
            format!("almost 1-normality of {s}"),
            format!("L = {}", inst.l),
            max_table_bits,
        )
    };
    let target = (&inst.l - 1u32).to_u64().ok_or_else(too_big)?;
    let gens: Vec<u64> = inst
        .generators
        .iter()
        .map(|g| g.to_u64())
        .collect::<Option<_>>()
        .ok_or_else(too_big)?;
    frobenius::representable(&gens, target, max_table_bits)
}

/// Outcome of one obstruction condition; `holds` is `None` when the
/// condition could not be decided within budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionOutcome {
    pub holds: Option<bool>,
    /// 1-based indices k for which the condition holds.
    pub satisfying_k: Vec<usize>,
    pub detail: String,
}

/// Obstructions to normality of Δ(r·p) for distinct primes p_1, ..., p_n,
/// n ≥ 3, 1 ≤ r ≤ n − 2, with b_i ≡ −(∏_{j≠i} p_j)^{-1} (mod p_i).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeObstruction {
    pub primes: Vec<u64>,
    pub r: u64,
    pub b: Vec<u64>,
    /// r·∏p − 1 is not a combination of the ∏_{j≠i} p_j (equivalently,
    /// Δ(r·p) is not A1N).
    pub no_representation: ConditionOutcome,
    /// Some k has Σ_{i≠k} b_i/p_i ≥ r.
    pub residue_sum: ConditionOutcome,
    /// Some k has b_i = p_i − 1 for all i ≠ k and Σ_{i≠k} 1/p_i ≤ 1.
    pub unit_residues: ConditionOutcome,
}

impl PrimeObstruction {
    /// Any condition holding certifies that Δ(r·p) is not normal.
    pub fn certifies_non_normal(&self) -> bool {
        [&self.unit_residues, &self.residue_sum, &self.no_representation]
            .iter()
            .any(|c| c.holds == Some(true))
    }
}

pub fn prime_obstruction(primes: &[u64], r: u64, max_table_bits: u64) -> Result<PrimeObstruction> {
    let n = primes.len();
    if n < 3 {
        return Err(Error::argument("the prime obstructions need at least 3 primes"));
    }
    if r == 0 || r as usize > n - 2 {
        return Err(Error::argument(format!("r must lie in 1..={}", n - 2)));
    }
    for (i, &p) in primes.iter().enumerate() {
        if !ntheory::is_prime_u64(p) {
            return Err(Error::argument(format!("{p} is not prime")));
        }
        if primes[..i].contains(&p) {
            return Err(Error::argument(format!("prime {p} is repeated")));
        }
    }

    let b: Vec<u64> = (0..n)
        .map(|i| {
            let p = primes[i];
            let prod = (0..n)
                .filter(|&j| j != i)
                .fold(1u128, |acc, j| acc * (primes[j] % p) as u128 % p as u128);
            let inv = ntheory::mod_inverse(prod as u64, p)
                .expect("distinct primes are coprime")
                .value()
                .to_u64()
                .expect("below p");
            (p - inv) % p
        })
        .collect();

    let ratio = |num: u64, den: u64| Ratio::new(BigUint::from(num), BigUint::from(den));
    let r_big = Ratio::from_integer(BigUint::from(r));

    let residue_ks: Vec<usize> = (0..n)
        .filter(|&k| {
            let sum = (0..n)
                .filter(|&i| i != k)
                .fold(Ratio::zero(), |acc, i| acc + ratio(b[i], primes[i]));
            sum >= r_big
        })
        .map(|k| k + 1)
        .collect();

    let unit_ks: Vec<usize> = (0..n)
        .filter(|&k| {
            let all_units = (0..n).filter(|&i| i != k).all(|i| b[i] == primes[i] - 1);
            let sum = (0..n)
                .filter(|&i| i != k)
                .fold(Ratio::zero(), |acc, i| acc + ratio(1, primes[i]));
            all_units && sum <= Ratio::one()
        })
        .map(|k| k + 1)
        .collect();

    let simplex = RectSimplex::new(primes.iter().map(|&p| p * r).collect::<Vec<_>>())?;
    let no_representation = match is_a1n(&simplex, max_table_bits) {
        Ok(res) => ConditionOutcome {
            holds: Some(!res.verdict),
            satisfying_k: Vec::new(),
            detail: match res.certificate {
                Certificate::Exhaustion(e) => e.description,
                Certificate::Combination { coefficients, .. } => {
                    format!("representation with coefficients {coefficients:?}")
                }
                _ => String::new(),
            },
        },
        Err(e) if e.is_resource() => ConditionOutcome {
            holds: None,
            satisfying_k: Vec::new(),
            detail: e.to_string(),
        },
        Err(e) => return Err(e),
    };

    let outcome = |ks: Vec<usize>, what: &str| ConditionOutcome {
        holds: Some(!ks.is_empty()),
        detail: if ks.is_empty() {
            format!("no k satisfies {what}")
        } else {
            format!("{what} holds for k ∈ {ks:?}")
        },
        satisfying_k: ks,
    };

    Ok(PrimeObstruction {
        primes: primes.to_vec(),
        r,
        b,
        no_representation,
        residue_sum: outcome(residue_ks, "Σ_{i≠k} b_i/p_i ≥ r"),
        unit_residues: outcome(unit_ks, "b_i = p_i − 1 (i ≠ k), Σ_{i≠k} 1/p_i ≤ 1"),
    })
}

/// Splits λ as r·(distinct primes) with 1 ≤ r ≤ n − 2, when possible.
pub fn as_prime_dilation(s: &RectSimplex) -> Option<(Vec<u64>, u64)> {
    let n = s.n();
    if n < 3 || s.is_extended() {
        return None;
    }
    let r = s.gcd();
    if r as usize > n - 2 {
        return None;
    }
    let primes: Vec<u64> = s.lambda().iter().map(|&x| x / r).collect();
    let distinct = primes.iter().enumerate().all(|(i, p)| !primes[..i].contains(p));
    (distinct && primes.iter().all(|&p| ntheory::is_prime_u64(p))).then_some((primes, r))
}
