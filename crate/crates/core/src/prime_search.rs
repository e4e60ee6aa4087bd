//! Prime tuples whose rectangular simplices are maximally non-normal.
//!
//! Given distinct primes P with Σ 1/q ≤ 1, every prime p with
//! p ≡ (∏_{q' ∈ P, q' ≠ q} q')^{-1} (mod q) for all q ∈ P makes Δ(P, p)
//! maximally non-normal. The solutions form one class x₀ mod ∏P; the search
//! walks x₀, x₀ + ∏P, ... and keeps the primes.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::certificate::{CertifiedResult, Criterion};
use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::normality;
use crate::ntheory::{self, Residue};
use crate::simplex::RectSimplex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSearchConfig {
    pub seed_primes: Vec<u64>,
    pub count: usize,
    pub verify: bool,
}

impl PrimeSearchConfig {
    pub fn validate(&self) -> Result<()> {
        let p = &self.seed_primes;
        if p.len() < 2 {
            return Err(Error::argument("the search needs at least two seed primes"));
        }
        for (i, &q) in p.iter().enumerate() {
            if !ntheory::is_prime_u64(q) {
                return Err(Error::argument(format!("{q} is not prime")));
            }
            if p[..i].contains(&q) {
                return Err(Error::argument(format!("prime {q} is repeated")));
            }
        }
        let sum = p.iter().fold(Ratio::<BigUint>::zero(), |acc, &q| {
            acc + Ratio::new(BigUint::one(), BigUint::from(q))
        });
        if sum > Ratio::one() {
            return Err(Error::argument(format!("Σ 1/p = {sum} exceeds 1")));
        }
        Ok(())
    }
}

/// The progression x₀ mod ∏P that every output lies in.
pub fn target_class(seed_primes: &[u64]) -> Result<Residue> {
    let l: BigUint = seed_primes.iter().map(|&q| BigUint::from(q)).product();
    let congruences = seed_primes
        .iter()
        .map(|&q| {
            let cofactor = (&l / q) % q;
            ntheory::mod_inverse(num_bigint::BigInt::from(cofactor), q)
        })
        .collect::<Result<Vec<_>>>()?;
    ntheory::crt_solve(&congruences)
}

/// The first `count` primes of the target class, in increasing order.
pub fn algorithm1(config: &PrimeSearchConfig, engine: &EngineConfig) -> Result<Vec<BigUint>> {
    config.validate()?;
    if config.count == 0 {
        return Ok(Vec::new());
    }
    let class = target_class(&config.seed_primes)?;
    let found = ntheory::primes_in_progression_with(
        class.value(),
        class.modulus(),
        config.count,
        engine.max_candidates,
        engine.exec,
    )?;
    for p in &found {
        if !class.contains(p) || config.seed_primes.iter().any(|&q| BigUint::from(q) == *p) {
            return Err(Error::Invariant(format!("{p} is outside the target class {class}")));
        }
        if config.verify && !unit_residues(&config.seed_primes, p).0 {
            return Err(Error::Invariant(format!("output {p} fails the residue check")));
        }
    }
    Ok(found)
}

/// b_q = q − 1 for every seed q, i.e. ∏ of the other primes ≡ 1 (mod q).
fn unit_residues(seed_primes: &[u64], p: &BigUint) -> (bool, Vec<u64>) {
    let mut failing = Vec::new();
    for (i, &q) in seed_primes.iter().enumerate() {
        let mut prod = (p % q).to_u64().expect("below q") as u128;
        for (j, &r) in seed_primes.iter().enumerate() {
            if j != i {
                prod = prod * (r % q) as u128 % q as u128;
            }
        }
        if prod != 1 {
            failing.push(q);
        }
    }
    (failing.is_empty(), failing)
}

/// Checks that b_q = q − 1 for all q ∈ P (with Σ_{q∈P} 1/q ≤ 1), which
/// certifies Δ((n−2)·(P, p)) non-normal. When the dilation is small enough
/// the normality engine confirms it independently.
pub fn verify_output(seed_primes: &[u64], p: &BigUint, engine: &EngineConfig) -> Result<CertifiedResult> {
    PrimeSearchConfig {
        seed_primes: seed_primes.to_vec(),
        count: 0,
        verify: false,
    }
    .validate()?;
    if !ntheory::is_prime(p) {
        return Err(Error::argument(format!("{p} is not prime")));
    }
    if seed_primes.iter().any(|&q| BigUint::from(q) == *p) {
        return Err(Error::argument(format!("{p} is already a seed prime")));
    }
    let (ok, failing) = unit_residues(seed_primes, p);
    let n = seed_primes.len() as u64 + 1;
    if !ok {
        return Ok(CertifiedResult::by_criterion(
            false,
            Criterion::PrimeUnitResidues,
            format!("b_q ≠ q − 1 for q ∈ {failing:?}"),
        ));
    }
    let res = CertifiedResult::by_criterion(
        true,
        Criterion::PrimeUnitResidues,
        format!("b_q = q − 1 for every q ∈ {seed_primes:?} and Σ 1/q ≤ 1"),
    );

    // independent confirmation by plain enumeration
    let Some(p64) = p.to_u64() else { return Ok(res) };
    let mut lam = seed_primes.to_vec();
    lam.push(p64);
    let dil = RectSimplex::new(lam)?.dilate(n - 2)?;
    let plain = EngineConfig {
        use_criteria: false,
        max_points: engine.witness_points.min(engine.max_points),
        ..*engine
    };
    match normality::is_normal_with(&dil, &plain) {
        Ok(r) if r.verdict => Err(Error::Invariant(format!(
            "{dil} passes the residue check but enumeration finds it normal"
        ))),
        Ok(r) => Ok(res.with_corroboration(r.certificate)),
        Err(e) if e.is_resource() => Ok(res),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Certificate;

    fn cfg(p: &[u64], count: usize) -> PrimeSearchConfig {
        PrimeSearchConfig {
            seed_primes: p.to_vec(),
            count,
            verify: true,
        }
    }

    fn run(p: &[u64], count: usize) -> Vec<u64> {
        algorithm1(&cfg(p, count), &EngineConfig::default())
            .unwrap()
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn showcase() {
        assert_eq!(run(&[2, 5, 7, 11], 1), vec![619]);
        let five = run(&[2, 5, 7, 11], 5);
        assert_eq!(five.len(), 5);
        assert!(five.windows(2).all(|w| w[0] < w[1]));
        assert!(five.iter().all(|p| p % 770 == 619));
    }

    #[test]
    fn small_seeds() {
        assert_eq!(run(&[2, 3], 1), vec![5]);
        assert_eq!(run(&[2, 3], 3), vec![5, 11, 17]);
        assert!(run(&[2, 3, 7, 43], 0).is_empty());
        assert_eq!(target_class(&[2, 3]).unwrap(), Residue::new(5, 6u32).unwrap());
    }

    #[test]
    fn hypothesis_violations() {
        let e = EngineConfig::default();
        assert!(algorithm1(&cfg(&[2, 3, 5], 1), &e).is_err()); // Σ 1/p > 1
        assert!(algorithm1(&cfg(&[2, 2, 5], 1), &e).is_err());
        assert!(algorithm1(&cfg(&[2, 9], 1), &e).is_err());
        // Σ 1/p = 1 exactly is allowed
        assert!(algorithm1(&cfg(&[2, 3, 7, 43], 1), &e).is_ok());
    }

    #[test]
    fn deterministic() {
        assert_eq!(run(&[3, 5, 7], 10), run(&[3, 5, 7], 10));
    }

    #[test]
    fn verify_examples() {
        let e = EngineConfig::default();
        let r = verify_output(&[2, 5, 7, 11], &BigUint::from(619u32), &e).unwrap();
        assert!(r.verdict);
        assert_eq!(r.criterion(), Some(Criterion::PrimeUnitResidues));

        let r = verify_output(&[2, 3], &BigUint::from(5u32), &e).unwrap();
        assert!(r.verdict);
        assert!(matches!(r.corroboration, Some(Certificate::Witness { .. })));

        let r = verify_output(&[2, 3], &BigUint::from(7u32), &e).unwrap();
        assert!(!r.verdict);

        assert!(verify_output(&[2, 3], &BigUint::from(9u32), &e).is_err());
        assert!(verify_output(&[2, 3], &BigUint::from(3u32), &e).is_err());
    }

    #[test]
    fn every_output_verifies() {
        let e = EngineConfig::default();
        for seeds in [vec![2u64, 3], vec![2, 5, 7, 11], vec![3, 5, 7], vec![2, 3, 7, 43]] {
            let class = target_class(&seeds).unwrap();
            for p in algorithm1(&cfg(&seeds, 4), &e).unwrap() {
                assert!(class.contains(&p));
                assert!(verify_output(&seeds, &p, &e).unwrap().verdict, "{seeds:?} {p}");
            }
        }
    }
}
