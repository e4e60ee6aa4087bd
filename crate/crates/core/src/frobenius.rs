//! Numerical semigroups: exact Frobenius numbers, membership with explicit
//! coefficients, and the classical upper bounds.
//!
//! Membership and F(a) both come from the residue table modulo the smallest
//! generator: `table[r]` is the least element of the semigroup congruent to
//! `r`. It is filled with the round-robin relaxation, one generator at a time.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::certificate::{Certificate, CertifiedResult, Exhaustion};
use crate::error::{Error, Result};

const UNREACHED: u128 = u128::MAX;
const SLOT_BITS: u64 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroupSpec {
    generators: Vec<u64>,
}

impl NumericalSemigroupSpec {
    /// Sorts the generators; they must be positive with gcd 1.
    pub fn new(generators: impl Into<Vec<u64>>) -> Result<Self> {
        let mut generators = generators.into();
        if generators.is_empty() {
            return Err(Error::argument("a semigroup needs at least one generator"));
        }
        if generators.contains(&0) {
            return Err(Error::argument("generators must be positive"));
        }
        generators.sort_unstable();
        let g = generators.iter().fold(0u64, |g, &a| g.gcd(&a));
        if g != 1 {
            return Err(Error::argument(format!(
                "generators have gcd {g}; the Frobenius number is undefined"
            )));
        }
        Ok(NumericalSemigroupSpec { generators })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// No generator is a combination of the others.
    pub fn is_minimal(&self, max_table_bits: u64) -> Result<bool> {
        for (i, &a) in self.generators.iter().enumerate() {
            let rest: Vec<u64> = self
                .generators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &b)| b)
                .collect();
            if !rest.is_empty() && ResidueTable::build(&rest, max_table_bits)?.contains(a as u128) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Least semigroup element in each residue class modulo the smallest generator.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    generators: Vec<u64>,
    modulus: u64,
    table: Vec<u128>,
}

impl ResidueTable {
    pub fn build(generators: &[u64], max_table_bits: u64) -> Result<Self> {
        if generators.is_empty() || generators.contains(&0) {
            return Err(Error::argument(
                "generators must be a non-empty list of positive integers",
            ));
        }
        let a1 = *generators.iter().min().expect("non-empty");
        if a1.saturating_mul(SLOT_BITS) > max_table_bits {
            return Err(Error::resource(
                "semigroup residue table",
                format!("{} bits", a1 as u128 * SLOT_BITS as u128),
                max_table_bits,
            ));
        }
        let m = a1 as usize;
        let mut table = vec![UNREACHED; m];
        table[0] = 0;
        for &a in generators {
            if a == a1 {
                continue;
            }
            let d = (a1.gcd(&a)) as usize;
            let step = (a % a1) as usize;
            let cycle = m / d;
            for p in 0..d {
                // start each cycle at its current minimum
                let mut q = (0..cycle)
                    .map(|t| (p + t * d) % m)
                    .min_by_key(|&q| table[q])
                    .expect("non-empty cycle");
                if table[q] == UNREACHED {
                    continue;
                }
                for _ in 1..cycle {
                    let cand = table[q] + a as u128;
                    q = (q + step) % m;
                    table[q] = table[q].min(cand);
                }
            }
        }
        Ok(ResidueTable {
            generators: generators.to_vec(),
            modulus: a1,
            table,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Least element of the semigroup congruent to `r`, if any.
    pub fn class_minimum(&self, r: u64) -> Option<u128> {
        let v = self.table[(r % self.modulus) as usize];
        (v != UNREACHED).then_some(v)
    }

    pub fn contains(&self, m: u128) -> bool {
        let v = self.table[(m % self.modulus as u128) as usize];
        v != UNREACHED && v <= m
    }

    /// Largest non-element; −1 when every non-negative integer is reached.
    /// `None` if some residue class is unreachable (gcd > 1).
    pub fn frobenius(&self) -> Option<i128> {
        if self.table.contains(&UNREACHED) {
            return None;
        }
        let max = *self.table.iter().max().expect("non-empty");
        Some(max as i128 - self.modulus as i128)
    }

    /// Coefficients, in generator order, of a representation of `m`.
    pub fn coefficients(&self, m: u128) -> Option<Vec<u64>> {
        if !self.contains(m) {
            return None;
        }
        let a1 = self.modulus as u128;
        let mut coeffs = vec![0u64; self.generators.len()];
        let first_min = self
            .generators
            .iter()
            .position(|&a| a as u128 == a1)
            .expect("modulus is a generator");
        let mut r = (m % a1) as usize;
        let mut value = self.table[r];
        coeffs[first_min] = ((m - value) / a1) as u64;
        while value != 0 {
            // some generator steps back to the minimum of its predecessor class
            let (i, a) = self
                .generators
                .iter()
                .enumerate()
                .filter(|&(_, &a)| a as u128 != a1 && a as u128 <= value)
                .find(|&(_, &a)| {
                    let prev = (r + self.modulus as usize - (a % self.modulus) as usize) % self.modulus as usize;
                    self.table[prev] == value - a as u128
                })
                .expect("every class minimum has a predecessor");
            coeffs[i] += 1;
            value -= *a as u128;
            r = (value % a1) as usize;
        }
        Some(coeffs)
    }
}

/// F(a); −1 when 1 is a generator.
pub fn frobenius_exact(spec: &NumericalSemigroupSpec, max_table_bits: u64) -> Result<i128> {
    if spec.generators[0] == 1 {
        return Ok(-1);
    }
    ResidueTable::build(&spec.generators, max_table_bits)?
        .frobenius()
        .ok_or_else(|| Error::Invariant("coprime generators left a residue class unreached".into()))
}

fn require_two(spec: &NumericalSemigroupSpec) -> Result<&[u64]> {
    if spec.generators.len() < 2 {
        return Err(Error::argument("the bound needs at least two generators"));
    }
    Ok(&spec.generators)
}

/// 2·a_{n−1}·⌊a_n/n⌋ − a_n.
pub fn bound_erdos_graham(spec: &NumericalSemigroupSpec) -> Result<BigInt> {
    let a = require_two(spec)?;
    let n = a.len() as u64;
    let an = a[a.len() - 1];
    Ok(BigInt::from(2u32) * a[a.len() - 2] * (an / n) - an)
}

/// 2·a_n·⌊a_1/n⌋ − a_1.
pub fn bound_selmer(spec: &NumericalSemigroupSpec) -> Result<BigInt> {
    let a = require_two(spec)?;
    let n = a.len() as u64;
    Ok(BigInt::from(2u32) * a[a.len() - 1] * (a[0] / n) - a[0])
}

/// Σ_{i=2}^{n} a_i·d_{i−1}/d_i − Σ a_i with d_i = gcd(a_1, ..., a_i).
pub fn bound_brauer(spec: &NumericalSemigroupSpec) -> Result<BigInt> {
    let a = require_two(spec)?;
    let mut d_prev = a[0];
    let mut acc = BigInt::from(0);
    for &ai in &a[1..] {
        let d = d_prev.gcd(&ai);
        acc += BigInt::from(ai) * (d_prev / d);
        d_prev = d;
    }
    Ok(acc - a.iter().map(|&x| BigInt::from(x)).sum::<BigInt>())
}

/// Whether `m` is a non-negative combination of `generators` (any order,
/// any gcd). A true verdict carries coefficients in the given order.
pub fn representable(generators: &[u64], m: u64, max_table_bits: u64) -> Result<CertifiedResult> {
    if m == 0 {
        return Ok(CertifiedResult::new(
            true,
            Certificate::Combination {
                target: 0,
                generators: generators.to_vec(),
                coefficients: vec![0; generators.len()],
            },
        ));
    }
    let table = ResidueTable::build(generators, max_table_bits)?;
    Ok(match table.coefficients(m as u128) {
        Some(coefficients) => CertifiedResult::new(
            true,
            Certificate::Combination {
                target: m,
                generators: generators.to_vec(),
                coefficients,
            },
        ),
        None => {
            let r = m % table.modulus();
            let description = match table.class_minimum(r) {
                Some(min) => format!(
                    "residue table mod {}: least element ≡ {r} is {min} > {m}",
                    table.modulus()
                ),
                None => format!("residue table mod {}: class {r} is unreachable", table.modulus()),
            };
            CertifiedResult::new(
                false,
                Certificate::Exhaustion(Exhaustion {
                    description,
                    examined: table.modulus(),
                }),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_MAX_TABLE_BITS as BITS;

    fn spec(a: &[u64]) -> NumericalSemigroupSpec {
        NumericalSemigroupSpec::new(a.to_vec()).unwrap()
    }

    fn brute_frobenius(a: &[u64]) -> i128 {
        let limit = (a.iter().min().unwrap() * a.iter().max().unwrap()) as usize;
        let mut reach = vec![false; limit + 1];
        reach[0] = true;
        for m in 1..=limit {
            reach[m] = a.iter().any(|&g| g as usize <= m && reach[m - g as usize]);
        }
        reach.iter().rposition(|&r| !r).map_or(-1, |x| x as i128)
    }

    #[test]
    fn spec_validation() {
        assert_eq!(spec(&[15, 6, 10]).generators(), &[6, 10, 15]);
        assert!(NumericalSemigroupSpec::new(vec![4, 6]).is_err());
        assert!(NumericalSemigroupSpec::new(vec![]).is_err());
        assert!(NumericalSemigroupSpec::new(vec![0, 1]).is_err());
    }

    #[test]
    fn exact_examples() {
        assert_eq!(frobenius_exact(&spec(&[3, 5]), BITS).unwrap(), 7);
        assert_eq!(frobenius_exact(&spec(&[6, 10, 15]), BITS).unwrap(), 29);
        assert_eq!(frobenius_exact(&spec(&[1, 9]), BITS).unwrap(), -1);
        assert_eq!(frobenius_exact(&spec(&[4, 6, 9]), BITS).unwrap(), 11);
        assert_eq!(frobenius_exact(&spec(&[2, 3]), BITS).unwrap(), 1);
    }

    #[test]
    fn exact_matches_brute_force() {
        for a in 2..=30u64 {
            for b in a..=40 {
                for c in [b, b + 3, b + 11] {
                    let g = [a, b, c];
                    if a.gcd(&b).gcd(&c) != 1 {
                        continue;
                    }
                    assert_eq!(frobenius_exact(&spec(&g), BITS).unwrap(), brute_frobenius(&g), "{g:?}");
                }
            }
        }
    }

    #[test]
    fn table_budget() {
        let err = frobenius_exact(&spec(&[1000, 1001]), 1000).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn bound_examples() {
        let s = spec(&[6, 10, 15]);
        assert_eq!(bound_erdos_graham(&s).unwrap(), BigInt::from(85));
        assert_eq!(bound_selmer(&s).unwrap(), BigInt::from(54));
        assert_eq!(bound_brauer(&s).unwrap(), BigInt::from(29));
        assert_eq!(bound_erdos_graham(&spec(&[3, 5])).unwrap(), BigInt::from(7));
        assert_eq!(bound_erdos_graham(&spec(&[2, 3])).unwrap(), BigInt::from(1));
        assert_eq!(bound_selmer(&spec(&[3, 5])).unwrap(), BigInt::from(7));
        assert_eq!(bound_selmer(&spec(&[4, 6, 9])).unwrap(), BigInt::from(14));
        assert_eq!(bound_brauer(&spec(&[3, 5])).unwrap(), BigInt::from(7));
        assert!(bound_brauer(&spec(&[1])).is_err());
    }

    #[test]
    fn brauer_reduces_to_sylvester() {
        for a in 2..40u64 {
            for b in a + 1..60 {
                if a.gcd(&b) == 1 {
                    let expect = BigInt::from(a * b) - a - b;
                    assert_eq!(bound_brauer(&spec(&[a, b])).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn selmer_and_erdos_graham_need_minimal_generators() {
        // Neither expression bounds F on non-minimal generating systems.
        let s = spec(&[37, 111, 112]);
        assert!(!s.is_minimal(BITS).unwrap());
        let f = frobenius_exact(&s, BITS).unwrap();
        assert_eq!(f, 3995);
        assert!(BigInt::from(f) > bound_selmer(&s).unwrap());

        let s = spec(&[7, 7, 8]);
        assert!(!s.is_minimal(BITS).unwrap());
        let f = frobenius_exact(&s, BITS).unwrap();
        assert_eq!(f, 41);
        assert!(BigInt::from(f) > bound_erdos_graham(&s).unwrap());
    }

    #[test]
    fn representable_examples() {
        let r = representable(&[15, 10, 6], 29, BITS).unwrap();
        assert!(!r.verdict);
        assert!(matches!(r.certificate, Certificate::Exhaustion(_)));

        let r = representable(&[15, 10, 6], 30, BITS).unwrap();
        assert!(r.verdict);
        match r.certificate {
            Certificate::Combination { coefficients, .. } => {
                let total: u64 = coefficients.iter().zip([15, 10, 6]).map(|(c, g)| c * g).sum();
                assert_eq!(total, 30);
            }
            other => panic!("{other:?}"),
        }
        assert!(representable(&[7, 9], 0, BITS).unwrap().verdict);
        // gcd > 1: odd targets unreachable
        assert!(!representable(&[4, 6], 13, BITS).unwrap().verdict);
        assert!(representable(&[4, 6], 14, BITS).unwrap().verdict);
    }

    #[test]
    fn coefficients_reconstruct_every_target() {
        let gens = [23u64, 31, 47, 9];
        let t = ResidueTable::build(&gens, BITS).unwrap();
        for m in 0..2000u128 {
            if let Some(c) = t.coefficients(m) {
                let total: u128 = c.iter().zip(gens).map(|(&c, g)| c as u128 * g as u128).sum();
                assert_eq!(total, m);
            }
        }
    }

    #[test]
    fn minimality() {
        assert!(spec(&[6, 10, 15]).is_minimal(BITS).unwrap());
        assert!(!spec(&[3, 5, 8]).is_minimal(BITS).unwrap());
    }
}
