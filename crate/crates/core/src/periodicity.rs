//! Periodicity of normality: Δ(λ) and Δ(λ_1, ..., λ_i + ℓ_i, ..., λ_n) with
//! ℓ_i = lcm of the other entries have the same normality and the same
//! normality index.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::certificate::CertifiedResult;
use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::normality;
use crate::ntheory;
use crate::par;
use crate::simplex::RectSimplex;

/// ℓ_i = lcm(λ_j : j ≠ i).
pub fn period_moduli(s: &RectSimplex) -> Result<Vec<BigUint>> {
    s.require_positive()?;
    let l = s.lambda();
    if l.len() < 2 {
        return Err(Error::argument("period moduli need at least two entries"));
    }
    Ok((0..l.len())
        .map(|i| {
            let rest: Vec<u64> = l.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            ntheory::lcm_many(&rest).expect("positive entries")
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    /// 1-based entry index.
    pub index: usize,
    pub from: u64,
    pub to: u64,
    pub modulus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub input: RectSimplex,
    pub result: RectSimplex,
    pub trace: Vec<ReductionStep>,
}

/// Cyclic scan i = 1..n: while λ_i > ℓ_i, subtract ℓ_i (all at once), until a
/// full pass changes nothing. The fixpoint is canonical for this scan order;
/// other orders may end elsewhere.
pub fn reduce(s: &RectSimplex) -> Result<Reduction> {
    period_moduli(s)?;
    let mut lam = s.lambda().to_vec();
    let n = lam.len();
    let mut trace = Vec::new();
    loop {
        let mut changed = false;
        for i in 0..n {
            let rest: Vec<u64> = lam
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            let ell = ntheory::lcm_many(&rest)?;
            let Some(ell) = ell.to_u64() else { continue };
            if lam[i] > ell {
                let to = (lam[i] - 1) % ell + 1;
                trace.push(ReductionStep {
                    index: i + 1,
                    from: lam[i],
                    to,
                    modulus: ell,
                });
                lam[i] = to;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Reduction {
        input: s.clone(),
        result: RectSimplex::new(lam)?,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    /// Representative t ∈ 1..=ℓ_n; the verdict covers every λ_n ≡ t, λ_n ≥ t.
    pub residue: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<CertifiedResult>,
    /// Why the class was left undecided.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceTable {
    pub prefix: Vec<u64>,
    pub modulus: u64,
    pub classes: Vec<ClassVerdict>,
}

impl CongruenceTable {
    pub fn verdict(&self, lambda_n: u64) -> Option<bool> {
        let t = (lambda_n + self.modulus - 1) % self.modulus + 1;
        self.classes[(t - 1) as usize].result.as_ref().map(|r| r.verdict)
    }
}

/// Normality of Δ(prefix, λ_n) for every residue class of λ_n mod ℓ_n =
/// lcm(prefix), decided on the representatives 1..=ℓ_n. Classes whose probe
/// exceeds the budget are left as explicit gaps.
pub fn congruence_class_verdict(prefix: &[u64], cfg: &EngineConfig) -> Result<CongruenceTable> {
    if prefix.is_empty() || prefix.contains(&0) {
        return Err(Error::argument("prefix must be a non-empty list of positive entries"));
    }
    let ell = ntheory::lcm_many(prefix)?;
    let modulus = ell
        .to_u64()
        .filter(|&m| m <= cfg.max_points)
        .ok_or_else(|| Error::resource("congruence classes", ell.to_string(), cfg.max_points))?;
    let classes = par::map_range(cfg.exec, modulus as usize, |t| {
        let t = t as u64 + 1;
        let mut lam = prefix.to_vec();
        lam.push(t);
        let probe = RectSimplex::new(lam).and_then(|s| normality::is_normal_with(&s, cfg));
        match probe {
            Ok(r) => ClassVerdict {
                residue: t,
                result: Some(r),
                gap: None,
            },
            Err(e) => ClassVerdict {
                residue: t,
                result: None,
                gap: Some(e.to_string()),
            },
        }
    });
    if let Some(bad) = classes
        .iter()
        .find_map(|c| c.gap.as_ref())
        .filter(|g| g.contains("invariant"))
    {
        return Err(Error::Invariant(bad.clone()));
    }
    debug_assert!(ell >= BigUint::one());
    Ok(CongruenceTable {
        prefix: prefix.to_vec(),
        modulus,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normality::mu_norm;

    fn rs(v: &[u64]) -> RectSimplex {
        RectSimplex::new(v.to_vec()).unwrap()
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn moduli_examples() {
        assert_eq!(period_moduli(&rs(&[2, 3, 5])).unwrap(), big(&[15, 10, 6]));
        assert_eq!(period_moduli(&rs(&[7, 7])).unwrap(), big(&[7, 7]));
        for p in [5u64, 7, 11, 13, 101] {
            assert_eq!(period_moduli(&rs(&[2, 3, p])).unwrap(), big(&[3 * p, 2 * p, 6]));
        }
        assert!(period_moduli(&rs(&[4])).is_err());
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&rs(&[2, 3, 11])).unwrap();
        assert_eq!(r.result, rs(&[2, 3, 5]));
        assert_eq!(
            r.trace,
            vec![ReductionStep {
                index: 3,
                from: 11,
                to: 5,
                modulus: 6
            }]
        );
        assert_eq!(reduce(&rs(&[2, 3, 5])).unwrap().result, rs(&[2, 3, 5]));
        assert!(reduce(&rs(&[2, 3, 5])).unwrap().trace.is_empty());
    }

    #[test]
    fn reduce_runs_to_the_fixpoint() {
        // 7 → 1 first, after which the other entries exceed their new moduli
        let r = reduce(&rs(&[2, 3, 7])).unwrap();
        assert_eq!(
            r.trace[0],
            ReductionStep {
                index: 3,
                from: 7,
                to: 1,
                modulus: 6
            }
        );
        assert_eq!(r.result, rs(&[1, 1, 1]));
        assert_eq!(
            mu_norm(&rs(&[2, 3, 7])).unwrap().value,
            mu_norm(&r.result).unwrap().value
        );
    }

    #[test]
    fn reduce_is_idempotent_and_index_preserving() {
        for a in 1..=12u64 {
            for b in a..=12 {
                for c in b..=30 {
                    let s = rs(&[a, b, c]);
                    let once = reduce(&s).unwrap().result;
                    assert_eq!(reduce(&once).unwrap().result, once);
                    for (i, ell) in period_moduli(&once).unwrap().iter().enumerate() {
                        assert!(BigUint::from(once.lambda()[i]) <= *ell);
                    }
                }
            }
        }
    }

    #[test]
    fn congruence_table_2_3() {
        let t = congruence_class_verdict(&[2, 3], &EngineConfig::default()).unwrap();
        assert_eq!(t.modulus, 6);
        assert_eq!(t.verdict(1), Some(true));
        assert_eq!(t.verdict(5), Some(false));
        for p in [7u64, 13, 19, 31, 37, 43] {
            assert_eq!(t.verdict(p), Some(true), "{p}");
        }
        for p in [11u64, 17, 23, 29, 41, 47] {
            assert_eq!(t.verdict(p), Some(false), "{p}");
        }
    }

    #[test]
    fn congruence_trivial_prefixes() {
        for prefix in [[1u64, 1], [2, 2]] {
            let t = congruence_class_verdict(&prefix, &EngineConfig::default()).unwrap();
            assert!(t.classes.iter().all(|c| c.result.as_ref().unwrap().verdict));
        }
    }

    #[test]
    fn congruence_gaps_are_explicit() {
        let cfg = EngineConfig::enumeration_only().with_max_points(20);
        let t = congruence_class_verdict(&[2, 3, 5], &cfg);
        // modulus 30 exceeds the 20-point budget
        assert!(t.unwrap_err().is_resource());
        let cfg = EngineConfig::enumeration_only().with_max_points(100);
        let t = congruence_class_verdict(&[2, 3, 5], &cfg).unwrap();
        assert_eq!(t.verdict(1), Some(false));
        assert!(t.classes.iter().any(|c| c.gap.is_some()));
        assert!(t.classes.iter().any(|c| c.result.is_some()));
    }
}
