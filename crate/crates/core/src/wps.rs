//! Weighted projective spaces ℙ(a₀, ..., aₙ) with a unit weight. With a₀ = 1
//! the polytope of O(l), l = lcm(a), is Δ(l/a₁, ..., l/aₙ), so the very
//! ample and normality indices of ℙ are those of that simplex.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::certificate::CertifiedResult;
use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::normality::{self, IndexReport};
use crate::ntheory;
use crate::simplex::RectSimplex;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct WeightVector {
    weights: Vec<u64>,
}

impl WeightVector {
    pub fn new(weights: impl Into<Vec<u64>>) -> Result<Self> {
        let weights = weights.into();
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::argument("weights must be a non-empty list of positive integers"));
        }
        Ok(WeightVector { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn l(&self) -> BigUint {
        ntheory::lcm_many(&self.weights).expect("positive weights")
    }

    /// l_i = l / a_i.
    pub fn l_i(&self) -> Vec<BigUint> {
        let l = self.l();
        self.weights.iter().map(|&a| &l / a).collect()
    }

    fn unit_index(&self) -> Result<usize> {
        self.weights.iter().position(|&a| a == 1).ok_or_else(|| {
            Error::Unsupported(format!(
                "ℙ{:?} has no weight equal to 1; only that family corresponds to rectangular simplices",
                self.weights
            ))
        })
    }

    /// First occurrences only.
    pub fn dedupe(&self) -> WeightVector {
        let mut seen = Vec::new();
        for &a in &self.weights {
            if !seen.contains(&a) {
                seen.push(a);
            }
        }
        WeightVector { weights: seen }
    }
}

/// Every subset obtained by dropping one weight has gcd 1.
pub fn well_formed(w: &WeightVector) -> bool {
    let a = w.weights();
    (0..a.len()).all(|i| {
        let g = a
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(0u64, |g, (_, &x)| num_integer::gcd(g, x));
        g <= 1
    })
}

/// Rotates a unit weight to the front, scales the remaining weights to
/// gcd 1 (which does not change the simplex) and returns Δ(l/a₁, ..., l/aₙ).
pub fn to_rect_simplex(w: &WeightVector) -> Result<RectSimplex> {
    let u = w.unit_index()?;
    let mut rest: Vec<u64> = w
        .weights()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != u)
        .map(|(_, &a)| a)
        .collect();
    if rest.is_empty() {
        return Err(Error::argument("ℙ(1) is a point; there is no simplex to attach"));
    }
    let g = ntheory::gcd_many(&rest)?;
    for a in &mut rest {
        *a /= g;
    }
    let l = ntheory::lcm_many(&rest)?;
    let lam = rest
        .iter()
        .map(|&a| {
            (&l / a)
                .to_u64()
                .ok_or_else(|| Error::argument(format!("l/{a} exceeds 64 bits")))
        })
        .collect::<Result<Vec<_>>>()?;
    RectSimplex::new(lam)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WpsIndices {
    pub weights: WeightVector,
    pub simplex: RectSimplex,
    pub mu_va: IndexReport,
    pub mu_norm: IndexReport,
}

pub fn mu_indices_wps(w: &WeightVector, cfg: &EngineConfig) -> Result<WpsIndices> {
    w.unit_index()?;
    if !well_formed(w) {
        return Err(Error::argument(format!("ℙ{:?} is not well-formed", w.weights())));
    }
    // repeated weights become repeated entries, which may be dropped
    let simplex = to_rect_simplex(w)?.dedupe_repeats();
    let mu_va = normality::mu_va_with(&simplex, cfg)?;
    let mu_norm = normality::mu_norm_with(&simplex, cfg)?;
    let bound = (simplex.n() as u64).saturating_sub(1).max(1);
    if mu_va.value > mu_norm.value || mu_norm.value > bound {
        return Err(Error::Invariant(format!(
            "{simplex}: μ_va = {}, μ_norm = {}, bound {bound}",
            mu_va.value, mu_norm.value
        )));
    }
    Ok(WpsIndices {
        weights: w.clone(),
        simplex,
        mu_va,
        mu_norm,
    })
}

/// Whether O(k·l) is very ample on ℙ(w).
pub fn line_bundle_very_ample(w: &WeightVector, k: u64, cfg: &EngineConfig) -> Result<CertifiedResult> {
    if k == 0 {
        return Err(Error::argument("k must be positive"));
    }
    let s = to_rect_simplex(w)?.dilate(k)?;
    normality::is_very_ample_with(&s, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wv(v: &[u64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    fn rs(v: &[u64]) -> RectSimplex {
        RectSimplex::new(v.to_vec()).unwrap()
    }

    fn indices(v: &[u64]) -> (u64, u64) {
        let r = mu_indices_wps(&wv(v), &EngineConfig::default()).unwrap();
        (r.mu_va.value, r.mu_norm.value)
    }

    #[test]
    fn well_formed_examples() {
        assert!(well_formed(&wv(&[1, 6, 10, 15])));
        assert!(!well_formed(&wv(&[2, 2, 4])));
        assert!(well_formed(&wv(&[1, 1, 1, 1])));
        assert!(!well_formed(&wv(&[1, 2, 4, 6])));
        assert!(WeightVector::new(vec![1, 0]).is_err());
    }

    #[test]
    fn translation_examples() {
        assert_eq!(to_rect_simplex(&wv(&[1, 6, 10, 15])).unwrap(), rs(&[5, 3, 2]));
        assert_eq!(wv(&[1, 6, 10, 15]).l(), BigUint::from(30u32));
        assert_eq!(to_rect_simplex(&wv(&[1, 1, 1])).unwrap(), rs(&[1, 1]));
        for p in [5u64, 7, 11, 13] {
            assert_eq!(to_rect_simplex(&wv(&[1, 6, 2 * p, 3 * p])).unwrap(), rs(&[p, 3, 2]));
            assert_eq!(wv(&[1, 6, 2 * p, 3 * p]).l(), BigUint::from(6 * p));
        }
        // the unit weight need not come first
        assert_eq!(to_rect_simplex(&wv(&[6, 1, 10, 15])).unwrap(), rs(&[5, 3, 2]));
        // scaling the non-unit weights changes nothing
        assert_eq!(to_rect_simplex(&wv(&[1, 12, 20, 30])).unwrap(), rs(&[5, 3, 2]));
    }

    #[test]
    fn no_unit_weight_is_unsupported() {
        let e = to_rect_simplex(&wv(&[2, 3, 5])).unwrap_err();
        assert!(matches!(e, Error::Unsupported(_)));
        assert!(matches!(
            mu_indices_wps(&wv(&[2, 3, 5]), &EngineConfig::default()),
            Err(Error::Unsupported(_))
        ));
        assert!(mu_indices_wps(&wv(&[1, 2, 4, 6]), &EngineConfig::default()).is_err());
    }

    #[test]
    fn index_examples() {
        assert_eq!(indices(&[1, 6, 10, 15]), (2, 2));
        assert_eq!(indices(&[1, 1, 1, 1, 1]), (1, 1));
        assert_eq!(indices(&[1, 2, 3, 3, 2]), (1, 1));
        assert_eq!(indices(&[1, 1, 6, 6, 10]), (1, 1));
    }

    #[test]
    fn line_bundle_examples() {
        let cfg = EngineConfig::default();
        let at = |p: u64| {
            line_bundle_very_ample(&wv(&[1, 6, 2 * p, 3 * p]), 1, &cfg)
                .unwrap()
                .verdict
        };
        assert!(at(7));
        assert!(!at(5));
        for p in [11u64, 13, 17, 19, 23, 29, 31] {
            assert_eq!(at(p), p % 3 == 1, "{p}");
        }
        assert!(line_bundle_very_ample(&wv(&[1, 6, 10, 15]), 2, &cfg).unwrap().verdict);
        assert!(line_bundle_very_ample(&wv(&[1, 6, 10, 15]), 0, &cfg).is_err());
    }

    fn coprime_weights() -> impl Strategy<Value = Vec<u64>> {
        prop::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13, 4, 8, 9, 25], 2..=3).prop_filter(
            "pairwise coprime",
            |v| {
                v.iter()
                    .enumerate()
                    .all(|(i, &a)| v[i + 1..].iter().all(|&b| num_integer::gcd(a, b) == 1))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pairwise_coprime_distinct_weights_are_very_ample(rest in coprime_weights()) {
            let mut w = vec![1];
            w.extend(rest);
            prop_assert_eq!(indices(&w).0, 1);
        }

        #[test]
        fn duplicating_a_weight_changes_nothing(rest in prop::collection::vec(1u64..=6, 2..=3), pick in any::<prop::sample::Index>()) {
            let mut w = vec![1];
            w.extend(rest);
            let v = wv(&w);
            prop_assume!(well_formed(&v));
            let mut dup = w.clone();
            dup.push(w[pick.index(w.len())]);
            prop_assert_eq!(indices(&w), indices(&dup));
        }

        #[test]
        fn repeated_weights_force_small_mu_va(rest in prop::collection::vec(1u64..=7, 3..=4), pick in any::<prop::sample::Index>()) {
            // n + 1 weights with a repeat: μ_va < n − 1
            let mut w = vec![1];
            w.extend(rest);
            let i = pick.index(w.len() - 1) + 1;
            let j = if i == 1 { 2 } else { 1 };
            w[j] = w[i];
            prop_assume!(well_formed(&wv(&w)));
            let n = w.len() as u64 - 1;
            prop_assert!(indices(&w).0 < n - 1, "{:?}", w);
        }
    }
}
