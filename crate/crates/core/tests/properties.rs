mod common;

use common::oracle::sorted_tuples;
use rectsimplex::criteria::{hss_floor, normal_by_ewald_wessels};
use rectsimplex::normality::{is_normal, is_normal_with, is_very_ample, is_very_ample_with, mu_norm, mu_va};
use rectsimplex::{EngineConfig, RectSimplex};

fn rs(v: &[u64]) -> RectSimplex {
    RectSimplex::new(v.to_vec()).unwrap()
}

fn normal(v: &[u64]) -> bool {
    is_normal(&rs(v)).unwrap().verdict
}

fn grid() -> Vec<Vec<u64>> {
    (1..=4)
        .flat_map(|n| sorted_tuples(n, if n == 4 { 7 } else { 10 }))
        .collect()
}

fn subsequences(v: &[u64]) -> Vec<Vec<u64>> {
    (1..(1u32 << v.len()) - 1)
        .map(|m| (0..v.len()).filter(|i| m >> i & 1 == 1).map(|i| v[i]).collect())
        .collect()
}

#[test]
fn normality_passes_to_subsequences() {
    for lam in grid() {
        if normal(&lam) {
            for sub in subsequences(&lam) {
                assert!(normal(&sub), "{lam:?} ⊇ {sub:?}");
            }
        }
        let mu = mu_norm(&rs(&lam)).unwrap().value;
        for sub in subsequences(&lam) {
            assert!(mu_norm(&rs(&sub)).unwrap().value <= mu, "{lam:?} ⊇ {sub:?}");
        }
    }
}

#[test]
fn extensions_by_zero_and_one() {
    let plain = EngineConfig::enumeration_only();
    for lam in (1..=3).flat_map(|n| sorted_tuples(n, 8)) {
        let base = is_normal_with(&rs(&lam), &plain).unwrap().verdict;
        let mut zero = lam.clone();
        zero.push(0);
        let zero = RectSimplex::new_extended(zero).unwrap();
        assert_eq!(is_normal_with(&zero, &plain).unwrap().verdict, base, "{lam:?},0");
        let mut one = lam.clone();
        one.push(1);
        assert_eq!(is_normal_with(&rs(&one), &plain).unwrap().verdict, base, "{lam:?},1");
        assert!(mu_norm(&rs(&lam)).unwrap().value <= mu_norm(&rs(&one)).unwrap().value);
    }
}

#[test]
fn normal_implies_very_ample() {
    let plain = EngineConfig::enumeration_only();
    for lam in grid() {
        let s = rs(&lam);
        let va = is_very_ample_with(&s, &plain).unwrap().verdict;
        assert_eq!(va, is_very_ample(&s).unwrap().verdict, "{lam:?}");
        if normal(&lam) {
            assert!(va, "{lam:?}");
        }
        if lam.len() <= 3 {
            assert_eq!(va, normal(&lam), "{lam:?}");
        }
        assert!(mu_va(&s).unwrap().value <= mu_norm(&s).unwrap().value, "{lam:?}");
    }
}

#[test]
fn ewald_wessels_bound_holds() {
    let plain = EngineConfig::enumeration_only();
    for lam in (2..=4).flat_map(|n| sorted_tuples(n, if n == 4 { 4 } else { 8 })) {
        let s = rs(&lam);
        let r = lam.len() as u64 - 1;
        assert!(normal_by_ewald_wessels(&s, r));
        assert!(
            is_normal_with(&s.dilate(r).unwrap(), &plain).unwrap().verdict,
            "{lam:?}"
        );
        assert!(mu_norm(&s).unwrap().value <= r.max(1));
    }
}

#[test]
fn hss_bound_holds() {
    let plain = EngineConfig::enumeration_only();
    for lam in (2..=4).flat_map(|n| sorted_tuples(n, if n == 4 { 5 } else { 9 })) {
        let s = rs(&lam);
        let n = lam.len() as u64;
        let r = n.saturating_sub(hss_floor(&s).unwrap()).max(1);
        for k in r..n.saturating_sub(1).max(r + 1) {
            assert!(
                is_normal_with(&s.dilate(k).unwrap(), &plain).unwrap().verdict,
                "{lam:?} r = {k}"
            );
        }
    }
}

#[test]
fn repeated_entries_change_no_index() {
    let plain = EngineConfig::enumeration_only();
    for lam in (1..=3).flat_map(|n| sorted_tuples(n, 6)) {
        let s = rs(&lam);
        let mn = rectsimplex::normality::mu_norm_with(&s, &plain).unwrap().value;
        let mv = rectsimplex::normality::mu_va_with(&s, &plain).unwrap().value;
        for i in 0..lam.len() {
            let mut d = lam.clone();
            d.push(lam[i]);
            let t = rs(&d);
            assert_eq!(
                rectsimplex::normality::mu_norm_with(&t, &plain).unwrap().value,
                mn,
                "{d:?}"
            );
            assert_eq!(
                rectsimplex::normality::mu_va_with(&t, &plain).unwrap().value,
                mv,
                "{d:?}"
            );
        }
    }
}

#[test]
fn permutations_do_not_matter() {
    for lam in sorted_tuples(3, 12) {
        let base = normal(&lam);
        let [a, b, c] = [lam[0], lam[1], lam[2]];
        for p in [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            assert_eq!(normal(&p), base, "{p:?}");
        }
    }
}

#[test]
fn non_normal_triples_are_sequentially_non_normal() {
    for lam in sorted_tuples(3, 12) {
        if !normal(&lam) {
            let r = rectsimplex::normality::is_sequentially_non_normal(&rs(&lam)).unwrap();
            assert!(r.verdict, "{lam:?}");
        }
    }
}
