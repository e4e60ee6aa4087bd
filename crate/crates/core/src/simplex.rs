//! Rectangular simplices Δ(λ) = conv{0, λ_1 e_1, ..., λ_n e_n} and their
//! lattice points.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory;
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RectSimplex {
    lambda: Vec<u64>,
}

impl RectSimplex {
    /// A simplex with all entries at least 1.
    pub fn new(lambda: impl Into<Vec<u64>>) -> Result<Self> {
        let lambda = lambda.into();
        if lambda.is_empty() {
            return Err(Error::argument("a rectangular simplex needs at least one entry"));
        }
        if lambda.contains(&0) {
            return Err(Error::argument(
                "entries must be positive (use new_extended for extensions by 0)",
            ));
        }
        Ok(RectSimplex { lambda })
    }

    /// Like [`RectSimplex::new`] but accepts entries equal to 0, which stand
    /// for a degenerate extension Δ(λ, 0). Geometric operations act on the
    /// [`support`](Self::support).
    pub fn new_extended(lambda: impl Into<Vec<u64>>) -> Result<Self> {
        let lambda = lambda.into();
        if lambda.is_empty() {
            return Err(Error::argument("a rectangular simplex needs at least one entry"));
        }
        Ok(RectSimplex { lambda })
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_extended(&self) -> bool {
        self.lambda.contains(&0)
    }

    /// The nonzero entries, in order. `None` when every entry is 0.
    pub fn support(&self) -> Option<RectSimplex> {
        let lambda: Vec<u64> = self.lambda.iter().copied().filter(|&x| x != 0).collect();
        (!lambda.is_empty()).then_some(RectSimplex { lambda })
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        if self.is_extended() {
            return Err(Error::argument(format!(
                "{self} has zero entries; this operation needs all entries positive"
            )));
        }
        Ok(())
    }

    /// Δ(rλ) = rΔ(λ).
    pub fn dilate(&self, r: u64) -> Result<RectSimplex> {
        if r == 0 {
            return Err(Error::argument("dilation factor must be positive"));
        }
        let lambda = self
            .lambda
            .iter()
            .map(|&x| x.checked_mul(r))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::argument(format!("{r}·{self} overflows 64-bit entries")))?;
        Ok(RectSimplex { lambda })
    }

    pub fn lcm(&self) -> Result<BigUint> {
        self.require_positive()?;
        ntheory::lcm_many(&self.lambda)
    }

    pub fn gcd(&self) -> u64 {
        ntheory::gcd_many(&self.lambda).expect("non-empty")
    }

    /// Σ 1/λ_i, exactly.
    pub fn reciprocal_sum(&self) -> Result<Ratio<BigUint>> {
        self.require_positive()?;
        Ok(self.lambda.iter().fold(Ratio::zero(), |acc, &x| {
            acc + Ratio::new(BigUint::one(), BigUint::from(x))
        }))
    }

    /// Entries with duplicates removed, first occurrence kept.
    pub fn dedupe_repeats(&self) -> RectSimplex {
        let mut seen = HashSet::new();
        let lambda = self.lambda.iter().copied().filter(|x| seen.insert(*x)).collect();
        RectSimplex { lambda }
    }

    /// Number of lattice points on an edge. Vertices are indexed 0 (origin)
    /// and 1..=n (λ_i e_i).
    pub fn edge_lattice_count(&self, i: usize, j: usize) -> Result<u64> {
        self.require_positive()?;
        let n = self.n();
        if i > n || j > n || i == j {
            return Err(Error::argument(format!(
                "({i}, {j}) is not an edge of an {n}-simplex (vertices 0..={n}, distinct)"
            )));
        }
        Ok(match (i.min(j), i.max(j)) {
            (0, l) => self.lambda[l - 1] + 1,
            (a, b) => self.lambda[a - 1].gcd(&self.lambda[b - 1]) + 1,
        })
    }

    /// Σ 1/λ_i < 1, i.e. (1, ..., 1) is an interior lattice point.
    pub fn has_interior_point(&self) -> Result<bool> {
        Ok(self.reciprocal_sum()? < Ratio::one())
    }

    /// Lower bound on the number of lattice points, ∏λ_i / n!. Every real
    /// point of Δ lies in the unit cube of its floor, and the floor is a
    /// lattice point of Δ, so the volume never exceeds the count.
    pub fn point_estimate(&self) -> f64 {
        let mut est = 1.0f64;
        for (i, &x) in self.lambda.iter().enumerate() {
            est = est * x as f64 / (i + 1) as f64;
        }
        est
    }

    pub(crate) fn check_point_budget(&self, what: &str, max_points: u64) -> Result<()> {
        let est = self.point_estimate();
        if est > max_points as f64 {
            return Err(Error::resource(
                format!("{what} of {self}"),
                format!("{est:.3e} lattice points"),
                max_points,
            ));
        }
        Ok(())
    }

    /// Facet normal `w` and right-hand side `L` of the hyperplane
    /// w·x ≤ L, with L = lcm(λ) and w_i = L/λ_i.
    pub(crate) fn hyperplane(&self) -> Result<Hyperplane> {
        self.require_positive()?;
        let l = ntheory::lcm_u128(&self.lambda)
            .ok_or_else(|| Error::resource(format!("lcm of {self}"), "more than 128 bits", u64::MAX))?;
        let w = self.lambda.iter().map(|&x| l / x as u128).collect();
        Ok(Hyperplane { w, l })
    }

    pub fn lattice_points(&self, max_points: u64) -> Result<LatticePointSet> {
        self.lattice_points_with(max_points, Exec::default())
    }

    /// All lattice points in lexicographic order.
    pub fn lattice_points_with(&self, max_points: u64, exec: Exec) -> Result<LatticePointSet> {
        self.require_positive()?;
        self.check_point_budget("lattice points", max_points)?;
        let h = self.hyperplane()?;
        let n = self.n();
        let first = (self.lambda[0] + 1) as usize;
        let chunks = par::map_range(exec, first, |x0| {
            let mut out = Vec::new();
            let mut p = vec![0u32; n];
            p[0] = x0 as u32;
            enumerate_rec(&h, 1, h.l - h.w[0] * x0 as u128, &mut p, &mut |q| {
                out.extend_from_slice(q)
            });
            out
        });
        let coords: Vec<u32> = chunks.concat();
        if (coords.len() / n) as u64 > max_points {
            return Err(Error::resource(
                format!("lattice points of {self}"),
                coords.len() / n,
                max_points,
            ));
        }
        Ok(LatticePointSet::from_sorted_unique(n, coords))
    }
}

impl fmt::Display for RectSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ(")?;
        for (i, x) in self.lambda.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Hyperplane {
    pub w: Vec<u128>,
    pub l: u128,
}

/// Visits every lattice point p ≥ 0 with Σ_{j ≥ i} w_j p_j ≤ rem, holding
/// p[..i] fixed, in lexicographic order.
pub(crate) fn enumerate_rec(h: &Hyperplane, i: usize, rem: u128, p: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if i == p.len() {
        visit(p);
        return;
    }
    let top = rem / h.w[i];
    for x in 0..=top {
        p[i] = x as u32;
        enumerate_rec(h, i + 1, rem - h.w[i] * x, p, visit);
    }
    p[i] = 0;
}

/// A finite set of lattice points of fixed dimension, stored as a
/// lexicographically sorted flat coordinate array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePointSet {
    dim: usize,
    coords: Vec<u32>,
    keys: Option<PackedKeys>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PackedKeys {
    max: Vec<u32>,
    radix: Vec<u128>,
    set: HashSet<u128>,
}

impl PackedKeys {
    fn build(dim: usize, coords: &[u32]) -> Option<Self> {
        let mut max = vec![0u32; dim];
        for p in coords.chunks_exact(dim) {
            for (m, &x) in max.iter_mut().zip(p) {
                *m = (*m).max(x);
            }
        }
        let mut radix = Vec::with_capacity(dim);
        let mut acc: u128 = 1;
        for &m in &max {
            radix.push(acc);
            acc = acc.checked_mul(m as u128 + 1)?;
        }
        let mut keys = PackedKeys {
            max,
            radix,
            set: HashSet::with_capacity(coords.len() / dim.max(1)),
        };
        let packed: Vec<u128> = coords.chunks_exact(dim).map(|p| keys.pack(p)).collect();
        keys.set.extend(packed);
        Some(keys)
    }

    fn pack(&self, p: &[u32]) -> u128 {
        p.iter().zip(&self.radix).map(|(&x, &r)| x as u128 * r).sum()
    }
}

impl LatticePointSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::argument("dimension must be positive"));
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::argument(format!(
                    "point of length {} in a {dim}-dimensional set",
                    p.len()
                )));
            }
            rows.push(p);
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Self::from_sorted_unique(dim, rows.concat()))
    }

    fn from_sorted_unique(dim: usize, coords: Vec<u32>) -> Self {
        let keys = PackedKeys::build(dim, &coords);
        LatticePointSet { dim, coords, keys }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, idx: usize) -> &[u32] {
        &self.coords[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        match &self.keys {
            Some(keys) => {
                // the packing is only injective inside the recorded box
                p.iter().zip(&keys.max).all(|(x, m)| x <= m) && keys.set.contains(&keys.pack(p))
            }
            None => self.binary_search(p),
        }
    }

    fn binary_search(&self, p: &[u32]) -> bool {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(p) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// {a + b : a ∈ self, b ∈ other}.
    pub fn minkowski_sum(&self, other: &LatticePointSet, max_points: u64) -> Result<LatticePointSet> {
        if self.dim != other.dim {
            return Err(Error::argument("Minkowski sum of sets of different dimension"));
        }
        let pairs = self.len() as u128 * other.len() as u128;
        if pairs > max_points as u128 * 64 {
            return Err(Error::resource("Minkowski sum", format!("{pairs} pairs"), max_points));
        }
        let mut rows: HashSet<Vec<u32>> = HashSet::new();
        for a in self.iter() {
            for b in other.iter() {
                rows.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
                if rows.len() as u64 > max_points {
                    return Err(Error::resource(
                        "Minkowski sum",
                        format!("more than {max_points} points"),
                        max_points,
                    ));
                }
            }
        }
        LatticePointSet::new(self.dim, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_MAX_POINTS;
    use proptest::prelude::*;

    fn rs(v: &[u64]) -> RectSimplex {
        RectSimplex::new(v.to_vec()).unwrap()
    }

    fn brute_points(lambda: &[u64]) -> Vec<Vec<u32>> {
        // Σ x_i/λ_i ≤ 1 via exact rationals, scanning the bounding box.
        let n = lambda.len();
        let mut out = Vec::new();
        let mut x = vec![0u32; n];
        loop {
            let s = x
                .iter()
                .zip(lambda)
                .fold(Ratio::<u64>::zero(), |acc, (&xi, &li)| acc + Ratio::new(xi as u64, li));
            if s <= Ratio::one() {
                out.push(x.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if (x[i] as u64) < lambda[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = 0;
            }
        }
    }

    #[test]
    fn constructor_rules() {
        assert!(RectSimplex::new(vec![]).is_err());
        assert!(RectSimplex::new(vec![2, 0]).is_err());
        let ext = RectSimplex::new_extended(vec![2, 0, 3]).unwrap();
        assert!(ext.is_extended());
        assert_eq!(ext.support().unwrap(), rs(&[2, 3]));
        assert!(RectSimplex::new_extended(vec![0, 0]).unwrap().support().is_none());
    }

    #[test]
    fn lattice_point_examples() {
        let unit = rs(&[1, 1]).lattice_points(DEFAULT_MAX_POINTS).unwrap();
        let got: Vec<Vec<u32>> = unit.iter().map(|p| p.to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);

        let s = rs(&[2, 3, 5]).lattice_points(DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(s.len(), 18);
        assert!(s.contains(&[0, 1, 3]));
        assert!(!s.contains(&[1, 1, 1]));

        let seg = rs(&[2]).lattice_points(DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(seg.iter().map(|p| p[0]).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn lattice_points_match_rational_brute_force() {
        for lambda in [
            vec![2, 3, 5],
            vec![4, 6, 10],
            vec![3, 7, 11],
            vec![2, 2, 3, 4],
            vec![6, 10, 15],
            vec![1, 5],
        ] {
            let got: Vec<Vec<u32>> = rs(&lambda)
                .lattice_points_with(DEFAULT_MAX_POINTS, Exec::Sequential)
                .unwrap()
                .iter()
                .map(|p| p.to_vec())
                .collect();
            assert_eq!(got, brute_points(&lambda), "λ = {lambda:?}");
            let par: Vec<Vec<u32>> = rs(&lambda)
                .lattice_points_with(DEFAULT_MAX_POINTS, Exec::Parallel)
                .unwrap()
                .iter()
                .map(|p| p.to_vec())
                .collect();
            assert_eq!(got, par);
        }
    }

    #[test]
    fn lattice_point_budget() {
        let err = rs(&[1000, 1000, 1000]).lattice_points(1000).unwrap_err();
        assert!(err.is_resource());
        match err {
            Error::Resource { estimate, .. } => assert!(estimate.contains("e8"), "{estimate}"),
            _ => unreachable!(),
        }
    }

    #[test]
    fn dilate_examples() {
        assert_eq!(rs(&[2, 3, 5]).dilate(2).unwrap(), rs(&[4, 6, 10]));
        assert_eq!(rs(&[2, 3, 5]).dilate(1).unwrap(), rs(&[2, 3, 5]));
        assert_eq!(rs(&[1]).dilate(7).unwrap(), rs(&[7]));
        assert!(rs(&[1]).dilate(0).is_err());
        assert!(rs(&[u64::MAX]).dilate(2).is_err());
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(rs(&[6, 10, 15]).edge_lattice_count(1, 2).unwrap(), 3);
        assert_eq!(rs(&[2, 3, 5]).edge_lattice_count(1, 2).unwrap(), 2);
        assert_eq!(rs(&[4, 4]).edge_lattice_count(0, 1).unwrap(), 5);
        assert_eq!(rs(&[4, 4]).edge_lattice_count(2, 0).unwrap(), 5);
        assert!(rs(&[4, 4]).edge_lattice_count(3, 0).is_err());
        assert!(rs(&[4, 4]).edge_lattice_count(1, 1).is_err());
    }

    #[test]
    fn edge_count_matches_segment_enumeration() {
        // Points t·(λ_j e_j - λ_i e_i) + λ_i e_i on the segment, counted directly.
        for a in 1..=30u64 {
            for b in 1..=30u64 {
                let s = rs(&[a, b]);
                let pts = s.lattice_points(DEFAULT_MAX_POINTS).unwrap();
                let on_edge = pts
                    .iter()
                    .filter(|p| p[0] as u64 * b + p[1] as u64 * a == a * b)
                    .count() as u64;
                assert_eq!(s.edge_lattice_count(1, 2).unwrap(), on_edge, "({a},{b})");
            }
        }
    }

    #[test]
    fn interior_point_examples() {
        assert!(!rs(&[2, 3, 5]).has_interior_point().unwrap());
        assert!(rs(&[2, 3, 7]).has_interior_point().unwrap());
        assert!(!rs(&[1, 1, 1]).has_interior_point().unwrap());
    }

    #[test]
    fn interior_point_matches_strict_inequality() {
        for a in 1..=12u64 {
            for b in a..=12 {
                for c in b..=12 {
                    let s = rs(&[a, b, c]);
                    let h = s.hyperplane().unwrap();
                    let strict = h.w.iter().sum::<u128>() < h.l;
                    assert_eq!(s.has_interior_point().unwrap(), strict);
                }
            }
        }
    }

    #[test]
    fn dedupe_examples() {
        assert_eq!(rs(&[2, 3, 3, 5]).dedupe_repeats(), rs(&[2, 3, 5]));
        assert_eq!(rs(&[4]).dedupe_repeats(), rs(&[4]));
        assert_eq!(rs(&[7, 7, 7]).dedupe_repeats(), rs(&[7]));
        assert_eq!(rs(&[5, 2, 5, 2]).dedupe_repeats(), rs(&[5, 2]));
    }

    #[test]
    fn membership_without_packing_falls_back() {
        let big = u32::MAX;
        let set = LatticePointSet::new(5, vec![vec![big; 5], vec![0, 0, 0, 0, 1], vec![big, 0, big, 0, big]]).unwrap();
        assert!(set.keys.is_none());
        assert!(set.contains(&[big, 0, big, 0, big]));
        assert!(!set.contains(&[big, 0, big, 0, 0]));
    }

    #[test]
    fn membership_outside_recorded_box() {
        let set = LatticePointSet::new(2, vec![vec![1, 1], vec![0, 2]]).unwrap();
        assert!(set.contains(&[0, 2]));
        assert!(!set.contains(&[3, 0]));
        assert!(!set.contains(&[0, 3]));
        assert!(!set.contains(&[1]));
    }

    proptest! {
        #[test]
        fn dilation_contains_minkowski_power(
            lambda in proptest::collection::vec(1u64..6, 1..4),
            r in 2u64..4,
        ) {
            let s = rs(&lambda);
            let base = s.lattice_points(DEFAULT_MAX_POINTS).unwrap();
            let mut sum = base.clone();
            for _ in 1..r {
                sum = sum.minkowski_sum(&base, DEFAULT_MAX_POINTS).unwrap();
            }
            let dil = s.dilate(r).unwrap().lattice_points(DEFAULT_MAX_POINTS).unwrap();
            for p in sum.iter() {
                prop_assert!(dil.contains(p));
            }
        }
    }
}
