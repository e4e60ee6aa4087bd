//! Prime-weighted hypergraphs on {1, ..., n} and their correspondence with
//! rectangular simplices: every prime power p^a dividing some λ_j becomes the
//! edge {j : p^a | λ_j} with weight p.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory;
use crate::simplex::RectSimplex;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    /// Sorted, 1-based.
    pub vertices: Vec<usize>,
    pub prime: u64,
}

/// A valid hypergraph: non-empty edges inside {1, ..., n}, prime weights, and for
/// each prime the edges of that weight form a chain under inclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct WeightedHypergraph {
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Deserialize)]
struct RawHypergraph {
    n: usize,
    edges: Vec<Edge>,
}

impl TryFrom<RawHypergraph> for WeightedHypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        WeightedHypergraph::new(raw.n, raw.edges)
    }
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

impl WeightedHypergraph {
    /// Validates; vertex lists may arrive in any order but not repeated.
    pub fn new(n: usize, mut edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("the vertex set must be non-empty".into()));
        }
        for e in &mut edges {
            e.vertices.sort_unstable();
            if e.vertices.is_empty() {
                return Err(Error::Validation(format!("edge of weight {} is empty", e.prime)));
            }
            if e.vertices.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("edge {:?} repeats a vertex", e.vertices)));
            }
            if e.vertices[0] == 0 || *e.vertices.last().unwrap() > n {
                return Err(Error::Validation(format!(
                    "edge {:?} leaves the vertex set 1..={n}",
                    e.vertices
                )));
            }
            if !ntheory::is_prime_u64(e.prime) {
                return Err(Error::Validation(format!("edge weight {} is not prime", e.prime)));
            }
        }
        let mut by_prime: BTreeMap<u64, Vec<&Edge>> = BTreeMap::new();
        for e in &edges {
            by_prime.entry(e.prime).or_default().push(e);
        }
        for (p, group) in &by_prime {
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    if !subset(&a.vertices, &b.vertices) && !subset(&b.vertices, &a.vertices) {
                        return Err(Error::Validation(format!(
                            "edges of weight {p} are not a chain: {:?} and {:?}",
                            a.vertices, b.vertices
                        )));
                    }
                }
            }
        }
        Ok(WeightedHypergraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Product of all edge weights.
    pub fn total_weight(&self) -> BigUint {
        self.edges.iter().map(|e| BigUint::from(e.prime)).product()
    }
}

pub fn encode(s: &RectSimplex) -> Result<WeightedHypergraph> {
    s.require_positive()?;
    let mut valuations: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    let n = s.n();
    for (j, &x) in s.lambda().iter().enumerate() {
        for (p, a) in ntheory::factorize(x)? {
            valuations.entry(p).or_insert_with(|| vec![0; n])[j] = a;
        }
    }
    let mut edges = Vec::new();
    for (p, v) in valuations {
        let top = *v.iter().max().unwrap();
        for a in 1..=top {
            let vertices = (0..n).filter(|&j| v[j] >= a).map(|j| j + 1).collect();
            edges.push(Edge { vertices, prime: p });
        }
    }
    WeightedHypergraph::new(n, edges)
}

pub fn decode(h: &WeightedHypergraph) -> Result<RectSimplex> {
    let mut lam = vec![1u64; h.n];
    for e in &h.edges {
        for &v in &e.vertices {
            lam[v - 1] = lam[v - 1]
                .checked_mul(e.prime)
                .ok_or_else(|| Error::argument(format!("entry {v} overflows 64 bits")))?;
        }
    }
    RectSimplex::new(lam)
}

/// Edges sorted by (prime, descending size, vertex list). Within one prime
/// the chain makes size order the exponent order, so two hypergraphs are
/// equivalent exactly when their canonical forms are equal.
pub fn canonicalize(h: &WeightedHypergraph) -> WeightedHypergraph {
    let mut edges = h.edges.clone();
    edges.sort_by(|a, b| {
        (a.prime, Reverse(a.vertices.len()), &a.vertices).cmp(&(b.prime, Reverse(b.vertices.len()), &b.vertices))
    });
    WeightedHypergraph { n: h.n, edges }
}

/// (gcd, lcm) of λ_J from the hypergraph alone: products over edges
/// containing J and edges meeting J.
pub fn subset_gcd_lcm(h: &WeightedHypergraph, j: &[usize]) -> Result<(BigUint, BigUint)> {
    if j.is_empty() || j.iter().any(|&v| v == 0 || v > h.n) {
        return Err(Error::argument(format!(
            "{j:?} is not a non-empty subset of 1..={}",
            h.n
        )));
    }
    let mut g = BigUint::one();
    let mut l = BigUint::one();
    for e in &h.edges {
        let has = |v: &usize| e.vertices.binary_search(v).is_ok();
        if j.iter().all(has) {
            g *= e.prime;
        }
        if j.iter().any(has) {
            l *= e.prime;
        }
    }
    Ok((g, l))
}

/// What a structural predicate allows one to conclude. Sufficient
/// conditions only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "conclusion", rename_all = "snake_case")]
pub enum Conclusion {
    Normal,
    VeryAmple,
    NormalIffVeryAmple,
    Lpe {
        k: u64,
    },
    SetwiseCoprime,
    PairwiseCoprime,
    /// Informational; koszulness is not checked anywhere else.
    Koszul,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicate {
    pub name: &'static str,
    pub holds: bool,
    pub licenses: Vec<Conclusion>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub predicates: Vec<Predicate>,
}

impl StructuralReport {
    pub fn get(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn licenses(&self, c: Conclusion) -> bool {
        self.predicates.iter().any(|p| p.licenses.contains(&c))
    }
}

/// 2^c ≥ x, without floating point.
fn pow2_at_least(c: usize, x: u64) -> bool {
    c >= 64 || (1u128 << c) >= x as u128
}

fn pred(name: &'static str, holds: bool, licenses: Vec<Conclusion>, detail: String) -> Predicate {
    Predicate {
        name,
        holds,
        licenses,
        detail,
    }
}

/// Predicates that only look at the edge structure, never the weights.
pub fn structural_report(h: &WeightedHypergraph) -> StructuralReport {
    use Conclusion::*;
    let n = h.n;
    let nn = n as u64;
    let edges_at = |v: usize| -> Vec<usize> {
        (0..h.edges.len())
            .filter(|&i| h.edges[i].vertices.binary_search(&v).is_ok())
            .collect()
    };
    let incidence: Vec<Vec<usize>> = (1..=n).map(edges_at).collect();
    let mut out = Vec::new();

    out.push(pred(
        "at_most_two_vertices",
        n <= 2,
        if n <= 2 { vec![Normal] } else { vec![] },
        format!("{n} vertices"),
    ));
    out.push(pred(
        "at_most_three_vertices",
        n <= 3,
        if n <= 3 { vec![NormalIffVeryAmple] } else { vec![] },
        format!("{n} vertices"),
    ));

    // λ_i | λ_j iff every edge at i is also at j
    let divides = |i: usize, j: usize| subset(&incidence[i - 1], &incidence[j - 1]);
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .filter(|&(i, j)| divides(i, j))
        .collect();
    let mut lic = Vec::new();
    if n == 3 && !pairs.is_empty() {
        lic.push(Normal);
    }
    if n >= 3 && divides(n - 2, n) && (1..=n - 2).all(|i| divides(i, i + 1)) {
        lic.extend([Normal, Koszul]);
    }
    lic.dedup();
    out.push(pred(
        "divisibility",
        !pairs.is_empty(),
        lic,
        format!("pairs (i, j) with λ_i | λ_j: {pairs:?}"),
    ));

    let covering = h.edges.iter().filter(|e| e.vertices.len() == n).count();
    out.push(pred(
        "setwise_coprime",
        covering == 0,
        if covering == 0 { vec![SetwiseCoprime] } else { vec![] },
        format!("{covering} edges cover every vertex"),
    ));

    let one = h.edges.iter().all(|e| e.vertices.len() == 1);
    let full = h.edges.iter().all(|e| e.vertices.len() == n);
    let mut lic = Vec::new();
    if one {
        lic.push(PairwiseCoprime);
    }
    if full {
        lic.push(Normal);
    }
    out.push(pred(
        "uniform",
        one || full,
        lic,
        format!("1-uniform: {one}, {n}-uniform: {full}"),
    ));

    let mut lic = Vec::new();
    if pow2_at_least(covering, nn.saturating_sub(1)) {
        lic.push(Normal);
    }
    if pow2_at_least(covering, nn) {
        lic.push(Koszul);
    }
    out.push(pred(
        "covering_edges",
        !lic.is_empty(),
        lic,
        format!(
            "{covering} covering edges against log2({}) and log2({n})",
            nn.saturating_sub(1)
        ),
    ));

    let shared = |v: usize, w: usize| -> usize {
        incidence[v - 1]
            .iter()
            .filter(|i| incidence[w - 1].binary_search(i).is_ok())
            .count()
    };
    // (v, v) stands for an isolated vertex, which a lone vertex of weight 1 would be
    let missing: Vec<(usize, usize)> = (1..=n)
        .flat_map(|v| (v..=n).map(move |w| (v, w)))
        .filter(|&(v, w)| shared(v, w) == 0)
        .collect();
    out.push(pred(
        "complete_2_section",
        missing.is_empty(),
        if missing.is_empty() { vec![Lpe { k: 3 }] } else { vec![] },
        format!("non-adjacent pairs: {missing:?}"),
    ));

    // min over V², including v = w
    let m = (1..=n)
        .flat_map(|v| (v..=n).map(move |w| (v, w)))
        .map(|(v, w)| shared(v, w))
        .min()
        .unwrap_or(0);
    // largest k with 2^m ≥ k − 1
    let k = if m >= 63 { u64::MAX } else { (1u64 << m) + 1 };
    let mut lic = vec![Lpe { k }];
    if pow2_at_least(m, nn.saturating_sub(1)) {
        lic.push(VeryAmple);
    }
    if pow2_at_least(m, (4 * nn * (nn + 1)).saturating_sub(1)) {
        lic.push(Normal);
    }
    out.push(pred(
        "min_pair_edges",
        true,
        lic,
        format!("every pair shares at least {m} edges"),
    ));

    let mut support: Vec<usize> = h.edges.iter().flat_map(|e| e.vertices.iter().copied()).collect();
    support.sort_unstable();
    support.dedup();
    let mut lic = Vec::new();
    if support.len() <= 2 {
        lic.push(Normal);
    }
    if support.len() <= 3 {
        lic.push(NormalIffVeryAmple);
    }
    out.push(pred(
        "support",
        support.len() <= 3,
        lic,
        format!("entries other than 1 sit at {support:?}"),
    ));

    StructuralReport { predicates: out }
}
