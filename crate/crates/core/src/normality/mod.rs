//! Exact decision procedures for normality (the integer decomposition
//! property) and very ampleness of Δ(λ), and the indices built on them.
//!
//! Normality is decided height by height for k = 2, ..., n − 1. Once every
//! height below k is known to decompose, the points of height k − 1 reached
//! by sums are all of (k−1)Δ, so p ∈ kΔ decomposes iff some lattice point
//! 0 ≤ x ≤ p of Δ leaves p − x inside (k−1)Δ. That is a bounded knapsack
//! question on the facet normal w:
//!
//! ```text
//!     w·p − (k−1)L ≤ w·x ≤ L,   0 ≤ x ≤ p.
//! ```

mod very_ample;

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::Serialize;

use crate::certificate::{Certificate, CertifiedResult, Criterion, Exhaustion};
use crate::config::EngineConfig;
use crate::criteria;
use crate::error::{Error, Result};
use crate::par;
use crate::simplex::{Hyperplane, LatticePointSet, RectSimplex};

pub use very_ample::{is_very_ample, is_very_ample_with, vertex_cone, VertexCone};

/// One IDP step: every p ∈ kΔ is q + x with q ∈ `reached`, x ∈ Δ ∩ ℤⁿ.
/// The witness on failure is the lexicographically first such p.
pub fn is_idp_step(s: &RectSimplex, k: u64, reached: &LatticePointSet, cfg: &EngineConfig) -> Result<CertifiedResult> {
    s.require_positive()?;
    if k < 2 {
        return Err(Error::argument("IDP steps start at height 2"));
    }
    if reached.dimension() != s.n() {
        return Err(Error::argument("reached set has the wrong dimension"));
    }
    let base = s.lattice_points_with(cfg.max_points, cfg.exec)?;
    let dil = s.dilate(k)?;
    let targets = dil.lattice_points_with(cfg.max_points, cfg.exec)?;
    let n = s.n();
    let failure = par::find_map_first(cfg.exec, targets.len(), |t| {
        let p = targets.get(t);
        let mut q = vec![0u32; n];
        let ok = base.iter().any(|x| {
            if x.iter().zip(p).any(|(a, b)| a > b) {
                return false;
            }
            for i in 0..n {
                q[i] = p[i] - x[i];
            }
            reached.contains(&q)
        });
        (!ok).then(|| p.to_vec())
    });
    let exhaustion = Exhaustion {
        description: format!(
            "{} points of {dil} against {} points of {s} and {} reached points",
            targets.len(),
            base.len(),
            reached.len()
        ),
        examined: targets.len() as u64,
    };
    Ok(match failure {
        Some(p) => CertifiedResult::new(
            false,
            Certificate::Witness {
                point: p.into_iter().map(u64::from).collect(),
                height: k,
                exhaustion,
            },
        ),
        None => CertifiedResult::new(true, Certificate::Exhaustion(exhaustion)),
    })
}

/// Outcome of plain enumeration over heights 2..=n−1.
struct Enumeration {
    witness: Option<(Vec<u32>, u64)>,
    examined: u64,
    heights: u64,
}

fn enumerate(s: &RectSimplex, cfg: &EngineConfig, cap: u64) -> Result<Enumeration> {
    let n = s.n() as u64;
    let h = s.hyperplane()?;
    let mut examined = 0u64;
    for k in 2..n {
        let dil = s.dilate(k)?;
        dil.check_point_budget("normality check", cap.saturating_sub(examined))?;
        let (witness, count) =
            height_step(&h, s.lambda(), k, cfg, cap.saturating_sub(examined)).map_err(|e| match e {
                Error::Resource { limit, .. } => Error::resource(
                    format!("normality check of {dil}"),
                    format!("more than {limit} lattice points"),
                    cap,
                ),
                e => e,
            })?;
        examined += count;
        if let Some(p) = witness {
            return Ok(Enumeration {
                witness: Some((p, k)),
                examined,
                heights: k - 1,
            });
        }
    }
    Ok(Enumeration {
        witness: None,
        examined,
        heights: n.saturating_sub(2),
    })
}

/// Scans kΔ in lexicographic order for the first point with no x as above.
fn height_step(
    h: &Hyperplane,
    lambda: &[u64],
    k: u64,
    cfg: &EngineConfig,
    cap: u64,
) -> Result<(Option<Vec<u32>>, u64)> {
    let n = lambda.len();
    let k = k as u128;
    let top = (k * lambda[0] as u128) as usize;
    let count = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let found = par::find_map_first(cfg.exec, top + 1, |p0| {
        if abort.load(Ordering::Relaxed) {
            return None;
        }
        let mut p = vec![0u32; n];
        p[0] = p0 as u32;
        let mut local = 0u64;
        let mut scan = Scan {
            h,
            k,
            p: &mut p,
            local: &mut local,
            count: &count,
            abort: &abort,
            cap,
        };
        let rem = k * h.l - h.w[0] * p0 as u128;
        let hit = scan.walk(1, rem);
        count.fetch_add(local, Ordering::Relaxed);
        hit
    });
    let total = count.load(Ordering::Relaxed);
    // aborted slices return early, so a hit is only trustworthy without abort
    if abort.load(Ordering::Relaxed) {
        return Err(Error::resource("normality check", format!("more than {cap}"), cap));
    }
    Ok((found, total))
}

struct Scan<'a> {
    h: &'a Hyperplane,
    k: u128,
    p: &'a mut Vec<u32>,
    local: &'a mut u64,
    count: &'a AtomicU64,
    abort: &'a AtomicBool,
    cap: u64,
}

impl Scan<'_> {
    fn walk(&mut self, i: usize, rem: u128) -> Option<Vec<u32>> {
        if i == self.p.len() {
            *self.local += 1;
            if (*self.local).is_multiple_of(4096) {
                let seen = self.count.fetch_add(*self.local, Ordering::Relaxed) + *self.local;
                *self.local = 0;
                if seen > self.cap {
                    self.abort.store(true, Ordering::Relaxed);
                }
            }
            let used = self.k * self.h.l - rem;
            let excess = used.saturating_sub((self.k - 1) * self.h.l);
            return (!decomposes(self.h, self.p, excess)).then(|| self.p.clone());
        }
        if self.abort.load(Ordering::Relaxed) {
            return None;
        }
        let w = self.h.w[i];
        for x in 0..=rem / w {
            self.p[i] = x as u32;
            if let Some(hit) = self.walk(i + 1, rem - w * x) {
                return Some(hit);
            }
        }
        self.p[i] = 0;
        None
    }
}

/// Whether some 0 ≤ x ≤ p has `excess` ≤ w·x ≤ L.
fn decomposes(h: &Hyperplane, p: &[u32], excess: u128) -> bool {
    if excess == 0 {
        return true;
    }
    let n = p.len();
    let mut suffix = vec![0u128; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + h.w[i] * p[i] as u128;
    }
    fn dfs(h: &Hyperplane, p: &[u32], suffix: &[u128], target: u128, i: usize, s: u128) -> bool {
        if s >= target {
            return true;
        }
        if i == p.len() || s + suffix[i] < target {
            return false;
        }
        let w = h.w[i];
        let hi = (p[i] as u128).min((h.l - s) / w);
        let need = target.saturating_sub(s + suffix[i + 1]);
        let lo = need.div_ceil(w);
        if lo > hi {
            return false;
        }
        (lo..=hi).rev().any(|x| dfs(h, p, suffix, target, i + 1, s + w * x))
    }
    dfs(h, p, &suffix, excess, 0, 0)
}

/// Entries of the support with 1s and repeats removed, plus the original
/// position of each kept entry.
struct Reduced {
    simplex: Option<RectSimplex>,
    positions: Vec<usize>,
}

fn reduce_trivial(s: &RectSimplex) -> Reduced {
    let mut kept = Vec::new();
    let mut positions = Vec::new();
    for (i, &x) in s.lambda().iter().enumerate() {
        if x > 1 && !kept.contains(&x) {
            kept.push(x);
            positions.push(i);
        }
    }
    Reduced {
        simplex: (!kept.is_empty()).then(|| RectSimplex::new(kept).expect("positive")),
        positions,
    }
}

fn embed(point: &[u32], positions: &[usize], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (&x, &pos) in point.iter().zip(positions) {
        out[pos] = x as u64;
    }
    out
}

/// Normality verdicts that need no enumeration. `s` has positive, distinct
/// entries, none equal to 1.
fn criteria_verdict(s: &RectSimplex, cfg: &EngineConfig) -> Result<Option<CertifiedResult>> {
    let n = s.n() as u64;
    if n <= 2 {
        return Ok(Some(CertifiedResult::by_criterion(
            true,
            Criterion::LowDimension,
            format!("{s} is a lattice polygon or segment"),
        )));
    }
    let g = s.gcd();
    if g + 1 >= n {
        return Ok(Some(CertifiedResult::by_criterion(
            true,
            Criterion::EwaldWessels,
            format!("{s} is a {g}-fold dilation and {g} ≥ n − 1 = {}", n - 1),
        )));
    }
    if criteria::normal_by_hss(s, 1)? {
        return Ok(Some(CertifiedResult::by_criterion(
            true,
            Criterion::HeringSchenckSmith,
            format!("1 ≥ n − ⌊Σ 1/λ_i⌋ = {} − {}", n, criteria::hss_floor(s)?),
        )));
    }
    if criteria::normal_by_gubeladze_lpe(s)? {
        return Ok(Some(CertifiedResult::by_criterion(
            true,
            Criterion::GubeladzeLpe,
            format!("LPE level {} ≥ 4n(n+1)", criteria::lpe_level(s)?),
        )));
    }
    if let Some((primes, r)) = criteria::as_prime_dilation(s) {
        let rep = criteria::prime_obstruction(&primes, r, cfg.max_table_bits)?;
        if rep.unit_residues.holds == Some(true) {
            return Ok(Some(CertifiedResult::by_criterion(
                false,
                Criterion::PrimeUnitResidues,
                format!("{s} = {r}·{primes:?}: {}", rep.unit_residues.detail),
            )));
        }
        if rep.residue_sum.holds == Some(true) {
            return Ok(Some(CertifiedResult::by_criterion(
                false,
                Criterion::PrimeResidueSum,
                format!("{s} = {r}·{primes:?}, b = {:?}: {}", rep.b, rep.residue_sum.detail),
            )));
        }
    }
    match criteria::is_a1n(s, cfg.max_table_bits) {
        Ok(res) if !res.verdict => {
            let detail = match &res.certificate {
                Certificate::Exhaustion(e) => e.description.clone(),
                _ => String::new(),
            };
            Ok(Some(CertifiedResult::by_criterion(
                false,
                Criterion::NotAlmostOneNormal,
                format!("L − 1 is not a combination of the L/λ_i ({detail})"),
            )))
        }
        Ok(_) => Ok(None),
        Err(e) if e.is_resource() => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn is_normal(s: &RectSimplex) -> Result<CertifiedResult> {
    is_normal_with(s, &EngineConfig::default())
}

/// Decides normality of Δ(λ). With `use_criteria` the arithmetic criteria run
/// first; a criterion-based "not normal" is corroborated by an explicit
/// witness when the enumeration fits `witness_points`.
pub fn is_normal_with(s: &RectSimplex, cfg: &EngineConfig) -> Result<CertifiedResult> {
    let n = s.n();
    let Some(support) = s.support() else {
        return Ok(CertifiedResult::by_criterion(
            true,
            Criterion::LowDimension,
            "Δ is a point",
        ));
    };
    let support_positions: Vec<usize> = (0..n).filter(|&i| s.lambda()[i] != 0).collect();

    if !cfg.use_criteria {
        let e = enumerate(&support, cfg, cfg.max_points)?;
        return Ok(enumeration_result(&support, e, &support_positions, n));
    }

    let reduced = reduce_trivial(&support);
    let Some(core) = reduced.simplex else {
        return Ok(CertifiedResult::by_criterion(
            true,
            Criterion::Unimodular,
            format!("{s} has no entry above 1"),
        ));
    };
    let core_positions: Vec<usize> = reduced.positions.iter().map(|&i| support_positions[i]).collect();

    let witness_budget = cfg.witness_points.min(cfg.max_points);
    if let Some(res) = criteria_verdict(&core, cfg)? {
        if res.verdict {
            return Ok(res);
        }
        // corroborate with a witness on the full support when cheap
        return match enumerate(&support, cfg, witness_budget) {
            Ok(e) if e.witness.is_none() => Err(Error::Invariant(format!(
                "{:?} certifies {s} non-normal but enumeration found no witness",
                res.criterion()
            ))),
            Ok(e) => {
                let w = enumeration_result(&support, e, &support_positions, n);
                Ok(res.with_corroboration(w.certificate))
            }
            Err(e) if e.is_resource() => Ok(res),
            Err(e) => Err(e),
        };
    }

    // The support may be cheap enough for a lexicographically first witness
    // over all of Δ; otherwise enumerate the reduced face.
    let top = (support.n() as u64).saturating_sub(1).max(1);
    if support.dilate(top)?.point_estimate() <= witness_budget as f64 {
        if let Ok(e) = enumerate(&support, cfg, witness_budget) {
            return Ok(enumeration_result(&support, e, &support_positions, n));
        }
    }
    let e = enumerate(&core, cfg, cfg.max_points)?;
    Ok(enumeration_result(&core, e, &core_positions, n))
}

fn enumeration_result(s: &RectSimplex, e: Enumeration, positions: &[usize], n: usize) -> CertifiedResult {
    let exhaustion = Exhaustion {
        description: format!(
            "heights 2..={} of {s} by bounded knapsack against the full lower dilation",
            e.heights + 1
        ),
        examined: e.examined,
    };
    match e.witness {
        Some((p, k)) => CertifiedResult::new(
            false,
            Certificate::Witness {
                point: embed(&p, positions, n),
                height: k,
                exhaustion,
            },
        ),
        None if s.n() <= 2 => CertifiedResult::by_criterion(
            true,
            Criterion::LowDimension,
            format!("{s} is a lattice polygon or segment"),
        ),
        None => CertifiedResult::new(true, Certificate::Exhaustion(exhaustion)),
    }
}

/// The verdict for one dilation kΔ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DilationVerdict {
    pub k: u64,
    pub result: CertifiedResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub value: u64,
    /// Every dilation decided on the way, in scan order.
    pub dilations: Vec<DilationVerdict>,
}

impl IndexReport {
    /// Dilations among those decided that are normal (resp. very ample).
    pub fn positive_dilations(&self) -> Vec<u64> {
        self.dilations
            .iter()
            .filter(|d| d.result.verdict)
            .map(|d| d.k)
            .collect()
    }
}

pub fn mu_norm(s: &RectSimplex) -> Result<IndexReport> {
    mu_norm_with(s, &EngineConfig::default())
}

/// 1 + the largest k ≤ n − 2 with Δ(kλ) not normal; 1 if there is none.
pub fn mu_norm_with(s: &RectSimplex, cfg: &EngineConfig) -> Result<IndexReport> {
    let Some(support) = s.support() else {
        return Ok(IndexReport {
            value: 1,
            dilations: Vec::new(),
        });
    };
    let n = support.n() as u64;
    let mut dilations = Vec::new();
    for k in (1..n.saturating_sub(1)).rev() {
        let result = is_normal_with(&support.dilate(k)?, cfg)?;
        let normal = result.verdict;
        dilations.push(DilationVerdict { k, result });
        if !normal {
            return Ok(IndexReport {
                value: k + 1,
                dilations,
            });
        }
    }
    Ok(IndexReport { value: 1, dilations })
}

pub fn mu_va(s: &RectSimplex) -> Result<IndexReport> {
    mu_va_with(s, &EngineConfig::default())
}

/// Least k ≥ 1 with Δ(kλ) very ample. No monotonicity in k is assumed.
pub fn mu_va_with(s: &RectSimplex, cfg: &EngineConfig) -> Result<IndexReport> {
    let Some(support) = s.support() else {
        return Ok(IndexReport {
            value: 1,
            dilations: Vec::new(),
        });
    };
    let n = support.n() as u64;
    let last = n.saturating_sub(1).max(1);
    let mut dilations = Vec::new();
    for k in 1..=last {
        let result = if cfg.use_criteria && criteria::normal_by_ewald_wessels(&support, k) {
            CertifiedResult::by_criterion(true, Criterion::EwaldWessels, format!("k = {k} ≥ n − 1 = {}", n - 1))
        } else {
            is_very_ample_with(&support.dilate(k)?, cfg)?
        };
        let ok = result.verdict;
        dilations.push(DilationVerdict { k, result });
        if ok {
            return Ok(IndexReport { value: k, dilations });
        }
    }
    Err(Error::Invariant(format!(
        "{last}-fold dilation of {s} is not very ample although {last} ≥ n − 1"
    )))
}

pub fn is_maximally_non_normal(s: &RectSimplex) -> Result<CertifiedResult> {
    is_maximally_non_normal_with(s, &EngineConfig::default())
}

/// μ_norm = n − 1. For n ≥ 3 this is non-normality of Δ((n−2)λ); a segment
/// is not maximally non-normal (μ_norm = 1 ≠ 0) and a polygon always is
/// (μ_norm = 1 = n − 1).
pub fn is_maximally_non_normal_with(s: &RectSimplex, cfg: &EngineConfig) -> Result<CertifiedResult> {
    s.require_positive()?;
    let n = s.n() as u64;
    if n <= 2 {
        return Ok(CertifiedResult::by_criterion(
            n == 2,
            Criterion::LowDimension,
            format!("μ_norm = 1 and n − 1 = {}", n - 1),
        ));
    }
    let res = is_normal_with(&s.dilate(n - 2)?, cfg)?;
    Ok(CertifiedResult {
        verdict: !res.verdict,
        ..res
    })
}

pub fn is_sequentially_non_normal(s: &RectSimplex) -> Result<CertifiedResult> {
    is_sequentially_non_normal_with(s, &EngineConfig::default())
}

/// Every proper subsequence of λ gives a normal simplex. The certificate
/// lists the failing subsequences and whether Δ(λ) itself is normal.
pub fn is_sequentially_non_normal_with(s: &RectSimplex, cfg: &EngineConfig) -> Result<CertifiedResult> {
    s.require_positive()?;
    let n = s.n();
    if n > 20 {
        return Err(Error::resource("proper subsequences", format!("2^{n}"), 1 << 20));
    }
    let masks: Vec<u32> = (1..(1u32 << n) - 1).collect();
    let subs: Vec<Vec<u64>> = masks
        .iter()
        .map(|&m| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| s.lambda()[i]).collect())
        .collect();
    let mut distinct: Vec<Vec<u64>> = subs.clone();
    distinct.sort();
    distinct.dedup();
    let verdicts: Vec<Result<bool>> = par::map_slice(cfg.exec, &distinct, |lam| {
        Ok(is_normal_with(&RectSimplex::new(lam.clone())?, cfg)?.verdict)
    });
    let mut normal: HashMap<&[u64], bool> = HashMap::new();
    for (lam, v) in distinct.iter().zip(verdicts) {
        normal.insert(lam.as_slice(), v?);
    }
    let failing: Vec<Vec<u64>> = subs.iter().filter(|l| !normal[l.as_slice()]).cloned().collect();
    let self_normal = is_normal_with(s, cfg)?.verdict;
    Ok(CertifiedResult::new(
        failing.is_empty(),
        Certificate::Subsequences { failing, self_normal },
    ))
}
