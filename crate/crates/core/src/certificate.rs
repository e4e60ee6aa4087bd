//! Verdicts and the evidence attached to them.

use serde::Serialize;

/// A named sufficient condition that settled a verdict without enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Δ is a point, a segment or a polygon after removing trivial entries.
    LowDimension,
    /// All entries equal 1: the standard unimodular simplex.
    Unimodular,
    /// kP is normal for k ≥ n − 1 (Ewald–Wessels).
    EwaldWessels,
    /// r ≥ n − ⌊Σ 1/λ_i⌋ forces rΔ(λ) normal (Hering–Schenck–Smith).
    HeringSchenckSmith,
    /// LPE(4n(n+1)) forces normality (Gubeladze).
    GubeladzeLpe,
    /// LPE(n) forces very ampleness (Payne).
    PayneLpe,
    /// Normality implies almost 1-normality; its failure certifies non-normality.
    NotAlmostOneNormal,
    /// Prime tuple: some Σ_{i≠k} b_i/p_i ≥ r.
    PrimeResidueSum,
    /// Prime tuple: b_i = p_i − 1 for all i ≠ k and Σ_{i≠k} 1/p_i ≤ 1.
    PrimeUnitResidues,
    /// Normal implies very ample.
    NormalImpliesVeryAmple,
    /// In dimension ≤ 3 normality and very ampleness coincide (Ogata).
    OgataDimensionThree,
}

/// The search space that was fully explored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exhaustion {
    pub description: String,
    pub examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A lattice point of kΔ that is not a sum of k lattice points of Δ.
    Witness {
        point: Vec<u64>,
        height: u64,
        exhaustion: Exhaustion,
    },
    /// Lattice points of Δ summing to a target.
    Representation {
        target: Vec<u64>,
        parts: Vec<Vec<u64>>,
    },
    /// `target = Σ coefficients[i]·generators[i]`.
    Combination {
        target: u64,
        generators: Vec<u64>,
        coefficients: Vec<u64>,
    },
    Criterion {
        criterion: Criterion,
        detail: String,
    },
    Exhaustion(Exhaustion),
    /// A Hilbert-basis element of the cone at `vertex` missing from the
    /// vertex semigroup. `vertex` is 0 for the origin, i for λ_i e_i.
    NonSaturated {
        vertex: usize,
        element: Vec<i64>,
        degree: u64,
    },
    /// Proper subsequences whose simplex is not normal.
    Subsequences {
        failing: Vec<Vec<u64>>,
        self_normal: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifiedResult {
    pub verdict: bool,
    pub certificate: Certificate,
    /// Independent evidence for the same verdict, when it was affordable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corroboration: Option<Certificate>,
}

impl CertifiedResult {
    pub fn new(verdict: bool, certificate: Certificate) -> Self {
        CertifiedResult {
            verdict,
            certificate,
            corroboration: None,
        }
    }

    pub fn by_criterion(verdict: bool, criterion: Criterion, detail: impl Into<String>) -> Self {
        Self::new(
            verdict,
            Certificate::Criterion {
                criterion,
                detail: detail.into(),
            },
        )
    }

    pub fn with_corroboration(mut self, c: Certificate) -> Self {
        self.corroboration = Some(c);
        self
    }

    /// The criterion that settled the verdict, if any.
    pub fn criterion(&self) -> Option<Criterion> {
        match &self.certificate {
            Certificate::Criterion { criterion, .. } => Some(*criterion),
            _ => None,
        }
    }

    /// The non-normality witness, from the primary certificate or the
    /// corroboration.
    pub fn witness(&self) -> Option<(&[u64], u64)> {
        [Some(&self.certificate), self.corroboration.as_ref()]
            .into_iter()
            .flatten()
            .find_map(|c| match c {
                Certificate::Witness { point, height, .. } => Some((point.as_slice(), *height)),
                _ => None,
            })
    }
}
