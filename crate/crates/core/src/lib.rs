//! Normality, very ampleness and their indices for rectangular lattice
//! simplices Δ(λ) = conv{0, λ_1 e_1, ..., λ_n e_n}, together with the
//! arithmetic criteria, Frobenius numbers, periodicity reductions, the prime
//! search for maximally non-normal simplices, the hypergraph encoding, and a
//! weighted projective space front end.
//!
//! ```
//! use rectsimplex::{normality, RectSimplex};
//!
//! let s = RectSimplex::new(vec![2, 3, 5]).unwrap();
//! let r = normality::is_normal(&s).unwrap();
//! assert!(!r.verdict);
//! assert_eq!(r.witness(), Some((&[1u64, 2, 4][..], 2)));
//! ```

pub mod certificate;
pub mod config;
pub mod criteria;
pub mod error;
pub mod frobenius;
pub mod hypergraph;
pub mod normality;
pub mod ntheory;
pub mod par;
pub mod periodicity;
pub mod prime_search;
pub mod simplex;
pub mod wps;

mod ser;

pub use certificate::{Certificate, CertifiedResult, Criterion};
pub use config::EngineConfig;
pub use error::{Error, Result};
pub use par::Exec;
pub use simplex::{LatticePointSet, RectSimplex};
