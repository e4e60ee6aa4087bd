//! Serde helpers: big integers are written as decimal strings.

use num_bigint::BigUint;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub(crate) fn biguint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn biguints<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}
